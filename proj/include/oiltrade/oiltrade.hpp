#pragma once

#include "oiltrade/centrality.hpp"
#include "oiltrade/efficiency.hpp"
#include "oiltrade/error.hpp"
#include "oiltrade/ingest.hpp"
#include "oiltrade/network.hpp"
#include "oiltrade/ranking.hpp"
#include "oiltrade/resilience.hpp"
#include "oiltrade/shortest_path.hpp"
#include "oiltrade/simulation.hpp"
#include "oiltrade/synthetic.hpp"
