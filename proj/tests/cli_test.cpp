#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oiltrade/app/commands.hpp"
#include "test_support.hpp"

using namespace oiltrade;
using namespace oiltrade::app;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("oiltrade_cli_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  [[nodiscard]] const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

fs::path write_text(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kFixture =
    "year,reporter,partner,flow,value_usd\n"
    "2019,USA,CAN,import,100\n"
    "2019,USA,SAU,import,50\n"
    "2019,NLD,RUS,import,50\n"
    "2020,USA,CAN,import,10\n"
    "2020,USA,CAN,import,30\n"
    "2020,CAN,USA,export,5\n"
    "2021,FRA,DZA,export,9\n";

fs::path synthetic_file(const fs::path& dir, const std::string& years, std::size_t nodes) {
  SynthOptions opt;
  opt.output = dir / "synthetic.csv";
  opt.years = parse_years(years);
  opt.network.nodes = nodes;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_synth(opt, out, err), kExitOk) << err.str();
  return opt.output;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(CmdIngest, PerYearStatistics) {
  TempDir dir("ingest");
  auto input = write_text(dir.path() / "t.csv", kFixture);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_ingest({input, FlowPolicy::import, true}, out, err), kExitOk);
  // 2019: CAN->USA, SAU->USA, RUS->NLD over 5 economies, density 3/20.
  // 2020: one aggregated edge of 40; 2021 has only an export row.
  EXPECT_EQ(out.str(),
            "year,N,N_E,W,density\n"
            "2019,5,3,200,0.15\n"
            "2020,2,1,40,0.5\n"
            "2021,0,0,0,0\n");
}

TEST(CmdIngest, MissingFileIsValidationError) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_ingest({"/nonexistent/trade.csv", FlowPolicy::import, true}, out, err), kExitValidation);
  EXPECT_NE(err.str().find("error"), std::string::npos);
}

TEST(CmdIngest, RowErrorsAreWarnings) {
  TempDir dir("ingest_warn");
  auto input = write_text(dir.path() / "t.csv", kFixture + "2020,USA,MEX,import,oops\n");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_ingest({input, FlowPolicy::import, false}, out, err), kExitOk);
  EXPECT_NE(err.str().find(":9:"), std::string::npos);
  EXPECT_NE(out.str().find("row_errors,1"), std::string::npos);
}

TEST(CmdEfficiency, UniformAndEmpty) {
  TempDir dir("eff");
  std::ostringstream text;
  text << kTradeHeader << '\n';
  for (const char* a : {"A", "B", "C"}) {
    for (const char* b : {"A", "B", "C"}) {
      if (std::string(a) != b) text << "2000," << a << ',' << b << ",import,4\n";
    }
  }
  text << "2001,A,B,export,1\n";
  auto input = write_text(dir.path() / "t.csv", text.str());
  std::ostringstream out, err;
  ASSERT_EQ(cmd_efficiency({input, parse_years("all"), FlowPolicy::import}, out, err), kExitOk);
  EXPECT_EQ(out.str(),
            "year,N,N_E,mean_weight,E,E_W\n"
            "2000,3,6,4,4,1\n"
            "2001,0,0,0,0,0\n");

  std::ostringstream o2, e2;
  EXPECT_EQ(cmd_efficiency({input, parse_years("1999"), FlowPolicy::import}, o2, e2), kExitValidation);
}

TEST(CmdRank, TopEconomies) {
  TempDir dir("rank");
  auto input = write_text(dir.path() / "t.csv", kFixture);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_rank({input, 2019, IndicatorKind::in_strength, ElementKind::node, 2, 0, FlowPolicy::import}, out, err),
            kExitOk);
  EXPECT_EQ(out.str(), "rank,code,score\n1,USA,150\n2,NLD,50\n");

  std::ostringstream eo, ee;
  ASSERT_EQ(cmd_rank({input, 2019, IndicatorKind::edge_weight, ElementKind::edge, 1, 0, FlowPolicy::import}, eo, ee),
            kExitOk);
  EXPECT_EQ(eo.str(), "rank,source,target,score\n1,CAN,USA,100\n");
}

TEST(CmdImpact, ListsLargestDrop) {
  TempDir dir("impact");
  auto input = write_text(dir.path() / "t.csv", kFixture);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_impact({input, 2019, ElementKind::node, 1, FlowPolicy::import}, out, err), kExitOk);
  EXPECT_EQ(lines(out.str()).size(), 2u);
  EXPECT_EQ(lines(out.str())[1].rfind("1,USA,", 0), 0u);
}

TEST(Manifest, ParsesCrossProductAndYears) {
  auto j = nlohmann::json::parse(R"({
    "input": "data.csv", "years": "2001-2003", "output": "out", "master_seed": 9,
    "scenarios": [{"targets": ["nodes", "edges"], "indicators": ["pagerank", "random"], "replicates": 3},
                  {"target": "edges", "indicator": "edge_weight", "recovery_order": "reverse_shock_order"}]
  })");
  auto m = parse_manifest(j, "/base");
  EXPECT_EQ(m.input, fs::path("/base/data.csv"));
  EXPECT_EQ(m.years.years, (std::vector<int>{2001, 2002, 2003}));
  ASSERT_EQ(m.scenarios.size(), 5u);
  EXPECT_EQ(m.scenarios[1].indicator, IndicatorKind::random);
  EXPECT_EQ(m.scenarios[2].target_kind, ElementKind::edge);
  EXPECT_EQ(m.scenarios[0].replicates, 3);
  EXPECT_EQ(m.scenarios[4].recovery_order, RecoveryOrder::reverse_shock_order);
  EXPECT_EQ(m.scenarios[4].master_seed, 9u);
}

TEST(Manifest, RejectsBadInput) {
  using nlohmann::json;
  EXPECT_THROW(parse_manifest(json::parse(R"({"scenarios": []})")), ValidationError);
  EXPECT_THROW(parse_manifest(json::parse(R"({"input": "x", "scenarios": []})")), ValidationError);
  EXPECT_THROW(parse_manifest(json::parse(R"({"input": "x", "scenarios": [{"target": "nodes", "indicator": "nope"}]})")),
               ValidationError);
  EXPECT_THROW(parse_manifest(json::parse(
                   R"({"input": "x", "scenarios": [{"target": "nodes", "indicator": "edge_weight"}]})")),
               ValidationError);
  EXPECT_THROW(parse_years("2005-2001"), ValidationError);
}

TEST(CmdSimulate, WritesOneFilePerScenario) {
  TempDir dir("simulate");
  auto input = synthetic_file(dir.path(), "2001-2002", 40);
  RunManifest m;
  m.input = input;
  m.years = parse_years("all");
  m.output_dir = dir.path() / "out";
  for (auto kind : {IndicatorKind::out_degree, IndicatorKind::pagerank, IndicatorKind::random}) {
    ScenarioConfig c;
    c.indicator = kind;
    c.batch_fraction = 0.05;
    c.replicates = 3;
    m.scenarios.push_back(c);
  }
  std::ostringstream out, err;
  ASSERT_EQ(cmd_simulate(m, out, err), kExitOk) << err.str();
  std::size_t traj = 0;
  for (const auto& f : fs::directory_iterator(m.output_dir / "trajectories")) traj += f.is_regular_file();
  EXPECT_EQ(traj, 6u);
  auto evo = lines(read_text(m.output_dir / "evolution.csv"));
  ASSERT_EQ(evo.size(), 7u);
  EXPECT_EQ(evo[0], kReportHeader);
  auto summary = nlohmann::json::parse(read_text(m.output_dir / "summary.json"));
  EXPECT_EQ(summary["years"]["2001"].size(), 3u);
  EXPECT_EQ(summary["years"]["2002"][2]["replicates"], 3);

  // Each trajectory: 1 + 2 * ceil(0.5 * 40 / 2) samples plus the header.
  auto t = lines(read_text(m.output_dir / "trajectories" / "2001_s00_nodes_out_degree.csv"));
  EXPECT_EQ(t.size(), 1u + 21u);
}

TEST(CmdSimulate, ReportMatchesDirectComputation) {
  TempDir dir("simulate_direct");
  auto input = synthetic_file(dir.path(), "2005", 40);
  RunManifest m;
  m.input = input;
  m.output_dir = dir.path() / "out";
  m.master_seed = 17;
  ScenarioConfig c;
  c.indicator = IndicatorKind::random;
  c.batch_fraction = 0.05;
  c.replicates = 4;
  c.master_seed = 17;
  m.scenarios.push_back(c);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_simulate(m, out, err), kExitOk) << err.str();

  auto nets = build_yearly_networks(read_trade_file(input).records);
  const auto& net = nets.at(2005);
  auto rows = lines(read_text(m.output_dir / "trajectories" / "2005_s00_nodes_random.csv"));
  std::vector<Trajectory> reps;
  for (int r = 0; r < 4; ++r) reps.push_back(run_shock_recovery(net, c, replicate_seed(17, static_cast<std::uint64_t>(r))));
  ASSERT_EQ(rows.size(), reps[0].steps.size() + 1);
  for (std::size_t t = 0; t < reps[0].steps.size(); ++t) {
    double mean = 0.0;
    for (const auto& rp : reps) mean += rp.steps[t].ne;
    mean /= 4.0;
    double var = 0.0;
    for (const auto& rp : reps) var += (rp.steps[t].ne - mean) * (rp.steps[t].ne - mean);
    const double sd = std::sqrt(var / 3.0);
    auto cells = detail::split(rows[t + 1], ',');
    double ne = 0.0, nestd = 0.0;
    ASSERT_TRUE(detail::parse_number(cells[6], ne));
    ASSERT_TRUE(detail::parse_number(cells[7], nestd));
    EXPECT_NEAR(ne, mean, 1e-14);
    EXPECT_NEAR(nestd, sd, 1e-12);
  }
}

TEST(CmdSimulate, RerunsAreByteIdentical) {
  TempDir dir("simulate_rerun");
  auto input = synthetic_file(dir.path(), "2010", 50);
  auto run = [&](const std::string& name, unsigned jobs) {
    RunManifest m;
    m.input = input;
    m.output_dir = dir.path() / name;
    m.master_seed = 3;
    m.jobs = jobs;
    for (auto target : {ElementKind::node, ElementKind::edge}) {
      for (auto kind : {IndicatorKind::within_module, IndicatorKind::random}) {
        ScenarioConfig c;
        c.target_kind = target;
        c.indicator = kind;
        c.batch_fraction = 0.05;
        c.replicates = 3;
        c.master_seed = 3;
        m.scenarios.push_back(c);
      }
    }
    std::ostringstream out, err;
    EXPECT_EQ(cmd_simulate(m, out, err), kExitOk) << err.str();
    return m.output_dir;
  };
  auto a = run("a", 1), b = run("b", 1), c = run("c", 3);
  std::size_t compared = 0;
  for (const auto& f : fs::recursive_directory_iterator(a)) {
    if (!f.is_regular_file()) continue;
    auto rel = fs::relative(f.path(), a);
    EXPECT_EQ(read_text(f.path()), read_text(b / rel)) << rel;
    EXPECT_EQ(read_text(f.path()), read_text(c / rel)) << rel;
    ++compared;
  }
  EXPECT_EQ(compared, 4u + 4u + 2u);
}

TEST(CmdSimulate, FailingScenarioGivesPartialExit) {
  TempDir dir("simulate_partial");
  auto input = write_text(dir.path() / "t.csv", kFixture);
  RunManifest m;
  m.input = input;
  m.output_dir = dir.path() / "out";
  ScenarioConfig c;
  c.batch_fraction = 0.25;
  m.scenarios.push_back(c);
  // 2021 has no trade relationship under the import policy.
  std::ostringstream out, err;
  EXPECT_EQ(cmd_simulate(m, out, err), kExitPartial);
  EXPECT_NE(err.str().find("2021_s00"), std::string::npos);
  EXPECT_EQ(lines(read_text(m.output_dir / "evolution.csv")).size(), 3u);
}

TEST(Executable, ExitCodes) {
  TempDir dir("exe");
  auto input = write_text(dir.path() / "t.csv", kFixture);
  auto run = [](const std::string& args) {
    int rc = std::system((std::string(OILTRADE_CLI) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  };
  EXPECT_EQ(run("ingest --input " + input.string()), 0);
  EXPECT_EQ(run("ingest --input " + (dir.path() / "missing.csv").string()), 1);
  EXPECT_EQ(run("rank --input " + input.string() + " --year 2019 --indicator bogus"), 1);
  EXPECT_EQ(run("simulate --input " + input.string() + " --output " + (dir.path() / "o").string() +
                " --batch-fraction 0.25"),
            2);
}
