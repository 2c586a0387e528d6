// oiltrade: shock-recovery resilience analysis of yearly trade networks.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "oiltrade/app/commands.hpp"

namespace {

using namespace oiltrade;
using namespace oiltrade::app;

void add_flow(CLI::App* cmd, std::string& flow) {
  cmd->add_option("--flow", flow, "Which reported flows build the edges")
      ->check(CLI::IsMember({"import", "export"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilience of weighted trade networks under shock-recovery simulations"};
  app.require_subcommand(1);

  std::string input, flow = "import", years = "all", indicator = "out_degree", target = "nodes", manifest,
              output;
  int year = 0;
  std::size_t top = 10;
  std::uint64_t seed = 0;
  bool summary = true;

  auto* ingest = app.add_subcommand("ingest", "Per-year N, N_E, W and density");
  ingest->add_option("--input,-i", input, "Trade-record file (.csv or .csv.gz)")->required();
  ingest->add_flag("--summary,!--no-summary", summary, "Print the per-year statistics table");
  add_flow(ingest, flow);

  auto* eff = app.add_subcommand("efficiency", "Per-year weighted network efficiency");
  eff->add_option("--input,-i", input)->required();
  eff->add_option("--years", years, "all, 2020, 1988-2022 or 2001,2008")->capture_default_str();
  add_flow(eff, flow);

  auto* rank_cmd = app.add_subcommand("rank", "Top economies or relationships under one indicator");
  rank_cmd->add_option("--input,-i", input)->required();
  rank_cmd->add_option("--year", year)->required();
  rank_cmd->add_option("--indicator", indicator)->capture_default_str();
  rank_cmd->add_option("--target", target, "nodes or edges")->capture_default_str();
  rank_cmd->add_option("--top", top)->capture_default_str();
  rank_cmd->add_option("--seed", seed, "Seed for random and module-based indicators")->capture_default_str();
  add_flow(rank_cmd, flow);

  auto* impact = app.add_subcommand("impact", "Efficiency drop from shocking single elements");
  impact->add_option("--input,-i", input)->required();
  impact->add_option("--year", year)->required();
  impact->add_option("--target", target, "nodes or edges")->capture_default_str();
  impact->add_option("--top", top)->capture_default_str();
  add_flow(impact, flow);

  auto* sim = app.add_subcommand("simulate", "Run a shock-recovery scenario matrix");
  sim->add_option("--manifest,-m", manifest, "JSON run manifest");
  sim->add_option("--input,-i", input, "Trade-record file (without a manifest)");
  sim->add_option("--years", years)->capture_default_str();
  sim->add_option("--indicator", indicator, "Comma-separated indicators")->capture_default_str();
  sim->add_option("--target", target, "Comma-separated: nodes,edges")->capture_default_str();
  sim->add_option("--output,-o", output, "Output directory");
  sim->add_option("--seed", seed)->capture_default_str();
  double batch_fraction = 0.01, shock_depth = 0.5;
  int replicates = 20;
  unsigned jobs = 1;
  std::string recovery = "shock_order";
  sim->add_option("--batch-fraction", batch_fraction)->capture_default_str();
  sim->add_option("--shock-depth", shock_depth)->capture_default_str();
  sim->add_option("--replicates", replicates)->capture_default_str();
  sim->add_option("--recovery-order", recovery)->capture_default_str();
  sim->add_option("--jobs,-j", jobs)->capture_default_str();
  add_flow(sim, flow);

  auto* synth = app.add_subcommand("synth", "Write a synthetic hub-dominated trade file");
  SyntheticOptions so;
  synth->add_option("--output,-o", output, "Destination file (stdout when omitted)");
  synth->add_option("--years", years, "Years to generate, one network each")->capture_default_str();
  synth->add_option("--nodes", so.nodes)->capture_default_str();
  synth->add_option("--links", so.links_per_node)->capture_default_str();
  synth->add_option("--reciprocity", so.reciprocity)->capture_default_str();
  synth->add_option("--seed", so.seed)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    auto policy = parse_flow_policy(flow);
    if (*ingest) return cmd_ingest({input, policy, summary}, std::cout, std::cerr);
    if (*eff) return cmd_efficiency({input, parse_years(years), policy}, std::cout, std::cerr);
    if (*rank_cmd) {
      return cmd_rank({input, year, parse_indicator(indicator), parse_element_kind(target), top, seed, policy},
                      std::cout, std::cerr);
    }
    if (*impact) return cmd_impact({input, year, parse_element_kind(target), top, policy}, std::cout, std::cerr);
    if (*sim) {
      RunManifest m;
      if (!manifest.empty()) {
        m = load_manifest(manifest);
      } else {
        if (input.empty() || output.empty()) throw ValidationError("simulate needs --manifest or --input and --output");
        nlohmann::json j;
        j["input"] = input;
        j["output"] = output;
        j["years"] = years;
        j["master_seed"] = seed;
        j["flow"] = flow;
        j["jobs"] = jobs;
        nlohmann::json s;
        s["targets"] = nlohmann::json::array();
        for (auto t : oiltrade::detail::split(target)) s["targets"].push_back(std::string(t));
        s["indicators"] = nlohmann::json::array();
        for (auto i : oiltrade::detail::split(indicator)) s["indicators"].push_back(std::string(i));
        s["batch_fraction"] = batch_fraction;
        s["shock_depth"] = shock_depth;
        s["replicates"] = replicates;
        s["recovery_order"] = recovery;
        j["scenarios"] = nlohmann::json::array({s});
        m = parse_manifest(j);
      }
      return cmd_simulate(m, std::cout, std::cerr);
    }
    if (*synth) {
      SynthOptions opt{output, parse_years(years), so};
      return cmd_synth(opt, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
