// equimine: batch front end over the decision-analysis pipeline.

#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "equimine/pipeline.hpp"

namespace {

using equimine::pipeline::Pipeline;
using equimine::pipeline::RunConfig;

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("equimine");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("EQUIMINE_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();

  CLI::App app{"equimine - equity-weighted asteroid mining decision analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::string income_mode;
  std::string alloc_mode;
  std::string alloc_basis;
  std::string method;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> paths;

  app.add_option("--config", config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory for reports");
  app.add_option("--income-mode", income_mode, "Mining income mode")
      ->check(CLI::IsMember({"cumulative", "paper-literal"}));
  app.add_option("--alloc-mode", alloc_mode, "Allocation mode")->check(CLI::IsMember({"conserve", "paper-literal"}));
  app.add_option("--alloc-basis", alloc_basis, "Scores used for allocation")
      ->check(CLI::IsMember({"equity", "topsis"}));
  app.add_option("--method", method, "AHP weighting method")
      ->check(CLI::IsMember({"arithmetic-mean", "geometric-mean", "eigenvalue"}));
  auto* seed_opt = app.add_option("--seed", seed, "Seed for network initialization");
  for (const char* name : {"indicators", "pairwise", "gdp", "scenario", "train", "decision", "topsis-pairwise"}) {
    app.add_option(std::string("--") + name, paths[name], std::string("Override the ") + name + " input path")
        ->check(CLI::ExistingFile);
  }

  const std::map<std::string, std::pair<std::string, std::function<void(Pipeline&)>>> commands = {
      {"weights", {"Derive AHP indicator weights", [](Pipeline& p) { p.write_weights(); }}},
      {"consistency", {"Check pairwise matrix consistency (CI/CR)", [](Pipeline& p) { p.write_consistency(); }}},
      {"topsis", {"Rank alternatives by TOPSIS", [](Pipeline& p) { p.write_topsis(); }}},
      {"equity", {"Development scores and the Global Equity index", [](Pipeline& p) { p.write_equity(); }}},
      {"simulate", {"Mining income and profit over a time window", [](Pipeline& p) { p.write_mining(); }}},
      {"allocate", {"Split mining profit across countries", [](Pipeline& p) { p.write_allocation(); }}},
      {"correlate", {"Pearson correlation of indicators with scores", [](Pipeline& p) { p.write_correlation(); }}},
      {"sensitivity", {"Backpropagation sensitivity analysis", [](Pipeline& p) { p.write_sensitivity(); }}},
      {"report", {"Run the full pipeline", [](Pipeline& p) { p.write_all(); }}},
  };
  for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.first);

  CLI11_PARSE(app, argc, argv);

  RunConfig config;
  try {
    if (!config_path.empty()) config = RunConfig::load(config_path);
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (!income_mode.empty()) {
      config.income_mode = equimine::mining::parse_income_mode(income_mode);
      config.income_mode_set = true;
    }
    if (!alloc_mode.empty()) config.alloc_mode = equimine::allocation::parse_allocation_mode(alloc_mode);
    if (!alloc_basis.empty()) config.alloc_basis = equimine::pipeline::parse_allocation_basis(alloc_basis);
    if (!method.empty()) config.weight_method = equimine::mcda::parse_weighting_method(method);
    if (seed_opt->count() > 0) config.seed = seed;
    auto set_path = [&](const char* key, std::filesystem::path& field) {
      if (!paths[key].empty()) field = paths[key];
    };
    set_path("indicators", config.indicators);
    set_path("pairwise", config.pairwise);
    set_path("gdp", config.gdp);
    set_path("scenario", config.scenario);
    set_path("train", config.train);
    set_path("decision", config.decision);
    set_path("topsis-pairwise", config.topsis_pairwise);
  } catch (const equimine::Error& e) {
    const equimine::pipeline::StageError err("config", e.kind(), e.what());
    std::cerr << err.to_json().dump(2) << "\n";
    return 2;
  }

  const auto* sub = app.get_subcommands().front();
  const auto& action = commands.at(sub->get_name()).second;
  try {
    Pipeline pipeline(config);
    spdlog::info("running '{}' (config digest {})", sub->get_name(), pipeline.digest());
    action(pipeline);
    spdlog::info("reports written to {}", config.out_dir.string());
    return 0;
  } catch (const equimine::pipeline::StageError& e) {
    const auto j = e.to_json();
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    std::ofstream(config.out_dir / "error.json", std::ios::binary | std::ios::trunc) << j.dump(2) << "\n";
    std::cerr << j.dump(2) << "\n";
    return 2;
  }
}
