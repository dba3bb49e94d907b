#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hecke/experiment.hpp"

#ifndef HECKE_CONFIG_DIR
#define HECKE_CONFIG_DIR "configs"
#endif

namespace ex = hecke::experiment;

namespace {

int run(const std::string& path, const std::optional<std::string>& out, bool no_cache,
        const std::optional<std::uint64_t>& seed) {
  ex::ExperimentConfig config = ex::load_config(path);
  ex::RunOptions opts;
  opts.seed = seed;
  opts.output_dir = out;
  opts.use_cache = !no_cache;
  opts.config_path = path;
  ex::Experiment experiment(config, opts);
  auto result = experiment.run();
  auto file = ex::write_report(result, experiment.config().name, experiment.config().output);
  for (const auto& c : result.report["checks"])
    std::cout << c["name"].get<std::string>() << " " << c["status"].get<std::string>() << "\n";
  std::cout << "report: " << file.string() << "\n";
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant metrics on coset spaces and G-sets"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  bool no_cache = false;
  auto* run_cmd = app.add_subcommand("run", "run the checks of an experiment config and write a JSON report");
  run_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
  run_cmd->add_option("--out", out_dir, "report directory (overrides the config)");
  run_cmd->add_option("--seed", seed, "RNG seed (overrides the config)");
  run_cmd->add_flag("--no-cache", no_cache, "do not read or write the ball cache");

  std::string center;
  std::size_t radius = 2;
  std::optional<std::string> dot_out;
  auto* dot_cmd = app.add_subcommand("export-dot", "write the ball B(center, radius) as Graphviz");
  dot_cmd->add_option("config", config_path, "experiment config (JSON)")->required();
  dot_cmd->add_option("--center", center, "centre point")->required();
  dot_cmd->add_option("--radius", radius, "ball radius");
  dot_cmd->add_option("--out", dot_out, "output file (default stdout)");

  std::string dir = std::getenv("HECKE_CONFIG_DIR") ? std::getenv("HECKE_CONFIG_DIR") : HECKE_CONFIG_DIR;
  auto* list_cmd = app.add_subcommand("list-examples", "list the bundled experiment configs");
  list_cmd->add_option("--dir", dir, "config directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd) return run(config_path, out_dir, no_cache, seed);
    if (*dot_cmd) {
      ex::Experiment experiment(ex::load_config(config_path), {});
      std::string dot = experiment.export_dot(center, radius);
      if (dot_out) {
        std::ofstream f(*dot_out);
        f << dot;
      } else {
        std::cout << dot;
      }
      return 0;
    }
    for (const auto& e : ex::list_examples(dir))
      std::cout << e.file << "\t" << (e.expected.empty() ? "-" : e.expected) << "\t" << e.description << "\n";
    return 0;
  } catch (const hecke::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == hecke::ErrorCode::ConfigParseError ? 2 : 4;
  }
}
