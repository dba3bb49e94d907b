#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "hecke/experiment.hpp"

namespace fs = std::filesystem;
namespace ex = hecke::experiment;
using hecke::ErrorCode;

namespace {

const fs::path kConfigs = HECKE_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("hecke_experiment_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorCode parse_error_code(const std::string& text) {
  try {
    ex::ExperimentConfig c = ex::parse_config_text(text);
    ex::Experiment e(c, {});
  } catch (const hecke::Error& e) {
    return e.code();
  }
  return ErrorCode::MalformedInput;  // no error: callers expect ConfigParseError
}

nlohmann::json base_config() { return nlohmann::json::parse(slurp(kConfigs / "s4_d4.json")); }

const nlohmann::ordered_json* find_check(const nlohmann::ordered_json& report, const std::string& name) {
  for (const auto& c : report["checks"])
    if (c["name"] == name) return &c;
  return nullptr;
}

ex::RunOptions quiet(const fs::path& out) {
  ex::RunOptions o;
  o.output_dir = out.string();
  o.use_cache = false;
  return o;
}

}  // namespace

TEST(Config, EveryBundledConfigRoundTrips) {
  auto examples = ex::list_examples(kConfigs);
  ASSERT_GE(examples.size(), 11u);
  for (const auto& e : examples) {
    auto c = ex::load_config(kConfigs / e.file);
    auto echoed = ex::to_json(c);
    auto again = ex::parse_config(nlohmann::json::parse(echoed.dump()));
    EXPECT_EQ(again, c) << e.file;
    EXPECT_EQ(ex::to_json(again).dump(), echoed.dump()) << e.file;
  }
}

TEST(Config, UnknownFieldsAreRejectedAtEveryLevel) {
  for (const char* path : {"/colour", "/group/colour", "/subgroup/colour", "/budgets/colour", "/samples/colour"}) {
    auto j = base_config();
    if (!j.contains("budgets")) j["budgets"] = nlohmann::json::object();
    if (!j.contains("samples")) j["samples"] = nlohmann::json::object();
    j[nlohmann::json::json_pointer(path)] = 1;
    try {
      ex::parse_config(j);
      FAIL() << path << " accepted";
    } catch (const hecke::Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ConfigParseError);
      EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos) << e.what();
    }
  }
  auto g = nlohmann::json::parse(slurp(kConfigs / "odometer.json"));
  g["gset"]["probe"]["z"] = "1:0";
  EXPECT_EQ(parse_error_code(g.dump()), ErrorCode::ConfigParseError);
}

TEST(Config, MalformedInputsAreConfigErrors) {
  auto with = [](auto edit) {
    auto j = base_config();
    edit(j);
    return parse_error_code(j.dump());
  };
  EXPECT_EQ(parse_error_code("{ not json"), ErrorCode::ConfigParseError);
  EXPECT_EQ(with([](auto& j) { j.erase("name"); }), ErrorCode::ConfigParseError);
  EXPECT_EQ(with([](auto& j) { j["seed"] = "seven"; }), ErrorCode::ConfigParseError);
  EXPECT_EQ(with([](auto& j) { j["seed"] = -1; }), ErrorCode::ConfigParseError);
  EXPECT_EQ(with([](auto& j) { j["group"]["family"] = "lie"; }), ErrorCode::ConfigParseError);
  EXPECT_EQ(with([](auto& j) { j["group"]["generators"][0] = "(0 1 9)"; }), ErrorCode::ConfigParseError);
  EXPECT_EQ(with([](auto& j) { j["checks"].push_back("closure_levels"); }), ErrorCode::ConfigParseError);
  EXPECT_EQ(with([](auto& j) { j["checks"].push_back("hausdorff"); }), ErrorCode::ConfigParseError);
  EXPECT_EQ(with([](auto& j) { j["radii"] = {2, 1}; }), ErrorCode::ConfigParseError);
  EXPECT_EQ(with([](auto& j) { j["mutation"] = "flip"; }), ErrorCode::ConfigParseError);
  EXPECT_EQ(with([](auto& j) { j.erase("subgroup"); }), ErrorCode::ConfigParseError);
  auto m = nlohmann::json::parse(slurp(kConfigs / "sl2.json"));
  m["group"]["generators"][0] = "[[1,1],[1,1]]";
  EXPECT_EQ(parse_error_code(m.dump()), ErrorCode::ConfigParseError);
  auto r = nlohmann::json::parse(slurp(kConfigs / "rationals_multiplicative.json"));
  r["gset"]["points"].push_back("1/0");
  EXPECT_EQ(parse_error_code(r.dump()), ErrorCode::ConfigParseError);
}

TEST(Run, ReportsAreDeterministicModuloTiming) {
  auto out = scratch("determinism");
  for (const char* name : {"s4_d4.json", "sl2.json", "odometer.json", "rationals_multiplicative.json"}) {
    auto c = ex::load_config(kConfigs / name);
    auto a = ex::run_experiment(c, quiet(out));
    auto b = ex::run_experiment(c, quiet(out));
    EXPECT_TRUE(a.report.contains("timing"));
    EXPECT_EQ(ex::strip_timing(a.report).dump(), ex::strip_timing(b.report).dump()) << name;
  }
}

TEST(Run, SeedOverrideIsRecorded) {
  auto out = scratch("seed");
  auto c = ex::load_config(kConfigs / "s4_d4.json");
  auto o = quiet(out);
  o.seed = 99;
  auto r = ex::run_experiment(c, o);
  EXPECT_EQ(r.report["seed"], 99);
  EXPECT_EQ(r.report["config"]["seed"], 99);
  EXPECT_NE(r.report["replay"].get<std::string>().find("--seed 99"), std::string::npos);
}

TEST(Run, ReportCarriesVersionHashAndCertificates) {
  auto out = scratch("shape");
  auto c = ex::load_config(kConfigs / "bs23.json");
  auto r = ex::run_experiment(c, quiet(out));
  const auto& rep = r.report;
  EXPECT_EQ(rep["artifact"], "hecke-metric");
  EXPECT_EQ(rep["artifact_version"], "0.1.0");
  EXPECT_EQ(rep["config_hash"].get<std::string>().size(), 16u);
  EXPECT_EQ(r.exit_code, 0);
  for (const auto& ch : rep["checks"]) {
    EXPECT_TRUE(ch.contains("certificate")) << ch["name"];
    EXPECT_TRUE(ch["certificate"].contains("type")) << ch["name"];
    EXPECT_TRUE(ch.contains("replay")) << ch["name"];
  }
  std::vector<std::size_t> sizes;
  for (const auto& row : rep["ball_table"]) sizes.push_back(row["size"].get<std::size_t>());
  // 5-regular tree: 1 + 5 * (4^r - 1) / 3
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 6, 26, 106, 426}));
  const auto* rc = find_check(rep, "relative_cayley");
  ASSERT_NE(rc, nullptr);
  EXPECT_EQ((*rc)["data"]["degree"], 5);
  auto path = ex::write_report(r, c.name, out.string());
  EXPECT_EQ(nlohmann::ordered_json::parse(slurp(path)), rep);
}

TEST(Run, NegativeExampleRefusesAndMeetsExpectation) {
  auto out = scratch("negative");
  auto r = ex::run_experiment(ex::load_config(kConfigs / "affine_dilations.json"), quiet(out));
  EXPECT_EQ(r.exit_code, 0);
  const auto* rc = find_check(r.report, "relative_cayley");
  ASSERT_NE(rc, nullptr);
  EXPECT_EQ((*rc)["status"], "UNKNOWN");
  EXPECT_EQ((*rc)["data"]["generator"], "(1,1)");
  EXPECT_EQ((*rc)["certificate"]["type"], "DivergenceTrace");
  const auto& fs_ = (*rc)["certificate"]["trace"]["frontier_sizes"];
  for (std::size_t i = 1; i < fs_.size(); ++i) EXPECT_GT(fs_[i].get<std::size_t>(), fs_[i - 1].get<std::size_t>());
  EXPECT_EQ((*find_check(r.report, "expectation"))["status"], "PASS");

  // the same run with the wrong expectation is a failure
  auto c = ex::load_config(kConfigs / "affine_dilations.json");
  c.expected = "positive";
  auto wrong = ex::run_experiment(c, quiet(out));
  EXPECT_EQ(wrong.exit_code, 1);
  EXPECT_EQ((*find_check(wrong.report, "expectation"))["status"], "FAIL");
}

TEST(Run, SeededMutationsFail) {
  auto out = scratch("mutations");
  auto c = ex::load_config(kConfigs / "s4_d4.json");
  c.mutation = "asymmetric_metric";
  auto r = ex::run_experiment(c, quiet(out));
  EXPECT_EQ(r.exit_code, 1);
  const auto* axioms = find_check(r.report, "metric_axioms");
  EXPECT_EQ((*axioms)["status"], "FAIL");
  EXPECT_EQ((*axioms)["certificate"]["type"], "CounterexampleTriple");
  EXPECT_EQ((*axioms)["certificate"]["violated"], "symmetry");
  EXPECT_EQ((*find_check(r.report, "hausdorff"))["status"], "FAIL");

  c.mutation = "open_orbit_list";
  auto o = ex::run_experiment(c, quiet(out));
  EXPECT_EQ(o.exit_code, 1);
  EXPECT_EQ((*find_check(o.report, "almost_normal"))["status"], "FAIL");
}

TEST(Run, ZeroCompletedChecksExitsThree) {
  auto out = scratch("incomplete");
  auto c = ex::load_config(kConfigs / "s4_d4.json");
  c.checks = {"hausdorff"};
  c.expected.clear();
  c.budgets.word_metric = 10;  // |S4| = 24
  auto r = ex::run_experiment(c, quiet(out));
  EXPECT_EQ(r.report["summary"]["completed"], 0);
  EXPECT_EQ(r.exit_code, 3);
}

TEST(Run, CacheDoesNotChangeResults) {
  auto out = scratch("cache");
  auto c = ex::load_config(kConfigs / "sl2.json");
  ex::RunOptions cached;
  cached.output_dir = out.string();
  auto first = ex::run_experiment(c, cached);
  auto hash = first.report["config_hash"].get<std::string>();
  auto file = out / ".cache" / (hash + ".json");
  ASSERT_TRUE(fs::exists(file));
  auto cache = nlohmann::json::parse(slurp(file));
  EXPECT_EQ(cache["balls"].size(), 1u);
  auto second = ex::run_experiment(c, cached);
  auto uncached = ex::run_experiment(c, quiet(out));
  EXPECT_EQ(ex::strip_timing(first.report).dump(), ex::strip_timing(second.report).dump());
  EXPECT_EQ(ex::strip_timing(first.report).dump(), ex::strip_timing(uncached.report).dump());
  std::ofstream(file) << "{ garbage";
  auto corrupt = ex::run_experiment(c, cached);
  EXPECT_EQ(ex::strip_timing(first.report).dump(), ex::strip_timing(corrupt.report).dump());
}

TEST(Run, WindowsFromOrbitPairBalls) {
  auto out = scratch("window_radii");
  auto c = ex::load_config(kConfigs / "rationals_multiplicative.json");
  c.gset->windows.clear();
  c.gset->window_radii = {0, 1};
  c.checks = {"closure_levels"};
  c.expected.clear();
  c.budgets.orbit = 500;
  auto r = ex::run_experiment(c, quiet(out));
  const auto& levels = r.report["checks"][0]["data"]["levels"];
  ASSERT_EQ(levels.size(), 2u);
  EXPECT_EQ(levels[0]["window_size"], 1);  // {1}
  EXPECT_EQ(levels[1]["window_size"], 3);  // {1/2, 1, 2}
  EXPECT_EQ(levels[1]["complete"], false);
  EXPECT_EQ(r.report["checks"][0]["status"], "UNKNOWN");
  EXPECT_EQ(ex::parse_config(nlohmann::json::parse(ex::to_json(c).dump())), c);
}

TEST(Dot, RelativeCayleyBallOfBS23) {
  ex::Experiment e(ex::load_config(kConfigs / "bs23.json"), {});
  std::string dot = e.export_dot("e", 2);
  EXPECT_EQ(dot, e.export_dot("x^5", 2));  // same coset, same picture
  std::size_t nodes = 0, edges = 0;
  std::istringstream in(dot);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) {
    lines.push_back(line);
    if (line.find(" -- ") != std::string::npos) ++edges;
    else if (line.rfind("  \"", 0) == 0) ++nodes;
  }
  EXPECT_EQ(lines.front(), "graph \"bs23\" {");
  EXPECT_EQ(lines.back(), "}");
  EXPECT_EQ(nodes, 1u + 5u + 20u);
  EXPECT_EQ(edges, 25u);  // a ball in a tree is a tree
  EXPECT_EQ(lines[1], "  \"e\";");
  ex::Experiment again(ex::load_config(kConfigs / "bs23.json"), {});
  EXPECT_EQ(again.export_dot("e", 2), dot);
}

TEST(Dot, PathGraphAndBadCentre) {
  ex::Experiment e(ex::load_config(kConfigs / "dihedral.json"), {});
  EXPECT_EQ(e.export_dot("0", 1), "graph \"dihedral\" {\n  \"0\";\n  \"-1\";\n  \"1\";\n  \"-1\" -- \"0\";\n  \"0\" -- \"1\";\n}\n");
  try {
    e.export_dot("zero", 1);
    FAIL();
  } catch (const hecke::Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::ConfigParseError);
  }
  ex::Experiment b(ex::load_config(kConfigs / "bs23.json"), {});
  EXPECT_THROW(b.export_dot("y", 1), hecke::Error);
  ex::Experiment f(ex::load_config(kConfigs / "z2xz3.json"), {});
  EXPECT_THROW(f.export_dot("0", 1), hecke::Error);
}

// ---------------------------------------------------------------------------
// The command-line tool
// ---------------------------------------------------------------------------

namespace {

int cli(const std::string& args, const fs::path& capture) {
  std::string cmd = std::string("\"") + HECKE_METRIC_BIN + "\" " + args + " > \"" + capture.string() + "\" 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ExitCodes) {
  auto out = scratch("cli");
  auto log = out / "log.txt";
  EXPECT_EQ(cli("run " + (kConfigs / "s4_d4.json").string() + " --out " + out.string() + " --no-cache", log), 0);
  EXPECT_TRUE(fs::exists(out / "s4_d4.report.json"));
  EXPECT_NE(slurp(log).find("normal_core PASS"), std::string::npos);

  auto mutated = nlohmann::json::parse(slurp(kConfigs / "s4_d4.json"));
  mutated["name"] = "s4_mutated";
  mutated["mutation"] = "asymmetric_metric";
  std::ofstream(out / "mutated.json") << mutated.dump();
  EXPECT_EQ(cli("run " + (out / "mutated.json").string() + " --out " + out.string(), log), 1);
  EXPECT_NE(slurp(log).find("metric_axioms FAIL"), std::string::npos);

  auto broken = mutated;
  broken["name"] = "s4_broken";
  broken["budgets"] = {{"orbits", 5}};
  std::ofstream(out / "broken.json") << broken.dump();
  EXPECT_EQ(cli("run " + (out / "broken.json").string() + " --out " + out.string(), log), 2);
  EXPECT_FALSE(fs::exists(out / "s4_broken.report.json"));
  EXPECT_NE(slurp(log).find("orbits"), std::string::npos);

  EXPECT_EQ(cli("run " + (out / "missing.json").string(), log), 2);
  EXPECT_EQ(cli("frobnicate", log), 2);
}

TEST(Cli, ListAndExport) {
  auto out = scratch("cli_list");
  auto log = out / "log.txt";
  EXPECT_EQ(cli("list-examples --dir " + kConfigs.string(), log), 0);
  std::string listing = slurp(log);
  for (const auto& e : ex::list_examples(kConfigs)) EXPECT_NE(listing.find(e.file), std::string::npos);
  EXPECT_EQ(cli("export-dot " + (kConfigs / "bs23.json").string() + " --center t --radius 1 --out " +
                    (out / "b.dot").string(),
                log),
            0);
  ex::Experiment e(ex::load_config(kConfigs / "bs23.json"), {});
  EXPECT_EQ(slurp(out / "b.dot"), e.export_dot("t", 1));
  EXPECT_EQ(cli("export-dot " + (kConfigs / "bs23.json").string() + " --center q --radius 1", log), 2);
}
