#ifndef HECKE_EXPERIMENT_HPP
#define HECKE_EXPERIMENT_HPP

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "hecke/hecke.hpp"
#include "json.hpp"

namespace hecke::experiment {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kArtifactName = "hecke-metric";
inline constexpr const char* kArtifactVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct Budgets {
  std::size_t orbit = kDefaultBudget;
  std::size_t ball = 10'000;
  std::size_t word_metric = 1'000'000;
  std::size_t distance_radius = 16;
  bool operator==(const Budgets&) const = default;
};

struct Samples {
  std::size_t group = 200;
  std::size_t pairs = 200;
  std::size_t triples = 500;
  bool operator==(const Samples&) const = default;
};

struct GroupConfig {
  std::string family;  // perm | matrix | affine | baumslag_solitar
  std::size_t degree = 0;
  std::size_t dim = 0;
  bool special = true;
  std::int64_t m = 0, n = 0;
  std::vector<std::string> generators;
  bool operator==(const GroupConfig&) const = default;
};

struct SubgroupConfig {
  std::string type;  // perm_subgroup | integer_matrices | integer_translations | positive_dilations | cyclic_x
  std::vector<std::string> generators;
  std::int64_t sample_bound = 4;
  bool operator==(const SubgroupConfig&) const = default;
};

struct ProbeConfig {
  std::string x;
  std::vector<std::string> ys;
  bool operator==(const ProbeConfig&) const = default;
};

struct GSetConfig {
  std::string type;  // dihedral_integers | binary_odometer | rationals_multiplicative
  std::int64_t sample_bound = 4;
  std::vector<std::pair<std::string, std::string>> seeds;
  std::string center;
  std::vector<std::string> points;  // empty: the ball of radius points_radius around center
  std::uint32_t window_levels = 0;
  std::vector<std::vector<std::string>> windows;
  std::vector<std::size_t> window_radii;  // windows as balls of the orbit-pairs graph around center
  std::optional<ProbeConfig> probe;
  bool operator==(const GSetConfig&) const = default;
};

struct FiniteActionConfig {
  std::size_t points = 0;
  std::vector<std::vector<std::size_t>> generators;
  bool operator==(const FiniteActionConfig&) const = default;
};

struct ExperimentConfig {
  std::string name;
  std::string description;
  std::string expected;  // "", positive, negative
  std::optional<GroupConfig> group;
  std::optional<SubgroupConfig> subgroup;
  std::optional<GSetConfig> gset;
  std::optional<FiniteActionConfig> finite_action;
  std::vector<std::string> checks;
  std::vector<std::string> test_set;
  std::vector<std::size_t> radii;
  std::size_t points_radius = 2;
  Budgets budgets;
  Samples samples;
  std::uint64_t seed = 0;
  std::string output = "reports";
  std::string mutation = "none";  // none | asymmetric_metric | open_orbit_list
  bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& what) { throw Error(ErrorCode::ConfigParseError, what); }

/// Reads fields of one JSON object and rejects the ones nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) config_error(where_ + " must be an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  template <class T>
  T get(const char* key, T fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    return convert<T>(j_.at(key), key);
  }

  template <class T>
  T require(const char* key) {
    used_.insert(key);
    if (!j_.contains(key)) config_error(where_ + ": missing field '" + key + "'");
    return convert<T>(j_.at(key), key);
  }

  const json& sub(const char* key) {
    used_.insert(key);
    return j_.at(key);
  }

  std::string path(const char* key) const { return where_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) config_error(where_ + ": unknown field '" + it.key() + "'");
  }

 private:
  template <class T>
  T convert(const json& v, const char* key) const {
    try {
      if constexpr (std::is_unsigned_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_unsigned()) throw std::invalid_argument("expected a non-negative integer");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
      }
      return v.get<T>();
    } catch (const std::exception& e) {
      config_error(where_ + "." + key + ": " + e.what());
    }
  }

  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

inline const std::set<std::string>& pair_checks() {
  static const std::set<std::string> s{"almost_normal", "relative_cayley", "metric_axioms", "invariance",
                                       "properness",    "equivalence",     "hausdorff",     "normal_core"};
  return s;
}
inline const std::set<std::string>& gset_checks() {
  static const std::set<std::string> s{"orbit_pairs", "metric_axioms", "invariance",
                                       "properness",  "closure_levels", "stabilizer_probe"};
  return s;
}
inline const std::set<std::string>& finite_checks() {
  static const std::set<std::string> s{"closure_finite"};
  return s;
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j) {
  using detail::config_error;
  detail::ObjectReader r(j, "config");
  ExperimentConfig c;
  c.name = r.require<std::string>("name");
  if (c.name.empty() || c.name.find_first_of("/\\ ") != std::string::npos)
    config_error("config.name must be a non-empty file-name-safe string");
  c.description = r.get<std::string>("description", "");
  c.expected = r.get<std::string>("expected", "");
  if (c.expected != "" && c.expected != "positive" && c.expected != "negative")
    config_error("config.expected must be 'positive' or 'negative'");

  if (r.has("group")) {
    detail::ObjectReader g(r.sub("group"), "config.group");
    GroupConfig gc;
    gc.family = g.require<std::string>("family");
    if (gc.family == "perm") {
      gc.degree = g.require<std::size_t>("degree");
    } else if (gc.family == "matrix") {
      gc.dim = g.require<std::size_t>("dim");
      gc.special = g.get<bool>("special", true);
    } else if (gc.family == "baumslag_solitar") {
      gc.m = g.require<std::int64_t>("m");
      gc.n = g.require<std::int64_t>("n");
    } else if (gc.family != "affine") {
      config_error("config.group.family: unknown family '" + gc.family + "'");
    }
    gc.generators = g.require<std::vector<std::string>>("generators");
    g.finish();
    c.group = std::move(gc);
  }
  if (r.has("subgroup")) {
    detail::ObjectReader s(r.sub("subgroup"), "config.subgroup");
    SubgroupConfig sc;
    sc.type = s.require<std::string>("type");
    if (sc.type == "perm_subgroup") sc.generators = s.require<std::vector<std::string>>("generators");
    else if (sc.type == "positive_dilations") sc.sample_bound = s.get<std::int64_t>("sample_bound", 4);
    else if (sc.type != "integer_matrices" && sc.type != "integer_translations" && sc.type != "cyclic_x")
      config_error("config.subgroup.type: unknown subgroup '" + sc.type + "'");
    s.finish();
    c.subgroup = std::move(sc);
  }
  if (r.has("gset")) {
    detail::ObjectReader g(r.sub("gset"), "config.gset");
    GSetConfig gc;
    gc.type = g.require<std::string>("type");
    if (gc.type != "dihedral_integers" && gc.type != "binary_odometer" && gc.type != "rationals_multiplicative")
      config_error("config.gset.type: unknown G-set '" + gc.type + "'");
    if (gc.type == "rationals_multiplicative") gc.sample_bound = g.get<std::int64_t>("sample_bound", 4);
    for (const auto& s : g.get<std::vector<std::vector<std::string>>>("seeds", {})) {
      if (s.size() != 2) config_error("config.gset.seeds: each seed is a pair of points");
      gc.seeds.emplace_back(s[0], s[1]);
    }
    gc.center = g.get<std::string>("center", "");
    gc.points = g.get<std::vector<std::string>>("points", {});
    gc.window_levels = g.get<std::uint32_t>("window_levels", 0);
    gc.windows = g.get<std::vector<std::vector<std::string>>>("windows", {});
    gc.window_radii = g.get<std::vector<std::size_t>>("window_radii", {});
    for (std::size_t i = 1; i < gc.window_radii.size(); ++i)
      if (gc.window_radii[i] <= gc.window_radii[i - 1]) config_error("config.gset.window_radii must increase");
    if (gc.window_levels && gc.type != "binary_odometer")
      config_error("config.gset.window_levels is only defined for binary_odometer");
    if (g.has("probe")) {
      detail::ObjectReader p(g.sub("probe"), "config.gset.probe");
      gc.probe = ProbeConfig{p.require<std::string>("x"), p.require<std::vector<std::string>>("ys")};
      p.finish();
    }
    g.finish();
    c.gset = std::move(gc);
  }
  if (r.has("finite_action")) {
    detail::ObjectReader f(r.sub("finite_action"), "config.finite_action");
    FiniteActionConfig fc;
    fc.points = f.require<std::size_t>("points");
    fc.generators = f.require<std::vector<std::vector<std::size_t>>>("generators");
    f.finish();
    c.finite_action = std::move(fc);
  }
  c.checks = r.require<std::vector<std::string>>("checks");
  c.test_set = r.get<std::vector<std::string>>("test_set", {});
  c.radii = r.get<std::vector<std::size_t>>("radii", {});
  c.points_radius = r.get<std::size_t>("points_radius", 2);
  if (r.has("budgets")) {
    detail::ObjectReader b(r.sub("budgets"), "config.budgets");
    c.budgets.orbit = b.get<std::size_t>("orbit", c.budgets.orbit);
    c.budgets.ball = b.get<std::size_t>("ball", c.budgets.ball);
    c.budgets.word_metric = b.get<std::size_t>("word_metric", c.budgets.word_metric);
    c.budgets.distance_radius = b.get<std::size_t>("distance_radius", c.budgets.distance_radius);
    b.finish();
    if (c.budgets.orbit < 1 || c.budgets.ball < 1) config_error("config.budgets: budgets must be >= 1");
  }
  if (r.has("samples")) {
    detail::ObjectReader s(r.sub("samples"), "config.samples");
    c.samples.group = s.get<std::size_t>("group", c.samples.group);
    c.samples.pairs = s.get<std::size_t>("pairs", c.samples.pairs);
    c.samples.triples = s.get<std::size_t>("triples", c.samples.triples);
    s.finish();
  }
  c.seed = r.get<std::uint64_t>("seed", 0);
  c.output = r.get<std::string>("output", "reports");
  c.mutation = r.get<std::string>("mutation", "none");
  if (c.mutation != "none" && c.mutation != "asymmetric_metric" && c.mutation != "open_orbit_list")
    config_error("config.mutation: unknown mutation '" + c.mutation + "'");
  r.finish();

  const int kinds = (c.group ? 1 : 0) + (c.gset ? 1 : 0) + (c.finite_action ? 1 : 0);
  if (kinds != 1) config_error("config must describe exactly one of group+subgroup, gset, finite_action");
  if (c.group.has_value() != c.subgroup.has_value()) config_error("config.group and config.subgroup go together");
  const auto& allowed = c.group ? detail::pair_checks() : c.gset ? detail::gset_checks() : detail::finite_checks();
  std::set<std::string> seen;
  for (const auto& ch : c.checks) {
    if (!allowed.count(ch)) config_error("config.checks: '" + ch + "' does not apply to this kind of experiment");
    if (!seen.insert(ch).second) config_error("config.checks: duplicate check '" + ch + "'");
  }
  for (std::size_t i = 1; i < c.radii.size(); ++i)
    if (c.radii[i] <= c.radii[i - 1]) config_error("config.radii must increase");
  return c;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    detail::config_error(std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) detail::config_error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

/// Canonical form: every field, defaults included. parse_config(to_json(c)) == c.
inline ordered_json to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["name"] = c.name;
  j["description"] = c.description;
  if (!c.expected.empty()) j["expected"] = c.expected;
  if (c.group) {
    ordered_json g;
    g["family"] = c.group->family;
    if (c.group->family == "perm") g["degree"] = c.group->degree;
    if (c.group->family == "matrix") {
      g["dim"] = c.group->dim;
      g["special"] = c.group->special;
    }
    if (c.group->family == "baumslag_solitar") {
      g["m"] = c.group->m;
      g["n"] = c.group->n;
    }
    g["generators"] = c.group->generators;
    j["group"] = g;
  }
  if (c.subgroup) {
    ordered_json s;
    s["type"] = c.subgroup->type;
    if (c.subgroup->type == "perm_subgroup") s["generators"] = c.subgroup->generators;
    if (c.subgroup->type == "positive_dilations") s["sample_bound"] = c.subgroup->sample_bound;
    j["subgroup"] = s;
  }
  if (c.gset) {
    ordered_json g;
    g["type"] = c.gset->type;
    if (c.gset->type == "rationals_multiplicative") g["sample_bound"] = c.gset->sample_bound;
    ordered_json seeds = ordered_json::array();
    for (const auto& [a, b] : c.gset->seeds) seeds.push_back({a, b});
    g["seeds"] = seeds;
    g["center"] = c.gset->center;
    g["points"] = c.gset->points;
    g["window_levels"] = c.gset->window_levels;
    g["windows"] = c.gset->windows;
    g["window_radii"] = c.gset->window_radii;
    if (c.gset->probe) g["probe"] = {{"x", c.gset->probe->x}, {"ys", c.gset->probe->ys}};
    j["gset"] = g;
  }
  if (c.finite_action) j["finite_action"] = {{"points", c.finite_action->points}, {"generators", c.finite_action->generators}};
  j["checks"] = c.checks;
  j["test_set"] = c.test_set;
  j["radii"] = c.radii;
  j["points_radius"] = c.points_radius;
  j["budgets"] = {{"orbit", c.budgets.orbit},
                  {"ball", c.budgets.ball},
                  {"word_metric", c.budgets.word_metric},
                  {"distance_radius", c.budgets.distance_radius}};
  j["samples"] = {{"group", c.samples.group}, {"pairs", c.samples.pairs}, {"triples", c.samples.triples}};
  j["seed"] = c.seed;
  j["output"] = c.output;
  j["mutation"] = c.mutation;
  return j;
}

// ---------------------------------------------------------------------------
// Resolved experiment objects
// ---------------------------------------------------------------------------

using AnyGSet = std::variant<DihedralOnIntegers, BinaryOdometer, RationalLine>;

struct Setup {
  std::optional<HeckePair> pair;
  std::vector<GroupElem> generators;
  std::vector<GroupElem> test_set;
  std::optional<AnyGSet> gset;
  std::optional<FiniteAction> finite;
};

/// Builds the groups and parses every element string. Any failure here is a
/// configuration error.
inline Setup resolve(const ExperimentConfig& c) {
  Setup s;
  try {
    if (c.group) {
      Family fam;
      const auto& g = *c.group;
      if (g.family == "perm") fam = PermFamily{g.degree};
      else if (g.family == "matrix") fam = MatrixFamily{g.dim, g.special};
      else if (g.family == "affine") fam = AffineFamily{};
      else fam = BSFamily{g.m, g.n};
      GroupCtx base(fam, {});
      for (const auto& x : g.generators) s.generators.push_back(base.parse(x));
      GroupCtx ctx(fam, s.generators);
      SubgroupSpec sub;
      const auto& sc = *c.subgroup;
      if (sc.type == "perm_subgroup") {
        std::vector<GroupElem> hg;
        for (const auto& x : sc.generators) hg.push_back(ctx.parse(x));
        sub = PermSubgroup{hg};
      } else if (sc.type == "integer_matrices") {
        sub = IntegerMatrices{};
      } else if (sc.type == "integer_translations") {
        sub = IntegerTranslations{};
      } else if (sc.type == "positive_dilations") {
        sub = PositiveDilations{sc.sample_bound};
      } else {
        sub = CyclicX{};
      }
      s.pair.emplace(ctx, sub, c.budgets.word_metric);
      for (const auto& x : c.test_set) s.test_set.push_back(ctx.parse(x));
      if (s.test_set.empty()) s.test_set = symmetrize(ctx, s.generators);
    } else if (c.gset) {
      const auto& g = *c.gset;
      if (g.type == "dihedral_integers") s.gset.emplace(DihedralOnIntegers{});
      else if (g.type == "binary_odometer") s.gset.emplace(BinaryOdometer{});
      else s.gset.emplace(RationalLine::multiplicative(g.sample_bound));
      // decode every point once so that malformed points are reported up front
      std::visit(
          [&](const auto& set) {
            for (const auto& [a, b] : g.seeds) {
              (void)set.decode(a);
              (void)set.decode(b);
            }
            if (!g.center.empty()) (void)set.decode(g.center);
            for (const auto& p : g.points) (void)set.decode(p);
            for (const auto& w : g.windows)
              for (const auto& p : w) (void)set.decode(p);
            if (g.probe) {
              (void)set.decode(g.probe->x);
              for (const auto& y : g.probe->ys) (void)set.decode(y);
            }
          },
          *s.gset);
    } else {
      s.finite = FiniteAction{c.finite_action->points, c.finite_action->generators};
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigParseError) throw;
    detail::config_error(e.what());
  }
  return s;
}

// ---------------------------------------------------------------------------
// Serialization of verdicts
// ---------------------------------------------------------------------------

inline ordered_json trace_json(const DivergenceTrace& t) {
  return {{"visited", t.visited}, {"frontier_sizes", t.frontier_sizes}};
}

inline ordered_json certificate_json(const Certificate& c) {
  ordered_json j;
  j["type"] = certificate_type(c);
  std::visit(
      [&](const auto& cert) {
        using C = std::decay_t<decltype(cert)>;
        if constexpr (std::is_same_v<C, OrbitListCert>) {
          j["subjects"] = cert.subjects;
          j["orbits"] = cert.orbits;
          j["closure_hashes"] = cert.closure_hashes;
        } else if constexpr (std::is_same_v<C, BallEnumerationCert>) {
          j["radii"] = cert.radii;
          ordered_json sizes = ordered_json::array();
          for (const auto& s : cert.sizes) sizes.push_back(s ? ordered_json(*s) : ordered_json(nullptr));
          j["sizes"] = sizes;
          j["budget"] = cert.budget;
          j["points_checked"] = cert.points_checked;
          j["points_hash"] = cert.points_hash;
        } else if constexpr (std::is_same_v<C, CounterexampleCert>) {
          j["violated"] = cert.violated;
          j["points"] = cert.points;
          j["values"] = cert.values;
        } else if constexpr (std::is_same_v<C, DivergenceCert>) {
          j["subject"] = cert.subject;
          j["trace"] = trace_json(cert.trace);
        } else {
          ordered_json images = ordered_json::array();
          for (const auto& [a, b] : cert.images) images.push_back({a, b});
          j["images"] = images;
        }
      },
      c);
  return j;
}

// ---------------------------------------------------------------------------
// Ball cache
// ---------------------------------------------------------------------------

/// On-disk map (canonical point -> BFS layer) for the largest ball computed
/// around each centre, keyed by the config hash. Results never depend on it.
class BallCache {
 public:
  BallCache() = default;
  BallCache(std::filesystem::path file) : file_(std::move(file)), enabled_(true) {
    std::ifstream in(file_);
    if (!in) return;
    try {
      json j = json::parse(in);
      if (j.value("artifact_version", "") != kArtifactVersion) return;
      for (auto& [center, entry] : j.at("balls").items()) {
        Entry e;
        e.radius = entry.at("radius").get<std::size_t>();
        e.layers = entry.at("layers").get<std::map<std::string, std::size_t>>();
        balls_[center] = std::move(e);
      }
    } catch (const std::exception&) {
      balls_.clear();  // unreadable cache: ignore
    }
  }

  bool enabled() const noexcept { return enabled_; }

  /// |B(center, r)| if a cached ball of radius >= r exists.
  std::optional<std::size_t> ball_size(const std::string& center, std::size_t r) const {
    auto it = balls_.find(center);
    if (!enabled_ || it == balls_.end() || it->second.radius < r) return std::nullopt;
    return static_cast<std::size_t>(std::count_if(it->second.layers.begin(), it->second.layers.end(),
                                                  [&](const auto& kv) { return kv.second <= r; }));
  }

  template <class Point>
  void store(const std::string& center, const Ball<Point>& b, const std::function<std::string(const Point&)>& key) {
    if (!enabled_) return;
    auto it = balls_.find(center);
    if (it != balls_.end() && it->second.radius >= b.radius) return;
    Entry e;
    e.radius = b.radius;
    std::size_t i = 0;
    for (std::size_t layer = 0; layer < b.layer_sizes.size(); ++layer)
      for (std::size_t k = 0; k < b.layer_sizes[layer]; ++k) e.layers[key(b.members[i++])] = layer;
    balls_[center] = std::move(e);
    dirty_ = true;
  }

  void flush() const {
    if (!enabled_ || !dirty_) return;
    json j;
    j["artifact_version"] = kArtifactVersion;
    for (const auto& [center, e] : balls_) j["balls"][center] = {{"radius", e.radius}, {"layers", e.layers}};
    std::error_code ec;
    std::filesystem::create_directories(file_.parent_path(), ec);
    std::ofstream out(file_);
    if (out) out << j.dump();
  }

 private:
  struct Entry {
    std::size_t radius = 0;
    std::map<std::string, std::size_t> layers;
  };
  std::filesystem::path file_;
  bool enabled_ = false;
  bool dirty_ = false;
  std::map<std::string, Entry> balls_;
};

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  bool use_cache = true;
  std::string config_path = "<config>";
};

struct RunResult {
  ordered_json report;
  int exit_code = 0;
};

namespace detail {

struct CheckOutcome {
  Verdict verdict;
  ordered_json data = ordered_json::object();
  bool completed = true;
  std::optional<bool> property;  // the positive property this check probes, when it has one
};

inline std::uint64_t name_seed(const std::string& name) { return std::stoull(stable_hash(name), nullptr, 16); }

inline Verdict unknown_verdict(const std::string& context, const std::string& subject, const DivergenceTrace& trace,
                               std::string note) {
  Verdict v;
  v.status = Status::Unknown;
  v.context = context;
  v.certificate = DivergenceCert{subject, trace};
  v.notes.push_back(std::move(note));
  return v;
}

/// Wraps a distance function with the configured seeded defect.
template <class Point, class D, class Key>
auto mutated(D d, Key key, bool asymmetric) {
  return [d, key, asymmetric](const Point& a, const Point& b) {
    Distance x = d(a, b);
    if (asymmetric && x.is_exact() && key(a) < key(b)) ++x.value;
    return x;
  };
}

template <class Point>
std::optional<std::size_t> ball_size(const InvariantGraph<Point>& g, const Point& center, std::size_t r,
                                     std::size_t budget, BallCache& cache) {
  const std::string ck = g.key(center);
  if (auto cached = cache.ball_size(ck, r)) {
    if (*cached > budget) return std::nullopt;
    return cached;
  }
  try {
    auto b = ball(g, center, r, budget);
    cache.store<Point>(ck, b, [&g](const Point& p) { return g.key(p); });
    return b.members.size();
  } catch (const BudgetExceededError&) {
    return std::nullopt;
  }
}

inline ordered_json ball_table(const Verdict& v) {
  ordered_json t = ordered_json::array();
  if (const auto* c = std::get_if<BallEnumerationCert>(&v.certificate))
    for (std::size_t i = 0; i < c->radii.size(); ++i)
      t.push_back({{"radius", c->radii[i]}, {"size", c->sizes[i] ? ordered_json(*c->sizes[i]) : ordered_json(nullptr)}});
  return t;
}

template <class Point, class G, class Key>
std::vector<CheckOutcome> metric_checks(const std::string& name, const G& graph, const std::vector<Point>& points,
                                        const std::vector<GroupElem>& group_sample,
                                        const std::function<Point(const GroupElem&, const Point&)>& act, Key key,
                                        const ExperimentConfig& c, std::mt19937_64& rng) {
  auto base = [&graph, &c](const Point& a, const Point& b) {
    return graph_distance(graph, a, b, c.budgets.distance_radius, c.budgets.ball * 100);
  };
  auto d = mutated<Point>(base, key, c.mutation == "asymmetric_metric");
  CheckOutcome out;
  if (name == "metric_axioms") {
    out.verdict = check_metric_axioms(std::span<const Point>(points), d, key, c.samples.triples, rng);
    out.data["points"] = points.size();
  } else {
    out.verdict = check_invariance(std::span<const Point>(points), std::span<const GroupElem>(group_sample), act, d,
                                   key, c.samples.pairs, rng);
    out.data["points"] = points.size();
    out.data["group_sample"] = group_sample.size();
  }
  return {out};
}

}  // namespace detail

class Experiment {
 public:
  Experiment(ExperimentConfig config, RunOptions options)
      : config_(std::move(config)), options_(std::move(options)), setup_(resolve(config_)) {
    if (options_.seed) config_.seed = *options_.seed;
    if (options_.output_dir) config_.output = *options_.output_dir;
    config_hash_ = stable_hash(to_json(config_).dump());
    if (options_.use_cache)
      cache_ = BallCache(std::filesystem::path(config_.output) / ".cache" / (config_hash_ + ".json"));
  }

  const ExperimentConfig& config() const noexcept { return config_; }
  const std::string& config_hash() const noexcept { return config_hash_; }

  RunResult run() {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    ordered_json checks = ordered_json::array();
    ordered_json timing_checks = ordered_json::object();
    ordered_json table = ordered_json::array();
    std::map<std::string, std::size_t> counts{{"PASS", 0}, {"FAIL", 0}, {"UNKNOWN", 0}, {"SAMPLED", 0}};
    std::size_t completed = 0;
    std::vector<std::pair<std::string, bool>> properties;

    auto record = [&](const std::string& name, detail::CheckOutcome& o) {
      ordered_json j;
      j["name"] = name;
      j["status"] = status_name(o.verdict.status);
      j["completed"] = o.completed;
      j["context"] = o.verdict.context;
      j["certificate"] = certificate_json(o.verdict.certificate);
      j["notes"] = o.verdict.notes;
      j["data"] = o.data;
      j["replay"] = replay_command() + " # check: " + name;
      checks.push_back(std::move(j));
      ++counts[status_name(o.verdict.status)];
      if (o.completed) ++completed;
      if (o.property) properties.emplace_back(name, *o.property);
      if (name == "properness") table = detail::ball_table(o.verdict);
    };

    for (const auto& name : config_.checks) {
      const auto c0 = clock::now();
      std::mt19937_64 rng(config_.seed ^ detail::name_seed(name));
      detail::CheckOutcome o;
      try {
        o = run_check(name, rng);
      } catch (const BudgetExceededError& e) {
        o.verdict = detail::unknown_verdict(name, name, e.trace(), e.what());
        o.completed = false;
      } catch (const OrbitNotFiniteError& e) {
        o.verdict = detail::unknown_verdict(name, name, e.trace(), e.what());
        o.completed = false;
      } catch (const Error& e) {
        o.verdict = detail::unknown_verdict(name, name, {}, e.what());
        o.completed = false;
      }
      record(name, o);
      timing_checks[name] =
          std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - c0).count();
    }

    if (!config_.expected.empty()) {
      detail::CheckOutcome o;
      o.verdict.context = "expectation";
      const bool want = config_.expected == "positive";
      HomomorphismTableCert observed;
      CounterexampleCert mismatch{"expectation", {}, {}};
      for (const auto& [check, holds] : properties) {
        observed.images.emplace_back(check, holds ? "holds" : "fails");
        if (holds != want) {
          mismatch.points.push_back(check);
          mismatch.values.push_back(holds ? "holds" : "fails");
        }
      }
      const bool met = mismatch.points.empty();
      o.verdict.status = met ? Status::Pass : Status::Fail;
      if (met) o.verdict.certificate = observed;
      else o.verdict.certificate = mismatch;
      o.data["expected"] = config_.expected;
      o.data["property_checks"] = properties.size();
      ordered_json j;
      j["name"] = "expectation";
      j["status"] = status_name(o.verdict.status);
      j["completed"] = true;
      j["context"] = o.verdict.context;
      j["certificate"] = certificate_json(o.verdict.certificate);
      j["notes"] = ordered_json::array();
      j["data"] = o.data;
      j["replay"] = replay_command();
      checks.push_back(std::move(j));
      ++counts[status_name(o.verdict.status)];
    }
    cache_.flush();

    RunResult result;
    if (!config_.checks.empty() && completed == 0) result.exit_code = 3;
    else result.exit_code = counts["FAIL"] > 0 ? 1 : 0;

    ordered_json& r = result.report;
    r["artifact"] = kArtifactName;
    r["artifact_version"] = kArtifactVersion;
    r["report_schema"] = kReportSchema;
    r["config"] = to_json(config_);
    r["config_hash"] = config_hash_;
    r["seed"] = config_.seed;
    r["replay"] = replay_command();
    r["checks"] = checks;
    r["ball_table"] = table;
    r["summary"] = {{"PASS", counts["PASS"]},       {"FAIL", counts["FAIL"]},
                    {"UNKNOWN", counts["UNKNOWN"]}, {"SAMPLED", counts["SAMPLED"]},
                    {"completed", completed},       {"requested", config_.checks.size()}};
    r["exit_code"] = result.exit_code;
    r["timing"] = {{"total_ms", std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count()},
                   {"checks_ms", timing_checks}};
    return result;
  }

  /// Graphviz rendering of the closed ball B(center, radius).
  std::string export_dot(const std::string& center, std::size_t radius) {
    auto render = [&](const auto& graph, const auto& c) {
      auto b = ball(graph, c, radius, config_.budgets.ball);
      std::vector<std::string> keys;
      for (const auto& p : b.members) keys.push_back(graph.key(p));
      std::set<std::string> inside(keys.begin(), keys.end());
      std::set<std::pair<std::string, std::string>> edges;
      for (const auto& p : b.members)
        for (const auto& q : graph.neighbors(p)) {
          std::string a = graph.key(p), z = graph.key(q);
          if (!inside.count(z)) continue;
          if (z < a) std::swap(a, z);
          edges.emplace(a, z);
        }
      std::ostringstream os;
      os << "graph \"" << config_.name << "\" {\n";
      for (const auto& k : keys) os << "  \"" << k << "\";\n";
      for (const auto& [a, z] : edges) os << "  \"" << a << "\" -- \"" << z << "\";\n";
      os << "}\n";
      return os.str();
    };
    if (setup_.pair) {
      GroupElem c;
      try {
        c = setup_.pair->coset_rep(setup_.pair->ctx().parse(center));
      } catch (const Error& e) {
        detail::config_error(std::string("invalid center: ") + e.what());
      }
      return render(relative_graph().graph, c);
    }
    if (setup_.gset) {
      return std::visit(
          [&](const auto& set) {
            typename std::decay_t<decltype(set)>::point_type c;
            try {
              c = set.decode(center);
            } catch (const Error& e) {
              detail::config_error(std::string("invalid center: ") + e.what());
            }
            return render(pairs_graph(set).graph, c);
          },
          *setup_.gset);
    }
    detail::config_error("this experiment defines no graph");
  }

 private:
  std::string replay_command() const {
    return std::string(kArtifactName) + " run " + options_.config_path + " --seed " + std::to_string(config_.seed);
  }

  const RelativeCayleyGraph& relative_graph() {
    if (!graph_) graph_.emplace(build_relative_cayley(*setup_.pair, setup_.generators, config_.budgets.orbit));
    return *graph_;
  }

  template <class S>
  const OrbitPairsGraph<S>& pairs_graph(const S& set) {
    auto& slot = std::get<std::optional<OrbitPairsGraph<S>>>(pairs_graphs_);
    if (!slot) {
      std::vector<std::pair<typename S::point_type, typename S::point_type>> seeds;
      for (const auto& [a, b] : config_.gset->seeds) seeds.emplace_back(set.decode(a), set.decode(b));
      if (seeds.empty()) throw Error(ErrorCode::MalformedInput, "gset.seeds is empty");
      slot.emplace(orbit_pairs_graph(set, seeds, config_.budgets.orbit));
    }
    return *slot;
  }

  detail::CheckOutcome run_check(const std::string& name, std::mt19937_64& rng) {
    if (setup_.pair) return pair_check(name, rng);
    if (setup_.gset) return std::visit([&](const auto& set) { return gset_check(set, name, rng); }, *setup_.gset);
    return finite_check(name);
  }

  // --- coset-space experiments ---------------------------------------------

  detail::CheckOutcome pair_check(const std::string& name, std::mt19937_64& rng) {
    const HeckePair& pair = *setup_.pair;
    const GroupCtx& ctx = pair.ctx();
    auto key = [](const GroupElem& g) { return to_string(g); };
    detail::CheckOutcome o;

    if (name == "almost_normal") {
      o.verdict = check_almost_normal(pair, setup_.test_set, config_.budgets.orbit);
      o.property = o.verdict.status == Status::Pass;
      if (auto* cert = std::get_if<OrbitListCert>(&o.verdict.certificate)) {
        ordered_json sizes = ordered_json::object();
        for (std::size_t i = 0; i < cert->subjects.size(); ++i) sizes[cert->subjects[i]] = cert->orbits[i].size();
        o.data["orbit_sizes"] = sizes;
        if (config_.mutation == "open_orbit_list" && !cert->orbits.empty()) {
          auto largest = std::max_element(cert->orbits.begin(), cert->orbits.end(),
                                          [](const auto& a, const auto& b) { return a.size() < b.size(); });
          largest->pop_back();
          o.verdict.notes.push_back("seeded mutation: one orbit list truncated");
        }
        if (!replay_orbit_list(pair, *cert)) {
          std::string subject = cert->subjects.empty() ? "" : cert->subjects.front();
          o.verdict.status = Status::Fail;
          o.verdict.certificate = CounterexampleCert{"orbit_closure", {subject}, {}};
        }
      }
      return o;
    }

    if (name == "relative_cayley") {
      try {
        const auto& g = relative_graph();
        OrbitListCert cert;
        ordered_json orbits = ordered_json::array();
        for (const auto& go : g.generator_orbits) {
          std::vector<std::string> reps;
          for (const auto& m : go.orbit.members) reps.push_back(to_string(m));
          cert.subjects.push_back(to_string(go.generator));
          cert.closure_hashes.push_back(orbit_closure_hash(go.orbit.members));
          cert.orbits.push_back(reps);
          orbits.push_back({{"generator", to_string(go.generator)},
                            {"status", orbit_status_name(go.orbit.status)},
                            {"size", go.orbit.members.size()}});
        }
        o.verdict.context = "relative_cayley";
        o.verdict.certificate = cert;
        o.verdict.status = Status::Pass;
        o.data["degree"] = g.degree();
        o.data["generator_orbits"] = orbits;
        std::vector<std::string> neighbors;
        for (const auto& u : g.base_neighbors) neighbors.push_back(to_string(u));
        o.data["base_neighbors"] = neighbors;
        // vertex-transitivity on a ball
        auto b = ball(g.graph, g.base(), config_.points_radius, config_.budgets.ball);
        for (const auto& x : b.members)
          if (g.graph.degree(x) != g.degree()) {
            o.verdict.status = Status::Fail;
            o.verdict.certificate = CounterexampleCert{"vertex_transitivity", {to_string(x)},
                                                       {std::to_string(g.graph.degree(x)), std::to_string(g.degree())}};
            break;
          }
        o.data["degree_checked_vertices"] = b.members.size();
        o.data["connectivity_checked_cosets"] = check_connectivity(g, config_.points_radius, config_.budgets.orbit);
        o.property = true;
      } catch (const NotLocallyFiniteError& e) {
        o.verdict = detail::unknown_verdict("relative_cayley", e.generator(), e.trace(),
                                            e.what());
        o.data["refused"] = "NotLocallyFinite";
        o.data["generator"] = e.generator();
        o.property = false;
      }
      return o;
    }

    if (name == "metric_axioms" || name == "invariance") {
      const RelativeCayleyGraph* g = nullptr;
      try {
        g = &relative_graph();
      } catch (const NotLocallyFiniteError& e) {
        o.verdict = detail::unknown_verdict(name, e.generator(), e.trace(),
                                            "no metric: relative Cayley construction refused");
        return o;
      }
      auto points = ball(g->graph, g->base(), config_.points_radius, config_.budgets.ball).members;
      std::vector<GroupElem> sample;
      for (std::size_t i = 0; i < config_.samples.group; ++i) sample.push_back(random_element(ctx, rng, 3));
      std::function<GroupElem(const GroupElem&, const GroupElem&)> act = [&pair](const GroupElem& h,
                                                                                 const GroupElem& x) {
        return pair.coset_rep(pair.ctx().mul(h, x));
      };
      return detail::metric_checks<GroupElem>(name, g->graph, points, sample, act, key, config_, rng).front();
    }

    if (name == "properness") {
      const RelativeCayleyGraph* g = nullptr;
      try {
        g = &relative_graph();
      } catch (const NotLocallyFiniteError& e) {
        o.verdict = detail::unknown_verdict(name, e.generator(), e.trace(),
                                            "no metric: relative Cayley construction refused");
        return o;
      }
      auto size = [&](std::size_t r, std::size_t budget) {
        return detail::ball_size(g->graph, g->base(), r, budget, cache_);
      };
      o.verdict = check_properness(size, config_.radii, config_.budgets.ball);
      return o;
    }

    if (name == "equivalence") {
      auto out = equivalence_harness(pair, setup_.generators, config_.budgets.orbit, config_.samples.group, rng);
      o.verdict = out.verdict;
      o.data["almost_normal"] = status_name(out.almost_normal.status);
      o.data["construction"] = out.construction_succeeded ? "succeeded" : "refused";
      if (!out.refusal.empty()) o.data["refusal"] = out.refusal;
      return o;
    }

    if (name == "hausdorff") {
      HausdorffMetric metric(pair, config_.budgets.word_metric);
      auto group = enumerate_group(ctx, config_.budgets.word_metric);
      std::vector<GroupElem> cosets;
      std::set<std::string> seen;
      for (const auto& g : group)
        if (seen.insert(to_string(pair.coset_rep(g))).second) cosets.push_back(pair.coset_rep(g));
      std::sort(cosets.begin(), cosets.end(), ElemLess{});
      auto d = detail::mutated<GroupElem>([&metric](const GroupElem& a, const GroupElem& b) { return metric(a, b); },
                                          key, config_.mutation == "asymmetric_metric");
      const std::size_t n = cosets.size();
      auto axioms = check_metric_axioms(std::span<const GroupElem>(cosets), d, key, n * n * n, rng, "hausdorff");
      auto act = [&pair](const GroupElem& h, const GroupElem& x) { return pair.coset_rep(pair.ctx().mul(h, x)); };
      auto inv = check_invariance(std::span<const GroupElem>(cosets), std::span<const GroupElem>(group), act, d, key,
                                  n * n, rng, "hausdorff");
      o.verdict = axioms.status == Status::Fail ? axioms : inv;
      o.verdict.context = "hausdorff";
      ordered_json rows = ordered_json::array();
      for (const auto& a : cosets) {
        ordered_json row = ordered_json::array();
        for (const auto& b : cosets) row.push_back(metric(a, b).value);
        rows.push_back(row);
      }
      std::vector<std::string> labels;
      for (const auto& x : cosets) labels.push_back(to_string(x));
      o.data["cosets"] = labels;
      o.data["table"] = rows;
      o.data["group_order"] = group.size();
      return o;
    }

    if (name == "normal_core") {
      auto core = normal_core(pair, config_.budgets.word_metric);
      auto q = quotient_pair(pair, core.generators);
      auto group = enumerate_group(ctx, config_.budgets.word_metric);
      std::set<std::string> before, after;
      for (const auto& g : group) {
        before.insert(to_string(pair.coset_rep(g)));
        after.insert(to_string(q.map_coset(pair.coset_rep(g))));
      }
      const bool effective = q.is_identity_reduction() || normal_core(q.pair()).elements.size() == 1;
      HomomorphismTableCert table;
      for (const auto& s : ctx.primary_generators()) table.images.emplace_back(to_string(s), to_string(q.image(s)));
      o.verdict.context = "normal_core";
      o.verdict.certificate = table;
      o.verdict.status = before.size() == after.size() && effective ? Status::Pass : Status::Fail;
      if (o.verdict.status == Status::Fail)
        o.verdict.certificate = CounterexampleCert{"quotient", {}, {std::to_string(before.size()), std::to_string(after.size())}};
      std::vector<std::string> elems, gens;
      for (const auto& l : core.elements) elems.push_back(to_string(l));
      for (const auto& l : core.generators) gens.push_back(to_string(l));
      o.data["core"] = elems;
      o.data["core_generators"] = gens;
      o.data["quotient_order"] = q.is_identity_reduction() ? group.size() : enumerate_group(q.pair().ctx(), config_.budgets.word_metric).size();
      o.data["cosets_before"] = before.size();
      o.data["cosets_after"] = after.size();
      o.data["effective"] = effective;
      return o;
    }
    throw Error(ErrorCode::ConfigParseError, "unknown check " + name);
  }

  // --- G-set experiments ---------------------------------------------------

  template <class S>
  detail::CheckOutcome gset_check(const S& set, const std::string& name, std::mt19937_64& rng) {
    using Point = typename S::point_type;
    const GSetConfig& gc = *config_.gset;
    auto key = [&set](const Point& p) { return set.encode(p); };
    detail::CheckOutcome o;

    auto points = [&](const InvariantGraph<Point>& g) {
      std::vector<Point> out;
      if (!gc.points.empty()) {
        for (const auto& p : gc.points) out.push_back(set.decode(p));
      } else {
        out = ball(g, center(set), config_.points_radius, config_.budgets.ball).members;
      }
      return out;
    };

    if (name == "orbit_pairs" || name == "metric_axioms" || name == "invariance" || name == "properness") {
      const OrbitPairsGraph<S>* g = nullptr;
      try {
        g = &pairs_graph(set);
        if (name == "orbit_pairs") {
          auto pts = points(g->graph);
          ordered_json degrees = ordered_json::object();
          std::vector<std::string> disconnected;
          for (const auto& p : pts) {
            degrees[set.encode(p)] = g->graph.degree(p);
            if (graph_distance(g->graph, center(set), p, config_.budgets.distance_radius).kind ==
                Distance::Kind::Unreachable)
              disconnected.push_back(set.encode(p));
          }
          o.verdict.context = "orbit_pairs";
          o.verdict.status = *g->sampled ? Status::Sampled : Status::Pass;
          BallEnumerationCert cert;
          cert.points_checked = pts.size();
          std::vector<std::string> keys;
          for (const auto& p : pts) keys.push_back(set.encode(p));
          cert.points_hash = hecke::detail::hash_keys(keys);
          o.verdict.certificate = cert;
          if (!disconnected.empty())
            o.verdict.notes.push_back("Disconnected: " + disconnected.front() + " is unreachable from " +
                                      set.encode(center(set)));
          o.data["degrees"] = degrees;
          o.data["disconnected"] = disconnected;
          o.data["sampled"] = *g->sampled;
          return o;
        }
        if (name == "properness") {
          auto size = [&](std::size_t r, std::size_t budget) {
            return detail::ball_size(g->graph, center(set), r, budget, cache_);
          };
          o.verdict = check_properness(size, config_.radii, config_.budgets.ball);
          return o;
        }
        auto pts = points(g->graph);
        std::vector<GroupElem> sample;
        for (std::size_t i = 0; i < config_.samples.group; ++i) sample.push_back(random_element(set.context(), rng, 6));
        std::function<Point(const GroupElem&, const Point&)> act = [&set](const GroupElem& h, const Point& x) {
          return set.act(h, x);
        };
        return detail::metric_checks<Point>(name, g->graph, pts, sample, act, key, config_, rng).front();
      } catch (const NotLocallyFiniteError& e) {
        o.verdict = detail::unknown_verdict(name, e.generator(), e.trace(), e.what());
        return o;
      }
    }

    if (name == "closure_levels") {
      std::vector<std::vector<Point>> windows;
      if constexpr (std::is_same_v<S, BinaryOdometer>) {
        for (std::uint32_t k = 1; k <= gc.window_levels; ++k) windows.push_back(set.window(k));
      }
      for (const auto& w : gc.windows) {
        std::vector<Point> pts;
        for (const auto& p : w) pts.push_back(set.decode(p));
        windows.push_back(std::move(pts));
      }
      for (std::size_t r : gc.window_radii)
        windows.push_back(ball(pairs_graph(set).graph, center(set), r, config_.budgets.ball).members);
      if (windows.empty()) throw Error(ErrorCode::MalformedInput, "closure_levels needs windows");
      auto levels = truncated_closure_levels(set, windows, config_.budgets.orbit);
      ordered_json rows = ordered_json::array();
      bool complete = true, compatible = true;
      std::optional<DivergenceCert> first_cut;
      for (std::size_t i = 0; i < levels.levels.size(); ++i) {
        const auto& l = levels.levels[i];
        rows.push_back({{"window_size", l.window_size},
                        {"complete", l.complete},
                        {"image_size", l.image_size},
                        {"compatible_with_previous", l.compatible_with_previous},
                        {"hash", l.hash}});
        complete = complete && l.complete;
        compatible = compatible && l.compatible_with_previous;
        if (!l.complete && !first_cut) first_cut = DivergenceCert{"window " + std::to_string(i), l.trace};
      }
      o.data["levels"] = rows;
      o.verdict.context = "closure_levels";
      o.property = complete;
      if (!compatible || !levels.sizes_nondecreasing()) {
        o.verdict.status = Status::Fail;
        o.verdict.certificate = CounterexampleCert{"level_compatibility", {}, {}};
      } else if (!complete) {
        o.verdict.status = Status::Unknown;
        o.verdict.certificate = *first_cut;
        o.verdict.notes.push_back("some level exceeded the budget; sizes there are lower bounds");
      } else {
        o.verdict.status = Status::Pass;
        BallEnumerationCert cert;
        for (const auto& l : levels.levels) {
          cert.radii.push_back(l.window_size);
          cert.sizes.push_back(l.image_size);
        }
        cert.budget = config_.budgets.orbit;
        o.verdict.certificate = cert;
      }
      return o;
    }

    if (name == "stabilizer_probe") {
      if (!gc.probe) throw Error(ErrorCode::MalformedInput, "stabilizer_probe needs gset.probe");
      std::vector<Point> ys;
      for (const auto& y : gc.probe->ys) ys.push_back(set.decode(y));
      auto probe = stabilizer_orbit_probe(set, set.decode(gc.probe->x), ys, config_.budgets.orbit);
      o.verdict.context = "stabilizer_probe";
      o.verdict.status = probe.status;
      o.property = probe.status == Status::Pass;
      OrbitListCert cert;
      ordered_json sizes = ordered_json::object();
      std::optional<DivergenceCert> cut;
      for (const auto& orbit : probe.orbits) {
        if (!orbit.closed && !cut) cut = DivergenceCert{orbit.point, orbit.trace};
        if (orbit.closed) sizes[orbit.point] = orbit.members.size();
        else sizes[orbit.point] = nullptr;
        cert.subjects.push_back(orbit.point);
        cert.orbits.push_back(orbit.closed ? orbit.members : std::vector<std::string>{});
        cert.closure_hashes.push_back(orbit.closed ? hecke::detail::hash_keys(orbit.members) : "");
      }
      if (cut) o.verdict.certificate = *cut;
      else o.verdict.certificate = cert;
      o.data["x"] = gc.probe->x;
      o.data["orbit_sizes"] = sizes;
      o.data["stabilizer_sampled"] = probe.stabilizer_sampled;
      o.data["stabilizer_generators"] = probe.stabilizer_generators;
      if (cut) o.data["frontier_sizes"] = cut->trace.frontier_sizes;
      return o;
    }
    throw Error(ErrorCode::ConfigParseError, "unknown check " + name);
  }

  template <class S>
  typename S::point_type center(const S& set) const {
    const GSetConfig& gc = *config_.gset;
    if (!gc.center.empty()) return set.decode(gc.center);
    if (!gc.seeds.empty()) return set.decode(gc.seeds.front().first);
    throw Error(ErrorCode::MalformedInput, "gset.center is required");
  }

  // --- finite actions ------------------------------------------------------

  detail::CheckOutcome finite_check(const std::string& name) {
    detail::CheckOutcome o;
    if (name != "closure_finite") throw Error(ErrorCode::ConfigParseError, "unknown check " + name);
    auto summary = closure_finite(*setup_.finite, config_.budgets.word_metric);
    o.verdict.context = "closure_finite";
    o.verdict.status = Status::Pass;
    HomomorphismTableCert cert;
    for (std::size_t i = 0; i < setup_.finite->generators.size(); ++i) {
      GroupElem p = Perm{std::vector<std::uint32_t>(setup_.finite->generators[i].begin(),
                                                    setup_.finite->generators[i].end())};
      cert.images.emplace_back("g" + std::to_string(i), to_string(p));
    }
    o.verdict.certificate = cert;
    o.property = true;
    o.data["order"] = summary.order;
    o.data["stabilizer_orders"] = summary.stabilizer_orders;
    o.data["orbits"] = summary.orbits;
    return o;
  }

  ExperimentConfig config_;
  RunOptions options_;
  Setup setup_;
  std::string config_hash_;
  BallCache cache_;
  std::optional<RelativeCayleyGraph> graph_;
  std::tuple<std::optional<OrbitPairsGraph<DihedralOnIntegers>>, std::optional<OrbitPairsGraph<BinaryOdometer>>,
             std::optional<OrbitPairsGraph<RationalLine>>>
      pairs_graphs_;
};

inline RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {}) {
  return Experiment(config, options).run();
}

/// Writes <dir>/<name>.report.json and returns its path.
inline std::filesystem::path write_report(const RunResult& result, const std::string& name, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto path = std::filesystem::path(dir) / (name + ".report.json");
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::MalformedInput, "cannot write " + path.string());
  out << result.report.dump(2) << "\n";
  return path;
}

/// The report without its timing fields, for determinism comparisons.
inline ordered_json strip_timing(ordered_json report) {
  report.erase("timing");
  return report;
}

struct ExampleInfo {
  std::string file;
  std::string name;
  std::string description;
  std::string expected;
};

inline std::vector<ExampleInfo> list_examples(const std::filesystem::path& dir) {
  std::vector<ExampleInfo> out;
  if (!std::filesystem::is_directory(dir)) return out;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.path().extension() == ".json") {
      auto c = load_config(entry.path());
      out.push_back({entry.path().filename().string(), c.name, c.description, c.expected});
    }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.file < b.file; });
  return out;
}

}  // namespace hecke::experiment

#endif  // HECKE_EXPERIMENT_HPP
