// One PASS/FAIL line per acceptance criterion. Every expected value below is
// either a closed form or recomputed here by brute force.
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "hecke/experiment.hpp"

using namespace hecke;
namespace fs = std::filesystem;
namespace ex = hecke::experiment;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

template <class A, class B>
void require_eq(const A& got, const B& want, const std::string& what) {
  if (!(got == want)) {
    std::ostringstream os;
    os << what << ": got " << got << ", expected " << want;
    throw Failure(os.str());
  }
}

GroupCtx make_ctx(Family fam, const std::vector<std::string>& gens) {
  GroupCtx base(fam, {});
  std::vector<GroupElem> g;
  for (const auto& s : gens) g.push_back(base.parse(s));
  return GroupCtx(fam, g);
}

HeckePair bs_pair(std::int64_t m, std::int64_t n) { return HeckePair(make_ctx(BSFamily{m, n}, {"t", "x"}), CyclicX{}); }

HeckePair perm_pair(std::size_t n, const std::vector<std::string>& h) {
  std::vector<std::string> transpositions;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      transpositions.push_back("(" + std::to_string(i) + " " + std::to_string(j) + ")");
  GroupCtx ctx = make_ctx(PermFamily{n}, transpositions);
  std::vector<GroupElem> hg;
  for (const auto& s : h) hg.push_back(ctx.parse(s));
  return HeckePair(ctx, PermSubgroup{hg});
}

// Distinct cosets among y_j H, equality decided by membership only.
std::size_t distinct_by_membership(const HeckePair& pair, const std::vector<GroupElem>& ys) {
  const auto& ctx = pair.ctx();
  std::vector<GroupElem> reps;
  for (const auto& y : ys)
    if (std::none_of(reps.begin(), reps.end(), [&](const GroupElem& r) { return pair.contains(ctx.mul(ctx.inv(r), y)); }))
      reps.push_back(y);
  return reps.size();
}

std::size_t h_orbit_size(const HeckePair& pair, const GroupElem& g) {
  auto orbit = h_orbit_of_coset(pair, g);
  require(orbit.finite(), "orbit of " + to_string(g) + " did not close");
  return orbit.members.size();
}

// --- 1 -----------------------------------------------------------------------

std::string orbit_counts() {
  std::ostringstream detail;
  for (auto [m, n, word, want] : std::vector<std::tuple<int, int, std::string, std::size_t>>{
           {2, 3, "t", 2}, {2, 3, "t^-1", 3}, {3, 5, "t", 3}}) {
    auto pair = bs_pair(m, n);
    const auto& ctx = pair.ctx();
    std::vector<GroupElem> ys;
    for (int j = -60; j <= 60; ++j) ys.push_back(ctx.mul(ctx.pow(ctx.parse("x"), j), ctx.parse(word)));
    std::size_t oracle = distinct_by_membership(pair, ys);
    require_eq(oracle, want, "BS oracle");
    require_eq(h_orbit_size(pair, ctx.parse(word)), oracle, "BS(" + std::to_string(m) + "," + std::to_string(n) + ") " + word);
    detail << "BS(" << m << "," << n << ") " << word << "H:" << oracle << " ";
  }

  HeckePair tr(GroupCtx(AffineFamily{}, {Affine{Rat(2), Rat(0)}, Affine{Rat(3), Rat(0)}, Affine{Rat(1), Rat(1)}}),
               IntegerTranslations{});
  auto translation_oracle = [&](std::int64_t p, std::int64_t q) {
    std::vector<GroupElem> ys;
    for (std::int64_t k = 0; k <= 10 * p; ++k) ys.push_back(tr.coset_rep(Affine{Rat(p, q), Rat(k)}));
    std::set<std::string> keys;
    for (const auto& y : ys) keys.insert(to_string(y));
    require_eq(distinct_by_membership(tr, ys), keys.size(), "canonical forms vs membership");
    return keys.size();
  };
  require_eq(translation_oracle(3, 2), 3u, "(3/2,0)H oracle");
  require_eq(h_orbit_size(tr, Affine{Rat(3, 2), Rat(0)}), 3u, "(3/2,0)H");
  std::mt19937_64 rng(20);
  for (int done = 0; done < 20;) {
    std::int64_t p = 1 + static_cast<std::int64_t>(rng() % 30), q = 1 + static_cast<std::int64_t>(rng() % 30);
    if (std::gcd(p, q) != 1) continue;
    ++done;
    std::size_t oracle = translation_oracle(p, q);
    require_eq(oracle, static_cast<std::size_t>(p), "translation oracle p/q");
    require_eq(h_orbit_size(tr, Affine{Rat(p, q), Rat(0)}), oracle, "(p/q,0)H");
  }
  detail << "(3/2,0)H:3 20 fractions:p ";

  HeckePair sl(make_ctx(MatrixFamily{2, true}, {"[[1,1],[0,1]]", "[[0,-1],[1,0]]", "[[2,0],[0,1/2]]"}),
               IntegerMatrices{});
  const auto& ctx = sl.ctx();
  GroupElem g = ctx.parse("[[2,0],[0,1/2]]");
  std::vector<GroupElem> ys;
  const int B = 4;
  for (int a = -B; a <= B; ++a)
    for (int b = -B; b <= B; ++b)
      for (int c = -B; c <= B; ++c)
        for (int d = -B; d <= B; ++d)
          if (a * d - b * c == 1)
            ys.push_back(ctx.mul(RatMatrix{2, {Rat(a), Rat(b), Rat(c), Rat(d)}}, g));
  std::size_t oracle = distinct_by_membership(sl, ys);
  require_eq(h_orbit_size(sl, g), oracle, "SL2 diag(2,1/2)");
  detail << "SL2 diag(2,1/2)H:" << oracle << " (oracle)";
  return detail.str();
}

// --- 2 -----------------------------------------------------------------------

std::string relative_cayley() {
  auto pair = bs_pair(2, 3);
  const auto& ctx = pair.ctx();
  std::vector<GroupElem> gens{ctx.parse("t"), ctx.parse("x")};
  auto g = build_relative_cayley(pair, gens, kDefaultBudget);

  std::set<std::string> orbit_union;
  for (const auto& go : g.generator_orbits)
    for (const auto& m : go.orbit.members)
      if (m != g.base()) orbit_union.insert(to_string(m));
  require_eq(g.degree(), orbit_union.size(), "degree vs deduplicated generator orbits");
  require_eq(g.degree(), 5u, "degree vs Bass-Serre tree (m+n)");

  // word enumeration: layer r holds the cosets of words with r letters t^{+-1},
  // each preceded by an arbitrary x^k
  std::vector<std::size_t> words_ball{1};
  std::set<std::string> seen{to_string(g.base())};
  std::vector<GroupElem> layer{ctx.identity()};
  for (int r = 1; r <= 4; ++r) {
    std::vector<GroupElem> next;
    for (const auto& w : layer)
      for (int k = -6; k <= 6; ++k)
        for (const char* s : {"t", "t^-1"}) {
          GroupElem y = ctx.mul(w, ctx.mul(ctx.pow(ctx.parse("x"), k), ctx.parse(s)));
          if (seen.insert(to_string(pair.coset_rep(y))).second) next.push_back(y);
        }
    words_ball.push_back(seen.size());
    layer = std::move(next);
  }
  auto b = ball(g.graph, g.base(), 4, 10'000);
  std::size_t acc = 0;
  for (std::size_t r = 0; r <= 4; ++r) {
    acc += b.layer_sizes[r];
    require_eq(acc, words_ball[r], "ball size r=" + std::to_string(r));
    std::size_t tree = 1 + 5 * ((std::size_t{1} << (2 * r)) - 1) / 3;
    require_eq(acc, tree, "tree ball r=" + std::to_string(r));
  }
  for (const auto& v : ball(g.graph, g.base(), 3, 10'000).members)
    require_eq(g.graph.degree(v), 5u, "degree at " + to_string(v));

  auto points = ball(g.graph, g.base(), 2, 10'000).members;
  auto key = [](const GroupElem& x) { return to_string(x); };
  auto d = [&](const GroupElem& a, const GroupElem& c) { return graph_distance(g.graph, a, c, 32); };
  std::mt19937_64 rng(2);
  std::vector<GroupElem> sample;
  for (int i = 0; i < 200; ++i) sample.push_back(random_element(ctx, rng, 3));
  auto act = [&](const GroupElem& h, const GroupElem& x) { return pair.coset_rep(ctx.mul(h, x)); };
  auto inv = check_invariance(std::span<const GroupElem>(points), std::span<const GroupElem>(sample), act, d, key, 1, rng);
  require(inv.status == Status::Pass, "invariance " + std::string(status_name(inv.status)));
  require_eq(std::get<BallEnumerationCert>(inv.certificate).points_checked, 200u, "exact invariance samples");
  require(inv.notes.empty(), "non-exact invariance samples");
  auto ax = check_metric_axioms(std::span<const GroupElem>(points), d, key, 2000, rng);
  require(ax.status == Status::Pass, "metric axioms " + std::string(status_name(ax.status)));
  return "degree 5, balls 1/6/26/106/426, invariance 200 exact, axioms PASS";
}

// --- 3 -----------------------------------------------------------------------

std::string negative_example() {
  HeckePair pair(GroupCtx(AffineFamily{}, {Affine{Rat(1), Rat(1)}, Affine{Rat(2), Rat(0)}}), PositiveDilations{4});
  auto v = check_almost_normal(pair, {Affine{Rat(1), Rat(1)}}, 10'000);
  require(v.status == Status::Unknown, "almost normality " + std::string(status_name(v.status)));
  const auto& trace = std::get<DivergenceCert>(v.certificate).trace;
  require(trace.frontier_sizes.size() >= 2, "frontier trace too short");
  for (std::size_t i = 1; i < trace.frontier_sizes.size(); ++i)
    require(trace.frontier_sizes[i] > trace.frontier_sizes[i - 1], "frontier not growing");
  std::vector<GroupElem> gens(pair.ctx().primary_generators().begin(), pair.ctx().primary_generators().end());
  try {
    build_relative_cayley(pair, gens, 10'000);
  } catch (const NotLocallyFiniteError& e) {
    require_eq(e.generator(), std::string("(1,1)"), "offending generator");
    return "UNKNOWN after " + std::to_string(trace.visited) + " cosets, refusal names (1,1)";
  }
  throw Failure("construction did not refuse");
}

// --- 4 -----------------------------------------------------------------------

std::size_t cycles(const Perm& p) {
  std::vector<bool> done(p.images.size(), false);
  std::size_t c = 0;
  for (std::size_t i = 0; i < p.images.size(); ++i) {
    if (done[i]) continue;
    ++c;
    for (std::size_t j = i; !done[j]; j = p.images[j]) done[j] = true;
  }
  return c;
}

std::string hausdorff() {
  std::ostringstream detail;
  for (auto [n, h] : std::vector<std::pair<std::size_t, std::vector<std::string>>>{
           {3, {"(0 1)"}}, {4, {"(0 1 2 3)", "(0 2)"}}}) {
    auto pair = perm_pair(n, h);
    const auto& ctx = pair.ctx();
    auto group = enumerate_group(ctx, 1000);
    std::vector<GroupElem> hs;
    for (const auto& g : group)
      if (pair.contains(g)) hs.push_back(g);
    // transposition word length is n minus the number of cycles
    auto len = [&](const GroupElem& a, const GroupElem& b) {
      return n - cycles(std::get<Perm>(ctx.mul(ctx.inv(a), b)));
    };
    auto oracle = [&](const GroupElem& g1, const GroupElem& g2) {
      std::size_t best = 0;
      for (int side = 0; side < 2; ++side)
        for (const auto& h1 : hs) {
          std::size_t m = SIZE_MAX;
          for (const auto& h2 : hs) {
            GroupElem a = ctx.mul(side ? g2 : g1, h1), b = ctx.mul(side ? g1 : g2, h2);
            m = std::min(m, len(a, b));
          }
          best = std::max(best, m);
        }
      return best;
    };
    HausdorffMetric metric(pair);
    for (const auto& g1 : group)
      for (const auto& g2 : group) {
        Distance dv = metric(g1, g2);
        require(dv.is_exact(), "non-exact Hausdorff value");
        require_eq(dv.value, oracle(g1, g2), "d(" + to_string(g1) + "," + to_string(g2) + ")");
        require_eq(dv.value == 0, pair.contains(ctx.mul(ctx.inv(g1), g2)), "d = 0 iff same coset");
        for (const auto& g : group)
          require_eq(metric(ctx.mul(g, g1), ctx.mul(g, g2)).value, dv.value, "invariance");
      }
    detail << "S" << n << ": " << group.size() * group.size() << " pairs x " << group.size() << " elements ";
  }
  return detail.str();
}

// --- 5 -----------------------------------------------------------------------

std::string normal_core_reduction() {
  GroupCtx ctx = make_ctx(PermFamily{4}, {"(0 1 2 3)", "(0 1)"});
  HeckePair pair(ctx, PermSubgroup{{ctx.parse("(0 1 2 3)"), ctx.parse("(0 2)")}});
  auto group = enumerate_group(ctx, 1000);
  std::vector<std::string> h;
  for (const auto& g : group)
    if (pair.contains(g)) h.push_back(to_string(g));
  std::set<std::string> meet(h.begin(), h.end());
  for (const auto& g : group) {
    std::set<std::string> conj;
    for (const auto& x : group)
      if (pair.contains(x)) conj.insert(to_string(ctx.mul(ctx.mul(g, x), ctx.inv(g))));
    std::set<std::string> keep;
    std::set_intersection(meet.begin(), meet.end(), conj.begin(), conj.end(), std::inserter(keep, keep.begin()));
    meet = keep;
  }
  require_eq(meet.size(), 4u, "intersection of conjugates");
  auto core = normal_core(pair);
  std::set<std::string> got;
  for (const auto& l : core.elements) got.insert(to_string(l));
  require(got == meet, "core differs from the intersection of conjugates");
  require(meet == std::set<std::string>{"()", "(0 1)(2 3)", "(0 2)(1 3)", "(0 3)(1 2)"}, "core is not the Klein group");

  auto q = quotient_pair(pair, core.generators);
  require_eq(normal_core(q.pair()).elements.size(), 1u, "quotient core");
  std::set<std::string> before, after;
  for (const auto& g : group) {
    before.insert(to_string(pair.coset_rep(g)));
    after.insert(to_string(q.map_coset(pair.coset_rep(g))));
  }
  require_eq(before.size(), 3u, "cosets of D4");
  require_eq(after.size(), 3u, "cosets after reduction");
  return "core = V4 (24 conjugates), quotient effective, 3 cosets";
}

// --- 6 -----------------------------------------------------------------------

std::string closure_groups() {
  // Z acts on Z/2 x Z/3 by (a,b) -> (a+1,b+1); point 3a+b
  std::vector<std::size_t> shift(6);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 3; ++b) shift[3 * a + b] = 3 * ((a + 1) % 2) + (b + 1) % 3;
  auto summary = closure_finite(FiniteAction{6, {shift}});
  require_eq(summary.order, 6u, "|G'| for Z on Z/2 x Z/3");

  BinaryOdometer odo;
  std::vector<std::vector<BinaryOdometer::point_type>> windows;
  for (std::uint32_t k = 1; k <= 10; ++k) windows.push_back(odo.window(k));
  auto levels = truncated_closure_levels(odo, windows);
  for (std::uint32_t k = 1; k <= 10; ++k) {
    const auto& l = levels.levels[k - 1];
    require(l.complete, "odometer level incomplete");
    require_eq(l.image_size, std::size_t{1} << k, "odometer image at level " + std::to_string(k));
    require(l.compatible_with_previous, "level map not onto");
  }

  auto q = RationalLine::multiplicative(4);
  auto probe = stabilizer_orbit_probe(q, Rat(0), {Rat(1)}, 10'000);
  require(probe.status == Status::Unknown, "Q+ on Q probe " + std::string(status_name(probe.status)));
  return "|G'| = 6, odometer 2^k for k = 1..10 onto, Q+ on Q probe UNKNOWN";
}

// --- 7 -----------------------------------------------------------------------

std::string dihedral() {
  DihedralOnIntegers set;
  auto g = orbit_pairs_graph(set, {{BigInt(0), BigInt(1)}});
  for (int x = -50; x <= 50; ++x)
    for (int y = -50; y <= 50; ++y) {
      Distance d = graph_distance(g.graph, BigInt(x), BigInt(y), 256);
      require(d.is_exact(), "distance not exact");
      require_eq(d.value, static_cast<std::uint64_t>(std::abs(x - y)), "d(" + std::to_string(x) + "," + std::to_string(y) + ")");
    }
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    GroupElem h = random_element(set.context(), rng, 6);
    for (int j = 0; j < 50; ++j) {
      BigInt x = BigInt(static_cast<int>(rng() % 101) - 50), y = BigInt(static_cast<int>(rng() % 101) - 50);
      Distance d = graph_distance(g.graph, set.act(h, x), set.act(h, y), 256);
      require(d.is_exact(), "moved distance not exact");
      require_eq(BigInt(d.value), abs(x - y), "invariance under " + to_string(h));
    }
  }
  return "d = |x-y| on [-50,50]^2, invariant under 100 elements";
}

// --- 8, 9 --------------------------------------------------------------------

std::string equivalence_corpus() {
  std::size_t pairs = 0, yes = 0, no = 0;
  fs::path out = fs::temp_directory_path() / "hecke_acceptance_equivalence";
  for (const auto& e : ex::list_examples(HECKE_CONFIG_DIR)) {
    auto c = ex::load_config(fs::path(HECKE_CONFIG_DIR) / e.file);
    if (!c.group) continue;
    c.checks = {"equivalence"};
    c.expected.clear();
    ex::RunOptions o;
    o.output_dir = out.string();
    o.use_cache = false;
    auto r = ex::run_experiment(c, o);
    const auto& check = r.report["checks"][0];
    const bool an = check["data"]["almost_normal"] == "PASS";
    const bool built = check["data"]["construction"] == "succeeded";
    require(an == built, e.file + ": almost normal and construction disagree");
    require(check["status"] == "PASS", e.file + ": harness " + check["status"].get<std::string>());
    ++pairs;
    (an ? yes : no) += 1;
  }
  require(pairs > 0 && yes > 0 && no > 0, "corpus lacks positive or negative pairs");
  return std::to_string(pairs) + " pairs, " + std::to_string(yes) + " both-yes, " + std::to_string(no) +
         " both-no, 0 disagreements";
}

std::string determinism() {
  fs::path out = fs::temp_directory_path() / "hecke_acceptance_determinism";
  fs::remove_all(out);
  std::size_t n = 0;
  for (const auto& e : ex::list_examples(HECKE_CONFIG_DIR)) {
    auto c = ex::load_config(fs::path(HECKE_CONFIG_DIR) / e.file);
    std::string runs[2];
    for (auto& text : runs) {
      ex::RunOptions o;
      o.output_dir = out.string();
      o.config_path = e.file;
      auto path = ex::write_report(ex::run_experiment(c, o), c.name, out.string());
      std::ifstream in(path);
      text = ex::strip_timing(nlohmann::ordered_json::parse(in)).dump(2);
    }
    require(runs[0] == runs[1], e.file + ": reports differ");
    ++n;
  }
  return std::to_string(n) + " configs, second run with a warm ball cache";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria{
      {"Hecke-pair orbit counts vs brute force", orbit_counts},
      {"relative Cayley graph of BS(2,3)", relative_cayley},
      {"negative example refuses", negative_example},
      {"Hausdorff coset metric", hausdorff},
      {"normal core and quotient reduction", normal_core_reduction},
      {"closure groups", closure_groups},
      {"infinite dihedral path metric", dihedral},
      {"equivalence harness over the config corpus", equivalence_corpus},
      {"determinism modulo timing", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string line;
    try {
      line = "PASS [" + std::to_string(i + 1) + "] " + criteria[i].first + ": " + criteria[i].second();
    } catch (const std::exception& e) {
      line = "FAIL [" + std::to_string(i + 1) + "] " + criteria[i].first + ": " + e.what();
      ++failed;
    }
    std::cout << line << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
