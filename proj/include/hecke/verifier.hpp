#ifndef HECKE_VERIFIER_HPP
#define HECKE_VERIFIER_HPP

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hecke/closure.hpp"
#include "hecke/coset.hpp"
#include "hecke/graph.hpp"
#include "hecke/metric.hpp"

namespace hecke {

// ---------------------------------------------------------------------------
// Certificates and verdicts
// ---------------------------------------------------------------------------

struct OrbitListCert {
  std::vector<std::string> subjects;                 // the elements k whose orbits were enumerated
  std::vector<std::vector<std::string>> orbits;      // canonical coset reps per subject
  std::vector<std::string> closure_hashes;
};

struct BallEnumerationCert {
  std::vector<std::size_t> radii;
  std::vector<std::optional<std::size_t>> sizes;  // nullopt: the ball exceeded the budget
  std::size_t budget = 0;
  std::size_t points_checked = 0;
  std::string points_hash;
};

struct CounterexampleCert {
  std::string violated;              // "identity", "symmetry", "triangle", "invariance", ...
  std::vector<std::string> points;   // canonical encodings; for invariance the first is g
  std::vector<std::string> values;   // the offending distances
};

struct DivergenceCert {
  std::string subject;
  DivergenceTrace trace;
};

struct HomomorphismTableCert {
  std::vector<std::pair<std::string, std::string>> images;
};

using Certificate = std::variant<OrbitListCert, BallEnumerationCert, CounterexampleCert, DivergenceCert,
                                 HomomorphismTableCert>;

inline const char* certificate_type(const Certificate& c) {
  switch (c.index()) {
    case 0: return "OrbitList";
    case 1: return "BallEnumeration";
    case 2: return "CounterexampleTriple";
    case 3: return "DivergenceTrace";
    default: return "HomomorphismTable";
  }
}

struct Verdict {
  Status status = Status::Unknown;
  Certificate certificate;
  std::string context;
  std::vector<std::string> notes;
};

/// Deterministic index draw; independent of the standard library's
/// distribution implementations.
template <class Rng>
std::size_t draw_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

namespace detail {

inline std::string hash_keys(std::vector<std::string> keys) {
  std::sort(keys.begin(), keys.end());
  std::string joined;
  for (const auto& k : keys) joined += k + "\n";
  return stable_hash(joined);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Metric axioms
// ---------------------------------------------------------------------------

/// Checks d(x,y) = 0 <=> x = y, symmetry and the triangle inequality on
/// sampled triples of `points` (all triples when there are at most `samples`).
template <class Point, class Metric, class Key, class Rng>
Verdict check_metric_axioms(std::span<const Point> points, Metric&& d, Key&& key, std::size_t samples, Rng& rng,
                            std::string context = "metric_axioms") {
  Verdict v;
  v.context = std::move(context);
  const std::size_t n = points.size();
  std::size_t unknown = 0;
  auto fail = [&](std::string what, std::vector<std::size_t> idx, std::vector<Distance> ds) {
    CounterexampleCert c{std::move(what), {}, {}};
    for (auto i : idx) c.points.push_back(key(points[i]));
    for (const auto& x : ds) c.values.push_back(to_string(x));
    v.status = Status::Fail;
    v.certificate = std::move(c);
    return v;
  };
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) -> std::optional<Verdict> {
    Distance dii = d(points[i], points[i]);
    if (!(dii == Distance::exact(0))) return fail("identity", {i}, {dii});
    Distance dij = d(points[i], points[j]), dji = d(points[j], points[i]);
    Distance djk = d(points[j], points[k]), dik = d(points[i], points[k]);
    if (!dij.is_exact() || !dji.is_exact() || !djk.is_exact() || !dik.is_exact()) {
      ++unknown;
      return std::nullopt;
    }
    bool same = key(points[i]) == key(points[j]);
    if ((dij.value == 0) != same) return fail("indiscernibles", {i, j}, {dij});
    if (dij.value != dji.value) return fail("symmetry", {i, j}, {dij, dji});
    if (dik.value > dij.value + djk.value) return fail("triangle", {i, j, k}, {dik, dij, djk});
    return std::nullopt;
  };
  if (n == 0) {
    v.status = Status::Pass;
    v.certificate = BallEnumerationCert{};
    return v;
  }
  std::size_t checked = 0;
  if (n * n * n <= samples) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k, ++checked)
          if (auto bad = check(i, j, k)) return *bad;
  } else {
    for (std::size_t s = 0; s < samples; ++s, ++checked) {
      std::size_t i = draw_index(rng, n), j = draw_index(rng, n), k = draw_index(rng, n);
      if (auto bad = check(i, j, k)) return *bad;
    }
  }
  std::vector<std::string> keys;
  for (const auto& p : points) keys.push_back(key(p));
  BallEnumerationCert cert;
  cert.points_checked = n;
  cert.points_hash = detail::hash_keys(keys);
  v.certificate = cert;
  v.status = unknown == checked ? Status::Unknown : Status::Pass;
  if (unknown) v.notes.push_back(std::to_string(unknown) + " triples had non-exact distances and were skipped");
  return v;
}

// ---------------------------------------------------------------------------
// Invariance
// ---------------------------------------------------------------------------

/// d(g a, g b) == d(a, b) for `pair_samples` sampled pairs per group element
/// (every pair when there are at most `pair_samples`).
template <class Point, class Metric, class Act, class Key, class Rng>
Verdict check_invariance(std::span<const Point> points, std::span<const GroupElem> group_sample, Act&& act,
                         Metric&& d, Key&& key, std::size_t pair_samples, Rng& rng,
                         std::string context = "invariance") {
  Verdict v;
  v.context = std::move(context);
  std::size_t exact = 0, skipped = 0;
  const std::size_t n = points.size();
  const bool exhaustive = n * n <= pair_samples;
  for (const auto& g : group_sample) {
    const std::size_t rounds = n == 0 ? 0 : (exhaustive ? n * n : pair_samples);
    for (std::size_t s = 0; s < rounds; ++s) {
      const Point& a = points[exhaustive ? s / n : draw_index(rng, n)];
      const Point& b = points[exhaustive ? s % n : draw_index(rng, n)];
      Distance d1 = d(a, b);
      Distance d2 = d(act(g, a), act(g, b));
      if (!d1.is_exact() || !d2.is_exact()) {
        ++skipped;
        continue;
      }
      ++exact;
      if (d1.value != d2.value) {
        v.status = Status::Fail;
        v.certificate = CounterexampleCert{"invariance", {to_string(g), key(a), key(b)}, {to_string(d1), to_string(d2)}};
        return v;
      }
    }
  }
  BallEnumerationCert cert;
  cert.points_checked = exact;
  v.certificate = cert;
  v.status = exact > 0 || group_sample.empty() ? Status::Pass : Status::Unknown;
  if (skipped) v.notes.push_back(std::to_string(skipped) + " samples had non-exact distances and were skipped");
  return v;
}

// ---------------------------------------------------------------------------
// Properness
// ---------------------------------------------------------------------------

/// `ball_size(r, budget)` returns |B(x, r)| or nullopt when the ball holds
/// more than `budget` points. Pass iff every requested ball is finite within
/// the budget; a ball above the budget is a Fail whose certificate records the
/// radius (replayable by re-running the same enumeration).
template <class BallSize>
Verdict check_properness(BallSize&& ball_size, const std::vector<std::size_t>& radii, std::size_t budget,
                         std::string context = "properness") {
  Verdict v;
  v.context = std::move(context);
  BallEnumerationCert cert;
  cert.budget = budget;
  v.status = Status::Pass;
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (radii[i] <= radii[i - 1]) throw Error(ErrorCode::MalformedInput, "radii must increase");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    std::optional<std::size_t> size = ball_size(radii[i], budget);
    cert.radii.push_back(radii[i]);
    cert.sizes.push_back(size);
    if (!size) {
      v.status = Status::Fail;
      v.notes.push_back("ball of radius " + std::to_string(radii[i]) + " holds more than " + std::to_string(budget) +
                        " points");
      break;
    }
  }
  v.certificate = std::move(cert);
  return v;
}

// ---------------------------------------------------------------------------
// Almost normality
// ---------------------------------------------------------------------------

/// Pass with K' = union of the orbit certificates iff every k in K has a
/// certified finite H-orbit of kH; Unknown with divergence traces otherwise.
inline Verdict check_almost_normal(const HeckePair& pair, const std::vector<GroupElem>& test_set,
                                   std::size_t budget = kDefaultBudget) {
  Verdict v;
  v.context = "almost_normal";
  OrbitListCert orbits;
  std::optional<DivergenceCert> diverged;
  bool sampled = false;
  for (const auto& k : test_set) {
    auto orbit = h_orbit_of_coset(pair, k, budget);
    if (orbit.status == OrbitStatus::BudgetExceeded) {
      if (!diverged) diverged = DivergenceCert{to_string(k), orbit.trace};
      continue;
    }
    if (orbit.status == OrbitStatus::Sampled) sampled = true;
    orbits.subjects.push_back(to_string(k));
    std::vector<std::string> reps;
    for (const auto& m : orbit.members) reps.push_back(to_string(m));
    orbits.closure_hashes.push_back(orbit_closure_hash(orbit.members));
    orbits.orbits.push_back(std::move(reps));
  }
  if (diverged) {
    v.status = Status::Unknown;
    v.certificate = *diverged;
    return v;
  }
  v.status = sampled ? Status::Sampled : Status::Pass;
  v.certificate = std::move(orbits);
  return v;
}

/// Re-checks an OrbitList certificate: each orbit is closed under the
/// subgroup generators and contains its subject's coset.
inline bool replay_orbit_list(const HeckePair& pair, const OrbitListCert& cert) {
  for (std::size_t i = 0; i < cert.orbits.size(); ++i) {
    std::vector<GroupElem> members;
    for (const auto& s : cert.orbits[i]) members.push_back(pair.ctx().parse(s));
    if (!orbit_is_closed(pair, members)) return false;
    GroupElem subject = pair.coset_rep(pair.ctx().parse(cert.subjects[i]));
    if (std::find(members.begin(), members.end(), subject) == members.end()) return false;
    if (orbit_closure_hash(members) != cert.closure_hashes[i]) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Equivalence harness
// ---------------------------------------------------------------------------

struct EquivalenceOutcome {
  Verdict verdict;
  Verdict almost_normal;
  bool construction_succeeded = false;
  std::string refusal;  // NotLocallyFinite message when the construction refused
};

/// Compares "H almost normal on S" with "the relative Cayley construction
/// succeeds and yields a locally finite, compatible, invariant metric whose
/// base-point stabilizer is H".
template <class Rng>
EquivalenceOutcome equivalence_harness(const HeckePair& pair, const std::vector<GroupElem>& gens, std::size_t budget,
                                       std::size_t samples, Rng& rng) {
  EquivalenceOutcome out;
  const auto& ctx = pair.ctx();
  auto sym = symmetrize(ctx, gens);
  out.almost_normal = check_almost_normal(pair, sym, budget);
  const bool side_a = out.almost_normal.status == Status::Pass;

  std::optional<RelativeCayleyGraph> graph;
  try {
    graph.emplace(build_relative_cayley(pair, gens, budget));
    out.construction_succeeded = true;
  } catch (const NotLocallyFiniteError& e) {
    out.refusal = e.what();
  }

  Verdict& v = out.verdict;
  v.context = "equivalence";
  v.notes.push_back("relatively invariant measure: counting measure on the discrete coset space");
  v.notes.push_back("maximal almost periodicity of H/L: NOT-CHECKED");

  bool side_b = out.construction_succeeded;
  if (graph) {
    // local finiteness, compatibility and stabilizer cross-check on a ball
    const auto& g = graph->graph;
    GroupElem base = graph->base();
    std::optional<Ball<GroupElem>> b;
    try {
      b = ball(g, base, 2, budget);
    } catch (const BudgetExceededError&) {
      side_b = false;
      v.notes.push_back("ball of radius 2 exceeded budget");
    }
    if (b) {
      for (const auto& x : b->members)
        if (g.degree(x) != graph->degree()) {
          side_b = false;
          v.notes.push_back("degree mismatch at " + to_string(x));
          break;
        }
      for (const auto& x : b->members)
        for (const auto& y : b->members) {
          auto dxy = graph_distance(g, x, y, 8);
          if (!dxy.is_exact() || ((dxy.value == 0) != (x == y))) {
            side_b = false;
            v.notes.push_back("compatibility failed at " + to_string(x) + ", " + to_string(y));
          }
        }
    }
    for (std::size_t s = 0; s < samples; ++s) {
      GroupElem h = random_element(ctx, rng, 6);
      const auto& hg = pair.subgroup_generators();
      if (!hg.empty() && draw_index(rng, 2) == 0) {
        // bias half of the samples towards H
        h = ctx.identity();
        for (std::size_t i = 0, len = draw_index(rng, 6); i < len; ++i) h = ctx.mul(h, hg[draw_index(rng, hg.size())]);
      }
      bool fixes = pair.coset_rep(ctx.mul(h, base)) == base;
      if (fixes != pair.contains(h)) {
        side_b = false;
        v.notes.push_back("stabilizer of the base point differs from H at " + to_string(h));
        break;
      }
    }
  }

  const bool agree = side_a == side_b;
  v.status = agree ? Status::Pass : Status::Fail;
  if (!agree) {
    v.certificate = CounterexampleCert{"equivalence", {side_a ? "almost_normal" : "not_certified",
                                                       side_b ? "constructed" : "refused"}, {}};
  } else if (side_a) {
    v.certificate = out.almost_normal.certificate;
  } else if (auto* div = std::get_if<DivergenceCert>(&out.almost_normal.certificate)) {
    v.certificate = *div;
  } else {
    v.certificate = out.almost_normal.certificate;
  }
  v.notes.push_back(std::string("almost normal on S: ") + status_name(out.almost_normal.status));
  v.notes.push_back(std::string("construction: ") + (out.construction_succeeded ? "succeeded" : "refused"));
  return out;
}

}  // namespace hecke

#endif  // HECKE_VERIFIER_HPP
