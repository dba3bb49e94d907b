#ifndef HECKE_METRIC_HPP
#define HECKE_METRIC_HPP

#include <algorithm>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hecke/coset.hpp"
#include "hecke/graph.hpp"
#include "hecke/gset.hpp"

namespace hecke {

// ---------------------------------------------------------------------------
// Relative Cayley graph on G/H
// ---------------------------------------------------------------------------

struct GeneratorOrbit {
  GroupElem generator;
  OrbitResult orbit;
};

/// Graph on G/H with xH ~ yH iff x^-1 y in H S H, for S symmetric.
struct RelativeCayleyGraph {
  std::shared_ptr<const HeckePair> pair;
  std::vector<GroupElem> symmetric_generators;
  std::vector<GeneratorOrbit> generator_orbits;
  /// Neighbours of eH: union of the H-orbits of sH, without eH itself.
  std::vector<GroupElem> base_neighbors;
  InvariantGraph<GroupElem> graph;

  GroupElem base() const { return pair->coset_rep(pair->ctx().identity()); }
  std::size_t degree() const noexcept { return base_neighbors.size(); }
};

inline std::vector<GroupElem> symmetrize(const GroupCtx& ctx, std::span<const GroupElem> gens) {
  std::vector<GroupElem> out;
  std::unordered_set<std::string> seen;
  for (const auto& s : gens) {
    ctx.validate(s);
    for (GroupElem x : {s, ctx.inv(s)})
      if (seen.insert(to_string(x)).second) out.push_back(std::move(x));
  }
  return out;
}

/// Refuses with NotLocallyFinite when some generator's H-orbit is not
/// certified finite: exactly the failure of almost normality on S.
inline RelativeCayleyGraph build_relative_cayley(const HeckePair& pair_in, std::span<const GroupElem> gens,
                                                 std::size_t budget = kDefaultBudget) {
  auto pair = std::make_shared<const HeckePair>(pair_in);
  const auto& ctx = pair->ctx();
  auto sym = symmetrize(ctx, gens);
  std::vector<GeneratorOrbit> orbits;
  std::vector<GroupElem> base;
  std::unordered_set<std::string> seen{to_string(pair->coset_rep(ctx.identity()))};
  for (const auto& s : sym) {
    auto orbit = h_orbit_of_coset(*pair, s, budget);
    if (!orbit.finite()) throw NotLocallyFiniteError(to_string(s), orbit.trace);
    for (const auto& u : orbit.members)
      if (seen.insert(to_string(u)).second) base.push_back(u);
    orbits.push_back({s, std::move(orbit)});
  }
  std::sort(base.begin(), base.end(), ElemLess{});
  auto neighbors = [pair, base](const GroupElem& x) {
    std::vector<GroupElem> out;
    out.reserve(base.size());
    for (const auto& u : base) out.push_back(pair->coset_rep(pair->ctx().mul(x, u)));
    return out;
  };
  InvariantGraph<GroupElem> graph(neighbors, [](const GroupElem& p) { return to_string(p); });
  return {pair, std::move(sym), std::move(orbits), std::move(base), std::move(graph)};
}

/// Empirical connectivity: every coset wH with |w| <= radius in the context
/// generators lies within graph distance `radius` of the base. Throws
/// Disconnected naming the first coset that does not; returns the number checked.
inline std::size_t check_connectivity(const RelativeCayleyGraph& g, std::size_t radius,
                                      std::size_t budget = kDefaultBudget) {
  auto cosets = enumerate_cosets(*g.pair, radius, budget);
  for (const auto& c : cosets)
    if (!graph_distance(g.graph, g.base(), c.rep, radius).is_exact())
      throw Error(ErrorCode::Disconnected, to_string(c.rep) + " is not reached within radius " + std::to_string(radius));
  return cosets.size();
}

// ---------------------------------------------------------------------------
// Orbit-of-pairs graph on a G-set
// ---------------------------------------------------------------------------

template <GSet S>
struct OrbitPairsGraph {
  using Point = typename S::point_type;
  std::shared_ptr<const S> gset;
  std::vector<std::pair<Point, Point>> seeds;
  InvariantGraph<Point> graph;
  /// Set when some neighbour list relied on a sampled stabilizer or an
  /// inconclusive transporter search.
  std::shared_ptr<bool> sampled;
};

/// Edge set = G-orbit of the seed pairs under the diagonal action,
/// symmetrised. The neighbours of x are g0 (G_a b) for each oriented seed
/// (a, b) and any g0 with g0 a = x.
template <GSet S>
OrbitPairsGraph<S> orbit_pairs_graph(const S& gset_in, std::vector<std::pair<typename S::point_type, typename S::point_type>> seeds,
                                     std::size_t budget = kDefaultBudget) {
  using Point = typename S::point_type;
  auto gset = std::make_shared<const S>(gset_in);
  for (const auto& [a, b] : seeds)
    if (gset->encode(a) == gset->encode(b)) throw Error(ErrorCode::MalformedInput, "seed pairs must be distinct points");
  auto sampled = std::make_shared<bool>(false);
  std::vector<std::pair<Point, Point>> oriented;
  for (const auto& [a, b] : seeds) {
    oriented.emplace_back(a, b);
    oriented.emplace_back(b, a);
  }
  // Stabilizer orbits G_a b depend only on the seed.
  auto stab_orbits = std::make_shared<std::vector<std::optional<std::vector<Point>>>>(oriented.size());

  auto neighbors = [gset, oriented, stab_orbits, sampled, budget](const Point& x) {
    std::vector<Point> out;
    for (std::size_t i = 0; i < oriented.size(); ++i) {
      const auto& [a, b] = oriented[i];
      std::optional<GroupElem> g0;
      if constexpr (WithTransporter<S>) {
        g0 = gset->transporter(a, x);
      } else {
        g0 = search_transporter(*gset, a, x, budget);
        if (!g0) *sampled = true;
      }
      if (!g0) continue;
      auto& cached = (*stab_orbits)[i];
      if (!cached) {
        StabilizerGens stab = stabilizer_of(*gset, a);
        if (stab.sampled) *sampled = true;
        auto closure = bfs_closure(
            b, stab.generators.size(), [&](const Point& p, std::size_t j) { return gset->act(stab.generators[j], p); },
            [&](const Point& p) { return gset->encode(p); }, budget);
        if (!closure.closed)
          throw NotLocallyFiniteError("(" + gset->encode(a) + "," + gset->encode(b) + ")", closure.trace);
        cached = std::move(closure.members);
      }
      for (const auto& y : *cached) out.push_back(gset->act(*g0, y));
    }
    return out;
  };
  InvariantGraph<Point> graph(neighbors, [gset](const Point& p) { return gset->encode(p); });
  return {gset, std::move(seeds), std::move(graph), sampled};
}

// ---------------------------------------------------------------------------
// Word metric and Hausdorff coset metric
// ---------------------------------------------------------------------------

/// Left-invariant word metric d(a, b) = |a^-1 b| for the symmetric generators
/// of a context, computed by breadth-first search from the identity.
class WordMetric {
 public:
  explicit WordMetric(GroupCtx ctx, std::size_t budget = 1'000'000) : ctx_(std::move(ctx)), budget_(budget) {
    auto id = ctx_.identity();
    lengths_.emplace(to_string(id), 0);
    frontier_.push_back(id);
  }

  const GroupCtx& context() const noexcept { return ctx_; }

  /// Word length of g; throws BudgetExceeded if not found within budget.
  std::uint64_t length(const GroupElem& g) const {
    const std::string k = to_string(g);
    for (;;) {
      auto it = lengths_.find(k);
      if (it != lengths_.end()) return it->second;
      if (frontier_.empty()) throw Error(ErrorCode::Disconnected, to_string(g) + " is not generated");
      grow();
    }
  }

  std::uint64_t operator()(const GroupElem& a, const GroupElem& b) const { return length(ctx_.mul(ctx_.inv(a), b)); }

 private:
  void grow() const {
    std::vector<GroupElem> next;
    for (const auto& g : frontier_)
      for (const auto& s : ctx_.generators()) {
        GroupElem h = ctx_.mul(g, s);
        if (!lengths_.emplace(to_string(h), radius_ + 1).second) continue;
        next.push_back(std::move(h));
        if (lengths_.size() > budget_)
          throw BudgetExceededError("word metric search exceeded budget", {lengths_.size(), {}});
      }
    ++radius_;
    frontier_ = std::move(next);
  }

  GroupCtx ctx_;
  std::size_t budget_;
  mutable std::unordered_map<std::string, std::uint64_t> lengths_;
  mutable std::vector<GroupElem> frontier_;
  mutable std::uint64_t radius_ = 0;
};

/// Hausdorff distance between the cosets g1 H and g2 H for the word metric on
/// G; H must be finite.
class HausdorffMetric {
 public:
  HausdorffMetric(HeckePair pair, std::size_t budget = 1'000'000)
      : pair_(std::make_shared<HeckePair>(std::move(pair))), word_(std::make_shared<WordMetric>(pair_->ctx(), budget)) {
    if (!pair_->subgroup_elements()) throw Error(ErrorCode::SubgroupNotFinite, "Hausdorff metric needs a finite H");
  }

  const HeckePair& pair() const noexcept { return *pair_; }
  const WordMetric& word_metric() const noexcept { return *word_; }

  Distance operator()(const GroupElem& g1, const GroupElem& g2) const {
    const auto& ctx = pair_->ctx();
    const auto& h = *pair_->subgroup_elements();
    std::vector<GroupElem> left, right;
    for (const auto& x : h) {
      left.push_back(ctx.mul(g1, x));
      right.push_back(ctx.mul(g2, x));
    }
    std::vector<std::vector<std::uint64_t>> d(left.size(), std::vector<std::uint64_t>(right.size()));
    for (std::size_t i = 0; i < left.size(); ++i)
      for (std::size_t j = 0; j < right.size(); ++j) d[i][j] = (*word_)(left[i], right[j]);
    std::uint64_t forward = 0, backward = 0;
    for (std::size_t i = 0; i < left.size(); ++i) {
      std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
      for (std::size_t j = 0; j < right.size(); ++j) best = std::min(best, d[i][j]);
      forward = std::max(forward, best);
    }
    for (std::size_t j = 0; j < right.size(); ++j) {
      std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
      for (std::size_t i = 0; i < left.size(); ++i) best = std::min(best, d[i][j]);
      backward = std::max(backward, best);
    }
    return Distance::exact(std::max(forward, backward));
  }

 private:
  std::shared_ptr<HeckePair> pair_;
  std::shared_ptr<WordMetric> word_;
};

inline Distance hausdorff_metric(const HausdorffMetric& metric, const GroupElem& g1, const GroupElem& g2) {
  return metric(g1, g2);
}

// ---------------------------------------------------------------------------
// Pullback along a homomorphism of finite permutation groups
// ---------------------------------------------------------------------------

/// phi: G -> G' given by the images of the primary generators of G, checked
/// to be a homomorphism by breadth-first extension over all of G.
class Homomorphism {
 public:
  Homomorphism(const GroupCtx& source, const GroupCtx& target, std::vector<GroupElem> images,
               std::size_t budget = 1'000'000) {
    if (!source.is_finite_family() || !target.is_finite_family())
      throw Error(ErrorCode::NotFiniteFamily, "homomorphism checks need Perm families");
    auto gens = source.primary_generators();
    if (images.size() != gens.size()) throw Error(ErrorCode::MalformedInput, "one image per source generator");
    std::vector<std::pair<GroupElem, GroupElem>> steps;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      target.validate(images[i]);
      steps.emplace_back(gens[i], images[i]);
      steps.emplace_back(source.inv(gens[i]), target.inv(images[i]));
    }
    std::vector<GroupElem> queue{source.identity()};
    table_.emplace(to_string(queue[0]), target.identity());
    for (std::size_t head = 0; head < queue.size(); ++head) {
      GroupElem g = queue[head];
      GroupElem fg = table_.at(to_string(g));
      for (const auto& [s, fs] : steps) {
        GroupElem h = source.mul(s, g);
        GroupElem fh = target.mul(fs, fg);
        auto [it, fresh] = table_.emplace(to_string(h), fh);
        if (!fresh) {
          if (it->second != fh)
            throw Error(ErrorCode::NotHomomorphism, "two words for " + to_string(h) + " map to " +
                                                         to_string(it->second) + " and " + to_string(fh));
          continue;
        }
        queue.push_back(std::move(h));
        if (queue.size() > budget) throw BudgetExceededError("source group exceeds budget", {queue.size(), {}});
      }
    }
    elements_ = std::move(queue);
  }

  GroupElem operator()(const GroupElem& g) const { return table_.at(to_string(g)); }
  const std::vector<GroupElem>& source_elements() const noexcept { return elements_; }

 private:
  std::unordered_map<std::string, GroupElem> table_;
  std::vector<GroupElem> elements_;
};

/// d(xH, yH) = d'(phi(x)H', phi(y)H'), after checking phi(H) in H' and the
/// bijectivity conditions G' = phi(G) H' and H = phi^-1(H').
template <class TargetMetric>
class PullbackMetric {
 public:
  PullbackMetric(Homomorphism phi, const HeckePair& source, const HeckePair& target, TargetMetric metric,
                 std::size_t budget = 1'000'000)
      : phi_(std::move(phi)), metric_(std::move(metric)) {
    std::vector<std::string> failed;
    // G' = phi(G) H'
    std::unordered_set<std::string> hit;
    for (const auto& g : phi_.source_elements()) hit.insert(to_string(target.coset_rep(phi_(g))));
    std::unordered_set<std::string> all;
    for (const auto& g : enumerate_group(target.ctx(), budget)) all.insert(to_string(target.coset_rep(g)));
    if (hit.size() != all.size()) failed.push_back("G' = phi(G) H'");
    // H = phi^-1(H'), which includes phi(H) in H'
    bool preimage_ok = std::all_of(phi_.source_elements().begin(), phi_.source_elements().end(),
                                   [&](const GroupElem& g) { return source.contains(g) == target.contains(phi_(g)); });
    if (!preimage_ok) failed.push_back("H = phi^-1(H')");
    if (!failed.empty()) throw NotBijectiveOnCosetsError(std::move(failed));
  }

  Distance operator()(const GroupElem& x, const GroupElem& y) const { return metric_(phi_(x), phi_(y)); }
  const Homomorphism& homomorphism() const noexcept { return phi_; }

 private:
  Homomorphism phi_;
  TargetMetric metric_;
};

template <class TargetMetric>
PullbackMetric<TargetMetric> pullback_metric(Homomorphism phi, const HeckePair& source, const HeckePair& target,
                                             TargetMetric metric) {
  return PullbackMetric<TargetMetric>(std::move(phi), source, target, std::move(metric));
}

}  // namespace hecke

#endif  // HECKE_METRIC_HPP
