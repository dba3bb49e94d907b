#ifndef HECKE_CLOSURE_HPP
#define HECKE_CLOSURE_HPP

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hecke/gset.hpp"
#include "hecke/orbit.hpp"

namespace hecke {

// ---------------------------------------------------------------------------
// Finite X: the closure of the image is the generated permutation group
// ---------------------------------------------------------------------------

struct FiniteAction {
  std::size_t points = 0;
  /// generators[i][x] is the image of point x under generator i.
  std::vector<std::vector<std::size_t>> generators;
};

struct GroupSummary {
  std::size_t order = 0;
  std::vector<std::size_t> stabilizer_orders;    // indexed by point
  std::vector<std::vector<std::size_t>> orbits;  // sorted partition of the points
  std::vector<GroupElem> elements;
};

inline GroupSummary closure_finite(const FiniteAction& action, std::size_t budget = 1'000'000) {
  std::vector<GroupElem> gens;
  for (const auto& img : action.generators) {
    if (img.size() != action.points) throw Error(ErrorCode::NotBijectiveGenerator, "generator image has wrong size");
    std::vector<bool> hit(action.points, false);
    Perm p;
    for (auto v : img) {
      if (v >= action.points || hit[v])
        throw Error(ErrorCode::NotBijectiveGenerator, "generator image is not a bijection");
      hit[v] = true;
      p.images.push_back(static_cast<std::uint32_t>(v));
    }
    gens.push_back(std::move(p));
  }
  GroupCtx ctx(PermFamily{action.points}, gens);
  GroupSummary out;
  out.elements = enumerate_group(ctx, budget);
  out.order = out.elements.size();
  out.stabilizer_orders.assign(action.points, 0);
  for (const auto& g : out.elements) {
    const auto& p = std::get<Perm>(g);
    for (std::size_t x = 0; x < action.points; ++x)
      if (p.images[x] == x) ++out.stabilizer_orders[x];
  }
  std::vector<bool> done(action.points, false);
  for (std::size_t x = 0; x < action.points; ++x) {
    if (done[x]) continue;
    std::set<std::size_t> orbit;
    for (const auto& g : out.elements) orbit.insert(std::get<Perm>(g).images[x]);
    for (auto y : orbit) done[y] = true;
    out.orbits.emplace_back(orbit.begin(), orbit.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Infinite X: restrictions to finite windows
// ---------------------------------------------------------------------------

struct ClosureLevel {
  std::size_t window_size = 0;
  bool complete = false;  // false: BudgetExceeded, sizes are lower bounds
  std::size_t image_size = 0;
  std::vector<std::size_t> stabilizer_image_sizes;  // per window point
  bool compatible_with_previous = true;             // restriction onto the previous level is onto
  std::string hash;                                 // of the sorted restriction set
  DivergenceTrace trace;
};

struct ClosureLevels {
  std::vector<ClosureLevel> levels;

  bool sizes_nondecreasing() const {
    for (std::size_t i = 1; i < levels.size(); ++i)
      if (levels[i].complete && levels[i - 1].complete && levels[i].image_size < levels[i - 1].image_size)
        return false;
    return true;
  }
};

/// For each window W, enumerates {g|_W : g in G} as the diagonal orbit of the
/// tuple W, and checks that consecutive levels restrict onto each other.
template <GSet S>
ClosureLevels truncated_closure_levels(const S& gset, const std::vector<std::vector<typename S::point_type>>& windows,
                                       std::size_t budget = kDefaultBudget) {
  using Point = typename S::point_type;
  using Tuple = std::vector<Point>;
  const auto& gens = gset.context().generators();
  auto tuple_key = [&](const Tuple& t) {
    std::string k;
    for (const auto& p : t) k += gset.encode(p) + ";";
    return k;
  };

  ClosureLevels out;
  std::vector<std::string> prev_keys;  // window keys of the previous level
  std::set<std::string> prev_images;
  bool prev_complete = false;
  for (const auto& window : windows) {
    std::vector<std::string> keys;
    for (const auto& p : window) keys.push_back(gset.encode(p));
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < keys.size(); ++i) pos.emplace(keys[i], i);
    for (const auto& k : prev_keys)
      if (!pos.count(k)) throw Error(ErrorCode::MalformedInput, "windows must be nested");

    auto closure = bfs_closure(
        Tuple(window), gens.size(),
        [&](const Tuple& t, std::size_t i) {
          Tuple next;
          next.reserve(t.size());
          for (const auto& p : t) next.push_back(gset.act(gens[i], p));
          return next;
        },
        tuple_key, budget);

    ClosureLevel level;
    level.window_size = window.size();
    level.complete = closure.closed;
    level.image_size = closure.members.size();
    level.trace = closure.trace;
    level.stabilizer_image_sizes.assign(window.size(), 0);
    std::set<std::string> images;
    for (const auto& t : closure.members) {
      images.insert(tuple_key(t));
      for (std::size_t i = 0; i < t.size(); ++i)
        if (gset.encode(t[i]) == keys[i]) ++level.stabilizer_image_sizes[i];
    }
    std::string joined;
    for (const auto& k : images) joined += k + "\n";
    level.hash = stable_hash(joined);

    if (!prev_keys.empty() && level.complete && prev_complete) {
      std::set<std::string> projected;
      for (const auto& t : closure.members) {
        std::string k;
        for (const auto& pk : prev_keys) k += gset.encode(t[pos.at(pk)]) + ";";
        projected.insert(std::move(k));
      }
      level.compatible_with_previous = projected == prev_images;
    }
    prev_keys = std::move(keys);
    prev_images = std::move(images);
    prev_complete = level.complete;
    out.levels.push_back(std::move(level));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stabilizer-orbit criterion
// ---------------------------------------------------------------------------

struct PointOrbit {
  std::string point;
  bool closed = false;
  std::vector<std::string> members;
  DivergenceTrace trace;
};

struct StabilizerProbe {
  Status status = Status::Unknown;  // Pass, Unknown or Sampled
  bool stabilizer_sampled = false;
  std::size_t stabilizer_generators = 0;
  std::vector<PointOrbit> orbits;
};

/// G_x-orbits of each y. Pass when every orbit closes with exact stabilizer
/// generators; Unknown when some orbit outgrows the budget.
template <GSet S>
StabilizerProbe stabilizer_orbit_probe(const S& gset, const typename S::point_type& x,
                                       const std::vector<typename S::point_type>& ys,
                                       std::size_t budget = kDefaultBudget) {
  using Point = typename S::point_type;
  StabilizerGens stab = stabilizer_of(gset, x);
  StabilizerProbe out;
  out.stabilizer_sampled = stab.sampled;
  out.stabilizer_generators = stab.generators.size();
  bool all_closed = true;
  for (const auto& y : ys) {
    auto closure = bfs_closure(
        y, stab.generators.size(), [&](const Point& p, std::size_t i) { return gset.act(stab.generators[i], p); },
        [&](const Point& p) { return gset.encode(p); }, budget);
    PointOrbit orbit{gset.encode(y), closure.closed, {}, closure.trace};
    for (const auto& p : closure.members) orbit.members.push_back(gset.encode(p));
    all_closed = all_closed && closure.closed;
    out.orbits.push_back(std::move(orbit));
  }
  if (!all_closed) out.status = Status::Unknown;
  else out.status = stab.sampled ? Status::Sampled : Status::Pass;
  return out;
}

}  // namespace hecke

#endif  // HECKE_CLOSURE_HPP
