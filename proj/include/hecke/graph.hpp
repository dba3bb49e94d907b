#ifndef HECKE_GRAPH_HPP
#define HECKE_GRAPH_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hecke/error.hpp"

namespace hecke {

/// Result of a distance query. Unknown is the only honest negative answer in
/// an infinite graph; Unreachable is returned only when a finite component was
/// exhausted.
struct Distance {
  enum class Kind { Exact, Unreachable, Unknown };
  Kind kind = Kind::Exact;
  std::uint64_t value = 0;  // distance when Exact, searched radius when Unknown

  static Distance exact(std::uint64_t d) { return {Kind::Exact, d}; }
  static Distance unreachable() { return {Kind::Unreachable, 0}; }
  static Distance unknown(std::uint64_t radius) { return {Kind::Unknown, radius}; }

  bool is_exact() const noexcept { return kind == Kind::Exact; }
  bool operator==(const Distance&) const = default;
};

inline std::string to_string(const Distance& d) {
  switch (d.kind) {
    case Distance::Kind::Exact: return std::to_string(d.value);
    case Distance::Kind::Unreachable: return "unreachable";
    case Distance::Kind::Unknown: return "unknown(" + std::to_string(d.value) + ")";
  }
  return "?";
}

template <class Point>
struct Ball {
  Point center;
  std::size_t radius = 0;
  std::vector<Point> members;           // sorted by (layer, key)
  std::vector<std::size_t> layer_sizes; // layer_sizes[r] = |sphere of radius r|
};

/// Lazily expanded, locally finite graph. Neighbour lists are memoised by
/// canonical key; the memo is the only mutable state.
template <class Point>
class InvariantGraph {
 public:
  using NeighborFn = std::function<std::vector<Point>(const Point&)>;
  using KeyFn = std::function<std::string(const Point&)>;

  InvariantGraph(NeighborFn neighbors, KeyFn key) : neighbors_(std::move(neighbors)), key_(std::move(key)) {}

  std::string key(const Point& p) const { return key_(p); }

  const std::vector<Point>& neighbors(const Point& p) const {
    std::string k = key_(p);
    auto it = memo_.find(k);
    if (it != memo_.end()) return it->second;
    auto list = neighbors_(p);
    // simple graph: drop loops and duplicates
    std::vector<Point> dedup;
    std::unordered_map<std::string, bool> seen{{k, true}};
    for (auto& q : list)
      if (seen.emplace(key_(q), true).second) dedup.push_back(std::move(q));
    return memo_.emplace(std::move(k), std::move(dedup)).first->second;
  }

  std::size_t degree(const Point& p) const { return neighbors(p).size(); }
  std::size_t expanded_count() const noexcept { return memo_.size(); }

 private:
  NeighborFn neighbors_;
  KeyFn key_;
  mutable std::unordered_map<std::string, std::vector<Point>> memo_;
};

/// Geodesic distance by bidirectional breadth-first search.
template <class Point>
Distance graph_distance(const InvariantGraph<Point>& graph, const Point& a, const Point& b, std::uint64_t max_radius,
                        std::size_t node_budget = 1'000'000) {
  const std::string ka = graph.key(a), kb = graph.key(b);
  if (ka == kb) return Distance::exact(0);

  struct Side {
    std::unordered_map<std::string, std::uint64_t> dist;
    std::vector<Point> frontier;
    std::uint64_t radius = 0;
  };
  Side sa{{{ka, 0}}, {a}, 0};
  Side sb{{{kb, 0}}, {b}, 0};

  while (sa.radius + sb.radius < max_radius) {
    Side& grow = sa.frontier.size() <= sb.frontier.size() ? sa : sb;
    Side& other = &grow == &sa ? sb : sa;
    std::vector<Point> next;
    bool met = false;
    for (const auto& p : grow.frontier)
      for (const auto& q : graph.neighbors(p)) {
        std::string k = graph.key(q);
        if (!grow.dist.emplace(k, grow.radius + 1).second) continue;
        if (other.dist.count(k)) met = true;
        next.push_back(q);
      }
    ++grow.radius;
    if (met) return Distance::exact(sa.radius + sb.radius);
    if (next.empty()) return Distance::unreachable();
    grow.frontier = std::move(next);
    if (sa.dist.size() + sb.dist.size() > node_budget) return Distance::unknown(sa.radius + sb.radius);
  }
  return Distance::unknown(max_radius);
}

/// Exact closed ball; throws BudgetExceeded when it holds more than `budget` points.
template <class Point>
Ball<Point> ball(const InvariantGraph<Point>& graph, const Point& center, std::size_t radius,
                 std::size_t budget = 10'000) {
  Ball<Point> out{center, radius, {center}, {1}};
  std::unordered_map<std::string, std::size_t> seen{{graph.key(center), 0}};
  std::vector<Point> frontier{center};
  for (std::size_t r = 1; r <= radius && !frontier.empty(); ++r) {
    std::vector<std::pair<std::string, Point>> next;
    for (const auto& p : frontier)
      for (const auto& q : graph.neighbors(p)) {
        std::string k = graph.key(q);
        if (!seen.emplace(k, r).second) continue;
        next.emplace_back(std::move(k), q);
        if (seen.size() > budget)
          throw BudgetExceededError("ball of radius " + std::to_string(radius) + " exceeds budget",
                                    {seen.size(), out.layer_sizes});
      }
    std::sort(next.begin(), next.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    frontier.clear();
    for (auto& [k, q] : next) {
      out.members.push_back(q);
      frontier.push_back(std::move(q));
    }
    out.layer_sizes.push_back(next.size());
  }
  while (out.layer_sizes.size() <= radius) out.layer_sizes.push_back(0);
  return out;
}

}  // namespace hecke

#endif  // HECKE_GRAPH_HPP
