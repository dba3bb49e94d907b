#ifndef HECKE_ORBIT_HPP
#define HECKE_ORBIT_HPP

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "hecke/error.hpp"

namespace hecke {

/// Verdict status shared by the probes and the verifier.
enum class Status { Pass, Fail, Unknown, Sampled };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "PASS";
    case Status::Fail: return "FAIL";
    case Status::Unknown: return "UNKNOWN";
    case Status::Sampled: return "SAMPLED";
  }
  return "?";
}

template <class Point>
struct Closure {
  bool closed = false;
  std::vector<Point> members;  // breadth-first discovery order
  DivergenceTrace trace;
};

/// Breadth-first closure of {start} under `step(point, i)` for i < n_steps.
/// Stops (closed == false) as soon as more than `budget` points are known.
template <class Point, class Step, class Key>
Closure<Point> bfs_closure(Point start, std::size_t n_steps, Step&& step, Key&& key, std::size_t budget) {
  Closure<Point> out;
  std::unordered_set<std::string> seen{key(start)};
  out.members.push_back(std::move(start));
  out.trace.frontier_sizes.push_back(1);
  std::size_t layer_begin = 0;
  while (layer_begin < out.members.size()) {
    const std::size_t layer_end = out.members.size();
    for (std::size_t i = layer_begin; i < layer_end; ++i) {
      for (std::size_t s = 0; s < n_steps; ++s) {
        Point next = step(out.members[i], s);
        if (!seen.insert(key(next)).second) continue;
        out.members.push_back(std::move(next));
        if (out.members.size() > budget) {
          // the cut layer is partial; only `visited` counts it
          out.trace.visited = out.members.size();
          return out;
        }
      }
    }
    if (out.members.size() > layer_end) out.trace.frontier_sizes.push_back(out.members.size() - layer_end);
    layer_begin = layer_end;
  }
  out.closed = true;
  out.trace.visited = out.members.size();
  return out;
}

/// FNV-1a, 64 bit, as 16 lowercase hex digits. Stable across platforms.
inline std::string stable_hash(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace hecke

#endif  // HECKE_ORBIT_HPP
