#ifndef HECKE_COSET_HPP
#define HECKE_COSET_HPP

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "hecke/group.hpp"
#include "hecke/hnf.hpp"
#include "hecke/orbit.hpp"

namespace hecke {

// ---------------------------------------------------------------------------
// Subgroup specifications
// ---------------------------------------------------------------------------

/// Subgroup of a Perm(n) context given by generators.
struct PermSubgroup {
  std::vector<GroupElem> generators;
};

/// SL_n(Z) inside SL_n(Q).
struct IntegerMatrices {};

/// {(1, k) : k in Z} inside AffineQ.
struct IntegerTranslations {};

/// {(a, 0) : a in Q+} inside AffineQ. Not finitely generated: orbit
/// enumeration uses the sample schedule {p/q : 1 <= p, q <= sample_bound}.
struct PositiveDilations {
  std::int64_t sample_bound = 4;
};

/// <x> inside BS(m, n).
struct CyclicX {};

using SubgroupSpec = std::variant<PermSubgroup, IntegerMatrices, IntegerTranslations, PositiveDilations, CyclicX>;

inline std::string subgroup_name(const SubgroupSpec& s) {
  return std::visit(
      [](const auto& v) -> std::string {
        using S = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<S, PermSubgroup>) return "perm_subgroup";
        else if constexpr (std::is_same_v<S, IntegerMatrices>) return "integer_matrices";
        else if constexpr (std::is_same_v<S, IntegerTranslations>) return "integer_translations";
        else if constexpr (std::is_same_v<S, PositiveDilations>) return "positive_dilations";
        else return "cyclic_x";
      },
      s);
}

struct Coset {
  GroupElem rep;  // canonical: rep == pair.coset_rep(rep)
  bool operator==(const Coset&) const = default;
};

struct DoubleCoset {
  GroupElem rep;  // cmp-minimal coset representative over the H-orbit
  std::size_t coset_count = 0;
};

enum class OrbitStatus { Finite, Sampled, BudgetExceeded };

inline const char* orbit_status_name(OrbitStatus s) {
  switch (s) {
    case OrbitStatus::Finite: return "FINITE";
    case OrbitStatus::Sampled: return "SAMPLED";
    case OrbitStatus::BudgetExceeded: return "BUDGET_EXCEEDED";
  }
  return "?";
}

struct OrbitResult {
  OrbitStatus status = OrbitStatus::BudgetExceeded;
  std::vector<GroupElem> members;  // canonical coset reps, discovery order
  DivergenceTrace trace;

  bool finite() const noexcept { return status == OrbitStatus::Finite; }
};

// ---------------------------------------------------------------------------
// HeckePair
// ---------------------------------------------------------------------------

/// A group G (as a GroupCtx) with a subgroup H: membership oracle and
/// canonical left-coset representatives.
class HeckePair {
 public:
  HeckePair(GroupCtx ctx, SubgroupSpec sub, std::size_t enumeration_budget = 1'000'000)
      : ctx_(std::move(ctx)), sub_(std::move(sub)) {
    auto require = [&](bool ok, const char* what) {
      if (!ok) throw Error(ErrorCode::FamilyMismatch, std::string(what) + " does not fit " + family_name(ctx_.family()));
    };
    std::visit(
        [&](auto& s) {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, PermSubgroup>) {
            require(std::holds_alternative<PermFamily>(ctx_.family()), "perm_subgroup");
            std::vector<GroupElem> sym;
            for (auto& g : s.generators) {
              ctx_.validate(g);
              sym.push_back(g);
              sym.push_back(ctx_.inv(g));
            }
            auto elems = enumerate_subgroup(ctx_, sym, enumeration_budget);
            std::sort(elems.begin(), elems.end(), ElemLess{});
            auto fin = std::make_shared<FiniteSubgroup>();
            for (const auto& e : elems) fin->keys.insert(to_string(e));
            fin->elements = std::move(elems);
            finite_ = std::move(fin);
            for (const auto& g : sym)
              if (!ctx_.is_identity(g) &&
                  std::none_of(subgroup_gens_.begin(), subgroup_gens_.end(), [&](const GroupElem& x) { return x == g; }))
                subgroup_gens_.push_back(g);
          } else if constexpr (std::is_same_v<S, IntegerMatrices>) {
            const auto* f = std::get_if<MatrixFamily>(&ctx_.family());
            require(f && f->special, "integer_matrices");
            // Elementary transvections generate SL_n(Z).
            for (std::size_t i = 0; i < f->dim; ++i)
              for (std::size_t j = 0; j < f->dim; ++j) {
                if (i == j) continue;
                for (int sgn : {1, -1}) {
                  auto e = detail::matrix_identity(f->dim);
                  e.at(i, j) = sgn;
                  subgroup_gens_.push_back(e);
                }
              }
          } else if constexpr (std::is_same_v<S, IntegerTranslations>) {
            require(std::holds_alternative<AffineFamily>(ctx_.family()), "integer_translations");
            subgroup_gens_ = {Affine{Rat(1), Rat(1)}, Affine{Rat(1), Rat(-1)}};
          } else if constexpr (std::is_same_v<S, PositiveDilations>) {
            require(std::holds_alternative<AffineFamily>(ctx_.family()), "positive_dilations");
            if (s.sample_bound < 2) throw Error(ErrorCode::MalformedInput, "sample_bound must be >= 2");
            for (std::int64_t p = 1; p <= s.sample_bound; ++p)
              for (std::int64_t q = 1; q <= s.sample_bound; ++q)
                if (p != q && std::gcd(p, q) == 1) subgroup_gens_.push_back(Affine{Rat(p, q), Rat(0)});
            sampled_ = true;
          } else {
            require(std::holds_alternative<BSFamily>(ctx_.family()), "cyclic_x");
            subgroup_gens_ = {ctx_.parse("x"), ctx_.parse("x^-1")};
          }
        },
        sub_);
  }

  const GroupCtx& ctx() const noexcept { return ctx_; }
  const SubgroupSpec& subgroup() const noexcept { return sub_; }

  /// Symmetric generators of H used for orbit enumeration. For
  /// PositiveDilations this is the sample schedule (see generators_sampled()).
  const std::vector<GroupElem>& subgroup_generators() const noexcept { return subgroup_gens_; }
  bool generators_sampled() const noexcept { return sampled_; }

  /// All elements of H, when H is a finite permutation subgroup.
  const std::vector<GroupElem>* subgroup_elements() const noexcept { return finite_ ? &finite_->elements : nullptr; }

  bool contains(const GroupElem& g) const {
    ctx_.validate(g);
    return std::visit(
        [&](const auto& s) -> bool {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, PermSubgroup>) {
            return finite_->keys.count(to_string(g)) > 0;
          } else if constexpr (std::is_same_v<S, IntegerMatrices>) {
            const auto& m = std::get<RatMatrix>(g);
            return std::all_of(m.entries.begin(), m.entries.end(), [](const Rat& q) { return is_integral(q); }) &&
                   detail::determinant(m) == 1;
          } else if constexpr (std::is_same_v<S, IntegerTranslations>) {
            const auto& a = std::get<Affine>(g);
            return a.a == 1 && is_integral(a.b);
          } else if constexpr (std::is_same_v<S, PositiveDilations>) {
            return std::get<Affine>(g).b == 0;
          } else {
            return std::get<BSWord>(g).t_signs.empty();
          }
        },
        sub_);
  }

  /// Canonical representative r of gH: r^-1 g in H, and coset_rep(g1) ==
  /// coset_rep(g2) exactly when g1^-1 g2 in H.
  GroupElem coset_rep(const GroupElem& g) const {
    ctx_.validate(g);
    return std::visit(
        [&](const auto& s) -> GroupElem {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, PermSubgroup>) {
            GroupElem best = g;
            std::string best_key = to_string(g);
            for (const auto& h : finite_->elements) {
              GroupElem gh = ctx_.mul(g, h);
              std::string k = to_string(gh);
              if (k < best_key) {
                best_key = std::move(k);
                best = std::move(gh);
              }
            }
            return best;
          } else if constexpr (std::is_same_v<S, IntegerMatrices>) {
            return sl_integer_coset_rep(std::get<RatMatrix>(g));
          } else if constexpr (std::is_same_v<S, IntegerTranslations>) {
            const auto& a = std::get<Affine>(g);
            return Affine{a.a, rat_mod(a.b, a.a)};
          } else if constexpr (std::is_same_v<S, PositiveDilations>) {
            return Affine{Rat(1), std::get<Affine>(g).b};
          } else {
            BSWord w = std::get<BSWord>(g);
            w.exponents.back() = 0;
            return w;
          }
        },
        sub_);
  }

 private:
  struct FiniteSubgroup {
    std::vector<GroupElem> elements;
    std::unordered_set<std::string> keys;
  };

  GroupCtx ctx_;
  SubgroupSpec sub_;
  std::vector<GroupElem> subgroup_gens_;
  bool sampled_ = false;
  std::shared_ptr<const FiniteSubgroup> finite_;
};

inline constexpr std::size_t kDefaultBudget = 10'000;

// ---------------------------------------------------------------------------
// Orbits and double cosets
// ---------------------------------------------------------------------------

/// H-orbit of the coset gH (i.e. the left cosets contained in HgH).
/// Finite is a certificate: the list is closed under every generator of H.
inline OrbitResult h_orbit_of_coset(const HeckePair& pair, const GroupElem& g, std::size_t budget = kDefaultBudget) {
  if (budget < 1) throw Error(ErrorCode::MalformedInput, "budget must be >= 1");
  OrbitResult out;
  GroupElem start = pair.coset_rep(g);
  if (pair.ctx().is_identity(start)) {
    // H fixes eH.
    out.status = OrbitStatus::Finite;
    out.members = {start};
    out.trace = {1, {1}};
    return out;
  }
  const auto& gens = pair.subgroup_generators();
  if (gens.empty()) throw Error(ErrorCode::MissingSubgroupGenerators, "subgroup has no generators");
  auto closure = bfs_closure(
      std::move(start), gens.size(),
      [&](const GroupElem& p, std::size_t i) { return pair.coset_rep(pair.ctx().mul(gens[i], p)); },
      [](const GroupElem& p) { return to_string(p); }, budget);
  out.members = std::move(closure.members);
  out.trace = std::move(closure.trace);
  if (!closure.closed) out.status = OrbitStatus::BudgetExceeded;
  else out.status = pair.generators_sampled() ? OrbitStatus::Sampled : OrbitStatus::Finite;
  return out;
}

/// Re-checks that a claimed orbit list is closed under the subgroup generators.
inline bool orbit_is_closed(const HeckePair& pair, const std::vector<GroupElem>& members) {
  std::unordered_set<std::string> keys;
  for (const auto& m : members) keys.insert(to_string(m));
  if (keys.size() != members.size()) return false;
  for (const auto& m : members) {
    if (pair.coset_rep(m) != m) return false;
    for (const auto& h : pair.subgroup_generators())
      if (!keys.count(to_string(pair.coset_rep(pair.ctx().mul(h, m))))) return false;
  }
  return true;
}

inline std::string orbit_closure_hash(const std::vector<GroupElem>& members) {
  std::vector<std::string> keys;
  for (const auto& m : members) keys.push_back(to_string(m));
  std::sort(keys.begin(), keys.end());
  std::string joined;
  for (const auto& k : keys) joined += k + "\n";
  return stable_hash(joined);
}

inline DoubleCoset double_coset_rep(const HeckePair& pair, const GroupElem& g, std::size_t budget = kDefaultBudget) {
  auto orbit = h_orbit_of_coset(pair, g, budget);
  if (!orbit.finite())
    throw OrbitNotFiniteError("H-orbit of " + to_string(g) + " is not certified finite (" +
                                  orbit_status_name(orbit.status) + ")",
                              orbit.trace);
  auto best = std::min_element(orbit.members.begin(), orbit.members.end(), ElemLess{});
  return {*best, orbit.members.size()};
}

/// |HgH / H|.
inline std::size_t count_cosets_in_double_coset(const HeckePair& pair, const GroupElem& g,
                                                std::size_t budget = kDefaultBudget) {
  return double_coset_rep(pair, g, budget).coset_count;
}

/// Cosets wH for all words w of length <= radius in the symmetric generators
/// of the context, in breadth-first order.
inline std::vector<Coset> enumerate_cosets(const HeckePair& pair, std::size_t radius,
                                           std::size_t budget = kDefaultBudget) {
  const auto& ctx = pair.ctx();
  std::vector<Coset> out{{pair.coset_rep(ctx.identity())}};
  std::unordered_set<std::string> seen{to_string(out[0].rep)};
  DivergenceTrace trace{1, {1}};
  std::size_t begin = 0;
  for (std::size_t r = 0; r < radius; ++r) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i)
      for (const auto& s : ctx.generators()) {
        GroupElem next = pair.coset_rep(ctx.mul(s, out[i].rep));
        if (!seen.insert(to_string(next)).second) continue;
        out.push_back({std::move(next)});
        if (out.size() > budget) {
          trace.visited = out.size();
          throw BudgetExceededError("coset enumeration exceeded budget", trace);
        }
      }
    trace.frontier_sizes.push_back(out.size() - end);
    if (out.size() == end) break;
    begin = end;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normal core and quotient reduction (finite permutation groups)
// ---------------------------------------------------------------------------

struct NormalCore {
  std::vector<GroupElem> generators;
  std::vector<GroupElem> elements;  // sorted by cmp
};

namespace detail {

inline std::vector<GroupElem> greedy_generators(const GroupCtx& ctx, const std::vector<GroupElem>& sorted_elems) {
  std::vector<GroupElem> gens;
  std::unordered_set<std::string> span{to_string(ctx.identity())};
  for (const auto& e : sorted_elems) {
    if (span.count(to_string(e))) continue;
    gens.push_back(e);
    span.clear();
    for (const auto& x : enumerate_subgroup(ctx, gens, sorted_elems.size() + 1)) span.insert(to_string(x));
  }
  return gens;
}

}  // namespace detail

/// L = intersection of all conjugates gHg^-1: the largest normal subgroup of G
/// contained in H.
inline NormalCore normal_core(const HeckePair& pair, std::size_t budget = 1'000'000) {
  const auto& ctx = pair.ctx();
  if (!ctx.is_finite_family() || !pair.subgroup_elements())
    throw Error(ErrorCode::NotFiniteFamily, "normal core needs a finite permutation pair");
  auto group = enumerate_group(ctx, budget);
  NormalCore core;
  for (const auto& h : *pair.subgroup_elements()) {
    bool in_all = std::all_of(group.begin(), group.end(), [&](const GroupElem& g) {
      return pair.contains(ctx.mul(ctx.inv(g), ctx.mul(h, g)));
    });
    if (in_all) core.elements.push_back(h);
  }
  std::sort(core.elements.begin(), core.elements.end(), ElemLess{});
  core.generators = detail::greedy_generators(ctx, core.elements);
  return core;
}

/// The pair (G/L, H/L) realised as a permutation group acting on the left
/// cosets of L, together with the induced map G -> G/L.
class QuotientPair {
 public:
  QuotientPair(const HeckePair& original, const std::vector<GroupElem>& core_generators,
               std::size_t budget = 1'000'000)
      : original_(original) {
    const auto& ctx = original.ctx();
    if (!ctx.is_finite_family() || !original.subgroup_elements())
      throw Error(ErrorCode::NotFiniteFamily, "quotient reduction needs a finite permutation pair");
    auto core = enumerate_subgroup(ctx, core_generators, budget);
    for (const auto& l : core)
      if (!original.contains(l)) throw Error(ErrorCode::NotNormal, to_string(l) + " is not in H");
    std::unordered_set<std::string> core_keys;
    for (const auto& l : core) core_keys.insert(to_string(l));
    for (const auto& s : ctx.generators())
      for (const auto& l : core_generators)
        if (!core_keys.count(to_string(ctx.mul(s, ctx.mul(l, ctx.inv(s))))))
          throw Error(ErrorCode::NotNormal, "core is not normalised by " + to_string(s));

    if (core.size() == 1) {
      trivial_ = true;
      quotient_ = std::make_shared<HeckePair>(original);
      return;
    }
    core_ = std::move(core);
    // Left cosets of L.
    for (const auto& g : enumerate_group(ctx, budget)) {
      GroupElem rep = l_rep(g);
      std::string key = to_string(rep);
      if (index_.emplace(key, points_.size()).second) points_.push_back(rep);
    }
    std::vector<GroupElem> gens;
    for (const auto& g : ctx.primary_generators()) gens.push_back(image(g));
    GroupCtx qctx(PermFamily{points_.size()}, gens);
    std::vector<GroupElem> hgens;
    for (const auto& h : original.subgroup_generators()) hgens.push_back(image(h));
    quotient_ = std::make_shared<HeckePair>(std::move(qctx), PermSubgroup{hgens}, budget);
  }

  const HeckePair& pair() const noexcept { return *quotient_; }
  bool is_identity_reduction() const noexcept { return trivial_; }

  /// Image of g in G/L.
  GroupElem image(const GroupElem& g) const {
    if (trivial_) return g;
    Perm p;
    p.images.resize(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i)
      p.images[i] = static_cast<std::uint32_t>(index_.at(to_string(l_rep(original_.ctx().mul(g, points_[i])))));
    return p;
  }

  /// The canonical bijection G/H -> (G/L)/(H/L).
  GroupElem map_coset(const GroupElem& coset_representative) const {
    return quotient_->coset_rep(image(coset_representative));
  }

 private:
  GroupElem l_rep(const GroupElem& g) const {
    GroupElem best = g;
    std::string best_key = to_string(g);
    for (const auto& l : core_) {
      GroupElem gl = original_.ctx().mul(g, l);
      std::string k = to_string(gl);
      if (k < best_key) {
        best_key = std::move(k);
        best = std::move(gl);
      }
    }
    return best;
  }

  HeckePair original_;
  bool trivial_ = false;
  std::vector<GroupElem> core_;
  std::vector<GroupElem> points_;
  std::unordered_map<std::string, std::size_t> index_;
  std::shared_ptr<const HeckePair> quotient_;
};

inline QuotientPair quotient_pair(const HeckePair& pair, const std::vector<GroupElem>& core_generators) {
  return QuotientPair(pair, core_generators);
}

}  // namespace hecke

#endif  // HECKE_COSET_HPP
