#ifndef HECKE_GSET_HPP
#define HECKE_GSET_HPP

#include <concepts>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "hecke/coset.hpp"
#include "hecke/group.hpp"

namespace hecke {

/// Generators of a point stabilizer. `sampled` marks a generating set that is
/// known to be only part of the stabilizer.
struct StabilizerGens {
  std::vector<GroupElem> generators;
  bool sampled = false;
};

/// A countable set with a left action of a GroupCtx, and a canonical text
/// encoding of its points.
template <class S>
concept GSet = requires(const S& s, const GroupElem& g, const typename S::point_type& p, std::string_view text) {
  { s.context() } -> std::convertible_to<const GroupCtx&>;
  { s.act(g, p) } -> std::same_as<typename S::point_type>;
  { s.encode(p) } -> std::same_as<std::string>;
  { s.decode(text) } -> std::same_as<typename S::point_type>;
};

/// Optional hook: an element mapping `from` to `to`, or nullopt if none exists.
template <class S>
concept WithTransporter = GSet<S> && requires(const S& s, const typename S::point_type& p) {
  { s.transporter(p, p) } -> std::same_as<std::optional<GroupElem>>;
};

/// Optional hook: generators of the stabilizer of a point.
template <class S>
concept WithStabilizer = GSet<S> && requires(const S& s, const typename S::point_type& p) {
  { s.stabilizer_generators(p) } -> std::same_as<std::optional<StabilizerGens>>;
};

// ---------------------------------------------------------------------------

/// The infinite dihedral group acting on Z, realised inside GL_2(Q) by the
/// matrices [[a, b], [0, 1]] (x -> a x + b) generated by x -> x + 1 and x -> -x.
class DihedralOnIntegers {
 public:
  using point_type = BigInt;

  DihedralOnIntegers()
      : ctx_(MatrixFamily{2, false}, {affine_matrix(1, 1), affine_matrix(-1, 0)}) {}

  static GroupElem affine_matrix(const BigInt& a, const BigInt& b) {
    RatMatrix m{2, {Rat(a), Rat(b), Rat(0), Rat(1)}};
    return m;
  }

  const GroupCtx& context() const noexcept { return ctx_; }

  BigInt act(const GroupElem& g, const BigInt& x) const {
    const auto* m = std::get_if<RatMatrix>(&g);
    if (!m || m->dim != 2 || m->at(1, 0) != 0 || m->at(1, 1) != 1)
      throw Error(ErrorCode::OutOfDomain, to_string(g) + " is not an affine map of Z");
    Rat y = m->at(0, 0) * Rat(x) + m->at(0, 1);
    if (!is_integral(y)) throw Error(ErrorCode::OutOfDomain, to_string(g) + " leaves Z");
    return numerator_of(y);
  }

  std::string encode(const BigInt& x) const { return x.str(); }
  BigInt decode(std::string_view text) const { return parse_bigint(text); }

  std::optional<GroupElem> transporter(const BigInt& from, const BigInt& to) const {
    return affine_matrix(1, to - from);
  }

  std::optional<StabilizerGens> stabilizer_generators(const BigInt& x) const {
    return StabilizerGens{{affine_matrix(-1, 2 * x)}, false};
  }

 private:
  GroupCtx ctx_;
};

/// Q+ acting on Q by multiplication, as the dilations (a, 0) of AffineQ.
/// The context generators are the sample schedule {p/q : 1 <= p, q <= bound},
/// so the stabilizer of 0 is reported as sampled.
class RationalLine {
 public:
  using point_type = Rat;

  static RationalLine multiplicative(std::int64_t sample_bound) {
    if (sample_bound < 2) throw Error(ErrorCode::MalformedInput, "sample_bound must be >= 2");
    std::vector<GroupElem> gens;
    for (std::int64_t p = 1; p <= sample_bound; ++p)
      for (std::int64_t q = 1; q <= sample_bound; ++q)
        if (p != q && std::gcd(p, q) == 1) gens.push_back(Affine{Rat(p, q), Rat(0)});
    return RationalLine(GroupCtx(AffineFamily{}, gens));
  }

  const GroupCtx& context() const noexcept { return ctx_; }

  Rat act(const GroupElem& g, const Rat& x) const {
    const auto* a = std::get_if<Affine>(&g);
    if (!a) throw Error(ErrorCode::FamilyMismatch, "expected an affine element");
    if (a->b != 0 || a->a <= 0) throw Error(ErrorCode::OutOfDomain, to_string(g) + " is not a positive dilation");
    return a->a * x;
  }

  std::string encode(const Rat& x) const { return to_string(x); }
  Rat decode(std::string_view text) const { return parse_rat(text); }

  std::optional<GroupElem> transporter(const Rat& from, const Rat& to) const {
    if (from == 0 || to == 0) {
      if (from == to) return ctx_.identity();
      return std::nullopt;
    }
    if ((from > 0) != (to > 0)) return std::nullopt;
    return Affine{to / from, Rat(0)};
  }

  std::optional<StabilizerGens> stabilizer_generators(const Rat& x) const {
    if (x != 0) return StabilizerGens{{}, false};
    std::vector<GroupElem> gens(ctx_.generators().begin(), ctx_.generators().end());
    return StabilizerGens{std::move(gens), true};
  }

 private:
  explicit RationalLine(GroupCtx ctx) : ctx_(std::move(ctx)) {}

  GroupCtx ctx_;
};

/// Z acting by +1 on the levels of the binary rooted tree: the point (k, r)
/// is the residue r mod 2^k. Group elements are the integer translations
/// (1, b) of AffineQ.
class BinaryOdometer {
 public:
  struct point_type {
    std::uint32_t level = 0;
    std::uint64_t residue = 0;
    bool operator==(const point_type&) const = default;
  };

  BinaryOdometer() : ctx_(AffineFamily{}, {Affine{Rat(1), Rat(1)}}) {}

  const GroupCtx& context() const noexcept { return ctx_; }

  point_type act(const GroupElem& g, const point_type& x) const {
    const auto* a = std::get_if<Affine>(&g);
    if (!a || a->a != 1 || !is_integral(a->b)) throw Error(ErrorCode::OutOfDomain, to_string(g) + " is not in Z");
    BigInt modulus = BigInt(1) << x.level;
    BigInt r = floor_mod(BigInt(x.residue) + numerator_of(a->b), modulus);
    return {x.level, static_cast<std::uint64_t>(r)};
  }

  std::string encode(const point_type& x) const { return std::to_string(x.level) + ":" + std::to_string(x.residue); }

  point_type decode(std::string_view text) const {
    auto colon = text.find(':');
    if (colon == std::string_view::npos) throw Error(ErrorCode::MalformedInput, "odometer point must be level:residue");
    auto level = parse_bigint(text.substr(0, colon));
    auto residue = parse_bigint(text.substr(colon + 1));
    if (level < 0 || level > 62 || residue < 0 || residue >= (BigInt(1) << static_cast<unsigned>(level)))
      throw Error(ErrorCode::OutOfDomain, "odometer point out of range");
    return {static_cast<std::uint32_t>(level), static_cast<std::uint64_t>(residue)};
  }

  /// All points of levels 1..k, a finite invariant window.
  std::vector<point_type> window(std::uint32_t k) const {
    std::vector<point_type> out;
    for (std::uint32_t level = 1; level <= k; ++level)
      for (std::uint64_t r = 0; r < (std::uint64_t{1} << level); ++r) out.push_back({level, r});
    return out;
  }

  std::optional<GroupElem> transporter(const point_type& from, const point_type& to) const {
    if (from.level != to.level) return std::nullopt;
    return Affine{Rat(1), Rat(BigInt(to.residue) - BigInt(from.residue))};
  }

  std::optional<StabilizerGens> stabilizer_generators(const point_type& x) const {
    BigInt period = BigInt(1) << x.level;
    return StabilizerGens{{Affine{Rat(1), Rat(period)}, Affine{Rat(1), Rat(-period)}}, false};
  }

 private:
  GroupCtx ctx_;
};

/// G acting on G/H by left multiplication; points are canonical coset reps.
class CosetSpace {
 public:
  using point_type = GroupElem;

  explicit CosetSpace(HeckePair pair) : pair_(std::make_shared<HeckePair>(std::move(pair))) {}

  const GroupCtx& context() const noexcept { return pair_->ctx(); }
  const HeckePair& pair() const noexcept { return *pair_; }

  GroupElem act(const GroupElem& g, const GroupElem& x) const { return pair_->coset_rep(pair_->ctx().mul(g, x)); }

  std::string encode(const GroupElem& x) const { return to_string(x); }
  GroupElem decode(std::string_view text) const { return pair_->coset_rep(pair_->ctx().parse(text)); }

  std::optional<GroupElem> transporter(const GroupElem& from, const GroupElem& to) const {
    return pair_->ctx().mul(to, pair_->ctx().inv(from));
  }

  /// Stab(xH) = x H x^-1.
  std::optional<StabilizerGens> stabilizer_generators(const GroupElem& x) const {
    const auto& ctx = pair_->ctx();
    StabilizerGens out;
    out.sampled = pair_->generators_sampled();
    GroupElem xi = ctx.inv(x);
    for (const auto& h : pair_->subgroup_generators()) out.generators.push_back(ctx.mul(x, ctx.mul(h, xi)));
    return out;
  }

 private:
  std::shared_ptr<const HeckePair> pair_;
};

static_assert(GSet<DihedralOnIntegers> && WithTransporter<DihedralOnIntegers> && WithStabilizer<DihedralOnIntegers>);
static_assert(GSet<RationalLine> && WithTransporter<RationalLine> && WithStabilizer<RationalLine>);
static_assert(GSet<BinaryOdometer> && WithStabilizer<BinaryOdometer>);
static_assert(GSet<CosetSpace> && WithStabilizer<CosetSpace>);

// ---------------------------------------------------------------------------
// Generic fallbacks
// ---------------------------------------------------------------------------

/// Breadth-first search for an element mapping `from` to `to`.
template <GSet S>
std::optional<GroupElem> search_transporter(const S& gset, const typename S::point_type& from,
                                            const typename S::point_type& to, std::size_t budget) {
  const auto& ctx = gset.context();
  struct Node {
    typename S::point_type point;
    GroupElem elem;
  };
  std::vector<Node> queue{{from, ctx.identity()}};
  std::unordered_set<std::string> seen{gset.encode(from)};
  const std::string target = gset.encode(to);
  if (seen.count(target)) return ctx.identity();
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (const auto& s : ctx.generators()) {
      auto p = gset.act(s, queue[head].point);
      std::string k = gset.encode(p);
      if (!seen.insert(k).second) continue;
      GroupElem e = ctx.mul(s, queue[head].elem);
      if (k == target) return e;
      queue.push_back({std::move(p), std::move(e)});
      if (queue.size() > budget) return std::nullopt;
    }
  }
  return std::nullopt;
}

template <GSet S>
std::optional<GroupElem> transporter_of(const S& gset, const typename S::point_type& from,
                                        const typename S::point_type& to, std::size_t budget) {
  if constexpr (WithTransporter<S>) {
    return gset.transporter(from, to);
  } else {
    return search_transporter(gset, from, to, budget);
  }
}

/// Elements of word length <= max_len fixing x. Always labelled sampled.
template <GSet S>
StabilizerGens sampled_stabilizer(const S& gset, const typename S::point_type& x, std::size_t max_len,
                                  std::size_t budget) {
  const auto& ctx = gset.context();
  StabilizerGens out;
  out.sampled = true;
  const std::string xk = gset.encode(x);
  std::vector<GroupElem> layer{ctx.identity()};
  std::unordered_set<std::string> seen{to_string(layer[0])};
  for (std::size_t len = 0; len < max_len && seen.size() <= budget; ++len) {
    std::vector<GroupElem> next;
    for (const auto& g : layer)
      for (const auto& s : ctx.generators()) {
        GroupElem h = ctx.mul(s, g);
        if (!seen.insert(to_string(h)).second) continue;
        if (gset.encode(gset.act(h, x)) == xk) out.generators.push_back(h);
        next.push_back(std::move(h));
      }
    layer = std::move(next);
  }
  return out;
}

template <GSet S>
StabilizerGens stabilizer_of(const S& gset, const typename S::point_type& x, std::size_t sample_len = 6,
                             std::size_t budget = kDefaultBudget) {
  if constexpr (WithStabilizer<S>) {
    if (auto gens = gset.stabilizer_generators(x)) return *gens;
  }
  return sampled_stabilizer(gset, x, sample_len, budget);
}

}  // namespace hecke

#endif  // HECKE_GSET_HPP
