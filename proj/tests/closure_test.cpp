#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hecke/closure.hpp"

using namespace hecke;

namespace {

using Map = std::vector<std::size_t>;

// Naive fixpoint: close the generator set under composition.
std::set<Map> naive_closure(const std::vector<Map>& gens, std::size_t n) {
  Map id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<Map> out{id};
  bool grew = true;
  while (grew) {
    grew = false;
    for (auto a : std::vector<Map>(out.begin(), out.end()))
      for (const auto& g : gens) {
        Map c(n);
        for (std::size_t i = 0; i < n; ++i) c[i] = g[a[i]];
        if (out.insert(c).second) grew = true;
      }
  }
  return out;
}

Map random_perm(std::size_t n, std::mt19937_64& rng) {
  Map p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng() % i]);
  return p;
}

}  // namespace

TEST(ClosureExplorer, CyclicActions) {
  auto z4 = closure_finite({4, {{1, 2, 3, 0}}});
  EXPECT_EQ(z4.order, 4u);
  EXPECT_EQ(z4.stabilizer_orders, (std::vector<std::size_t>{1, 1, 1, 1}));
  EXPECT_EQ(z4.orbits.size(), 1u);

  // Z on Z/2 x Z/3, point (a, b) stored as 3a + b
  Map diag(6);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 3; ++b) diag[3 * a + b] = 3 * ((a + 1) % 2) + (b + 1) % 3;
  auto prod = closure_finite({6, {diag}});
  EXPECT_EQ(prod.order, naive_closure({diag}, 6).size());
  EXPECT_EQ(prod.order, 6u);
}

TEST(ClosureExplorer, SymmetricGroupOnThreePoints) {
  auto s3 = closure_finite({3, {{1, 0, 2}, {1, 2, 0}}});
  EXPECT_EQ(s3.order, 6u);
  EXPECT_EQ(s3.stabilizer_orders, (std::vector<std::size_t>{2, 2, 2}));
}

TEST(ClosureExplorer, RejectsNonBijectiveGenerators) {
  try {
    (void)closure_finite({3, {{0, 0, 1}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotBijectiveGenerator);
  }
  EXPECT_THROW(closure_finite({3, {{0, 1}}}), Error);
}

TEST(ClosureExplorer, AgreesWithNaiveClosureAndOrbitStabilizer) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = 2 + rng() % 7;
    std::vector<Map> gens;
    for (std::size_t k = 0, count = 1 + rng() % 2; k < count; ++k) gens.push_back(random_perm(n, rng));
    auto summary = closure_finite({n, gens});
    auto naive = naive_closure(gens, n);
    ASSERT_EQ(summary.order, naive.size());
    for (const auto& orbit : summary.orbits)
      for (auto x : orbit) EXPECT_EQ(summary.order, orbit.size() * summary.stabilizer_orders[x]);
  }
}

TEST(ClosureExplorer, OdometerLevels) {
  BinaryOdometer odo;
  std::vector<std::vector<BinaryOdometer::point_type>> windows;
  for (std::uint32_t k = 1; k <= 10; ++k) windows.push_back(odo.window(k));
  auto levels = truncated_closure_levels(odo, windows, 1 << 12);
  ASSERT_EQ(levels.levels.size(), 10u);
  for (std::size_t k = 0; k < 10; ++k) {
    EXPECT_TRUE(levels.levels[k].complete);
    EXPECT_EQ(levels.levels[k].image_size, std::size_t{1} << (k + 1));
    EXPECT_TRUE(levels.levels[k].compatible_with_previous);
    for (auto s : levels.levels[k].stabilizer_image_sizes) EXPECT_GE(s, 1u);
  }
  EXPECT_TRUE(levels.sizes_nondecreasing());
  // the stabilizer of a level-k point is 2^k Z; its orbit on level j > k has size 2^(j-k)
  auto probe = stabilizer_orbit_probe(odo, odo.decode("2:1"), {odo.decode("5:3"), odo.decode("1:0")});
  EXPECT_EQ(probe.status, Status::Pass);
  EXPECT_EQ(probe.orbits[0].members.size(), 8u);
  EXPECT_EQ(probe.orbits[1].members.size(), 1u);
}

TEST(ClosureExplorer, TrivialActionLevels) {
  HeckePair pair(GroupCtx(PermFamily{3}, {}), PermSubgroup{{}});
  CosetSpace space(pair);
  auto levels = truncated_closure_levels(space, {{space.decode("()")}, {space.decode("()"), space.decode("(0 1)")}});
  for (const auto& l : levels.levels) EXPECT_EQ(l.image_size, 1u);
}

TEST(ClosureExplorer, RationalsWindowDoesNotClose) {
  auto line = RationalLine::multiplicative(4);
  auto levels = truncated_closure_levels(line, {{Rat(0), Rat(1), Rat(2)}}, 10'000);
  EXPECT_FALSE(levels.levels[0].complete);
  EXPECT_GT(levels.levels[0].trace.visited, 10'000u);

  auto probe = stabilizer_orbit_probe(line, Rat(0), {Rat(1)}, 10'000);
  EXPECT_EQ(probe.status, Status::Unknown);
  EXPECT_TRUE(probe.stabilizer_sampled);
  const auto& f = probe.orbits[0].trace.frontier_sizes;
  ASSERT_GE(f.size(), 3u);
  for (std::size_t i = 1; i < f.size(); ++i) EXPECT_GT(f[i], f[i - 1]);

  // x = 1 has trivial stabilizer: every orbit is a singleton
  auto trivial = stabilizer_orbit_probe(line, Rat(1), {Rat(0), Rat(5), Rat(-2)});
  EXPECT_EQ(trivial.status, Status::Pass);
  for (const auto& o : trivial.orbits) EXPECT_EQ(o.members.size(), 1u);
}

TEST(ClosureExplorer, CosetSpaceProbeMatchesOrbitCount) {
  GroupCtx base(BSFamily{2, 3}, {});
  HeckePair pair(GroupCtx(BSFamily{2, 3}, {base.parse("t"), base.parse("x")}), CyclicX{});
  CosetSpace space(pair);
  auto probe = stabilizer_orbit_probe(space, space.decode("e"), {space.decode("t"), space.decode("t^-1")});
  EXPECT_EQ(probe.status, Status::Pass);
  EXPECT_EQ(probe.orbits[0].members.size(), 2u);
  EXPECT_EQ(probe.orbits[1].members.size(), 3u);
  EXPECT_EQ(probe.orbits[0].members.size(), count_cosets_in_double_coset(pair, base.parse("t")));
}
