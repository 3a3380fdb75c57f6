#include <random>

#include "doctest.h"
#include "gtoric/enumerate.hpp"
#include "gtoric/monoid.hpp"
#include "oracles.hpp"

using namespace gtoric;

TEST_CASE("generators of the orthant monoid") {
  AffineMonoid m = AffineMonoid::from_cone(cone_from_rays(2, {{1, 0}, {0, 1}}));
  CHECK(m.generators() == std::vector<IntVec>{{0, 1}, {1, 0}});
}

TEST_CASE("generators of cone<(1,0),(1,2)> cap Z^2") {
  AffineMonoid m = AffineMonoid::from_cone(cone_from_rays(2, {{1, 0}, {1, 2}}));
  CHECK(m.generators() == std::vector<IntVec>{{1, 0}, {1, 1}, {1, 2}});
  // oracle: every monoid point with coordinates <= 4 is generated
  auto reach = oracles::reachable_set(m.generators(), 16);
  for (const IntVec& x : oracles::box_points(2, 4))
    if (m.contains(x)) CHECK(reach.count(x) == 1);
}

TEST_CASE("generators of the half-plane monoid") {
  AffineMonoid m = AffineMonoid::from_cone(cone_from_rays(2, {{1, 0}, {-1, 0}, {0, 1}}));
  CHECK(m.generators() == std::vector<IntVec>{{-1, 0}, {0, 1}, {1, 0}});
  auto reach = oracles::reachable_set(m.generators(), 16);
  for (const IntVec& x : oracles::box_points(2, 4))
    if (x[1] >= 0) CHECK(reach.count(x) == 1);
}

TEST_CASE("contains") {
  AffineMonoid orthant = AffineMonoid::from_cone(cone_from_rays(2, {{1, 0}, {0, 1}}));
  CHECK(orthant.contains({3, 1}));
  CHECK_FALSE(orthant.contains({-1, 0}));
  // ker(a-b) cap orthant contains (1,1)
  AffineMonoid inv = invariant_monoid(orthant, IntMat::from_rows({{1, -1}}),
                                      FinAbGroup::free_group(1));
  CHECK(inv.contains({1, 1}));
  CHECK_FALSE(inv.contains({1, 0}));
}

TEST_CASE("invariant monoid: weight difference on the orthant") {
  AffineMonoid orthant = AffineMonoid::from_cone(cone_from_rays(2, {{1, 0}, {0, 1}}));
  AffineMonoid inv = invariant_monoid(orthant, IntMat::from_rows({{1, -1}}),
                                      FinAbGroup::free_group(1));
  CHECK(inv.generators() == std::vector<IntVec>{{1, 1}});
  // enumeration oracle: weight-0 points in the box <= 5
  for (const IntVec& x : oracles::box_points(2, 5)) {
    bool expect = x[0] >= 0 && x[1] >= 0 && x[0] == x[1];
    CHECK(inv.contains(x) == expect);
  }
}

TEST_CASE("invariant monoid: trivial weight map returns the full monoid") {
  AffineMonoid orthant = AffineMonoid::from_cone(cone_from_rays(2, {{1, 0}, {0, 1}}));
  IntMat zero(1, 2);
  AffineMonoid inv = invariant_monoid(orthant, zero, FinAbGroup::free_group(1));
  CHECK(inv.generators() == orthant.generators());
}

TEST_CASE("invariant monoid: mod-2 weights") {
  AffineMonoid orthant = AffineMonoid::from_cone(cone_from_rays(2, {{1, 0}, {0, 1}}));
  FinAbGroup z2{0, {2}};
  AffineMonoid inv = invariant_monoid(orthant, IntMat::from_rows({{1, -1}}), z2);
  CHECK(inv.generators() == std::vector<IntVec>{{0, 2}, {1, 1}, {2, 0}});
  for (const IntVec& x : oracles::box_points(2, 4)) {
    bool expect = x[0] >= 0 && x[1] >= 0 && (x[0] - x[1]) % 2 == 0;
    CHECK(inv.contains(x) == expect);
  }
}

TEST_CASE("is_normal") {
  AffineMonoid full = AffineMonoid::from_cone(cone_from_rays(2, {{1, 0}, {1, 2}}));
  CHECK(is_normal(full));

  // the same cone generated abstractly misses (1,1)
  AffineMonoid gen2 = AffineMonoid::from_generators(2, {{1, 0}, {1, 2}});
  CHECK_FALSE(is_normal(gen2));
  CHECK_FALSE(gen2.contains({1, 1}));
  CHECK(gen2.contains({2, 2}));

  AffineMonoid zplus = AffineMonoid::from_cone(cone_from_rays(1, {{1}}));
  CHECK(is_normal(zplus));
}

TEST_CASE("has_nontrivial_units") {
  CHECK_FALSE(has_nontrivial_units(AffineMonoid::from_cone(cone_from_rays(2, {{1, 0}, {0, 1}}))));
  CHECK(has_nontrivial_units(
      AffineMonoid::from_cone(cone_from_rays(2, {{1, 0}, {-1, 0}, {0, 1}}))));
  CHECK_FALSE(has_nontrivial_units(AffineMonoid::from_cone(cone_from_rays(2, {}))));
}

TEST_CASE("invariant monoid preserves normality and unit-freeness (property)") {
  std::mt19937 rng(41);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<IntVec> rays;
    for (int i = 0; i < 3; ++i) {
      IntVec r{entry(rng), entry(rng)};
      if (!is_zero(r)) rays.push_back(r);
    }
    if (rays.empty()) continue;
    AffineMonoid m = AffineMonoid::from_cone(cone_from_rays(2, rays));
    IntMat u(1, 2);
    u.at(0, 0) = entry(rng);
    u.at(0, 1) = entry(rng);
    AffineMonoid inv = invariant_monoid(m, u, FinAbGroup::free_group(1));
    CHECK(is_normal(inv));
    if (!has_nontrivial_units(m)) CHECK_FALSE(has_nontrivial_units(inv));
    // invariant monoid points are exactly the box points with u(x) = 0
    for (const IntVec& x : oracles::box_points(2, 3)) {
      bool expect = m.contains(x) && is_zero(mul(u, x));
      CHECK(inv.contains(x) == expect);
    }
  }
}

TEST_CASE("generator minimality: no generator is generated by the others") {
  AffineMonoid m = AffineMonoid::from_cone(cone_from_rays(2, {{2, -1}, {0, 1}}));
  const std::vector<IntVec>& gens = m.generators();
  for (size_t i = 0; i < gens.size(); ++i) {
    std::vector<IntVec> rest;
    for (size_t j = 0; j < gens.size(); ++j)
      if (j != i) rest.push_back(gens[j]);
    CHECK_FALSE(nspan_member(gens[i], rest));
  }
}

TEST_CASE("enumeration kernels agree (serial vs parallel)") {
  IntVec lo{-6, -6, -6}, hi{6, 6, 6};
  auto pred = [](const IntVec& p) { return (p[0] + 2 * p[1] - p[2]) % 3 == 0; };
  auto a = enumerate_box_serial(lo, hi, pred, kDefaultBudget);
  auto b = enumerate_box_parallel(lo, hi, pred, kDefaultBudget);
  CHECK(a == b);
  CHECK(!a.empty());
}

TEST_CASE("enumeration budget raises a resource error") {
  IntVec lo{0, 0, 0}, hi{99, 99, 99};
  CHECK_THROWS_AS(enumerate_box_serial(lo, hi, [](const IntVec&) { return true; }, Int(1000)),
                  ResourceError);
}
