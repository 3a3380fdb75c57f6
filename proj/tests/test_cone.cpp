#include <random>

#include "doctest.h"
#include "gtoric/cone.hpp"
#include "oracles.hpp"

using namespace gtoric;

namespace {

bool has_ray(const Cone& c, const IntVec& r) {
  return std::find(c.rays.begin(), c.rays.end(), r) != c.rays.end();
}
bool has_functional(const Cone& c, const IntVec& l) {
  return std::find(c.functionals.begin(), c.functionals.end(), l) != c.functionals.end();
}

// 2D membership oracle: x in cone(rays) iff x is a non-negative rational
// combination; checked by solving the 2x2 systems / sign tests directly.
bool in_cone_2d(const std::vector<IntVec>& rays, const IntVec& x) {
  if (is_zero(x)) return true;
  for (const IntVec& r : rays)
    for (const IntVec& s : rays) {
      // x = a r + b s with a, b >= 0 rational: Cramer
      Int d = r[0] * s[1] - r[1] * s[0];
      if (d == 0) {
        if (r[0] * x[1] - r[1] * x[0] == 0) {
          // colinear: x = a r with a >= 0?
          Int num = (r[0] != 0) ? x[0] : x[1];
          Int den = (r[0] != 0) ? r[0] : r[1];
          if (num * den >= 0 && x[0] * r[1] == x[1] * r[0]) return true;
        }
        continue;
      }
      Int a = x[0] * s[1] - x[1] * s[0];
      Int b = r[0] * x[1] - r[1] * x[0];
      if (d < 0) {
        a = -a;
        b = -b;
        d = -d;
      }
      if (a >= 0 && b >= 0) return true;
    }
  return false;
}

}  // namespace

TEST_CASE("orthant is self-dual") {
  Cone c = cone_from_rays(2, {{1, 0}, {0, 1}});
  CHECK(c.rays == std::vector<IntVec>{{0, 1}, {1, 0}});
  CHECK(c.functionals == std::vector<IntVec>{{0, 1}, {1, 0}});
  CHECK(spans_ambient(c));
  CHECK(c.lineality_basis.cols == 0);
}

TEST_CASE("cone <(1,0),(1,2)> has functionals (0,1),(2,-1)") {
  Cone c = cone_from_rays(2, {{1, 0}, {1, 2}});
  CHECK(has_functional(c, {0, 1}));
  CHECK(has_functional(c, {2, -1}));
  CHECK(c.functionals.size() == 2);
  for (const IntVec& l : c.functionals)
    for (const IntVec& r : c.rays) CHECK(dot(l, r) >= 0);
  // membership oracle on a box
  for (const IntVec& x : oracles::box_points(2, 5))
    CHECK(contains(c, x) == in_cone_2d({{1, 0}, {1, 2}}, x));
}

TEST_CASE("half-plane has one functional and a lineality line") {
  Cone c = cone_from_rays(2, {{1, 0}, {-1, 0}, {0, 1}});
  CHECK(c.functionals == std::vector<IntVec>{{0, 1}});
  CHECK(has_ray(c, {1, 0}));
  CHECK(has_ray(c, {-1, 0}));
  CHECK(has_ray(c, {0, 1}));
  CHECK(c.lineality_basis.cols == 1);
  CHECK(spans_ambient(c));
  for (const IntVec& x : oracles::box_points(2, 4))
    CHECK(contains(c, x) == (x[1] >= 0));
}

TEST_CASE("single ray in the plane: functionals cut out exactly the ray") {
  Cone c = cone_from_rays(2, {{1, 1}});
  CHECK_FALSE(spans_ambient(c));
  CHECK(dim(c) == 1);
  for (const IntVec& x : oracles::box_points(2, 4)) {
    bool expect = x[0] == x[1] && x[0] >= 0;
    CHECK(contains(c, x) == expect);
  }
}

TEST_CASE("faces of the orthant") {
  Cone c = cone_from_rays(2, {{1, 0}, {0, 1}});
  std::vector<Face> fs = faces(c);
  REQUIRE(fs.size() == 4);
  CHECK(fs[0].dim == 0);
  CHECK(fs[1].dim == 1);
  CHECK(fs[2].dim == 1);
  CHECK(fs[3].dim == 2);
  std::vector<Face> c1 = codim1_faces(c);
  REQUIRE(c1.size() == 2);
  CHECK(c1[0].rays == std::vector<IntVec>{{0, 1}});
  CHECK(c1[1].rays == std::vector<IntVec>{{1, 0}});
}

TEST_CASE("faces of the half-plane: lineality line and the cone itself") {
  Cone c = cone_from_rays(2, {{1, 0}, {-1, 0}, {0, 1}});
  std::vector<Face> fs = faces(c);
  REQUIRE(fs.size() == 2);
  CHECK(fs[0].dim == 1);
  CHECK(fs[0].rays == std::vector<IntVec>{{-1, 0}, {1, 0}});
  CHECK(fs[1].dim == 2);
  std::vector<Face> c1 = codim1_faces(c);
  REQUIRE(c1.size() == 1);
  CHECK(c1[0].rays == std::vector<IntVec>{{-1, 0}, {1, 0}});
  Face small = smallest_face(c);
  CHECK(small.rays == c1[0].rays);
  CHECK(small.span_basis.cols == 1);
}

TEST_CASE("the 3-orthant has 8 faces") {
  Cone c = cone_from_rays(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(faces(c).size() == 8);
  CHECK(codim1_faces(c).size() == 3);
}

TEST_CASE("cone <(1,0),(1,2)>: codim-1 faces are its two rays") {
  Cone c = cone_from_rays(2, {{1, 0}, {1, 2}});
  std::vector<Face> c1 = codim1_faces(c);
  REQUIRE(c1.size() == 2);
  CHECK(c1[0].dim == 1);
  CHECK(c1[1].dim == 1);
}

TEST_CASE("strict interior") {
  Cone orthant = cone_from_rays(2, {{1, 0}, {0, 1}});
  CHECK(strict_interior(orthant, {1, 1}));
  CHECK_FALSE(strict_interior(orthant, {1, 0}));
  Cone half = cone_from_rays(2, {{1, 0}, {-1, 0}, {0, 1}});
  CHECK(strict_interior(half, {0, 1}));
  CHECK_FALSE(strict_interior(half, {5, 0}));
}

TEST_CASE("strict interior is closed under addition (property)") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<IntVec> rays;
    for (int i = 0; i < 3; ++i) {
      IntVec r{entry(rng), entry(rng)};
      if (!is_zero(r)) rays.push_back(r);
    }
    if (rays.empty()) continue;
    Cone c = cone_from_rays(2, rays);
    std::vector<IntVec> interior;
    for (const IntVec& x : oracles::box_points(2, 4))
      if (strict_interior(c, x)) interior.push_back(x);
    for (const IntVec& a : interior)
      for (const IntVec& b : interior) CHECK(strict_interior(c, a + b));
  }
}

TEST_CASE("smallest face of orthant is the origin; of the full plane, everything") {
  Cone orthant = cone_from_rays(2, {{1, 0}, {0, 1}});
  Face f = smallest_face(orthant);
  CHECK(f.rays.empty());
  CHECK(f.dim == 0);

  Cone plane = cone_from_rays(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  CHECK(plane.functionals.empty());
  Face g = smallest_face(plane);
  CHECK(g.dim == 2);
  CHECK(faces(plane).size() == 1);
}

TEST_CASE("span_reduce") {
  {
    Cone c = cone_from_rays(2, {{1, 1}});
    SpanReduction r = span_reduce(c);
    CHECK(r.cone.ambient_rank == 1);
    CHECK(r.cone.rays == std::vector<IntVec>{{1}});
    CHECK(r.embedding.cols == 1);
    CHECK(r.embedding.col(0) == IntVec{1, 1});
  }
  {
    Cone c = cone_from_rays(2, {{1, 0}, {0, 1}});
    SpanReduction r = span_reduce(c);
    CHECK(r.cone == c);
    CHECK(r.embedding == IntMat::identity(2));
  }
  {
    Cone c = cone_from_rays(3, {});
    SpanReduction r = span_reduce(c);
    CHECK(r.cone.ambient_rank == 0);
  }
}

TEST_CASE("span_reduce is idempotent up to canonical isomorphism") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> entry(-2, 2);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<IntVec> rays;
    for (int i = 0; i < 2; ++i) {
      IntVec r{entry(rng), entry(rng), entry(rng)};
      if (!is_zero(r)) rays.push_back(r);
    }
    if (rays.empty()) continue;
    Cone c = cone_from_rays(3, rays);
    SpanReduction r1 = span_reduce(c);
    SpanReduction r2 = span_reduce(r1.cone);
    CHECK(r2.cone == r1.cone);
    CHECK(r2.embedding == IntMat::identity(r1.cone.ambient_rank));
  }
}

TEST_CASE("description consistency on random cones (membership both ways)") {
  std::mt19937 rng(37);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<IntVec> rays;
    for (int i = 0; i < 3; ++i) {
      IntVec r{entry(rng), entry(rng)};
      if (!is_zero(r)) rays.push_back(r);
    }
    if (rays.empty()) continue;
    Cone c = cone_from_rays(2, rays);
    for (const IntVec& x : oracles::box_points(2, 4))
      CHECK(contains(c, x) == in_cone_2d(rays, x));
  }
}

TEST_CASE("faces are closed under intersection; dim strictly monotone") {
  Cone c = cone_from_rays(3, {{1, 0, 0}, {1, 2, 0}, {0, 0, 1}});
  std::vector<Face> fs = faces(c);
  for (const Face& a : fs)
    for (const Face& b : fs) {
      std::vector<IntVec> meet;
      for (const IntVec& r : a.rays)
        if (std::find(b.rays.begin(), b.rays.end(), r) != b.rays.end()) meet.push_back(r);
      bool found = false;
      for (const Face& f : fs)
        if (f.rays == meet) found = true;
      CHECK(found);
      if (a.rays != b.rays) {
        bool a_in_b = std::includes(b.rays.begin(), b.rays.end(), a.rays.begin(), a.rays.end(),
                                    IntVecLess{});
        if (a_in_b) CHECK(a.dim < b.dim);
      }
    }
}
