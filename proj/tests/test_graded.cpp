#include <random>

#include "doctest.h"
#include "gtoric/graded_matrix.hpp"
#include "oracles.hpp"

using namespace gtoric;

namespace {

ToricGAlgebra qxy_hyperbolic() {
  return ToricGAlgebra(CoeffRing::rationals(),
                       AffineMonoid::from_cone(cone_from_rays(2, {{1, 0}, {0, 1}})),
                       FinAbGroup::free_group(1), IntMat::from_rows({{1, -1}}));
}

ToricGAlgebra zxy_hyperbolic() {
  return ToricGAlgebra(CoeffRing::integers(),
                       AffineMonoid::from_cone(cone_from_rays(2, {{1, 0}, {0, 1}})),
                       FinAbGroup::free_group(1), IntMat::from_rows({{1, -1}}));
}

GroupElem z_elem(const FinAbGroup& g, long v) { return reduce(g, IntVec{Int(v)}); }

// random homogeneous element of the given weight, support within a box
AlgebraElem random_homog(const ToricGAlgebra& alg, std::mt19937& rng, const GroupElem& w,
                         int maxdeg, int terms) {
  std::vector<IntVec> pool;
  for (const IntVec& p : oracles::box_points(alg.ambient_rank(), maxdeg)) {
    bool nonneg = true;
    for (const Int& c : p)
      if (c < 0) nonneg = false;
    if (!nonneg) continue;
    if (!alg.monoid().contains(p)) continue;
    if (weight(alg, p) == w) pool.push_back(p);
  }
  AlgebraElem x;
  if (pool.empty()) return x;
  std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> c(-3, 3);
  for (int t = 0; t < terms; ++t) x = add(alg, x, monomial(alg, pool[pick(rng)], Scalar(c(rng))));
  return x;
}

GradedMatrix random_graded(const ToricGAlgebra& alg, std::mt19937& rng, const WeightVector& src,
                           const WeightVector& tgt, int maxdeg) {
  GradedMatrix m = graded_zero(alg, src, tgt);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      m.at(i, j) = random_homog(alg, rng, sub(alg.grading(), src[j], tgt[i]), maxdeg, 2);
  check_graded(alg, m);
  return m;
}

// U = [[1, x],[y, 1+xy]], the running invertible example
GradedMatrix sample_unipotent(const ToricGAlgebra& alg) {
  WeightVector w{z_elem(alg.grading(), 0), z_elem(alg.grading(), 1)};
  std::vector<AlgebraElem> ent(4);
  ent[0] = one(alg);
  ent[1] = monomial(alg, {1, 0}, 1);
  ent[2] = monomial(alg, {0, 1}, 1);
  ent[3] = add(alg, one(alg), monomial(alg, {1, 1}, 1));
  return make_graded(alg, w, w, std::move(ent));
}

}  // namespace

TEST_CASE("compose: identity, gradedness, zero absorption") {
  ToricGAlgebra alg = qxy_hyperbolic();
  std::mt19937 rng(51);
  WeightVector w{z_elem(alg.grading(), 0), z_elem(alg.grading(), 1)};
  GradedMatrix id = graded_identity(alg, w);
  for (int t = 0; t < 10; ++t) {
    GradedMatrix f = random_graded(alg, rng, w, w, 3);
    CHECK(compose(alg, id, f) == f);
    CHECK(compose(alg, f, id) == f);
    GradedMatrix z = graded_zero(alg, w, w);
    CHECK(compose(alg, f, z) == z);
    // gradedness of products is checked inside compose; also verify
    // against a second random factor
    GradedMatrix g = random_graded(alg, rng, w, w, 3);
    GradedMatrix fg = compose(alg, f, g);
    check_graded(alg, fg);
  }
  CHECK_THROWS_AS(
      compose(alg, graded_zero(alg, w, w),
              graded_zero(alg, w, WeightVector{z_elem(alg.grading(), 2)})),
      ValidationError);
}

TEST_CASE("det_endo: examples and weight-0 invariance") {
  ToricGAlgebra alg = qxy_hyperbolic();
  GradedMatrix u = sample_unipotent(alg);
  CHECK(det_endo(alg, u) == one(alg));
  CHECK(det_endo(alg, graded_identity(alg, u.source)) == one(alg));

  // diag(xy, 1) has determinant xy, an invariant
  WeightVector w{z_elem(alg.grading(), 0), z_elem(alg.grading(), 0)};
  GradedMatrix d = graded_zero(alg, w, w);
  d.at(0, 0) = monomial(alg, {1, 1}, 1);
  d.at(1, 1) = one(alg);
  AlgebraElem det = det_endo(alg, d);
  CHECK(det == monomial(alg, {1, 1}, 1));
  CHECK(is_invariant(alg, det));
}

TEST_CASE("det_endo of random graded endomorphisms is weight-0 (property)") {
  ToricGAlgebra alg = qxy_hyperbolic();
  std::mt19937 rng(53);
  std::uniform_int_distribution<int> wd(-2, 2), sz(1, 3);
  for (int t = 0; t < 60; ++t) {
    WeightVector w;
    int n = sz(rng);
    for (int i = 0; i < n; ++i) w.push_back(z_elem(alg.grading(), wd(rng)));
    GradedMatrix f = random_graded(alg, rng, w, w, 3);
    AlgebraElem d = det_endo(alg, f);
    CHECK(is_homogeneous(alg, d, zero_elem(alg.grading())));
  }
}

TEST_CASE("unit detection") {
  ToricGAlgebra q = qxy_hyperbolic();
  CHECK(is_unit(q, constant(q, 3)));
  CHECK_FALSE(is_unit(q, add(q, one(q), monomial(q, {1, 0}, 1))));  // 1+x
  CHECK_FALSE(is_unit(q, monomial(q, {1, 0}, 1)));  // x not a unit in Q[x,y]

  // x is a unit in the Laurent algebra
  ToricGAlgebra laurent(CoeffRing::rationals(),
                        AffineMonoid::from_cone(cone_from_rays(1, {{1}, {-1}})),
                        FinAbGroup::free_group(1), IntMat::from_rows({{1}}));
  auto inv = unit_inverse(laurent, monomial(laurent, {1}, 2));
  REQUIRE(inv.has_value());
  CHECK(*inv == monomial(laurent, {-1}, Scalar(1) / 2));

  // 2 is not a unit over Z
  ToricGAlgebra z = zxy_hyperbolic();
  CHECK_FALSE(is_unit(z, constant(z, 2)));
  CHECK(is_unit(z, constant(z, -1)));
}

TEST_CASE("invert: adjugate inverse") {
  ToricGAlgebra alg = qxy_hyperbolic();
  GradedMatrix u = sample_unipotent(alg);
  GradedMatrix uinv = invert(alg, u);
  CHECK(compose(alg, u, uinv) == graded_identity(alg, u.source));
  CHECK(compose(alg, uinv, u) == graded_identity(alg, u.source));
  // explicit inverse [[1+xy, -x],[-y, 1]]
  CHECK(uinv.at(0, 0) == add(alg, one(alg), monomial(alg, {1, 1}, 1)));
  CHECK(uinv.at(0, 1) == monomial(alg, {1, 0}, -1));
  CHECK(uinv.at(1, 0) == monomial(alg, {0, 1}, -1));
  CHECK(uinv.at(1, 1) == one(alg));

  CHECK(invert(alg, graded_identity(alg, u.source)) == graded_identity(alg, u.source));

  // diag(2,1) over Z is not invertible
  ToricGAlgebra z = zxy_hyperbolic();
  WeightVector w{z_elem(z.grading(), 0), z_elem(z.grading(), 0)};
  GradedMatrix d = graded_zero(z, w, w);
  d.at(0, 0) = constant(z, 2);
  d.at(1, 1) = one(z);
  CHECK_THROWS_AS(invert(z, d), NotInvertible);
}

TEST_CASE("invert(f) compose f = id on random unimodular products (property)") {
  ToricGAlgebra alg = qxy_hyperbolic();
  std::mt19937 rng(59);
  std::uniform_int_distribution<int> wd(-1, 1), pick(0, 1);
  for (int t = 0; t < 15; ++t) {
    WeightVector w{z_elem(alg.grading(), wd(rng)), z_elem(alg.grading(), wd(rng))};
    // product of graded elementary matrices
    GradedMatrix u = graded_identity(alg, w);
    for (int s = 0; s < 3; ++s) {
      int i = pick(rng), j = 1 - i;
      GradedMatrix e = graded_identity(alg, w);
      e.at(i, j) = random_homog(alg, rng, sub(alg.grading(), w[j], w[i]), 2, 1);
      u = compose(alg, u, e);
    }
    GradedMatrix uinv = invert(alg, u);
    CHECK(compose(alg, u, uinv) == graded_identity(alg, w));
  }
}

TEST_CASE("invariant entry mask") {
  ToricGAlgebra alg = qxy_hyperbolic();
  {
    WeightVector v{z_elem(alg.grading(), 0), z_elem(alg.grading(), 1)};
    GradedMatrix f = graded_zero(alg, v, v);
    auto mask = invariant_entry_mask(alg, f);
    for (const auto& row : mask)
      for (bool b : row) CHECK(b);  // hyperbolic grading reaches every weight
  }
  {
    // non-negative grading: weight -1 entries unreachable
    ToricGAlgebra pos(CoeffRing::rationals(),
                      AffineMonoid::from_cone(cone_from_rays(2, {{1, 0}, {0, 1}})),
                      FinAbGroup::free_group(1), IntMat::from_rows({{1, 1}}));
    WeightVector src{z_elem(pos.grading(), 0)}, tgt{z_elem(pos.grading(), 1)};
    GradedMatrix f = graded_zero(pos, src, tgt);
    auto mask = invariant_entry_mask(pos, f);
    CHECK_FALSE(mask[0][0]);  // entry weight 0 - 1 = -1, unreachable
  }
}

TEST_CASE("weight_split by parity") {
  ToricGAlgebra alg = qxy_hyperbolic();
  WeightVector w{z_elem(alg.grading(), 0), z_elem(alg.grading(), 1)};
  GradedMatrix e = graded_zero(alg, w, w);
  e.at(0, 0) = one(alg);
  e.at(1, 1) = one(alg);
  GradedIdempotent idem = make_idempotent(alg, e);

  // quotient Z -> Z/2
  FinAbGroup z2{0, {2}};
  AbGroupHom to_z2 = make_hom(alg.grading(), z2, IntMat::from_rows({{1}}));
  std::vector<WeightBlock> blocks = weight_split(alg, idem, to_z2);
  REQUIRE(blocks.size() == 2);
  CHECK(blocks[0].idem.e.rows() == 1);
  CHECK(blocks[1].idem.e.rows() == 1);

  // quotient to the trivial group: one block
  FinAbGroup triv;
  AbGroupHom to_triv = make_hom(alg.grading(), triv, IntMat(0, 1));
  CHECK(weight_split(alg, idem, to_triv).size() == 1);

  // identity quotient: blocks by weight
  AbGroupHom id_hom = make_hom(alg.grading(), alg.grading(), IntMat::identity(1));
  CHECK(weight_split(alg, idem, id_hom).size() == 2);

  // trace rank bound: block sizes sum to the rank
  int total = 0;
  for (const auto& b : blocks) total += b.idem.e.rows();
  CHECK(total == 2);
}

TEST_CASE("weight_split flags malformed cross-class entries") {
  ToricGAlgebra alg = qxy_hyperbolic();
  // a matrix with a nonzero entry between classes that differ mod 2:
  // weights 0 and 1, entry weight 1 (via x), e*e = e fails for most
  // choices, so build the matrix raw and call weight_split's validation
  WeightVector w{z_elem(alg.grading(), 0), z_elem(alg.grading(), 1)};
  GradedMatrix m = graded_zero(alg, w, w);
  m.at(0, 0) = one(alg);
  m.at(0, 1) = monomial(alg, {0, 1}, 1);  // weight 1 - 0 realized by y... weight(y) = -1
  // entry (0,1) must be homogeneous of weight w[1]-w[0] = 1: use x*x y? weight 1: x
  m.at(0, 1) = monomial(alg, {1, 0}, 1);
  // not idempotent; bypass make_idempotent deliberately
  GradedIdempotent fake{m};
  FinAbGroup z2{0, {2}};
  AbGroupHom to_z2 = make_hom(alg.grading(), z2, IntMat::from_rows({{1}}));
  CHECK_THROWS_AS(weight_split(alg, fake, to_z2), StructuralViolation);
}

TEST_CASE("restrict_to_face") {
  ToricGAlgebra alg = qxy_hyperbolic();
  std::vector<Face> c1 = codim1_faces(alg.monoid().cone());
  const Face& xaxis = c1[1].rays[0] == IntVec{1, 0} ? c1[1] : c1[0];

  WeightVector w{z_elem(alg.grading(), 0)};
  GradedMatrix m = graded_zero(alg, w, w);
  m.at(0, 0) = add(alg, one(alg), monomial(alg, {1, 1}, 1));  // 1 + xy
  GradedMatrix r = restrict_to_face(alg, xaxis, m);
  CHECK(r.at(0, 0) == one(alg));

  GradedMatrix id = graded_identity(alg, w);
  CHECK(restrict_to_face(alg, xaxis, id) == id);

  m.at(0, 0) = monomial(alg, {1, 0}, 1);  // x lives on the x-axis
  CHECK_FALSE(is_homogeneous(alg, m.at(0, 0), zero_elem(alg.grading())));
  // x has weight 1, so regrade: source weight 1, target 0
  GradedMatrix mx = make_graded(alg, WeightVector{z_elem(alg.grading(), 1)}, w,
                                {monomial(alg, {1, 0}, 1)});
  CHECK(restrict_to_face(alg, xaxis, mx) == mx);
}

TEST_CASE("localized matrices: composition and equality") {
  ToricGAlgebra base = qxy_hyperbolic();
  AlgebraPtr alg = std::make_shared<ToricGAlgebra>(base);
  AlgebraElem h = add(*alg, one(*alg), monomial(*alg, {1, 1}, 1));
  Localization ctx(alg, h);

  GradedMatrix u = sample_unipotent(*alg);
  LocalGradedMatrix lu = to_local(u, 1);       // u / h
  LocalGradedMatrix lv = to_local(invert(*alg, u), 1);  // u^{-1} / h
  LocalGradedMatrix prod = compose(ctx, lu, lv);
  // u u^{-1} / h^2 == id / h^0 times h^{-2}... compare against id/h^2
  LocalGradedMatrix expect = to_local(graded_identity(*alg, u.source), 2);
  CHECK(eq(ctx, prod, expect));
  check_graded(ctx, prod);
}

TEST_CASE("graded surjection splitting through weight components") {
  // shadow of the split-graded-implies-split-ungraded equivalence: take a
  // graded surjection A^2 -> A (weights (0,1) -> (0)), an ungraded
  // splitting, and project it to weight components to get a graded one
  ToricGAlgebra alg = qxy_hyperbolic();
  WeightVector src{z_elem(alg.grading(), 0), z_elem(alg.grading(), 1)};
  WeightVector tgt{z_elem(alg.grading(), 0)};
  GradedMatrix p = graded_zero(alg, src, tgt);
  p.at(0, 0) = one(alg);
  p.at(0, 1) = monomial(alg, {1, 0}, 1);  // weight 1 entry

  // ungraded splitting s0: columns (1, 0) plus inhomogeneous noise
  GradedMatrix s = graded_zero(alg, tgt, src);
  s.at(0, 0) = one(alg);
  // noise component of weight != 0 would go to row 1; project to the
  // graded part: keep only terms making entries homogeneous of the
  // prescribed weights (already true here)
  CHECK(compose(alg, p, s) == graded_identity(alg, tgt));
  check_graded(alg, s);
}
