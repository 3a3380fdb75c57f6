// The monoid algebra A = R[sigma cap M] with its P-grading through the
// weight map psi, the invariant subalgebra, face restriction/section, the
// boundary ideal J of strictly interior monomials, and localization at an
// invariant element.

#ifndef GTORIC_ALGEBRA_HPP
#define GTORIC_ALGEBRA_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "gtoric/coeff.hpp"
#include "gtoric/monoid.hpp"

namespace gtoric {

// Finitely supported coefficient map on monoid points; support is kept in
// lexicographic order and never stores zero coefficients, so equality is
// structural.
struct AlgebraElem {
  std::map<IntVec, Scalar, IntVecLess> terms;

  bool is_zero() const { return terms.empty(); }
  bool operator==(const AlgebraElem& o) const { return terms == o.terms; }
  bool operator!=(const AlgebraElem& o) const { return !(*this == o); }
};

class ToricGAlgebra {
 public:
  ToricGAlgebra(CoeffRing coeff, AffineMonoid monoid, FinAbGroup grading, IntMat psi);

  const CoeffRing& coeff() const { return coeff_; }
  const AffineMonoid& monoid() const { return monoid_; }
  const FinAbGroup& grading() const { return grading_; }
  const IntMat& psi() const { return psi_; }
  int ambient_rank() const { return monoid_.ambient_rank(); }

  // Generators of the strictly-interior monomial ideal J, minimal under
  // monoid divisibility. Cached; may throw ResourceError.
  const std::vector<IntVec>& interior_generators() const;

  ToricGAlgebra(const ToricGAlgebra& o)
      : coeff_(o.coeff_), monoid_(o.monoid_), grading_(o.grading_), psi_(o.psi_) {
    std::lock_guard<std::mutex> lk(o.cache_mutex_);
    interior_cache_ = o.interior_cache_;
  }
  ToricGAlgebra& operator=(const ToricGAlgebra&) = delete;

 private:
  CoeffRing coeff_;
  AffineMonoid monoid_;
  FinAbGroup grading_;
  IntMat psi_;

  mutable std::mutex cache_mutex_;
  mutable std::optional<std::vector<IntVec>> interior_cache_;
};

using AlgebraPtr = std::shared_ptr<const ToricGAlgebra>;

// -- element construction and arithmetic --

AlgebraElem zero_elem();
AlgebraElem monomial(const ToricGAlgebra& alg, const IntVec& point, const Scalar& coeff);
AlgebraElem constant(const ToricGAlgebra& alg, const Scalar& coeff);
AlgebraElem one(const ToricGAlgebra& alg);

AlgebraElem add(const ToricGAlgebra& alg, const AlgebraElem& x, const AlgebraElem& y);
AlgebraElem sub(const ToricGAlgebra& alg, const AlgebraElem& x, const AlgebraElem& y);
AlgebraElem neg(const ToricGAlgebra& alg, const AlgebraElem& x);
AlgebraElem mul(const ToricGAlgebra& alg, const AlgebraElem& x, const AlgebraElem& y);
AlgebraElem scale(const ToricGAlgebra& alg, const Scalar& c, const AlgebraElem& x);

// -- grading --

GroupElem weight(const ToricGAlgebra& alg, const IntVec& monoid_point);
bool is_homogeneous(const ToricGAlgebra& alg, const AlgebraElem& x, const GroupElem& w);

// Weight of a nonzero homogeneous element; nullopt if inhomogeneous or zero
// (zero is homogeneous of every weight).
std::optional<GroupElem> homogeneous_weight(const ToricGAlgebra& alg, const AlgebraElem& x);

bool is_invariant(const ToricGAlgebra& alg, const AlgebraElem& x);

// Monomial generators e_q of the invariant subalgebra A^G.
std::vector<AlgebraElem> invariant_generators(const ToricGAlgebra& alg);
AffineMonoid invariant_monoid_of(const ToricGAlgebra& alg);

// True iff some monoid point has weight w (so A_w != 0).
bool weight_reachable(const ToricGAlgebra& alg, const GroupElem& w);

// -- faces --

// Kills the monomials with support outside tau; a ring homomorphism onto
// R[L_tau] realized inside A.
AlgebraElem face_restrict(const ToricGAlgebra& alg, const Face& tau, const AlgebraElem& x);

// The section R[L_tau] -> A; rejects support outside tau. Composing
// face_restrict after face_section is the identity.
AlgebraElem face_section(const ToricGAlgebra& alg, const Face& tau, const AlgebraElem& x);

bool supported_on_face(const ToricGAlgebra& alg, const Face& tau, const AlgebraElem& x);

// -- the boundary ideal J --

// e_m lies in J iff m is strictly inside the cone.
bool monomial_in_interior_ideal(const ToricGAlgebra& alg, const IntVec& m);

// Membership of every support monomial of x in J^N; exact bounded search
// over the interior generators with memoization.
bool ideal_J_power_member(const ToricGAlgebra& alg, const AlgebraElem& x, int n);

// x = 0 mod the monomial ideal I_tau of the face closure (every support
// monomial off the face).
bool is_zero_mod_face_ideal(const ToricGAlgebra& alg, const Face& tau, const AlgebraElem& x);

// The explicit bound N with f / e_m in A for every f in J^N.
Int large_N(const ToricGAlgebra& alg, const IntVec& m);

// Monomial generators of I cap A^G for a monomial weight-stable ideal I;
// descriptor selects the zero ideal, the unit ideal or J.
enum class MonomialIdealKind { zero, unit, interior };
std::vector<AlgebraElem> invariant_part_of_monomial_ideal(const ToricGAlgebra& alg,
                                                          MonomialIdealKind kind);

// -- localization at an invariant element --

class Localization {
 public:
  Localization(AlgebraPtr alg, AlgebraElem h);
  const ToricGAlgebra& alg() const { return *alg_; }
  AlgebraPtr alg_ptr() const { return alg_; }
  const AlgebraElem& h() const { return h_; }
  AlgebraElem h_power(int k) const;

 private:
  AlgebraPtr alg_;
  AlgebraElem h_;
};

// a / h^k over a fixed localization context.
struct LocalizedElem {
  AlgebraElem num;
  int k = 0;
};

LocalizedElem localize_elem(const AlgebraElem& a, int k = 0);
LocalizedElem add(const Localization& ctx, const LocalizedElem& x, const LocalizedElem& y);
LocalizedElem sub(const Localization& ctx, const LocalizedElem& x, const LocalizedElem& y);
LocalizedElem mul(const Localization& ctx, const LocalizedElem& x, const LocalizedElem& y);
LocalizedElem neg(const Localization& ctx, const LocalizedElem& x);
bool eq(const Localization& ctx, const LocalizedElem& x, const LocalizedElem& y);
bool is_zero(const LocalizedElem& x);

// Exact division f / h^k in A; h must have the shape 1 + (higher order
// along the functional grading), which every h = 1 mod J does. Returns
// nullopt when not divisible.
std::optional<AlgebraElem> exact_divide_h(const ToricGAlgebra& alg, const AlgebraElem& f,
                                          const AlgebraElem& h, int k);

// -- rendering --

// Canonical textual format: "c1*e[2,1] + c2*e[0,3]"; coefficients are
// integer or rational literals, support in lexicographic order.
std::string render(const AlgebraElem& x);
AlgebraElem parse_elem(const ToricGAlgebra& alg, const std::string& text);

}  // namespace gtoric

#endif
