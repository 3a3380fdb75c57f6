// The constructive trivialization engine for equivariant projective
// modules on affine toric schemes with diagonalizable group action:
// reduction to faithful gradings, recursion over the face lattice,
// codimension-1 patching, matrix refinement into powers of the boundary
// ideal, localization at an invariant determinant, descent to the
// invariant ring, factorization over the quotient cover, and gluing.
//
// Every produced certificate carries enough data to be re-verified from
// scratch: an invertible graded matrix conjugating the input idempotent
// to the standard projector onto a weight-labelled free summand.
//
// Two steps are deliberately partial and fail with a structured result
// rather than guess: the cover factorization and the splitting of a
// module over the torus (both rest on non-constructive freeness
// arguments in general).

#ifndef GTORIC_TRIVIALIZE_HPP
#define GTORIC_TRIVIALIZE_HPP

#include <string>
#include <variant>
#include <vector>

#include "gtoric/graded_matrix.hpp"

namespace gtoric {

struct TrivializerLimits {
  int max_rank = 8;
  int max_ambient = 4;
};

struct GActionProblem {
  AlgebraPtr alg;
  // exactly one of the two is set: a free module with known weights, or
  // an idempotent presenting the module as a summand of a graded free one
  std::optional<WeightVector> free_weights;
  std::optional<GradedIdempotent> module;
  TrivializerLimits limits;
};

struct TraceEntry {
  std::string check;
  std::string detail;
};

struct TrivializationCertificate {
  WeightVector target_weights;  // weights of the claimed F
  WeightVector full_weights;    // F plus the complement block
  GradedMatrix iso;             // V with V e V^{-1} = standard projector
  GradedMatrix iso_inverse;
  std::vector<TraceEntry> trace;
};

struct PartialResult {
  std::string failing_step;
  std::string detail;
  std::vector<TraceEntry> trace;
};

using TrivializeOutcome = std::variant<TrivializationCertificate, PartialResult>;

struct UnsupportedFactorization : std::runtime_error {
  explicit UnsupportedFactorization(const std::string& w) : std::runtime_error(w) {}
};

// An isomorphism im(e) -> free module of weights lambda, in split-pair
// form: fwd * bwd = Id, bwd * fwd = e (exactly, or modulo a stated ideal
// during patching).
struct IsoPair {
  GradedMatrix fwd;  // lambda x n
  GradedMatrix bwd;  // n x lambda
  WeightVector lambda;
};

// -- the spec-level operations --

// Replaces P by Q = psi(L): splits the module by P/Q weight classes and
// twists each block into Q. Blocks carry the data needed to reassemble.
struct FaithfulBlock {
  AlgebraPtr alg;           // same monoid, grading group Q, psi corestricted
  GradedIdempotent idem;    // block idempotent with weights in Q-coordinates
  GroupElem twist;          // a in P with the block's class; weights were shifted by -a
  std::vector<int> indices; // positions in the original basis
};
struct FaithfulReduction {
  SubgroupPresentation image;  // Q inside P
  std::vector<FaithfulBlock> blocks;
};
FaithfulReduction reduce_to_faithful(const GActionProblem& p);

// The codimension-1 patching loop: combines per-face iso pairs (entries
// supported on the faces, common target weights) into an iso pair modulo
// J, correcting with the face retractions. Exact congruences are checked
// at every step.
IsoPair patch_faces(const ToricGAlgebra& alg, const GradedIdempotent& e,
                    const std::vector<Face>& faces_order, const std::vector<IsoPair>& isos);

// Lemma-level refinement: given P over A^G invertible modulo every
// codimension-1 face ideal, returns Ptilde in GL(A^G) with off-diagonal
// entries of P*Ptilde in J^N (verified memberships).
GradedMatrix refine_matrix(const ToricGAlgebra& alg, const GradedMatrix& p_mat, int n);

// Lift of an iso-pair modulo J to an exact iso-pair over A_h with
// h = det(T T') = 1 mod J invariant.
struct ExtensionResult {
  AlgebraElem h;
  GradedMatrix t;        // a*e: the forward lift, right e-invariant
  GradedMatrix t_prime;  // e*b: the backward lift
};
ExtensionResult extend_h(const ToricGAlgebra& alg, const GradedIdempotent& e, const IsoPair& mod_j);

// Reinterprets a weight-0 graded matrix with invariant entries as a
// matrix over the invariant algebra A^G (exact, no information loss).
struct InvariantAlgebra {
  AlgebraPtr alg;  // A^G as a standalone algebra with trivial grading
  IntMat embed;    // its lattice inside the ambient one
};
InvariantAlgebra invariant_algebra(const ToricGAlgebra& alg);
GradedMatrix descend(const ToricGAlgebra& alg, const InvariantAlgebra& inv,
                     const GradedMatrix& f);

// Factorization of an automorphism over the overlap of the quotient
// cover into (automorphism over the torus chart) o (automorphism over
// the h-chart). Supported cases only; throws UnsupportedFactorization
// when the greedy procedure stalls. Matrices are weight-0 over the
// ambient Laurent algebra; numerators of the V'-side factor lie in A^G.
struct CoverFactorization {
  LocalGradedMatrix f1, f1_inv;  // torus-chart side (denominator-free)
  LocalGradedMatrix f2, f2_inv;  // h-chart side
};
CoverFactorization factor_cover(const Localization& torus_ctx, const ToricGAlgebra& main_alg,
                                const LocalGradedMatrix& f);

// The whole engine.
TrivializeOutcome trivialize(const GActionProblem& p);

// Canonical representative of a weight modulo psi of the monoid's units
// (certificate weights are reported in this form).
GroupElem canonical_weight_rep(const ToricGAlgebra& alg, const GroupElem& w);

// K0 shadow: the multiset of target weights as an element of Z[P].
struct K0Class {
  std::map<GroupElem, long, GroupElemLess> multiplicities;

  bool operator==(const K0Class& o) const { return multiplicities == o.multiplicities; }
};
K0Class k0_class(const TrivializationCertificate& cert);
K0Class k0_add(const K0Class& a, const K0Class& b);
std::string to_string(const K0Class& k);

// Direct sum of two problems over the same algebra (for additivity tests
// and batch inputs).
GActionProblem direct_sum(const GActionProblem& a, const GActionProblem& b);

}  // namespace gtoric

#endif
