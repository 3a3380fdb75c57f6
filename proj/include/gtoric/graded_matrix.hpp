// Graded matrices over the monoid algebra: equivariant maps between
// graded free modules. Entry (i,j) is homogeneous of weight
// source[j] - target[i]; multiplication by a weight-c element maps
// weight-w vectors to weight-(w+c) vectors, which pins the convention.

#ifndef GTORIC_GRADED_MATRIX_HPP
#define GTORIC_GRADED_MATRIX_HPP

#include <optional>
#include <vector>

#include "gtoric/algebra.hpp"

namespace gtoric {

using WeightVector = std::vector<GroupElem>;

struct GradedMatrix {
  WeightVector source;  // column weights
  WeightVector target;  // row weights
  std::vector<AlgebraElem> entries;  // row-major, target.size() x source.size()

  int rows() const { return static_cast<int>(target.size()); }
  int cols() const { return static_cast<int>(source.size()); }
  AlgebraElem& at(int i, int j) { return entries[static_cast<size_t>(i) * cols() + j]; }
  const AlgebraElem& at(int i, int j) const {
    return entries[static_cast<size_t>(i) * cols() + j];
  }
  bool operator==(const GradedMatrix& o) const {
    return source == o.source && target == o.target && entries == o.entries;
  }
};

// Validates gradedness; throws ValidationError on a violation.
GradedMatrix make_graded(const ToricGAlgebra& alg, WeightVector source, WeightVector target,
                         std::vector<AlgebraElem> entries);
void check_graded(const ToricGAlgebra& alg, const GradedMatrix& m);

GradedMatrix graded_identity(const ToricGAlgebra& alg, const WeightVector& w);
GradedMatrix graded_zero(const ToricGAlgebra& alg, const WeightVector& source,
                         const WeightVector& target);

// Standard projector onto the first k coordinates of a free module.
GradedMatrix standard_projector(const ToricGAlgebra& alg, const WeightVector& w, int k);

GradedMatrix add(const ToricGAlgebra& alg, const GradedMatrix& f, const GradedMatrix& g);
GradedMatrix sub(const ToricGAlgebra& alg, const GradedMatrix& f, const GradedMatrix& g);

// Matrix product f*g (f after g); requires f.source == g.target.
GradedMatrix compose(const ToricGAlgebra& alg, const GradedMatrix& f, const GradedMatrix& g);

GradedMatrix direct_sum(const ToricGAlgebra& alg, const GradedMatrix& f, const GradedMatrix& g);

// Determinant of a graded endomorphism (equal source and target weights);
// always homogeneous of weight zero.
AlgebraElem det_endo(const ToricGAlgebra& alg, const GradedMatrix& f);

// Unit test and inverse for algebra elements: over a domain R and a
// cancellative torsion-free monoid, units are r e_q with r a unit of R
// and q a unit of the monoid.
bool is_unit(const ToricGAlgebra& alg, const AlgebraElem& x);
std::optional<AlgebraElem> unit_inverse(const ToricGAlgebra& alg, const AlgebraElem& x);

struct NotInvertible : ValidationError {
  explicit NotInvertible(const std::string& w) : ValidationError(w) {}
};

// Adjugate of a square matrix (not necessarily weight-balanced).
GradedMatrix adjugate(const ToricGAlgebra& alg, const GradedMatrix& f);

// Exact inverse via adjugate; throws NotInvertible unless det is a unit.
GradedMatrix invert(const ToricGAlgebra& alg, const GradedMatrix& f);

// Mask of entries whose prescribed weight class is realizable in A (the
// positions where an equivariant map may be nonzero).
std::vector<std::vector<bool>> invariant_entry_mask(const ToricGAlgebra& alg,
                                                    const GradedMatrix& f);

// Entrywise face restriction (reduction mod the face ideal realized
// inside A via the section).
GradedMatrix restrict_to_face(const ToricGAlgebra& alg, const Face& tau, const GradedMatrix& f);

bool is_idempotent(const ToricGAlgebra& alg, const GradedMatrix& e);

struct GradedIdempotent {
  GradedMatrix e;
};

// Validates e*e = e, square, equal weights.
GradedIdempotent make_idempotent(const ToricGAlgebra& alg, GradedMatrix e);

struct StructuralViolation : ValidationError {
  explicit StructuralViolation(const std::string& w) : ValidationError(w) {}
};

// Block decomposition of an idempotent along a quotient P -> P3: basis
// indices grouped by the image class of their weight. Off-block entries
// must vanish (they do for any graded idempotent; violations signal
// malformed input).
struct WeightBlock {
  GroupElem cls;             // class in P3
  std::vector<int> indices;  // positions in the original basis
  GradedIdempotent idem;
};
std::vector<WeightBlock> weight_split(const ToricGAlgebra& alg, const GradedIdempotent& e,
                                      const AbGroupHom& quotient);

// Matrices over a localization context.
struct LocalGradedMatrix {
  WeightVector source;
  WeightVector target;
  std::vector<LocalizedElem> entries;

  int rows() const { return static_cast<int>(target.size()); }
  int cols() const { return static_cast<int>(source.size()); }
  LocalizedElem& at(int i, int j) { return entries[static_cast<size_t>(i) * cols() + j]; }
  const LocalizedElem& at(int i, int j) const {
    return entries[static_cast<size_t>(i) * cols() + j];
  }
};

LocalGradedMatrix to_local(const GradedMatrix& m, int k = 0);
LocalGradedMatrix compose(const Localization& ctx, const LocalGradedMatrix& f,
                          const LocalGradedMatrix& g);
bool eq(const Localization& ctx, const LocalGradedMatrix& f, const LocalGradedMatrix& g);
void check_graded(const Localization& ctx, const LocalGradedMatrix& m);

}  // namespace gtoric

#endif
