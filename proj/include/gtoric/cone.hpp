// Rational polyhedral cones with both generator (ray) and functional
// (half-space) descriptions, the face lattice, and span reductions.
//
// Cones are not assumed pointed: lineality is first-class, and a cone is
// "strongly convex" here exactly when it spans the ambient space, which is
// the normalization the span reduction produces. Use spans_ambient() to
// test it; nothing in this module assumes pointedness.
//
// Dualization is an incremental double description computation, intended
// for desk scale (ambient rank <= 6).

#ifndef GTORIC_CONE_HPP
#define GTORIC_CONE_HPP

#include <vector>

#include "gtoric/lattice.hpp"

namespace gtoric {

struct Cone {
  int ambient_rank = 0;
  std::vector<IntVec> rays;         // canonical: primitive, sorted
  std::vector<IntVec> functionals;  // canonical: primitive, sorted
  IntMat lineality_basis;           // HNF basis of sigma cap (-sigma) cap L

  bool operator==(const Cone& o) const {
    return ambient_rank == o.ambient_rank && rays == o.rays && functionals == o.functionals;
  }
};

struct Face {
  Cone parent;
  std::vector<int> zero_set;   // functional indices vanishing on the face
  std::vector<IntVec> rays;    // sub-list of parent rays lying in the face
  IntMat span_basis;           // HNF basis of L cap span(face)
  int dim = 0;

  // Face identity is its ray set.
  bool operator==(const Face& o) const { return rays == o.rays; }
};

Cone cone_from_rays(int ambient_rank, std::vector<IntVec> rays);
Cone cone_from_inequalities(int ambient_rank, std::vector<IntVec> functionals);

bool spans_ambient(const Cone& c);
int dim(const Cone& c);

// Membership by functionals: all l_i(m) >= 0.
bool contains(const Cone& c, const IntVec& m);

// True iff l_i(m) > 0 for every functional.
bool strict_interior(const Cone& c, const IntVec& m);

// All faces, including the cone itself and the smallest face, sorted by
// (dim, rays). Faces are identified by their ray sets.
std::vector<Face> faces(const Cone& c);

std::vector<Face> codim1_faces(const Cone& c);

// The lineality face sigma cap (-sigma), with its saturated sublattice.
Face smallest_face(const Cone& c);

// Whole cone viewed as a face of itself.
Face full_face(const Cone& c);

// True iff m lies on the face (in the cone and all zero_set functionals vanish).
bool on_face(const Face& f, const IntVec& m);

// Re-expresses the cone inside L cap span(sigma) so it spans the new
// ambient lattice; embedding maps new coordinates back to old ones.
struct SpanReduction {
  Cone cone;
  IntMat embedding;
};
SpanReduction span_reduce(const Cone& c);

// The cone pulled back along a sublattice embedding (functionals compose
// with the embedding matrix).
Cone pullback_cone(const Cone& c, const IntMat& embed);

// Double description: generators of {x : <x, g> >= 0 for all g}.
// Returns the lineality basis (HNF) and the extreme rays modulo lineality
// (primitive, reduced mod the lineality lattice, sorted).
struct GeneratorDescription {
  IntMat lineality;
  std::vector<IntVec> extreme_rays;
};
GeneratorDescription dual_description(int ambient_rank, const std::vector<IntVec>& constraints);

}  // namespace gtoric

#endif
