// Exact integer linear algebra over lattices and finitely generated
// abelian groups: Smith normal form with transforms, saturated kernels,
// cokernel presentations, subgroup images.
//
// Everything here is a pure function on immutable values.

#ifndef GTORIC_LATTICE_HPP
#define GTORIC_LATTICE_HPP

#include <optional>
#include <vector>

#include "gtoric/ints.hpp"

namespace gtoric {

struct IntMat {
  int rows = 0;
  int cols = 0;
  std::vector<Int> a;  // row-major

  IntMat() = default;
  IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Int(0)) {}

  Int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Int& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static IntMat identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static IntMat from_columns(int rows, const std::vector<IntVec>& cols);
  static IntMat from_rows(const std::vector<IntVec>& rows);

  IntVec col(int j) const {
    IntVec v(rows);
    for (int i = 0; i < rows; ++i) v[i] = at(i, j);
    return v;
  }
  IntVec row(int i) const {
    IntVec v(cols);
    for (int j = 0; j < cols; ++j) v[j] = at(i, j);
    return v;
  }

  bool operator==(const IntMat& o) const {
    return rows == o.rows && cols == o.cols && a == o.a;
  }
};

IntMat mul(const IntMat& x, const IntMat& y);
IntVec mul(const IntMat& x, const IntVec& v);
IntMat transpose(const IntMat& x);
IntMat hstack(const IntMat& x, const IntMat& y);

// U*M*V = diag(d) with U, V unimodular and d[i] | d[i+1], all d[i] >= 0.
struct SNFResult {
  IntMat u;            // rows x rows
  IntMat v;            // cols x cols
  std::vector<Int> d;  // length min(rows, cols)
};

SNFResult smith_normal_form(const IntMat& m);

int rank(const IntMat& m);

// Determinant of a square integer matrix.
Int det(const IntMat& m);

// Canonical column Hermite form of the lattice spanned by the columns.
// Zero columns are dropped; the result is the unique HNF basis.
IntMat hnf_columns(const IntMat& m);

// Columns form the unique HNF basis of {v : M v = 0}. The returned basis
// is saturated: the kernel is a direct summand of the domain lattice.
IntMat kernel_basis(const IntMat& m);

// Reduces v modulo the lattice spanned by basis columns (basis must be in
// column HNF). The result is the canonical coset representative.
IntVec reduce_mod_lattice(const IntMat& hnf_basis, IntVec v);

// Solves M x = b exactly over the integers.
std::optional<IntVec> solve(const IntMat& m, const IntVec& b);

// True iff b lies in the lattice spanned by the columns of m.
bool in_column_lattice(const IntMat& m, const IntVec& b);

// Basis (HNF columns) of the intersection of two column lattices.
IntMat lattice_intersection(const IntMat& x, const IntMat& y);

// A finitely generated abelian group in invariant-factor form: torsion
// factors (each >= 2, forming a divisibility chain) followed by a free
// part. Coordinates of elements list torsion components first.
struct FinAbGroup {
  int free_rank = 0;
  std::vector<Int> torsion;

  int coord_count() const { return static_cast<int>(torsion.size()) + free_rank; }
  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
  bool operator==(const FinAbGroup& o) const {
    return free_rank == o.free_rank && torsion == o.torsion;
  }

  static FinAbGroup free_group(int rank) { return FinAbGroup{rank, {}}; }
};

// Element of a FinAbGroup; torsion components are reduced eagerly into
// [0, factor), equality is componentwise.
struct GroupElem {
  IntVec torsion_part;
  IntVec free_part;

  bool operator==(const GroupElem& o) const {
    return torsion_part == o.torsion_part && free_part == o.free_part;
  }
  bool operator!=(const GroupElem& o) const { return !(*this == o); }
};

// Canonical order on elements of a fixed group; used for deterministic output.
int cmp(const GroupElem& a, const GroupElem& b);

struct GroupElemLess {
  bool operator()(const GroupElem& a, const GroupElem& b) const { return cmp(a, b) < 0; }
};

GroupElem reduce(const FinAbGroup& g, const IntVec& raw);
GroupElem zero_elem(const FinAbGroup& g);
GroupElem add(const FinAbGroup& g, const GroupElem& a, const GroupElem& b);
GroupElem sub(const FinAbGroup& g, const GroupElem& a, const GroupElem& b);
GroupElem neg(const FinAbGroup& g, const GroupElem& a);
bool is_zero(const GroupElem& a);
IntVec lift(const GroupElem& a);  // torsion coords then free coords, verbatim
std::string to_string(const GroupElem& a);

// Relation matrix of g on its lifted coordinates: columns d_r * e_r for each
// torsion factor (the free part has no relations).
IntMat relation_matrix(const FinAbGroup& g);

// Homomorphism between finitely generated abelian groups, given by a matrix
// on lifted coordinates. Must map the source relations to zero; validated.
struct AbGroupHom {
  FinAbGroup src;
  FinAbGroup dst;
  IntMat m;  // dst.coord_count() x src.coord_count()
};

AbGroupHom make_hom(const FinAbGroup& src, const FinAbGroup& dst, IntMat m);
GroupElem apply(const AbGroupHom& h, const GroupElem& x);

// Cokernel of an integer matrix: canonical presentation of Z^rows / im(M)
// together with the projection map.
struct CokernelPresentation {
  FinAbGroup group;
  IntMat u;            // the SNF left transform
  std::vector<Int> d;  // SNF invariant factors
};

CokernelPresentation cokernel(const IntMat& m);
GroupElem project(const CokernelPresentation& c, const IntVec& v);
AbGroupHom projection_hom(const CokernelPresentation& c, const FinAbGroup& src);

// The subgroup of P generated by the classes of the columns of psi
// (psi acts on lifted coordinates of P), in canonical form, with the
// inclusion Q -> P, the projection P -> P/Q, and a section of the
// inclusion on elements known to lie in Q.
struct SubgroupPresentation {
  FinAbGroup parent;          // P
  FinAbGroup group;           // Q in canonical form
  IntMat incl;                // P-coords x Q-coords: images of Q's generators
  FinAbGroup quotient;        // P/Q in canonical form
  AbGroupHom quotient_proj;   // P -> P/Q
  IntMat gen_classes;         // Q-coords x cols(psi): columns' classes in Q
};

SubgroupPresentation hom_image_group(const IntMat& psi, const FinAbGroup& p);

// Expresses an element of P lying in the subgroup in Q-coordinates.
std::optional<GroupElem> subgroup_section(const SubgroupPresentation& s, const GroupElem& w);

}  // namespace gtoric

#endif
