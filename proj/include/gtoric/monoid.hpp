// Affine monoids sigma cap M: Hilbert-type generating sets (Gordon's
// lemma at desk scale), membership, invariant submonoids ker(u) cap sigma,
// and the normality/unit predicates.

#ifndef GTORIC_MONOID_HPP
#define GTORIC_MONOID_HPP

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "gtoric/cone.hpp"

namespace gtoric {

inline const Int kDefaultBudget = 1000000;

// sigma cap M for a sublattice M of the ambient lattice (NormalPair mode),
// or the submonoid generated by an explicit list of lattice points
// (Generated mode). Points are always in ambient coordinates.
class AffineMonoid {
 public:
  static AffineMonoid from_cone(Cone cone, Int budget = kDefaultBudget);
  static AffineMonoid from_cone_and_lattice(Cone cone, IntMat lattice_embed,
                                            Int budget = kDefaultBudget);
  static AffineMonoid from_generators(int ambient_rank, std::vector<IntVec> gens,
                                      Int budget = kDefaultBudget);

  const Cone& cone() const { return cone_; }
  const IntMat& lattice_embed() const { return embed_; }
  bool full_lattice() const { return full_lattice_; }
  int ambient_rank() const { return cone_.ambient_rank; }
  const Int& budget() const { return budget_; }
  bool generated_mode() const { return generated_; }

  // Minimal generating set; computed once, cached (thread-safe).
  const std::vector<IntVec>& generators() const;

  bool contains(const IntVec& x) const;

  bool operator==(const AffineMonoid& o) const {
    return cone_ == o.cone_ && embed_ == o.embed_ && generated_ == o.generated_ &&
           explicit_gens_ == o.explicit_gens_;
  }

 private:
  Cone cone_;
  IntMat embed_;  // ambient x d basis of M (HNF); identity if full lattice
  bool full_lattice_ = true;
  bool generated_ = false;
  std::vector<IntVec> explicit_gens_;
  Int budget_;

  mutable std::mutex gens_mutex_;
  mutable std::optional<std::vector<IntVec>> gens_cache_;

  std::vector<IntVec> compute_generators() const;

 public:
  AffineMonoid(const AffineMonoid& o)
      : cone_(o.cone_),
        embed_(o.embed_),
        full_lattice_(o.full_lattice_),
        generated_(o.generated_),
        explicit_gens_(o.explicit_gens_),
        budget_(o.budget_) {
    std::lock_guard<std::mutex> lk(o.gens_mutex_);
    gens_cache_ = o.gens_cache_;
  }
  AffineMonoid& operator=(const AffineMonoid&) = delete;
  AffineMonoid() = default;
};

// x as a non-negative integer combination of gens; exact recursive search.
bool nspan_member(const IntVec& x, const std::vector<IntVec>& gens);

// The monoid sigma cap ker(u), where u maps the ambient lattice to P
// (u acts on ambient coordinates; rows are P's lifted coordinates).
AffineMonoid invariant_monoid(const AffineMonoid& m, const IntMat& u, const FinAbGroup& p);

// Saturation test relative to the monoid's reference lattice: true iff the
// monoid equals sigma' cap M, where sigma' is the cone its generators span.
// For monoids of the form sigma cap M this always holds.
bool is_normal(const AffineMonoid& m);

bool has_nontrivial_units(const AffineMonoid& m);

// Hilbert basis of a cone intersected with the full lattice Z^d, in the
// cone's own coordinates (the core of generators()). Exposed for reuse.
std::vector<IntVec> hilbert_basis(const Cone& c, const Int& budget);

}  // namespace gtoric

#endif
