#include "gtoric/monoid.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "gtoric/enumerate.hpp"

namespace gtoric {

namespace {

IntVec functional_sum(const Cone& c) {
  IntVec w(c.ambient_rank, Int(0));
  for (const IntVec& l : c.functionals) w = w + l;
  return w;
}

// Projection with kernel exactly the (saturated) column lattice of B:
// last (d - s) rows of the SNF left transform.
IntMat quotient_projection(int d, const IntMat& b) {
  if (b.cols == 0) return IntMat::identity(d);
  SNFResult s = smith_normal_form(b);
  for (const Int& x : s.d)
    if (x != 0 && x != 1)
      throw ValidationError("quotient_projection: basis not saturated");
  IntMat pi(d - b.cols, d);
  for (int i = 0; i < d - b.cols; ++i)
    for (int j = 0; j < d; ++j) pi.at(i, j) = s.u.at(b.cols + i, j);
  return pi;
}

// Canonical lift along the projection built above: U^{-1} [0; y],
// then reduced modulo the kernel lattice.
IntVec lift_through(const SNFResult& s, const IntMat& kernel, int d, const IntVec& y) {
  IntVec rhs(d, Int(0));
  for (size_t i = 0; i < y.size(); ++i) rhs[d - y.size() + i] = y[i];
  std::optional<IntVec> x = solve(s.u, rhs);
  if (!x) throw ValidationError("lift_through: unimodular solve failed (internal)");
  return reduce_mod_lattice(kernel, *x);
}

}  // namespace

std::vector<IntVec> hilbert_basis(const Cone& c, const Int& budget) {
  const int d = c.ambient_rank;
  std::vector<IntVec> gens;

  // lineality contributes a lattice basis with both signs
  const IntMat& lin = c.lineality_basis;
  for (int j = 0; j < lin.cols; ++j) {
    gens.push_back(lin.col(j));
    gens.push_back(-lin.col(j));
  }

  // pointed part lives in the quotient by the lineality lattice
  std::vector<IntVec> pointed_gens;
  if (lin.cols < d || d == 0) {
    IntMat pi = quotient_projection(d, lin);
    SNFResult lin_snf = smith_normal_form(lin.cols ? lin : IntMat(d, 0));
    std::vector<IntVec> proj_rays;
    for (const IntVec& r : c.rays) {
      IntVec pr = mul(pi, r);
      if (!is_zero(pr)) proj_rays.push_back(primitive(pr));
    }
    if (!proj_rays.empty()) {
      Cone q = cone_from_rays(d - lin.cols, proj_rays);
      // every Hilbert element lies in the parallelotope over the extreme
      // rays, hence has w-value at most W = sum of w over the rays
      IntVec w = functional_sum(q);
      std::vector<IntVec> extremes;
      for (const IntVec& r : q.rays)
        if (dot(w, r) > 0) extremes.push_back(r);
      Int bigw = 0;
      for (const IntVec& r : extremes) bigw += dot(w, r);

      IntVec lo(q.ambient_rank, Int(0)), hi(q.ambient_rank, Int(0));
      for (const IntVec& r : extremes) {
        Int wr = dot(w, r);
        for (int i = 0; i < q.ambient_rank; ++i) {
          Int coord_lo = fdiv(bigw * r[i], wr);
          Int coord_hi = cdiv(bigw * r[i], wr);
          lo[i] = std::min(lo[i], coord_lo);
          hi[i] = std::max(hi[i], coord_hi);
        }
      }

      std::vector<IntVec> pts = enumerate_box(
          lo, hi,
          [&](const IntVec& p) {
            if (is_zero(p)) return false;
            if (dot(w, p) > bigw) return false;
            return contains(q, p);
          },
          budget);

      // minimalize: drop points that decompose inside the candidate set
      std::set<IntVec, IntVecLess> pset(pts.begin(), pts.end());
      std::sort(pts.begin(), pts.end(), [&](const IntVec& a, const IntVec& b) {
        Int wa = dot(w, a), wb = dot(w, b);
        if (wa != wb) return wa < wb;
        return lex_cmp(a, b) < 0;
      });
      std::vector<IntVec> basis;
      for (const IntVec& p : pts) {
        bool decomposable = false;
        for (const IntVec& q2 : basis) {
          if (dot(w, q2) >= dot(w, p)) break;
          if (pset.count(p - q2)) {
            decomposable = true;
            break;
          }
        }
        if (!decomposable) basis.push_back(p);
      }

      // lift canonically back through the quotient
      if (lin.cols == 0) {
        pointed_gens = std::move(basis);
      } else {
        for (const IntVec& h : basis) pointed_gens.push_back(lift_through(lin_snf, lin, d, h));
      }
    }
  }
  for (IntVec& g : pointed_gens) gens.push_back(std::move(g));
  std::sort(gens.begin(), gens.end(), IntVecLess{});
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
  return gens;
}

AffineMonoid AffineMonoid::from_cone(Cone cone, Int budget) {
  AffineMonoid m;
  m.embed_ = IntMat::identity(cone.ambient_rank);
  m.cone_ = std::move(cone);
  m.full_lattice_ = true;
  m.budget_ = std::move(budget);
  return m;
}

AffineMonoid AffineMonoid::from_cone_and_lattice(Cone cone, IntMat lattice_embed, Int budget) {
  if (lattice_embed.rows != cone.ambient_rank)
    throw ValidationError("AffineMonoid: lattice embedding ambient mismatch");
  AffineMonoid m;
  m.cone_ = std::move(cone);
  m.embed_ = hnf_columns(lattice_embed);
  m.full_lattice_ =
      m.embed_.cols == m.cone_.ambient_rank && m.embed_ == IntMat::identity(m.cone_.ambient_rank);
  m.budget_ = std::move(budget);
  return m;
}

AffineMonoid AffineMonoid::from_generators(int ambient_rank, std::vector<IntVec> gens,
                                           Int budget) {
  AffineMonoid m;
  std::vector<IntVec> nonzero;
  for (IntVec& g : gens) {
    if (static_cast<int>(g.size()) != ambient_rank)
      throw ValidationError("AffineMonoid: generator dimension mismatch");
    if (!is_zero(g)) nonzero.push_back(std::move(g));
  }
  m.cone_ = nonzero.empty() ? cone_from_rays(ambient_rank, {})
                            : cone_from_rays(ambient_rank, nonzero);
  m.embed_ = IntMat::identity(ambient_rank);
  m.full_lattice_ = true;
  m.generated_ = true;
  std::sort(nonzero.begin(), nonzero.end(), IntVecLess{});
  nonzero.erase(std::unique(nonzero.begin(), nonzero.end()), nonzero.end());
  m.explicit_gens_ = std::move(nonzero);
  m.budget_ = std::move(budget);
  return m;
}

const std::vector<IntVec>& AffineMonoid::generators() const {
  std::lock_guard<std::mutex> lk(gens_mutex_);
  if (!gens_cache_) gens_cache_ = compute_generators();
  return *gens_cache_;
}

std::vector<IntVec> AffineMonoid::compute_generators() const {
  if (generated_) {
    // remove generators reachable from the others
    std::vector<IntVec> kept = explicit_gens_;
    for (size_t i = kept.size(); i-- > 0;) {
      std::vector<IntVec> rest;
      for (size_t j = 0; j < kept.size(); ++j)
        if (j != i) rest.push_back(kept[j]);
      if (nspan_member(kept[i], rest)) kept.erase(kept.begin() + i);
    }
    return kept;
  }
  if (full_lattice_) return hilbert_basis(cone_, budget_);
  Cone pulled = pullback_cone(cone_, embed_);
  std::vector<IntVec> local = hilbert_basis(pulled, budget_);
  std::vector<IntVec> out;
  for (const IntVec& g : local) out.push_back(mul(embed_, g));
  std::sort(out.begin(), out.end(), IntVecLess{});
  return out;
}

bool AffineMonoid::contains(const IntVec& x) const {
  if (static_cast<int>(x.size()) != ambient_rank())
    throw ValidationError("contains: dimension mismatch");
  if (generated_) return nspan_member(x, explicit_gens_);
  if (!gtoric::contains(cone_, x)) return false;
  if (full_lattice_) return true;
  return in_column_lattice(embed_, x);
}

namespace {

// Is x a non-negative combination of gens?  Recursion peels off the
// generators positive on the functional sum; what remains lies in the
// lineality of the generated cone, where the N-span is a full lattice.
bool nspan_impl(const IntVec& x, const std::vector<IntVec>& gens) {
  if (is_zero(x)) return true;
  if (gens.empty()) return false;
  const int n = static_cast<int>(x.size());
  Cone c = cone_from_rays(n, gens);
  if (!contains(c, x)) return false;

  IntVec w = functional_sum(c);
  std::vector<IntVec> plus, lin0;
  for (const IntVec& g : gens)
    (dot(w, g) > 0 ? plus : lin0).push_back(g);

  if (plus.empty()) {
    // cone(gens) is a subspace; the N-span equals the Z-span
    return in_column_lattice(IntMat::from_columns(n, gens), x);
  }

  // choose multiplicities for the w-positive generators with exact w budget
  Int target = dot(w, x);
  std::vector<Int> wg;
  for (const IntVec& g : plus) wg.push_back(dot(w, g));

  std::vector<Int> counts(plus.size(), Int(0));
  std::function<bool(size_t, const IntVec&, const Int&)> dfs =
      [&](size_t i, const IntVec& rem, const Int& wrem) -> bool {
    if (i == plus.size()) {
      if (wrem != 0) return false;
      return nspan_impl(rem, lin0);
    }
    Int max_k = wrem / wg[i];
    for (Int k = 0; k <= max_k; ++k) {
      IntVec r = rem;
      for (int t = 0; t < n; ++t) r[t] -= k * plus[i][t];
      if (dfs(i + 1, r, wrem - k * wg[i])) return true;
    }
    return false;
  };
  return dfs(0, x, target);
}

}  // namespace

bool nspan_member(const IntVec& x, const std::vector<IntVec>& gens) {
  return nspan_impl(x, gens);
}

AffineMonoid invariant_monoid(const AffineMonoid& m, const IntMat& u, const FinAbGroup& p) {
  if (m.generated_mode())
    throw ValidationError("invariant_monoid: requires a cone-lattice monoid");
  if (u.cols != m.ambient_rank())
    throw ValidationError("invariant_monoid: u must act on the monoid's ambient lattice");
  if (u.rows != p.coord_count())
    throw ValidationError("invariant_monoid: u rows must match P coordinates");
  // kernel lattice K = {x : u(x) = 0 in P}: project ker[u | relations]
  IntMat stacked = hstack(u, relation_matrix(p));
  IntMat ker = kernel_basis(stacked);
  IntMat k_basis(m.ambient_rank(), ker.cols);
  for (int i = 0; i < m.ambient_rank(); ++i)
    for (int j = 0; j < ker.cols; ++j) k_basis.at(i, j) = ker.at(i, j);
  k_basis = hnf_columns(k_basis);
  IntMat embed = m.full_lattice() ? k_basis : lattice_intersection(k_basis, m.lattice_embed());
  return AffineMonoid::from_cone_and_lattice(m.cone(), std::move(embed), m.budget());
}

bool is_normal(const AffineMonoid& m) {
  const std::vector<IntVec>& gens = m.generators();
  if (gens.empty()) return true;
  Cone spanned = cone_from_rays(m.ambient_rank(), gens);
  AffineMonoid saturation =
      m.full_lattice()
          ? AffineMonoid::from_cone(spanned, m.budget())
          : AffineMonoid::from_cone_and_lattice(spanned, m.lattice_embed(), m.budget());
  for (const IntVec& h : saturation.generators())
    if (!m.contains(h)) return false;
  return true;
}

bool has_nontrivial_units(const AffineMonoid& m) {
  if (m.generated_mode()) return m.cone().lineality_basis.cols > 0;
  if (m.full_lattice()) return m.cone().lineality_basis.cols > 0;
  Cone pulled = pullback_cone(m.cone(), m.lattice_embed());
  return pulled.lineality_basis.cols > 0;
}

}  // namespace gtoric
