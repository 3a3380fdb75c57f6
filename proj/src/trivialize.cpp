#include "gtoric/trivialize.hpp"

#include <algorithm>
#include <functional>

namespace gtoric {

namespace {

struct InternalError : std::runtime_error {
  explicit InternalError(const std::string& w)
      : std::runtime_error("trivializer internal check failed: " + w) {}
};

WeightVector all_zero_weights(const FinAbGroup& g, int n) {
  return WeightVector(n, zero_elem(g));
}

std::optional<AlgebraElem> exact_divide_general(const ToricGAlgebra& alg, const AlgebraElem& f,
                                                const AlgebraElem& g, long budget = 20000);

// -- support transport between algebras (entries carried verbatim, the
//    lattice points re-coordinatized) --

AlgebraElem map_support(const ToricGAlgebra& to, const AlgebraElem& x,
                        const std::function<IntVec(const IntVec&)>& f) {
  AlgebraElem out;
  for (const auto& [pt, c] : x.terms) out = add(to, out, monomial(to, f(pt), c));
  return out;
}

GradedMatrix map_matrix(const ToricGAlgebra& to, const GradedMatrix& m, WeightVector src,
                        WeightVector tgt, const std::function<IntVec(const IntVec&)>& f) {
  std::vector<AlgebraElem> ent;
  ent.reserve(m.entries.size());
  for (const AlgebraElem& e : m.entries) ent.push_back(map_support(to, e, f));
  return make_graded(to, std::move(src), std::move(tgt), std::move(ent));
}

IntVec into_lattice(const IntMat& basis, const IntVec& p) {
  std::optional<IntVec> q = solve(basis, p);
  if (!q) throw InternalError("support point not in the expected sublattice");
  return *q;
}

// -- shortest lattice preimages (canonical monomial choices) --

// All x with map*x = target modulo the relations; returns the L1-shortest,
// ties broken lexicographically. nullopt if the congruence is unsolvable.
std::optional<IntVec> shortest_preimage(const IntMat& map, const IntMat& relations,
                                        const IntVec& target) {
  IntMat stacked = relations.cols ? hstack(map, relations) : map;
  std::optional<IntVec> sol = solve(stacked, target);
  if (!sol) return std::nullopt;
  IntVec x0(sol->begin(), sol->begin() + map.cols);

  // kernel of the congruence, projected to the x-coordinates
  IntMat ker = kernel_basis(stacked);
  IntMat b(map.cols, ker.cols);
  for (int i = 0; i < map.cols; ++i)
    for (int j = 0; j < ker.cols; ++j) b.at(i, j) = ker.at(i, j);
  b = hnf_columns(b);
  if (b.cols == 0) return x0;

  // greedy descent to a local optimum first
  bool improved = true;
  while (improved) {
    improved = false;
    for (int j = 0; j < b.cols; ++j) {
      for (int sgn : {1, -1}) {
        IntVec cand = x0 + Int(sgn) * b.col(j);
        if (l1_norm(cand) < l1_norm(x0)) {
          x0 = cand;
          improved = true;
        }
      }
    }
  }

  // exhaustive box: |a_i| <= ||row_i(B^+)||_inf * (2 L1(x0)), with
  // B^+ = adj(B^T B) B^T / det(B^T B) computed exactly
  IntMat bt = transpose(b);
  IntMat btb = mul(bt, b);
  Int dd = det(btb);
  if (dd == 0) throw InternalError("kernel basis not full rank");
  // adjugate of btb via minors
  const int k = btb.rows;
  IntMat adj(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      IntMat minor(k - 1, k - 1);
      for (int r = 0, rr = 0; r < k; ++r) {
        if (r == j) continue;
        for (int c = 0, cc = 0; c < k; ++c) {
          if (c == i) continue;
          minor.at(rr, cc) = btb.at(r, c);
          ++cc;
        }
        ++rr;
      }
      Int d = det(minor);
      adj.at(i, j) = ((i + j) % 2 == 0) ? d : -d;
    }
  IntMat pseudo_num = mul(adj, bt);  // B^+ = pseudo_num / dd
  Int radius = 2 * l1_norm(x0) + 1;
  std::vector<long> bound(k);
  for (int i = 0; i < k; ++i) {
    Int mx = 0;
    for (int j = 0; j < pseudo_num.cols; ++j) {
      Int av = abs(pseudo_num.at(i, j));
      if (av > mx) mx = av;
    }
    bound[i] = cdiv(mx * radius, abs(dd)).get_si();
  }

  IntVec best = x0;
  std::vector<long> a(k, 0);
  std::function<void(int)> rec = [&](int i) {
    if (i == k) {
      IntVec cand = x0;
      for (int j = 0; j < k; ++j) cand = cand + Int(a[j]) * b.col(j);
      Int ln = l1_norm(cand);
      Int lb = l1_norm(best);
      if (ln < lb || (ln == lb && lex_cmp(cand, best) < 0)) best = cand;
      return;
    }
    for (long v = -bound[i]; v <= bound[i]; ++v) {
      a[i] = v;
      rec(i + 1);
    }
  };
  Int vol = 1;
  for (int i = 0; i < k; ++i) vol *= 2 * Int(bound[i]) + 1;
  if (vol > 2000000) throw ResourceError("shortest_preimage: search box too large");
  rec(0);
  return best;
}

// Shortest monomial exponent c with psi(c) = w in P; the relations are
// P's torsion.
std::optional<IntVec> monomial_of_weight(const ToricGAlgebra& alg, const GroupElem& w) {
  return shortest_preimage(alg.psi(), relation_matrix(alg.grading()), lift(w));
}

// -- pair verification --

bool matrix_is_zero(const GradedMatrix& m) {
  for (const AlgebraElem& e : m.entries)
    if (!e.is_zero()) return false;
  return true;
}

void verify_exact_pair(const ToricGAlgebra& alg, const GradedMatrix& e, const IsoPair& p,
                       const std::string& where) {
  if (!(compose(alg, p.fwd, p.bwd) == graded_identity(alg, p.lambda)))
    throw InternalError(where + ": fwd*bwd != id");
  if (!(compose(alg, p.bwd, p.fwd) == e)) throw InternalError(where + ": bwd*fwd != e");
}

// -- invariant algebra and descent --

}  // namespace

InvariantAlgebra invariant_algebra(const ToricGAlgebra& alg) {
  AffineMonoid inv = invariant_monoid_of(alg);
  Cone local = pullback_cone(inv.cone(), inv.lattice_embed());
  InvariantAlgebra out;
  out.embed = inv.lattice_embed();
  out.alg = std::make_shared<ToricGAlgebra>(
      alg.coeff(), AffineMonoid::from_cone(local, alg.monoid().budget()), FinAbGroup{},
      IntMat(0, local.ambient_rank));
  return out;
}

GradedMatrix descend(const ToricGAlgebra& alg, const InvariantAlgebra& inv,
                     const GradedMatrix& f) {
  const GroupElem z = zero_elem(alg.grading());
  for (const GroupElem& w : f.source)
    if (!(w == z)) throw ValidationError("descend: source weights must be zero");
  for (const GroupElem& w : f.target)
    if (!(w == z)) throw ValidationError("descend: target weights must be zero");
  for (const AlgebraElem& e : f.entries)
    if (!is_invariant(alg, e)) throw ValidationError("descend: entry is not invariant");

  WeightVector src = all_zero_weights(FinAbGroup{}, f.cols());
  WeightVector tgt = all_zero_weights(FinAbGroup{}, f.rows());
  return map_matrix(*inv.alg, f, src, tgt,
                    [&](const IntVec& p) { return into_lattice(inv.embed, p); });
}

// -- reduction to faithful action --

FaithfulReduction reduce_to_faithful(const GActionProblem& p) {
  const ToricGAlgebra& alg = *p.alg;
  if (!p.module) throw ValidationError("reduce_to_faithful: requires an idempotent module");
  const GradedIdempotent& e = *p.module;

  FaithfulReduction out;
  out.image = hom_image_group(alg.psi(), alg.grading());
  const SubgroupPresentation& s = out.image;

  std::vector<WeightBlock> blocks = weight_split(alg, e, s.quotient_proj);
  for (WeightBlock& b : blocks) {
    FaithfulBlock fb;
    fb.indices = b.indices;
    // twist representative: zero for the zero class, else the
    // lexicographically smallest weight in the block
    GroupElem a = zero_elem(alg.grading());
    if (!is_zero(b.cls)) {
      a = b.idem.e.source[0];
      for (const GroupElem& w : b.idem.e.source)
        if (cmp(w, a) < 0) a = w;
    }
    fb.twist = a;

    // twisted weights land in Q; re-express in Q's coordinates
    WeightVector qw;
    for (const GroupElem& w : b.idem.e.source) {
      GroupElem shifted = sub(alg.grading(), w, a);
      std::optional<GroupElem> q = subgroup_section(s, shifted);
      if (!q) throw InternalError("twisted weight not in the image subgroup");
      qw.push_back(*q);
    }

    fb.alg = std::make_shared<ToricGAlgebra>(alg.coeff(), alg.monoid(), s.group, s.gen_classes);
    fb.idem = make_idempotent(*fb.alg,
                              GradedMatrix{qw, qw, b.idem.e.entries});
    out.blocks.push_back(std::move(fb));
  }
  return out;
}

// -- patching along codimension-1 faces --

namespace {

bool monomial_in_prefix_ideal(const Cone& sigma, const std::vector<Face>& faces, size_t r,
                              const IntVec& m) {
  // m in J_r = I_1 cap ... cap I_r: off every one of the first r faces
  for (size_t j = 0; j < r; ++j) {
    bool on = true;
    for (int i : faces[j].zero_set)
      if (dot(sigma.functionals[i], m) != 0) {
        on = false;
        break;
      }
    if (on) return false;
  }
  return true;
}

bool congruent_mod_prefix(const ToricGAlgebra& alg, const std::vector<Face>& faces, size_t r,
                          const GradedMatrix& x, const GradedMatrix& y) {
  GradedMatrix d = sub(alg, x, y);
  for (const AlgebraElem& e : d.entries)
    for (const auto& [pt, c] : e.terms)
      if (!monomial_in_prefix_ideal(alg.monoid().cone(), faces, r, pt)) return false;
  return true;
}

GradedMatrix restrict_matrix(const ToricGAlgebra& alg, const Face& tau, const GradedMatrix& m) {
  return restrict_to_face(alg, tau, m);
}

}  // namespace

IsoPair patch_faces(const ToricGAlgebra& alg, const GradedIdempotent& e,
                    const std::vector<Face>& faces_order, const std::vector<IsoPair>& isos) {
  if (faces_order.empty()) throw ValidationError("patch_faces: no faces");
  if (faces_order.size() != isos.size())
    throw ValidationError("patch_faces: faces and isomorphisms must correspond");
  for (size_t i = 1; i < isos.size(); ++i)
    if (isos[i].lambda != isos[0].lambda)
      throw ValidationError("patch_faces: all face isomorphisms need a common target");

  GradedMatrix a = isos[0].fwd;
  GradedMatrix b = isos[0].bwd;
  GradedMatrix id_f = graded_identity(alg, isos[0].lambda);

  auto verify = [&](size_t r) {
    if (!congruent_mod_prefix(alg, faces_order, r, compose(alg, a, b), id_f))
      throw InternalError("patch_faces: fwd*bwd != id mod J_r at r=" + std::to_string(r));
    if (!congruent_mod_prefix(alg, faces_order, r, compose(alg, b, a), e.e))
      throw InternalError("patch_faces: bwd*fwd != e mod J_r at r=" + std::to_string(r));
  };
  verify(1);

  for (size_t r = 1; r < faces_order.size(); ++r) {
    const Face& tau = faces_order[r];
    const IsoPair& eta = isos[r];
    // correction phi' = section(restrict(eta o phi^{-1})) and its reverse;
    // after correcting, phi and eta agree modulo (J_r + I_{r+1}) and glue
    // to the unique pair modulo J_{r+1} (monomial-section merge)
    GradedMatrix c = restrict_matrix(alg, tau, compose(alg, eta.fwd, b));
    GradedMatrix c_rev = restrict_matrix(alg, tau, compose(alg, a, eta.bwd));
    GradedMatrix a_tmp = compose(alg, c, a);
    GradedMatrix b_tmp = compose(alg, b, c_rev);
    a = add(alg, a_tmp, sub(alg, eta.fwd, restrict_matrix(alg, tau, a_tmp)));
    b = add(alg, b_tmp, sub(alg, eta.bwd, restrict_matrix(alg, tau, b_tmp)));
    verify(r + 1);
  }
  return IsoPair{std::move(a), std::move(b), isos[0].lambda};
}

// -- lift to A_h --

ExtensionResult extend_h(const ToricGAlgebra& alg, const GradedIdempotent& e,
                         const IsoPair& mod_j) {
  ExtensionResult out;
  out.t = compose(alg, mod_j.fwd, e.e);       // right e-invariant forward lift
  out.t_prime = compose(alg, e.e, mod_j.bwd); // left e-invariant backward lift
  GradedMatrix tt = compose(alg, out.t, out.t_prime);
  out.h = det_endo(alg, tt);
  if (out.h.is_zero()) throw ValidationError("extend_h: degenerate lift, det(TT') = 0");
  if (!is_invariant(alg, out.h)) throw InternalError("extend_h: det(TT') not invariant");
  // h = 1 mod J: every monomial of h - 1 strictly inside the cone
  AlgebraElem hm1 = sub(alg, out.h, one(alg));
  for (const auto& [pt, c] : hm1.terms)
    if (!strict_interior(alg.monoid().cone(), pt))
      throw InternalError("extend_h: det(TT') != 1 mod J");
  return out;
}

// -- refinement of invariant matrices into powers of J --

GradedMatrix refine_matrix(const ToricGAlgebra& alg, const GradedMatrix& p_mat, int n) {
  const int m = p_mat.rows();
  if (p_mat.cols() != m) throw ValidationError("refine_matrix: not square");
  for (const AlgebraElem& x : p_mat.entries)
    if (!is_invariant(alg, x)) throw ValidationError("refine_matrix: entries must be invariant");

  std::vector<Face> c1 = codim1_faces(alg.monoid().cone());
  GradedMatrix ptilde = graded_identity(alg, p_mat.source);
  GradedMatrix b = p_mat;

  // step 1: per-face retracted inverses bring B = P*Ptilde to Id mod J
  for (const Face& tau : c1) {
    GradedMatrix retr = restrict_to_face(alg, tau, b);
    GradedMatrix retr_inv;
    try {
      retr_inv = invert(alg, retr);
    } catch (const NotInvertible&) {
      throw ValidationError("refine_matrix: input not invertible modulo a codim-1 face ideal");
    }
    ptilde = compose(alg, ptilde, retr_inv);
    b = compose(alg, b, retr_inv);
  }
  auto off_diag_in = [&](const GradedMatrix& mat, int power) {
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j && !ideal_J_power_member(alg, mat.at(i, j), power)) return false;
    return true;
  };
  if (!c1.empty()) {
    GradedMatrix dmi = sub(alg, b, graded_identity(alg, p_mat.source));
    for (const AlgebraElem& x : dmi.entries)
      for (const auto& [pt, cc] : x.terms)
        if (!strict_interior(alg.monoid().cone(), pt))
          throw InternalError("refine_matrix: P*Ptilde != Id mod J after retractions");
  }

  // induction: elementary column operations push off-diagonals deeper
  for (int level = 1; level < n; ++level) {
    int guard = 4 * n + 4;
    while (!off_diag_in(b, level + 1)) {
      if (--guard < 0) throw InternalError("refine_matrix: column sweeps did not converge");
      for (int pass = 0; pass < 2; ++pass)
        for (int j = 0; j < m; ++j)
          for (int i = 0; i < m; ++i) {
            if (i == j) continue;
            bool lower = i > j;
            if ((pass == 0) != lower) continue;
            // C_i <- C_i - B_{ji} C_j
            const AlgebraElem coefficient = b.at(j, i);
            if (coefficient.is_zero()) continue;
            GradedMatrix el = graded_identity(alg, p_mat.source);
            el.at(j, i) = neg(alg, coefficient);
            check_graded(alg, el);
            ptilde = compose(alg, ptilde, el);
            b = compose(alg, b, el);
          }
    }
  }

  // final contract: unit determinant and verified memberships
  AlgebraElem d = det_endo(alg, ptilde);
  if (!is_unit(alg, d)) throw InternalError("refine_matrix: det(Ptilde) is not a unit");
  if (n >= 1 && !off_diag_in(compose(alg, p_mat, ptilde), n))
    throw InternalError("refine_matrix: off-diagonal membership verification failed");
  return ptilde;
}

// -- torus-side splitting --

namespace {

// Split of an idempotent with constant (degree-zero) entries: exact
// linear algebra over the coefficient ring.
struct SplitPair {
  GradedMatrix basis;   // n x m, columns span im(e)
  GradedMatrix coords;  // m x n, coords*basis = Id
};

std::optional<SplitPair> split_constant(const ToricGAlgebra& alg, const GradedMatrix& e) {
  const int n = e.rows();
  for (const AlgebraElem& x : e.entries) {
    if (x.is_zero()) continue;
    if (x.terms.size() != 1 || !is_zero(x.terms.begin()->first)) return std::nullopt;
  }
  auto coeff_at = [&](int i, int j) -> Scalar {
    const AlgebraElem& x = e.at(i, j);
    return x.is_zero() ? Scalar(0) : x.terms.begin()->second;
  };

  if (alg.coeff().kind == RingKind::integers) {
    // integer idempotent: image is a direct summand; HNF basis + SNF retraction
    IntMat cols(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cols.at(i, j) = coeff_at(i, j).get_num();
    IntMat basis = hnf_columns(cols);
    const int m = basis.cols;
    SNFResult s = smith_normal_form(basis);
    for (const Int& dv : s.d)
      if (dv != 0 && dv != 1) return std::nullopt;  // not a direct summand: not idempotent
    // retraction: C = V [I 0] U
    IntMat mid(m, n);
    for (int i = 0; i < m; ++i) mid.at(i, i) = 1;
    IntMat c = mul(s.v, mul(mid, s.u));
    SplitPair sp;
    sp.basis = graded_zero(alg, all_zero_weights(alg.grading(), m), e.target);
    sp.coords = graded_zero(alg, e.source, all_zero_weights(alg.grading(), m));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < m; ++j) sp.basis.at(i, j) = constant(alg, Scalar(basis.at(i, j)));
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) sp.coords.at(i, j) = constant(alg, Scalar(c.at(i, j)));
    return sp;
  }

  // field case: column reduction
  std::vector<std::vector<Scalar>> mtx(n, std::vector<Scalar>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mtx[i][j] = coeff_at(i, j);
  // gather a basis of the column space with an explicit left inverse:
  // row-reduce the matrix whose columns are e's columns
  std::vector<std::vector<Scalar>> basis_cols;
  std::vector<int> pivot_rows;
  for (int j = 0; j < n; ++j) {
    std::vector<Scalar> col(n);
    for (int i = 0; i < n; ++i) col[i] = mtx[i][j];
    // reduce against chosen basis columns
    for (size_t t = 0; t < basis_cols.size(); ++t) {
      Scalar factor = col[pivot_rows[t]] / basis_cols[t][pivot_rows[t]];
      if (factor != 0)
        for (int i = 0; i < n; ++i) col[i] -= factor * basis_cols[t][i];
    }
    int pr = -1;
    for (int i = 0; i < n; ++i)
      if (col[i] != 0) {
        pr = i;
        break;
      }
    if (pr >= 0) {
      basis_cols.push_back(col);
      pivot_rows.push_back(pr);
    }
  }
  const int m = static_cast<int>(basis_cols.size());
  // coords: solve coords * basis = Id via the pivot structure (basis is
  // column-echelon with distinct pivot rows)
  SplitPair sp;
  sp.basis = graded_zero(alg, all_zero_weights(alg.grading(), m), e.target);
  sp.coords = graded_zero(alg, e.source, all_zero_weights(alg.grading(), m));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      if (basis_cols[j][i] != 0) sp.basis.at(i, j) = constant(alg, basis_cols[j][i]);
  // back-substitution for the left inverse rows
  for (int t = 0; t < m; ++t) {
    // row vector r with r * basis = unit vector t
    std::vector<Scalar> r(n, Scalar(0));
    r[pivot_rows[t]] = Scalar(1) / basis_cols[t][pivot_rows[t]];
    // clear contributions of other basis columns at their pivots
    for (int s = m - 1; s >= 0; --s) {
      if (s == t) continue;
      Scalar v(0);
      for (int i = 0; i < n; ++i) v += r[i] * basis_cols[s][i];
      if (v != 0) {
        Scalar factor = v / basis_cols[s][pivot_rows[s]];
        r[pivot_rows[s]] -= factor;
      }
    }
    for (int i = 0; i < n; ++i)
      if (r[i] != 0) sp.coords.at(t, i) = constant(alg, r[i]);
  }
  return sp;
}

// gcd in a univariate Laurent algebra: strip the monomial content, take
// the Q[t]-gcd by the Euclidean algorithm (Gauss's lemma handles Z), and
// restore an integer content when the ring is Z.
AlgebraElem laurent_gcd_univariate(const ToricGAlgebra& alg, const AlgebraElem& a,
                                   const AlgebraElem& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  auto to_poly = [&](const AlgebraElem& x, Int& shift) {
    shift = x.terms.begin()->first[0];
    std::map<long, Scalar> p;
    for (const auto& [pt, c] : x.terms) p[Int(pt[0] - shift).get_si()] = c;
    return p;
  };
  Int sa, sb;
  std::map<long, Scalar> pa = to_poly(a, sa), pb = to_poly(b, sb);
  auto degree = [](const std::map<long, Scalar>& p) { return p.empty() ? -1L : p.rbegin()->first; };
  // Euclid over Q[t]
  while (!pb.empty()) {
    // pa mod pb
    while (degree(pa) >= degree(pb) && !pa.empty()) {
      long d = degree(pa) - degree(pb);
      Scalar q = pa.rbegin()->second / pb.rbegin()->second;
      for (const auto& [deg, c] : pb) {
        Scalar& t = pa[deg + d];
        t -= q * c;
        if (t == 0) pa.erase(deg + d);
      }
    }
    std::swap(pa, pb);
  }
  if (pa.empty()) return {};
  // normalize: monic over fields; primitive with positive lead over Z
  AlgebraElem g;
  if (alg.coeff().kind == RingKind::integers) {
    Int den_lcm = 1;
    for (const auto& [deg, c] : pa) {
      Scalar cc = c;
      cc.canonicalize();
      Int dl;
      mpz_lcm(dl.get_mpz_t(), den_lcm.get_mpz_t(), cc.get_den().get_mpz_t());
      den_lcm = dl;
    }
    Int int_gcd = 0;
    for (const auto& [deg, c] : pa) {
      Scalar cc = c * Scalar(den_lcm);
      cc.canonicalize();
      int_gcd = gcd(int_gcd, cc.get_num());
    }
    Int int_gcd_abs = abs(int_gcd);
    Scalar scale = Scalar(den_lcm) / Scalar(int_gcd_abs);
    if (pa.rbegin()->second < 0) scale = -scale;
    // content of the inputs
    auto content = [&](const AlgebraElem& x) -> Int {
      Int g2 = 0;
      for (const auto& [pt, c] : x.terms) g2 = gcd(g2, Scalar(c).get_num());
      return abs(g2);
    };
    Int cont = gcd(content(a), content(b));
    for (const auto& [deg, c] : pa)
      g = add(alg, g, monomial(alg, IntVec{Int(deg)}, c * scale * Scalar(cont)));
  } else {
    Scalar lead = pa.rbegin()->second;
    for (const auto& [deg, c] : pa) g = add(alg, g, monomial(alg, IntVec{Int(deg)}, c / lead));
  }
  return g;
}

// Rank-1 split over a univariate Laurent algebra: any nonzero column of
// e = v w^T is w_j v; dividing by its content recovers v up to a unit
// (v is primitive because w^T v = 1), and w follows by exact division.
std::optional<std::pair<std::vector<AlgebraElem>, std::vector<AlgebraElem>>>
rank1_content_split(const ToricGAlgebra& alg, const GradedMatrix& e) {
  if (alg.ambient_rank() != 1) return std::nullopt;
  const int n = e.rows();
  for (int j = 0; j < n; ++j) {
    AlgebraElem content;
    bool nonzero = false;
    for (int i = 0; i < n; ++i) {
      if (!e.at(i, j).is_zero()) nonzero = true;
      content = laurent_gcd_univariate(alg, content, e.at(i, j));
    }
    if (!nonzero) continue;
    std::vector<AlgebraElem> v(n), w(n);
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      if (e.at(i, j).is_zero()) continue;
      std::optional<AlgebraElem> q = exact_divide_general(alg, e.at(i, j), content);
      if (!q) ok = false;
      else v[i] = *q;
    }
    if (!ok) continue;
    int pivot = -1;
    for (int i = 0; i < n; ++i)
      if (!v[i].is_zero()) {
        pivot = i;
        break;
      }
    if (pivot < 0) continue;
    for (int jj = 0; jj < n && ok; ++jj) {
      if (e.at(pivot, jj).is_zero()) continue;
      std::optional<AlgebraElem> q = exact_divide_general(alg, e.at(pivot, jj), v[pivot]);
      if (!q) ok = false;
      else w[jj] = *q;
    }
    if (!ok) continue;
    // verify e = v w^T and w^T v = 1
    AlgebraElem dotvw;
    for (int i = 0; i < n; ++i) dotvw = add(alg, dotvw, mul(alg, w[i], v[i]));
    if (!(dotvw == one(alg))) continue;
    bool match = true;
    for (int i = 0; i < n && match; ++i)
      for (int jj = 0; jj < n && match; ++jj)
        if (!(mul(alg, v[i], w[jj]) == e.at(i, jj))) match = false;
    if (match) return std::make_pair(v, w);
  }
  return std::nullopt;
}

// Bezout combination c_a a + c_b b = 1 in a univariate Laurent algebra.
// Fields use the extended Euclidean algorithm; over Z the coefficients
// are solved exactly from a support-window linear system.
std::optional<std::pair<AlgebraElem, AlgebraElem>> bezout_pair(const ToricGAlgebra& alg,
                                                               const AlgebraElem& a,
                                                               const AlgebraElem& b) {
  if (alg.ambient_rank() != 1 || a.is_zero() || b.is_zero()) return std::nullopt;
  const Int sa = a.terms.begin()->first[0];
  const Int sb = b.terms.begin()->first[0];

  if (alg.coeff().is_field) {
    // extended Euclid on the shifted polynomials
    auto to_poly = [&](const AlgebraElem& x, const Int& shift) {
      std::map<long, Scalar> p;
      for (const auto& [pt, c] : x.terms) p[Int(pt[0] - shift).get_si()] = c;
      return p;
    };
    using Poly = std::map<long, Scalar>;
    auto deg = [](const Poly& p) { return p.empty() ? -1L : p.rbegin()->first; };
    auto padd = [&](Poly x, const Poly& y, const Scalar& scale, long shift) {
      for (const auto& [d, c] : y) {
        Scalar& t = x[d + shift];
        t = alg.coeff().normalize(t + scale * c);
        if (t == 0) x.erase(d + shift);
      }
      return x;
    };
    Poly r0 = to_poly(a, sa), r1 = to_poly(b, sb);
    Poly s0{{0, Scalar(1)}}, s1, t0, t1{{0, Scalar(1)}};
    while (!r1.empty()) {
      Poly q, rem = r0;
      while (deg(rem) >= deg(r1) && !rem.empty()) {
        long d = deg(rem) - deg(r1);
        Scalar f = alg.coeff().normalize(rem.rbegin()->second / r1.rbegin()->second);
        q[d] = f;
        rem = padd(std::move(rem), r1, alg.coeff().neg(f), d);
      }
      Poly ns = s0, nt = t0;
      for (const auto& [d, c] : q) {
        ns = padd(std::move(ns), s1, alg.coeff().neg(c), d);
        nt = padd(std::move(nt), t1, alg.coeff().neg(c), d);
      }
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(ns);
      t0 = std::move(t1);
      t1 = std::move(nt);
    }
    if (r0.size() != 1 || r0.count(0) == 0) return std::nullopt;  // gcd not a unit monomial
    Scalar lead = r0[0];
    auto from_poly = [&](const Poly& p, const Int& shift) {
      AlgebraElem x;
      for (const auto& [d, c] : p)
        x = add(alg, x, monomial(alg, IntVec{Int(d) - shift}, c / lead));
      return x;
    };
    AlgebraElem ca = from_poly(s0, sa), cb = from_poly(t0, sb);
    AlgebraElem check = add(alg, mul(alg, ca, a), mul(alg, cb, b));
    if (!(check == one(alg))) return std::nullopt;
    return std::make_pair(ca, cb);
  }

  // integer coefficients: window linear solve for the convolution = 1
  for (long window = 2; window <= 10; window += 2) {
    long lo_a = -Int(sa).get_si() - window, hi_a = -Int(sa).get_si() + window;
    long lo_b = -Int(sb).get_si() - window, hi_b = -Int(sb).get_si() + window;
    long na = hi_a - lo_a + 1, nb = hi_b - lo_b + 1;
    // result exponent range
    long rlo = 0, rhi = 0;
    {
      long a_min = Int(a.terms.begin()->first[0]).get_si();
      long a_max = Int(a.terms.rbegin()->first[0]).get_si();
      long b_min = Int(b.terms.begin()->first[0]).get_si();
      long b_max = Int(b.terms.rbegin()->first[0]).get_si();
      rlo = std::min(lo_a + a_min, lo_b + b_min);
      rhi = std::max(hi_a + a_max, hi_b + b_max);
    }
    long rows = rhi - rlo + 1;
    IntMat m(static_cast<int>(rows), static_cast<int>(na + nb));
    for (long i = 0; i < na; ++i)
      for (const auto& [pt, c] : a.terms) {
        long r = lo_a + i + Int(pt[0]).get_si() - rlo;
        m.at(static_cast<int>(r), static_cast<int>(i)) += c.get_num();
      }
    for (long i = 0; i < nb; ++i)
      for (const auto& [pt, c] : b.terms) {
        long r = lo_b + i + Int(pt[0]).get_si() - rlo;
        m.at(static_cast<int>(r), static_cast<int>(na + i)) += c.get_num();
      }
    IntVec target(rows, Int(0));
    target[-rlo] = 1;
    std::optional<IntVec> sol = solve(m, target);
    if (!sol) continue;
    AlgebraElem ca, cb;
    for (long i = 0; i < na; ++i)
      if ((*sol)[i] != 0) ca = add(alg, ca, monomial(alg, IntVec{Int(lo_a + i)}, Scalar((*sol)[i])));
    for (long i = 0; i < nb; ++i)
      if ((*sol)[na + i] != 0)
        cb = add(alg, cb, monomial(alg, IntVec{Int(lo_b + i)}, Scalar((*sol)[na + i])));
    AlgebraElem check = add(alg, mul(alg, ca, a), mul(alg, cb, b));
    if (check == one(alg)) return std::make_pair(ca, cb);
  }
  return std::nullopt;
}

// Splitting of an idempotent over a Laurent algebra (invariant ring of a
// torus): greedy unit-pivot peeling, then an augmentation lift. Partial:
// throws UnsupportedFactorization when both strategies stall.
SplitPair split_idempotent_laurent(const ToricGAlgebra& alg, const GradedMatrix& e0) {
  const int n = e0.rows();
  WeightVector zero_n = all_zero_weights(alg.grading(), n);

  if (matrix_is_zero(e0)) {
    SplitPair sp;
    sp.basis = graded_zero(alg, WeightVector{}, e0.target);
    sp.coords = graded_zero(alg, e0.source, WeightVector{});
    return sp;
  }

  // strategy 1: orthogonal rank-1 peeling. Each step removes a commuting
  // sub-projector q = v w^T with w^T v = 1 (one free summand), found
  // either through a unit pivot entry or, over univariate Laurent rings,
  // through the column-content extraction.
  {
    GradedMatrix res = e0;
    std::vector<std::vector<AlgebraElem>> vs, ws;
    bool stuck = false;
    while (!matrix_is_zero(res)) {
      int pi = -1, pj = -1;
      AlgebraElem pivot_inv;
      for (int i = 0; i < n && pi < 0; ++i)
        for (int j = 0; j < n && pi < 0; ++j) {
          std::optional<AlgebraElem> inv = unit_inverse(alg, res.at(i, j));
          if (inv) {
            pi = i;
            pj = j;
            pivot_inv = *inv;
          }
        }
      std::vector<AlgebraElem> v(n), w(n);
      if (pi >= 0) {
        for (int i = 0; i < n; ++i) v[i] = res.at(i, pj);
        for (int j = 0; j < n; ++j) w[j] = mul(alg, pivot_inv, res.at(pi, j));
      } else {
        auto vw = rank1_content_split(alg, res);
        if (!vw) {
          stuck = true;
          break;
        }
        v = std::move(vw->first);
        w = std::move(vw->second);
      }
      // res <- res - v w^T
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          res.at(i, j) = sub(alg, res.at(i, j), mul(alg, v[i], w[j]));
      vs.push_back(std::move(v));
      ws.push_back(std::move(w));
    }
    if (!stuck) {
      const int m = static_cast<int>(vs.size());
      SplitPair sp;
      sp.basis = graded_zero(alg, all_zero_weights(alg.grading(), m), e0.target);
      sp.coords = graded_zero(alg, e0.source, all_zero_weights(alg.grading(), m));
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) {
          sp.basis.at(i, j) = vs[j][i];
          sp.coords.at(j, i) = ws[j][i];
        }
      if (compose(alg, sp.coords, sp.basis) == graded_identity(alg, sp.basis.source) &&
          compose(alg, sp.basis, sp.coords) == e0)
        return sp;
    }
  }

  // strategy 2: evaluate at a unit point (all variables -> c), split the
  // constant idempotent over R, and lift through e
  {
    std::vector<Scalar> points{Scalar(1), Scalar(-1)};
    if (alg.coeff().kind == RingKind::rationals) {
      points.push_back(Scalar(2));
      points.push_back(Scalar(1) / 2);
      points.push_back(Scalar(-2));
      points.push_back(Scalar(3));
    } else if (alg.coeff().kind == RingKind::prime_field) {
      for (Int c = 2; c < alg.coeff().p && c < 7; ++c) points.push_back(Scalar(c));
    }
    for (const Scalar& pt_val : points) {
      GradedMatrix ec = graded_zero(alg, zero_n, zero_n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Scalar s(0);
          for (const auto& [pt, c] : e0.at(i, j).terms) {
            Int total = 0;
            for (const Int& x : pt) total += x;
            Scalar power(1);
            for (Int k = 0; k < abs(total); ++k) power *= pt_val;
            if (total < 0) power = Scalar(1) / power;
            s += c * power;
          }
          ec.at(i, j) = constant(alg, alg.coeff().normalize(s));
        }
      std::optional<SplitPair> base = split_constant(alg, ec);
      if (!base) continue;
      const int m = base->basis.cols();
      GradedMatrix b = compose(alg, e0, base->basis);
      GradedMatrix c = compose(alg, base->coords, e0);
      GradedMatrix mix = compose(alg, c, b);  // m x m, invertible at the point
      AlgebraElem d = det_endo(alg, mix);
      if (!is_unit(alg, d)) continue;
      GradedMatrix mix_inv = invert(alg, mix);
      GradedMatrix basis = compose(alg, b, mix_inv);
      if (compose(alg, c, basis) == graded_identity(alg, basis.source) &&
          compose(alg, basis, c) == e0)
        return SplitPair{std::move(basis), std::move(c)};
    }
  }

  // strategy 3 (univariate Laurent): if the complement has rank 1, split
  // it by content as g = v w^T; then im(e0) = ker(w^T), and a Bezout pair
  // among the entries of w completes the unimodular row to an invertible
  // matrix whose trailing columns give a free basis.
  if (alg.ambient_rank() == 1) {
    GradedMatrix g = sub(alg, graded_identity(alg, e0.source), e0);
    auto vw = rank1_content_split(alg, g);
    if (vw) {
      const std::vector<AlgebraElem>& v = vw->first;
      const std::vector<AlgebraElem>& w = vw->second;
      for (int i = 0; i < n && n >= 2; ++i)
        for (int j = i + 1; j < n; ++j) {
          auto bez = bezout_pair(alg, w[i], w[j]);
          if (!bez) continue;
          // rows: w; standard rows for k not in {i,j}; the Bezout row
          GradedMatrix big = graded_zero(alg, e0.source, e0.source);
          for (int c = 0; c < n; ++c) big.at(0, c) = w[c];
          int r = 1;
          for (int k = 0; k < n; ++k) {
            if (k == i || k == j) continue;
            big.at(r, k) = one(alg);
            ++r;
          }
          big.at(r, i) = neg(alg, bez->second);
          big.at(r, j) = bez->first;
          // adjust rows 2..n to kill v so that big * v = e_1
          for (int rr = 1; rr < n; ++rr) {
            AlgebraElem dotv;
            for (int c = 0; c < n; ++c) dotv = add(alg, dotv, mul(alg, big.at(rr, c), v[c]));
            for (int c = 0; c < n; ++c)
              big.at(rr, c) = sub(alg, big.at(rr, c), mul(alg, dotv, w[c]));
          }
          AlgebraElem d = det_endo(alg, big);
          if (!is_unit(alg, d)) continue;
          GradedMatrix big_inv = invert(alg, big);
          // basis = trailing columns of big^{-1}; coords = trailing rows of big
          SplitPair sp;
          WeightVector zm = all_zero_weights(alg.grading(), n - 1);
          sp.basis = graded_zero(alg, zm, e0.target);
          sp.coords = graded_zero(alg, e0.source, zm);
          for (int rr = 0; rr < n; ++rr)
            for (int c = 1; c < n; ++c) sp.basis.at(rr, c - 1) = big_inv.at(rr, c);
          for (int rr = 1; rr < n; ++rr)
            for (int c = 0; c < n; ++c) sp.coords.at(rr - 1, c) = big.at(rr, c);
          if (compose(alg, sp.coords, sp.basis) == graded_identity(alg, zm) &&
              compose(alg, sp.basis, sp.coords) == e0)
            return sp;
        }
    }
  }

  {
    std::string dump = "torus module splitting: no unit pivot, the augmentation lift failed, "
                       "and no complement-content completion applies; matrix:";
    for (int i = 0; i < n; ++i) {
      dump += "\n  ";
      for (int j = 0; j < n; ++j) dump += "[" + render(e0.at(i, j)) + "] ";
    }
    throw UnsupportedFactorization(dump);
  }
}

// Full torus case: the monoid is its whole lattice. Conjugate the weights
// away by monomials (possible: the grading is faithful), descend to the
// invariant Laurent ring, split, and undo.
IsoPair torus_trivialize(const AlgebraPtr& alg_ptr, const GradedIdempotent& e) {
  const ToricGAlgebra& alg = *alg_ptr;
  const int n = e.e.rows();

  // monomial lifts of the weights
  std::vector<IntVec> lifts;
  for (const GroupElem& u : e.e.source) {
    std::optional<IntVec> c = monomial_of_weight(alg, u);
    if (!c) throw InternalError("torus: weight has no monomial lift under a faithful grading");
    lifts.push_back(*c);
  }

  // etilde = D e D^{-1}: support of entry (i,j) shifts by c_i - c_j
  WeightVector zero_n = all_zero_weights(alg.grading(), n);
  GradedMatrix etilde = graded_zero(alg, zero_n, zero_n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      AlgebraElem x;
      for (const auto& [pt, c] : e.e.at(i, j).terms)
        x = add(alg, x, monomial(alg, pt + lifts[i] - lifts[j], c));
      etilde.at(i, j) = x;
    }
  check_graded(alg, etilde);

  InvariantAlgebra inv = invariant_algebra(alg);
  GradedMatrix einv = descend(alg, inv, etilde);
  SplitPair sp = split_idempotent_laurent(*inv.alg, einv);
  const int m = sp.basis.cols();

  // transport back to the torus algebra and undo the conjugation
  auto back = [&](const IntVec& p) { return mul(inv.embed, p); };
  WeightVector zero_m = all_zero_weights(alg.grading(), m);
  GradedMatrix basis_t = map_matrix(alg, sp.basis, zero_m, zero_n, back);
  GradedMatrix coords_t = map_matrix(alg, sp.coords, zero_n, zero_m, back);

  // alpha = coords * D, beta = D^{-1} * basis
  IsoPair out;
  out.lambda = zero_m;
  out.fwd = graded_zero(alg, e.e.source, zero_m);
  out.bwd = graded_zero(alg, zero_m, e.e.source);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      AlgebraElem x;
      for (const auto& [pt, c] : coords_t.at(i, j).terms)
        x = add(alg, x, monomial(alg, pt + lifts[j], c));
      out.fwd.at(i, j) = x;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      AlgebraElem x;
      for (const auto& [pt, c] : basis_t.at(i, j).terms)
        x = add(alg, x, monomial(alg, pt - lifts[i], c));
      out.bwd.at(i, j) = x;
    }
  check_graded(alg, out.fwd);
  check_graded(alg, out.bwd);
  verify_exact_pair(alg, e.e, out, "torus_trivialize");
  return out;
}

}  // namespace

// -- cover factorization --

namespace {

// Exact division f / g in any of our monoid algebras, anchored at the
// lexicographically minimal terms (additive under multiplication).
// Returns nullopt when not divisible or the step budget runs out.
std::optional<AlgebraElem> exact_divide_general(const ToricGAlgebra& alg, const AlgebraElem& f,
                                                const AlgebraElem& g, long budget) {
  if (g.is_zero()) return std::nullopt;
  AlgebraElem r = f;
  AlgebraElem q;
  const auto& [gmin, gc] = *g.terms.begin();
  while (!r.is_zero()) {
    if (--budget < 0) return std::nullopt;
    const auto& [rmin, rc] = *r.terms.begin();
    IntVec qpt = rmin - gmin;
    if (!alg.monoid().contains(qpt)) return std::nullopt;
    Scalar qc = rc / gc;
    if (alg.coeff().kind == RingKind::integers) {
      Scalar t = qc;
      t.canonicalize();
      if (t.get_den() != 1) return std::nullopt;
    }
    AlgebraElem term = monomial(alg, qpt, alg.coeff().normalize(qc));
    q = add(alg, q, term);
    r = sub(alg, r, mul(alg, term, g));
  }
  return q;
}

// Inverse of x in the localization when x is a unit there: either the
// numerator is a single term, or it divides a power of h.
std::optional<LocalizedElem> overlap_unit_inverse(const Localization& ctx,
                                                  const LocalizedElem& x) {
  const ToricGAlgebra& alg = ctx.alg();
  AlgebraElem num = x.num;
  int k = x.k;
  if (num.is_zero()) return std::nullopt;
  // strip h-divisors from the numerator while the denominator lasts
  while (k > 0) {
    std::optional<AlgebraElem> d = exact_divide_h(alg, num, ctx.h(), 1);
    if (!d) break;
    num = *d;
    --k;
  }
  if (num.terms.size() == 1) {
    std::optional<AlgebraElem> inv = unit_inverse(alg, num);
    if (!inv) return std::nullopt;
    return LocalizedElem{mul(alg, *inv, ctx.h_power(k)), 0};
  }
  for (int j = 1; j <= 8; ++j) {
    std::optional<AlgebraElem> q = exact_divide_general(alg, ctx.h_power(j), num);
    if (q) {
      // x^{-1} = h^k / num = q * h^{k-j}
      if (k >= j) return LocalizedElem{mul(alg, *q, ctx.h_power(k - j)), 0};
      return LocalizedElem{*q, j - k};
    }
  }
  return std::nullopt;
}

bool supported_in(const AffineMonoid& m, const AlgebraElem& x) {
  for (const auto& [pt, c] : x.terms)
    if (!m.contains(pt)) return false;
  return true;
}

bool supported_in(const AffineMonoid& m, const LocalGradedMatrix& f) {
  for (const LocalizedElem& e : f.entries)
    if (!supported_in(m, e.num)) return false;
  return true;
}

bool supported_in(const AffineMonoid& m, const GradedMatrix& f) {
  for (const AlgebraElem& e : f.entries)
    if (!supported_in(m, e)) return false;
  return true;
}

LocalGradedMatrix local_identity(const ToricGAlgebra& alg, const WeightVector& w) {
  return to_local(graded_identity(alg, w), 0);
}

}  // namespace

CoverFactorization factor_cover(const Localization& ctx, const ToricGAlgebra& main_alg,
                                const LocalGradedMatrix& f) {
  const ToricGAlgebra& torus = ctx.alg();
  const int m = f.rows();
  if (f.cols() != m) throw ValidationError("factor_cover: not square");

  // common-denominator normal form, then reduce by h where possible
  int k = 0;
  for (const LocalizedElem& e : f.entries) k = std::max(k, e.k);
  GradedMatrix num = graded_zero(torus, f.source, f.target);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      num.at(i, j) = mul(torus, f.at(i, j).num, ctx.h_power(k - f.at(i, j).k));
  while (k > 0) {
    GradedMatrix reduced = num;
    bool all = true;
    for (AlgebraElem& e : reduced.entries) {
      std::optional<AlgebraElem> d = exact_divide_h(torus, e, ctx.h(), 1);
      if (!d) {
        all = false;
        break;
      }
      e = *d;
    }
    if (!all) break;
    num = std::move(reduced);
    --k;
  }

  CoverFactorization out;

  // case (1): denominator-free with unit determinant: the torus chart
  // absorbs everything
  if (k == 0) {
    AlgebraElem d = det_endo(torus, num);
    if (is_unit(torus, d)) {
      out.f1 = to_local(num, 0);
      out.f1_inv = to_local(invert(torus, num), 0);
      out.f2 = local_identity(torus, f.source);
      out.f2_inv = out.f2;
      return out;
    }
  }

  // case (2): numerators supported in the main monoid and determinant
  // invertible over A^G_h: the h-chart absorbs everything
  if (supported_in(main_alg.monoid(), num)) {
    AlgebraElem d = det_endo(torus, num);
    std::optional<LocalizedElem> dinv = overlap_unit_inverse(ctx, LocalizedElem{d, m * k});
    if (dinv && supported_in(main_alg.monoid(), dinv->num)) {
      GradedMatrix adj = adjugate(torus, num);
      LocalGradedMatrix inv{f.source, f.target,
                            std::vector<LocalizedElem>(static_cast<size_t>(m) * m)};
      bool ok = true;
      for (int i = 0; i < m && ok; ++i)
        for (int j = 0; j < m && ok; ++j) {
          // (num/h^k)^{-1} = adj * h^k * dinv / h^{mk}... collapse powers:
          // inv = adj * dinv * h^k with dinv already accounting h^{mk}
          LocalizedElem v = mul(ctx, LocalizedElem{adj.at(i, j), 0}, *dinv);
          v.num = mul(torus, v.num, ctx.h_power(k));
          while (v.k > 0) {
            std::optional<AlgebraElem> dd = exact_divide_h(torus, v.num, ctx.h(), 1);
            if (!dd) break;
            v.num = *dd;
            --v.k;
          }
          if (!supported_in(main_alg.monoid(), v.num)) ok = false;
          inv.at(i, j) = std::move(v);
        }
      if (ok) {
        out.f2 = LocalGradedMatrix{f.source, f.target, {}};
        for (const AlgebraElem& e : num.entries) out.f2.entries.push_back(LocalizedElem{e, k});
        out.f2_inv = std::move(inv);
        out.f1 = local_identity(torus, f.source);
        out.f1_inv = out.f1;
        // verify f2 * f2_inv = id
        if (!eq(ctx, compose(ctx, out.f2, out.f2_inv), local_identity(torus, f.source)))
          throw InternalError("factor_cover: h-chart inverse verification failed");
        return out;
      }
    }
  }

  // case (3): diagonal with overlap units: split each entry into a
  // monomial part (torus chart) times the rest (h-chart)
  {
    bool diagonal = true;
    for (int i = 0; i < m && diagonal; ++i)
      for (int j = 0; j < m && diagonal; ++j)
        if (i != j && !f.at(i, j).num.is_zero()) diagonal = false;
    if (diagonal) {
      out.f1 = local_identity(torus, f.source);
      out.f1_inv = out.f1;
      out.f2 = local_identity(torus, f.source);
      out.f2_inv = out.f2;
      bool ok = true;
      for (int i = 0; i < m && ok; ++i) {
        LocalizedElem x{num.at(i, i), k};
        std::optional<LocalizedElem> xinv = overlap_unit_inverse(ctx, x);
        if (!xinv) {
          ok = false;
          break;
        }
        // try candidate monomial contents from the numerator's support
        bool placed = false;
        for (const auto& [pt, c] : x.num.terms) {
          AlgebraElem mono = monomial(torus, pt, c);
          std::optional<AlgebraElem> mono_inv = unit_inverse(torus, mono);
          if (!mono_inv) continue;
          AlgebraElem rest = mul(torus, x.num, *mono_inv);
          LocalizedElem rest_loc{rest, x.k};
          std::optional<LocalizedElem> rest_inv = overlap_unit_inverse(ctx, rest_loc);
          if (!rest_inv) continue;
          if (!supported_in(main_alg.monoid(), rest) ||
              !supported_in(main_alg.monoid(), rest_inv->num))
            continue;
          out.f1.at(i, i) = LocalizedElem{mono, 0};
          out.f1_inv.at(i, i) = LocalizedElem{*mono_inv, 0};
          out.f2.at(i, i) = rest_loc;
          out.f2_inv.at(i, i) = *rest_inv;
          placed = true;
          break;
        }
        if (!placed) ok = false;
      }
      if (ok) return out;
    }
  }

  {
    std::string dump =
        "factor_cover: the overlap automorphism is not in the supported factorization classes "
        "(torus-side unimodular, h-chart-supported, or diagonal with splittable units); "
        "common denominator k=" + std::to_string(k) + ", numerators:";
    for (int i = 0; i < m; ++i) {
      dump += "\n  ";
      for (int j = 0; j < m; ++j) dump += "[" + render(num.at(i, j)) + "] ";
    }
    throw UnsupportedFactorization(dump);
  }
}

// -- the orchestrator --

namespace {

struct ModuleResult {
  IsoPair pair;
  std::vector<TraceEntry> trace;
};

ModuleResult trivialize_module(const AlgebraPtr& alg_ptr, const GradedIdempotent& e,
                               const TrivializerLimits& limits, int depth);

// Match the weight vector `have` to `want` by unit monomials of the
// monoid: a permutation pi and monomial exponents d with
// psi(d_t) = want[t] - have[pi(t)], d_t a monoid unit. The corrected pair
// has target weights exactly `want`.
IsoPair match_target_weights(const ToricGAlgebra& alg, const IsoPair& p,
                             const WeightVector& want) {
  const WeightVector& have = p.lambda;
  if (have.size() != want.size())
    throw InternalError("weight matching: rank mismatch between face targets");
  const int n = static_cast<int>(have.size());
  if (n == 0) return p;

  // unit lattice of the monoid: lineality of the local cone, in ambient coords
  Cone local = pullback_cone(alg.monoid().cone(), alg.monoid().lattice_embed());
  IntMat units = mul(alg.monoid().lattice_embed(), local.lineality_basis);

  // feasibility matrix and chosen monomials
  std::vector<std::vector<std::optional<IntVec>>> choice(
      n, std::vector<std::optional<IntVec>>(n));
  IntMat psi_units = mul(alg.psi(), units);
  for (int t = 0; t < n; ++t)
    for (int s = 0; s < n; ++s) {
      GroupElem delta = sub(alg.grading(), have[s], want[t]);
      std::optional<IntVec> x =
          shortest_preimage(psi_units, relation_matrix(alg.grading()), lift(delta));
      if (x) choice[t][s] = mul(units, *x);
    }

  // bipartite matching (n <= 8)
  std::vector<int> match_of_s(n, -1), match_of_t(n, -1);
  std::function<bool(int, std::vector<bool>&)> augment = [&](int t, std::vector<bool>& seen) {
    for (int s = 0; s < n; ++s) {
      if (!choice[t][s] || seen[s]) continue;
      seen[s] = true;
      if (match_of_s[s] < 0 || augment(match_of_s[s], seen)) {
        match_of_s[s] = t;
        match_of_t[t] = s;
        return true;
      }
    }
    return false;
  };
  for (int t = 0; t < n; ++t) {
    std::vector<bool> seen(n, false);
    if (!augment(t, seen))
      throw InternalError("weight matching: no unit-monomial matching exists");
  }

  // corrected pair: fwd' = C fwd, bwd' = bwd C^{-1}, C[t, pi(t)] = e_{d_t}
  GradedMatrix c = graded_zero(alg, have, want);
  GradedMatrix c_inv = graded_zero(alg, want, have);
  for (int t = 0; t < n; ++t) {
    int s = match_of_t[t];
    c.at(t, s) = monomial(alg, *choice[t][s], Scalar(1));
    c_inv.at(s, t) = monomial(alg, -*choice[t][s], Scalar(1));
  }
  check_graded(alg, c);
  check_graded(alg, c_inv);
  IsoPair out;
  out.lambda = want;
  out.fwd = compose(alg, c, p.fwd);
  out.bwd = compose(alg, p.bwd, c_inv);
  return out;
}

}  // namespace

// Weights are canonical only modulo psi of the monoid's unit lattice
// (twisting by a unit monomial is an isomorphism). Certificates carry the
// canonical coset representative: the HNF-reduced lift.
GroupElem canonical_weight_rep(const ToricGAlgebra& alg, const GroupElem& w) {
  Cone local = pullback_cone(alg.monoid().cone(), alg.monoid().lattice_embed());
  IntMat units = mul(alg.monoid().lattice_embed(), local.lineality_basis);
  IntMat psi_units = mul(alg.psi(), units);
  IntMat l0 = hnf_columns(hstack(psi_units, relation_matrix(alg.grading())));
  return reduce(alg.grading(), reduce_mod_lattice(l0, lift(w)));
}

namespace {

IsoPair canonicalize_pair_weights(const ToricGAlgebra& alg, const IsoPair& p) {
  WeightVector canon;
  for (const GroupElem& w : p.lambda) canon.push_back(canonical_weight_rep(alg, w));
  if (canon == p.lambda) return p;
  return match_target_weights(alg, p, canon);
}

struct FaceSubproblem {
  AlgebraPtr alg;
  GradedIdempotent idem;
  IntMat basis;  // sublattice basis: local coords -> ambient coords
};

FaceSubproblem face_subproblem(const ToricGAlgebra& alg, const Face& tau,
                               const GradedIdempotent& e) {
  // lattice of the face: the monoid's lattice intersected with the span
  FaceSubproblem out;
  out.basis = alg.monoid().full_lattice()
                  ? tau.span_basis
                  : lattice_intersection(tau.span_basis, alg.monoid().lattice_embed());

  Cone tau_cone = tau.rays.empty() ? cone_from_rays(alg.ambient_rank(), {})
                                   : cone_from_rays(alg.ambient_rank(), tau.rays);
  Cone local = pullback_cone(tau_cone, out.basis);
  IntMat psi_local = mul(alg.psi(), out.basis);
  out.alg = std::make_shared<ToricGAlgebra>(
      alg.coeff(), AffineMonoid::from_cone(local, alg.monoid().budget()), alg.grading(),
      psi_local);

  GradedMatrix restricted = restrict_to_face(alg, tau, e.e);
  GradedMatrix local_m =
      map_matrix(*out.alg, restricted, restricted.source, restricted.target,
                 [&](const IntVec& p) { return into_lattice(out.basis, p); });
  out.idem = make_idempotent(*out.alg, std::move(local_m));
  return out;
}

IsoPair lift_face_pair(const ToricGAlgebra& alg, const FaceSubproblem& sub, const IsoPair& p) {
  auto back = [&](const IntVec& q) { return mul(sub.basis, q); };
  IsoPair out;
  out.lambda = p.lambda;
  out.fwd = map_matrix(alg, p.fwd, p.fwd.source, p.fwd.target, back);
  out.bwd = map_matrix(alg, p.bwd, p.bwd.source, p.bwd.target, back);
  return out;
}

// The faithful engine: induction over the face lattice.
ModuleResult trivialize_faithful(const AlgebraPtr& alg_ptr, const GradedIdempotent& e,
                                 const TrivializerLimits& limits, int depth) {
  const ToricGAlgebra& alg = *alg_ptr;
  ModuleResult out;
  if (depth > 16) throw InternalError("face recursion too deep");

  Cone local = pullback_cone(alg.monoid().cone(), alg.monoid().lattice_embed());
  if (local.functionals.empty()) {
    // base case: the monoid is its whole lattice (a torus)
    out.pair = torus_trivialize(alg_ptr, e);
    out.trace.push_back({"torus_split", "rank " + std::to_string(out.pair.lambda.size())});
    return out;
  }

  // smallest face fixes the global target weights
  Face small = smallest_face(alg.monoid().cone());
  FaceSubproblem small_sub = face_subproblem(alg, small, e);
  ModuleResult small_res = trivialize_module(small_sub.alg, small_sub.idem, limits, depth + 1);
  WeightVector lambda = small_res.pair.lambda;
  out.trace.insert(out.trace.end(), small_res.trace.begin(), small_res.trace.end());

  // codimension-1 faces: recurse, match targets, lift into A
  std::vector<Face> c1 = codim1_faces(alg.monoid().cone());
  if (c1.empty()) throw InternalError("cone with functionals but no codimension-1 faces");
  std::vector<IsoPair> face_pairs;
  for (const Face& tau : c1) {
    FaceSubproblem sub = face_subproblem(alg, tau, e);
    ModuleResult res = trivialize_module(sub.alg, sub.idem, limits, depth + 1);
    out.trace.insert(out.trace.end(), res.trace.begin(), res.trace.end());
    IsoPair matched = match_target_weights(*sub.alg, res.pair, lambda);
    verify_exact_pair(*sub.alg, sub.idem.e, matched, "face pair after matching");
    face_pairs.push_back(lift_face_pair(alg, sub, matched));
  }

  // patch to an isomorphism modulo J, then extend over A_h
  IsoPair mod_j = patch_faces(alg, e, c1, face_pairs);
  out.trace.push_back({"patch_faces", std::to_string(c1.size()) + " codim-1 faces"});

  ExtensionResult ext = extend_h(alg, e, mod_j);
  out.trace.push_back({"extend_h", "h = " + render(ext.h)});

  // if h is a unit, V = X and the lift is already global
  if (is_unit(alg, ext.h)) {
    GradedMatrix tt = compose(alg, ext.t, ext.t_prime);
    GradedMatrix tt_inv = invert(alg, tt);
    IsoPair final_pair{ext.t, compose(alg, ext.t_prime, tt_inv), lambda};
    verify_exact_pair(alg, e.e, final_pair, "global lift (h unit)");
    out.pair = std::move(final_pair);
    return out;
  }

  // torus side: trivialize over R[L] (the big torus chart)
  Cone full = cone_from_rays(alg.ambient_rank(), {});
  {
    std::vector<IntVec> gens;
    for (int i = 0; i < alg.ambient_rank(); ++i) {
      IntVec v(alg.ambient_rank(), Int(0));
      v[i] = 1;
      gens.push_back(v);
      gens.push_back(-v);
    }
    if (!gens.empty()) full = cone_from_rays(alg.ambient_rank(), gens);
  }
  AffineMonoid torus_monoid = AffineMonoid::from_cone(full, alg.monoid().budget());
  AlgebraPtr torus_alg =
      std::make_shared<ToricGAlgebra>(alg.coeff(), torus_monoid, alg.grading(), alg.psi());
  GradedMatrix e_torus = e.e;  // same entries, supports valid in the bigger monoid
  {
    std::vector<AlgebraElem> ent;
    for (const AlgebraElem& x : e.e.entries) {
      AlgebraElem y;
      for (const auto& [pt, c] : x.terms) y = add(*torus_alg, y, monomial(*torus_alg, pt, c));
      ent.push_back(std::move(y));
    }
    e_torus = make_graded(*torus_alg, e.e.source, e.e.target, std::move(ent));
  }
  GradedIdempotent e_t = make_idempotent(*torus_alg, e_torus);
  IsoPair eta = torus_trivialize(torus_alg, e_t);
  eta = match_target_weights(*torus_alg, eta, lambda);
  verify_exact_pair(*torus_alg, e_t.e, eta, "torus side after matching");
  out.trace.push_back({"torus_chart", "matched to global target"});

  // gluing (the patching-isomorphism construction)
  Localization ctx(torus_alg, [&] {
    AlgebraElem h;
    for (const auto& [pt, c] : ext.h.terms) h = add(*torus_alg, h, monomial(*torus_alg, pt, c));
    return h;
  }());

  auto to_torus = [&](const GradedMatrix& mtx) {
    std::vector<AlgebraElem> ent;
    for (const AlgebraElem& x : mtx.entries) {
      AlgebraElem y;
      for (const auto& [pt, c] : x.terms) y = add(*torus_alg, y, monomial(*torus_alg, pt, c));
      ent.push_back(std::move(y));
    }
    return make_graded(*torus_alg, mtx.source, mtx.target, std::move(ent));
  };

  // phi-pair over A_h: (t, t_prime (t t')^{-1}) with exact identities
  GradedMatrix t_t = to_torus(ext.t);
  GradedMatrix tp_t = to_torus(ext.t_prime);
  GradedMatrix tt_t = compose(*torus_alg, t_t, tp_t);
  GradedMatrix tt_adj = adjugate(*torus_alg, tt_t);
  // phi_bwd = t' adj(tt') / h
  LocalGradedMatrix phi_fwd = to_local(t_t, 0);
  LocalGradedMatrix phi_bwd = to_local(compose(*torus_alg, tp_t, tt_adj), 1);

  // Phi = phi o eta^{-1} = phi_fwd * eta.bwd : F -> F over the overlap
  LocalGradedMatrix big_phi = compose(ctx, phi_fwd, to_local(eta.bwd, 0));

  // conjugate the weights away: D with psi(d_t) = lambda_t
  std::vector<IntVec> dexp;
  for (const GroupElem& w : lambda) {
    std::optional<IntVec> c = monomial_of_weight(*torus_alg, w);
    if (!c) throw InternalError("glue: target weight has no monomial lift");
    dexp.push_back(*c);
  }
  const int mrank = static_cast<int>(lambda.size());
  WeightVector zero_m = all_zero_weights(alg.grading(), mrank);
  auto conj_by_d = [&](const LocalGradedMatrix& x, int sign) {
    // sign=+1: D x D^{-1} (x weights lambda -> zero); sign=-1: D^{-1} x D
    LocalGradedMatrix y{zero_m, zero_m, std::vector<LocalizedElem>(x.entries.size())};
    if (sign < 0) {
      y.source = lambda;
      y.target = lambda;
    }
    for (int i = 0; i < x.rows(); ++i)
      for (int j = 0; j < x.cols(); ++j) {
        AlgebraElem n2;
        for (const auto& [pt, c] : x.at(i, j).num.terms) {
          IntVec shifted = sign > 0 ? pt + dexp[i] - dexp[j] : pt - dexp[i] + dexp[j];
          n2 = add(*torus_alg, n2, monomial(*torus_alg, shifted, c));
        }
        y.at(i, j) = LocalizedElem{n2, x.at(i, j).k};
      }
    return y;
  };
  LocalGradedMatrix f_desc = conj_by_d(big_phi, +1);
  check_graded(ctx, f_desc);
  for (const LocalizedElem& x : f_desc.entries)
    if (!is_invariant(*torus_alg, x.num))
      throw InternalError("glue: descended overlap matrix not invariant");

  CoverFactorization fact = factor_cover(ctx, alg, f_desc);
  out.trace.push_back({"factor_cover", "overlap automorphism factored"});

  // P = h^s f2 with integral entries over A^G
  int s = 0;
  for (const LocalizedElem& x : fact.f2.entries) s = std::max(s, x.k);
  GradedMatrix p_mat = graded_zero(alg, zero_m, zero_m);
  for (int i = 0; i < mrank; ++i)
    for (int j = 0; j < mrank; ++j) {
      const LocalizedElem& x = fact.f2.at(i, j);
      AlgebraElem scaled = mul(*torus_alg, x.num, ctx.h_power(s - x.k));
      if (!supported_in(alg.monoid(), scaled))
        throw InternalError("glue: cleared f2 entry leaves the monoid");
      AlgebraElem in_a;
      for (const auto& [pt, c] : scaled.terms) in_a = add(alg, in_a, monomial(alg, pt, c));
      p_mat.at(i, j) = in_a;
    }
  check_graded(alg, p_mat);

  // refinement order: enough to clear the d-monomial denominators
  int big_n = 1;
  for (int i = 0; i < mrank; ++i)
    for (int j = 0; j < mrank; ++j)
      if (i != j) {
        Int nij = large_N(alg, dexp[i] - dexp[j]);
        if (nij > big_n) big_n = static_cast<int>(nij.get_si());
      }
  GradedMatrix ptilde = refine_matrix(alg, p_mat, big_n);
  out.trace.push_back({"refine_matrix", "N = " + std::to_string(big_n)});
  GradedMatrix ptilde_inv = invert(alg, ptilde);
  GradedMatrix pp = compose(alg, p_mat, ptilde);

  // theta_1 = D^{-1} Ptilde^{-1} f1 D over the torus chart
  LocalGradedMatrix theta1 = conj_by_d(
      compose(ctx, to_local(to_torus(ptilde_inv), 0), fact.f1), -1);

  // theta_2 = D^{-1} h^{-s} P Ptilde D: entries must pull back into A
  GradedMatrix theta2_num = graded_zero(alg, lambda, lambda);
  for (int i = 0; i < mrank; ++i)
    for (int j = 0; j < mrank; ++j) {
      AlgebraElem x;
      for (const auto& [pt, c] : pp.at(i, j).terms) {
        IntVec shifted = pt - dexp[i] + dexp[j];
        if (!alg.monoid().contains(shifted))
          throw InternalError("glue: theta2 entry leaves the monoid (N too small)");
        x = add(alg, x, monomial(alg, shifted, c));
      }
      theta2_num.at(i, j) = x;
    }
  check_graded(alg, theta2_num);
  // theta_2^{-1} = D^{-1} Ptilde^{-1} f2^{-1} D over A_h
  LocalGradedMatrix theta2_inv = conj_by_d(
      compose(ctx, to_local(to_torus(ptilde_inv), 0), fact.f2_inv), -1);

  // corrected pairs: eta' = theta1 o eta on the torus, phi' = theta2^{-1} o phi on A_h
  LocalGradedMatrix eta_fwd2 = compose(ctx, theta1, to_local(eta.fwd, 0));
  LocalGradedMatrix phi_fwd2 = compose(ctx, theta2_inv, phi_fwd);
  LocalGradedMatrix phi_bwd2 = compose(ctx, phi_bwd, to_local(to_torus(theta2_num), s));

  // the overlap identity: eta' = phi' on W
  if (!eq(ctx, eta_fwd2, phi_fwd2))
    throw InternalError("gluing mismatch: corrected isomorphisms differ on the overlap");

  // global matrices: divide the A_h-side numerators by their h-power.
  // The numerators are monoid-supported (they equal the global matrix
  // times h^k), so the division runs in the main algebra, where the
  // functional grading anchors it.
  auto pull_global = [&](const LocalGradedMatrix& x, const WeightVector& src,
                         const WeightVector& tgt) {
    std::vector<AlgebraElem> ent;
    for (const LocalizedElem& v : x.entries) {
      if (!supported_in(alg.monoid(), v.num))
        throw InternalError("glue: global matrix numerator leaves the monoid");
      AlgebraElem num_a;
      for (const auto& [pt, c] : v.num.terms) num_a = add(alg, num_a, monomial(alg, pt, c));
      std::optional<AlgebraElem> divided = exact_divide_h(alg, num_a, ext.h, v.k);
      if (!divided) throw InternalError("glue: global matrix entry not divisible by h-power");
      ent.push_back(std::move(*divided));
    }
    return make_graded(alg, src, tgt, std::move(ent));
  };
  IsoPair global;
  global.lambda = lambda;
  global.fwd = pull_global(phi_fwd2, e.e.source, lambda);
  global.bwd = pull_global(phi_bwd2, lambda, e.e.source);
  verify_exact_pair(alg, e.e, global, "glued global isomorphism");
  out.trace.push_back({"glue", "global isomorphism verified"});
  out.pair = std::move(global);
  return out;
}

ModuleResult trivialize_module(const AlgebraPtr& alg_ptr, const GradedIdempotent& e,
                               const TrivializerLimits& limits, int depth) {
  const ToricGAlgebra& alg = *alg_ptr;
  ModuleResult out;
  const int n = e.e.rows();
  if (n > limits.max_rank) throw ResourceError("module rank exceeds the configured limit");
  if (!alg.monoid().full_lattice())
    throw ValidationError("trivialize: the monoid must be given in its own lattice coordinates");

  if (matrix_is_zero(e.e)) {
    out.pair.lambda = {};
    out.pair.fwd = graded_zero(alg, e.e.source, {});
    out.pair.bwd = graded_zero(alg, {}, e.e.source);
    return out;
  }

  GActionProblem sub;
  sub.alg = alg_ptr;
  sub.module = e;
  sub.limits = limits;
  FaithfulReduction red = reduce_to_faithful(sub);

  // assemble the block results back into P-coordinates
  std::vector<IsoPair> block_pairs;
  std::vector<std::vector<int>> block_indices;

  for (const FaithfulBlock& b : red.blocks) {
    ModuleResult r = trivialize_faithful(b.alg, b.idem, limits, depth + 1);
    out.trace.insert(out.trace.end(), r.trace.begin(), r.trace.end());
    // untwist the weights: lambda_P = incl(lambda_Q) + a
    IsoPair p = r.pair;
    WeightVector lam;
    for (const GroupElem& q : p.lambda) {
      GroupElem in_p = reduce(alg.grading(), mul(red.image.incl, lift(q)));
      lam.push_back(add(alg.grading(), in_p, b.twist));
    }
    p.lambda = std::move(lam);
    block_pairs.push_back(std::move(p));
    block_indices.push_back(b.indices);
  }

  // direct sum with index bookkeeping back to the original positions
  WeightVector lambda;
  for (const IsoPair& p : block_pairs)
    lambda.insert(lambda.end(), p.lambda.begin(), p.lambda.end());

  GradedMatrix fwd = graded_zero(alg, e.e.source, lambda);
  GradedMatrix bwd = graded_zero(alg, lambda, e.e.source);
  int row0 = 0;
  for (size_t bi = 0; bi < block_pairs.size(); ++bi) {
    const IsoPair& p = block_pairs[bi];
    const std::vector<int>& idx = block_indices[bi];
    const int bm = static_cast<int>(p.lambda.size());
    for (int i = 0; i < bm; ++i)
      for (size_t j = 0; j < idx.size(); ++j) {
        // block entries live in the Q-graded algebra; entries are
        // identical as elements of A
        AlgebraElem x;
        for (const auto& [pt, c] : p.fwd.at(i, static_cast<int>(j)).terms)
          x = add(alg, x, monomial(alg, pt, c));
        fwd.at(row0 + i, idx[j]) = std::move(x);
      }
    for (size_t j = 0; j < idx.size(); ++j)
      for (int i = 0; i < bm; ++i) {
        AlgebraElem x;
        for (const auto& [pt, c] : p.bwd.at(static_cast<int>(j), i).terms)
          x = add(alg, x, monomial(alg, pt, c));
        bwd.at(idx[j], row0 + i) = std::move(x);
      }
    row0 += bm;
  }
  check_graded(alg, fwd);
  check_graded(alg, bwd);
  IsoPair assembled{std::move(fwd), std::move(bwd), std::move(lambda)};
  verify_exact_pair(alg, e.e, assembled, "assembled faithful blocks");
  out.pair = std::move(assembled);
  if (red.blocks.size() > 1)
    out.trace.push_back({"reduce_to_faithful",
                         std::to_string(red.blocks.size()) + " weight-class blocks"});
  return out;
}

}  // namespace

#ifdef GTORIC_DEBUG_HOOKS_NEVER
#endif
// debug hooks (translation-unit local helpers re-exported for tests)
AlgebraElem debug_laurent_gcd(const ToricGAlgebra& alg, const AlgebraElem& a, const AlgebraElem& b) {
  return laurent_gcd_univariate(alg, a, b);
}
bool debug_rank1_split(const ToricGAlgebra& alg, const GradedMatrix& e) {
  return rank1_content_split(alg, e).has_value();
}

TrivializeOutcome trivialize(const GActionProblem& p) {
  const ToricGAlgebra& alg = *p.alg;
  std::vector<TraceEntry> trace;
  try {
    if (alg.ambient_rank() > p.limits.max_ambient)
      throw ResourceError("ambient rank exceeds the configured limit");
    if (!p.alg->coeff().satisfies_dagger)
      throw ValidationError("trivialize: coefficient ring does not satisfy the extension "
                            "hypothesis");

    if (p.free_weights) {
      // free-with-structure: an immediate certificate (identity up to
      // canonical unit-monomial retwists)
      IsoPair pair{graded_identity(alg, *p.free_weights),
                   graded_identity(alg, *p.free_weights), *p.free_weights};
      pair = canonicalize_pair_weights(alg, pair);
      TrivializationCertificate cert;
      cert.target_weights = pair.lambda;
      cert.full_weights = pair.lambda;
      cert.iso = pair.fwd;
      cert.iso_inverse = pair.bwd;
      cert.trace.push_back({"free_module", "immediate certificate"});
      return cert;
    }
    if (!p.module) throw ValidationError("trivialize: no module given");
    const GradedIdempotent& e = *p.module;
    if (e.e.rows() > p.limits.max_rank)
      throw ResourceError("module rank exceeds the configured limit");

    ModuleResult main = trivialize_module(p.alg, e, p.limits, 0);
    trace = main.trace;
    main.pair = canonicalize_pair_weights(alg, main.pair);

    // complement: conjugating the idempotent to the standard projector
    GradedMatrix complement =
        sub(alg, graded_identity(alg, e.e.source), e.e);
    GradedIdempotent ec = make_idempotent(alg, std::move(complement));
    ModuleResult comp = trivialize_module(p.alg, ec, p.limits, 0);
    trace.insert(trace.end(), comp.trace.begin(), comp.trace.end());
    comp.pair = canonicalize_pair_weights(alg, comp.pair);

    // V = [alpha_e; alpha_c], V^{-1} = [beta_e | beta_c]
    WeightVector full = main.pair.lambda;
    full.insert(full.end(), comp.pair.lambda.begin(), comp.pair.lambda.end());
    GradedMatrix v = graded_zero(alg, e.e.source, full);
    GradedMatrix vinv = graded_zero(alg, full, e.e.source);
    const int m = static_cast<int>(main.pair.lambda.size());
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < v.cols(); ++j) v.at(i, j) = main.pair.fwd.at(i, j);
    for (int i = 0; i < v.rows() - m; ++i)
      for (int j = 0; j < v.cols(); ++j) v.at(m + i, j) = comp.pair.fwd.at(i, j);
    for (int i = 0; i < vinv.rows(); ++i) {
      for (int j = 0; j < m; ++j) vinv.at(i, j) = main.pair.bwd.at(i, j);
      for (int j = 0; j < vinv.cols() - m; ++j) vinv.at(i, m + j) = comp.pair.bwd.at(i, j);
    }
    check_graded(alg, v);
    check_graded(alg, vinv);

    if (!(compose(alg, v, vinv) == graded_identity(alg, full)))
      throw InternalError("final certificate: V V^{-1} != Id");
    if (!(compose(alg, vinv, v) == graded_identity(alg, e.e.source)))
      throw InternalError("final certificate: V^{-1} V != Id");
    GradedMatrix conj = compose(alg, compose(alg, v, e.e), vinv);
    if (!(conj == standard_projector(alg, full, m)))
      throw InternalError("final certificate: V e V^{-1} is not the standard projector");

    TrivializationCertificate cert;
    cert.target_weights = main.pair.lambda;
    cert.full_weights = std::move(full);
    cert.iso = std::move(v);
    cert.iso_inverse = std::move(vinv);
    cert.trace = std::move(trace);
    cert.trace.push_back({"certificate", "conjugation identities verified"});
    return cert;
  } catch (const UnsupportedFactorization& ex) {
    PartialResult pr;
    pr.failing_step = "factor_cover";
    if (std::string(ex.what()).find("torus module splitting") != std::string::npos)
      pr.failing_step = "torus_module_splitting";
    pr.detail = ex.what();
    pr.trace = trace;
    return pr;
  }
}

K0Class k0_class(const TrivializationCertificate& cert) {
  K0Class k;
  for (const GroupElem& w : cert.target_weights) ++k.multiplicities[w];
  return k;
}

K0Class k0_add(const K0Class& a, const K0Class& b) {
  K0Class k = a;
  for (const auto& [w, m] : b.multiplicities) k.multiplicities[w] += m;
  return k;
}

std::string to_string(const K0Class& k) {
  if (k.multiplicities.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [w, m] : k.multiplicities) {
    if (!first) s += " + ";
    first = false;
    s += std::to_string(m) + "*[" + to_string(w) + "]";
  }
  return s;
}

GActionProblem direct_sum(const GActionProblem& a, const GActionProblem& b) {
  if (!(a.alg->psi() == b.alg->psi()) || !(a.alg->grading() == b.alg->grading()))
    throw ValidationError("direct_sum: problems must share the algebra");
  GActionProblem out;
  out.alg = a.alg;
  out.limits = a.limits;
  const ToricGAlgebra& alg = *a.alg;
  auto as_idem = [&](const GActionProblem& p) {
    if (p.module) return p.module->e;
    return graded_identity(alg, *p.free_weights);
  };
  GradedMatrix sum_m = direct_sum(alg, as_idem(a), as_idem(b));
  out.module = make_idempotent(alg, std::move(sum_m));
  return out;
}

}  // namespace gtoric
