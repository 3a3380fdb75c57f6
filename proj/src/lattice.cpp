#include "gtoric/lattice.hpp"

#include <algorithm>
#include <cstdlib>

namespace gtoric {

IntMat IntMat::from_columns(int rows, const std::vector<IntVec>& cols) {
  IntMat m(rows, static_cast<int>(cols.size()));
  for (size_t j = 0; j < cols.size(); ++j) {
    if (static_cast<int>(cols[j].size()) != rows)
      throw ValidationError("from_columns: column length mismatch");
    for (int i = 0; i < rows; ++i) m.at(i, static_cast<int>(j)) = cols[j][i];
  }
  return m;
}

IntMat IntMat::from_rows(const std::vector<IntVec>& rows) {
  int c = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  IntMat m(static_cast<int>(rows.size()), c);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (static_cast<int>(rows[i].size()) != c)
      throw ValidationError("from_rows: row length mismatch");
    for (int j = 0; j < c; ++j) m.at(static_cast<int>(i), j) = rows[i][j];
  }
  return m;
}

IntMat mul(const IntMat& x, const IntMat& y) {
  if (x.cols != y.rows) throw ValidationError("mul: shape mismatch");
  IntMat z(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Int& xik = x.at(i, k);
      if (xik == 0) continue;
      for (int j = 0; j < y.cols; ++j) z.at(i, j) += xik * y.at(k, j);
    }
  return z;
}

IntVec mul(const IntMat& x, const IntVec& v) {
  if (x.cols != static_cast<int>(v.size())) throw ValidationError("mul: vector length mismatch");
  IntVec r(x.rows, Int(0));
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) r[i] += x.at(i, j) * v[j];
  return r;
}

IntMat transpose(const IntMat& x) {
  IntMat t(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i)
    for (int j = 0; j < x.cols; ++j) t.at(j, i) = x.at(i, j);
  return t;
}

IntMat hstack(const IntMat& x, const IntMat& y) {
  if (x.rows != y.rows) throw ValidationError("hstack: row mismatch");
  IntMat z(x.rows, x.cols + y.cols);
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < x.cols; ++j) z.at(i, j) = x.at(i, j);
    for (int j = 0; j < y.cols; ++j) z.at(i, x.cols + j) = y.at(i, j);
  }
  return z;
}

namespace {

void swap_rows(IntMat& m, IntMat& u, int i, int k) {
  if (i == k) return;
  for (int j = 0; j < m.cols; ++j) std::swap(m.at(i, j), m.at(k, j));
  for (int j = 0; j < u.cols; ++j) std::swap(u.at(i, j), u.at(k, j));
}

void swap_cols(IntMat& m, IntMat& v, int j, int k) {
  if (j == k) return;
  for (int i = 0; i < m.rows; ++i) std::swap(m.at(i, j), m.at(i, k));
  for (int i = 0; i < v.rows; ++i) std::swap(v.at(i, j), v.at(i, k));
}

// row_i -= q * row_t
void row_op(IntMat& m, IntMat& u, int i, int t, const Int& q) {
  if (q == 0) return;
  for (int j = 0; j < m.cols; ++j) m.at(i, j) -= q * m.at(t, j);
  for (int j = 0; j < u.cols; ++j) u.at(i, j) -= q * u.at(t, j);
}

// col_j -= q * col_t
void col_op(IntMat& m, IntMat& v, int j, int t, const Int& q) {
  if (q == 0) return;
  for (int i = 0; i < m.rows; ++i) m.at(i, j) -= q * m.at(i, t);
  for (int i = 0; i < v.rows; ++i) v.at(i, j) -= q * v.at(i, t);
}

}  // namespace

SNFResult smith_normal_form(const IntMat& input) {
  IntMat m = input;
  IntMat u = IntMat::identity(m.rows);
  IntMat v = IntMat::identity(m.cols);
  const int n = std::min(m.rows, m.cols);

  for (int t = 0; t < n; ++t) {
    for (;;) {
      // pivot: entry of smallest absolute value in the trailing block
      int pi = -1, pj = -1;
      for (int i = t; i < m.rows; ++i)
        for (int j = t; j < m.cols; ++j)
          if (m.at(i, j) != 0 &&
              (pi < 0 || abs(m.at(i, j)) < abs(m.at(pi, pj)))) {
            pi = i;
            pj = j;
          }
      if (pi < 0) goto diagonal_done;
      swap_rows(m, u, t, pi);
      swap_cols(m, v, t, pj);

      bool clean = true;
      for (int i = t + 1; i < m.rows; ++i)
        if (m.at(i, t) != 0) {
          row_op(m, u, i, t, m.at(i, t) / m.at(t, t));
          if (m.at(i, t) != 0) clean = false;
        }
      for (int j = t + 1; j < m.cols; ++j)
        if (m.at(t, j) != 0) {
          col_op(m, v, j, t, m.at(t, j) / m.at(t, t));
          if (m.at(t, j) != 0) clean = false;
        }
      if (!clean) continue;

      // enforce divisibility of the remaining block by the pivot
      bool fixed = false;
      for (int i = t + 1; i < m.rows && !fixed; ++i)
        for (int j = t + 1; j < m.cols && !fixed; ++j)
          if (m.at(i, j) % m.at(t, t) != 0) {
            row_op(m, u, t, i, Int(-1));  // row_t += row_i
            fixed = true;
          }
      if (!fixed) break;
    }
  }
diagonal_done:

  SNFResult r;
  r.d.resize(n);
  for (int t = 0; t < n; ++t) {
    if (m.at(t, t) < 0) {
      for (int j = 0; j < u.cols; ++j) u.at(t, j) = -u.at(t, j);
      m.at(t, t) = -m.at(t, t);
    }
    r.d[t] = m.at(t, t);
  }
  r.u = std::move(u);
  r.v = std::move(v);
  return r;
}

int rank(const IntMat& m) {
  SNFResult s = smith_normal_form(m);
  int r = 0;
  for (const Int& x : s.d)
    if (x != 0) ++r;
  return r;
}

Int det(const IntMat& m) {
  if (m.rows != m.cols) throw ValidationError("det: not square");
  if (m.rows == 0) return 1;
  // Fraction-free via SNF transforms: det(M) = det(diag d)/(det U * det V),
  // and |det U| = |det V| = 1; track signs by expansion of the transforms.
  // Simpler: Bareiss elimination.
  IntMat a = m;
  Int sign = 1;
  Int prev = 1;
  const int n = a.rows;
  for (int k = 0; k < n - 1; ++k) {
    if (a.at(k, k) == 0) {
      int s = -1;
      for (int i = k + 1; i < n; ++i)
        if (a.at(i, k) != 0) {
          s = i;
          break;
        }
      if (s < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(s, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
        mpz_divexact(a.at(i, j).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a.at(k, k);
  }
  return sign * a.at(n - 1, n - 1);
}

IntMat hnf_columns(const IntMat& input) {
  IntMat m = input;
  int j0 = 0;
  std::vector<int> pivot_rows;
  for (int i = 0; i < m.rows && j0 < m.cols; ++i) {
    // clear row i across columns >= j0 down to a single nonzero
    for (;;) {
      int best = -1;
      for (int j = j0; j < m.cols; ++j)
        if (m.at(i, j) != 0 && (best < 0 || abs(m.at(i, j)) < abs(m.at(i, best)))) best = j;
      if (best < 0) break;
      if (best != j0)
        for (int r = 0; r < m.rows; ++r) std::swap(m.at(r, j0), m.at(r, best));
      bool clean = true;
      for (int j = j0 + 1; j < m.cols; ++j) {
        Int q = m.at(i, j) / m.at(i, j0);
        if (q != 0)
          for (int r = 0; r < m.rows; ++r) m.at(r, j) -= q * m.at(r, j0);
        if (m.at(i, j) != 0) clean = false;
      }
      if (clean) break;
    }
    if (m.at(i, j0) == 0) continue;
    if (m.at(i, j0) < 0)
      for (int r = 0; r < m.rows; ++r) m.at(r, j0) = -m.at(r, j0);
    // reduce earlier pivot columns against this pivot row
    for (size_t k = 0; k < pivot_rows.size(); ++k) {
      Int q = fdiv(m.at(i, static_cast<int>(k)), m.at(i, j0));
      if (q != 0)
        for (int r = 0; r < m.rows; ++r) m.at(r, static_cast<int>(k)) -= q * m.at(r, j0);
    }
    pivot_rows.push_back(i);
    ++j0;
  }
  IntMat out(m.rows, j0);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < j0; ++j) out.at(i, j) = m.at(i, j);
  return out;
}

IntMat kernel_basis(const IntMat& m) {
  SNFResult s = smith_normal_form(m);
  std::vector<IntVec> cols;
  const int n = static_cast<int>(s.d.size());
  for (int j = 0; j < m.cols; ++j) {
    bool in_kernel = j >= n || s.d[j] == 0;
    if (in_kernel) cols.push_back(s.v.col(j));
  }
  return hnf_columns(IntMat::from_columns(m.cols, cols));
}

IntVec reduce_mod_lattice(const IntMat& basis, IntVec v) {
  if (static_cast<int>(v.size()) != basis.rows)
    throw ValidationError("reduce_mod_lattice: dimension mismatch");
  int i = 0;
  for (int j = 0; j < basis.cols; ++j) {
    while (i < basis.rows && basis.at(i, j) == 0) ++i;
    if (i >= basis.rows) break;
    Int q = fdiv(v[i], basis.at(i, j));
    if (q != 0)
      for (int r = 0; r < basis.rows; ++r) v[r] -= q * basis.at(r, j);
    ++i;
  }
  return v;
}

std::optional<IntVec> solve(const IntMat& m, const IntVec& b) {
  SNFResult s = smith_normal_form(m);
  IntVec ub = mul(s.u, b);
  IntVec y(m.cols, Int(0));
  const int n = static_cast<int>(s.d.size());
  for (int i = 0; i < m.rows; ++i) {
    if (i < n && s.d[i] != 0) {
      if (ub[i] % s.d[i] != 0) return std::nullopt;
      y[i] = ub[i] / s.d[i];
    } else if (ub[i] != 0) {
      return std::nullopt;
    }
  }
  return mul(s.v, y);
}

bool in_column_lattice(const IntMat& m, const IntVec& b) { return solve(m, b).has_value(); }

IntMat lattice_intersection(const IntMat& x, const IntMat& y) {
  if (x.rows != y.rows) throw ValidationError("lattice_intersection: ambient mismatch");
  if (x.cols == 0 || y.cols == 0) return IntMat(x.rows, 0);
  IntMat neg_y = y;
  for (Int& e : neg_y.a) e = -e;
  IntMat k = kernel_basis(hstack(x, neg_y));
  // columns of x * (top block of k) span the intersection
  IntMat top(x.cols, k.cols);
  for (int i = 0; i < x.cols; ++i)
    for (int j = 0; j < k.cols; ++j) top.at(i, j) = k.at(i, j);
  return hnf_columns(mul(x, top));
}

int cmp(const GroupElem& a, const GroupElem& b) {
  int c = lex_cmp(a.torsion_part, b.torsion_part);
  if (c) return c;
  return lex_cmp(a.free_part, b.free_part);
}

GroupElem reduce(const FinAbGroup& g, const IntVec& raw) {
  if (static_cast<int>(raw.size()) != g.coord_count())
    throw ValidationError("GroupElem: coordinate count mismatch");
  GroupElem e;
  const int t = static_cast<int>(g.torsion.size());
  e.torsion_part.resize(t);
  for (int i = 0; i < t; ++i) e.torsion_part[i] = fmod(raw[i], g.torsion[i]);
  e.free_part.assign(raw.begin() + t, raw.end());
  return e;
}

GroupElem zero_elem(const FinAbGroup& g) {
  return reduce(g, IntVec(g.coord_count(), Int(0)));
}

IntVec lift(const GroupElem& a) {
  IntVec v = a.torsion_part;
  v.insert(v.end(), a.free_part.begin(), a.free_part.end());
  return v;
}

GroupElem add(const FinAbGroup& g, const GroupElem& a, const GroupElem& b) {
  return reduce(g, lift(a) + lift(b));
}

GroupElem sub(const FinAbGroup& g, const GroupElem& a, const GroupElem& b) {
  return reduce(g, lift(a) - lift(b));
}

GroupElem neg(const FinAbGroup& g, const GroupElem& a) { return reduce(g, -lift(a)); }

bool is_zero(const GroupElem& a) {
  return is_zero(a.torsion_part) && is_zero(a.free_part);
}

std::string to_string(const GroupElem& a) { return to_string(lift(a)); }

IntMat relation_matrix(const FinAbGroup& g) {
  const int t = static_cast<int>(g.torsion.size());
  IntMat m(g.coord_count(), t);
  for (int r = 0; r < t; ++r) m.at(r, r) = g.torsion[r];
  return m;
}

AbGroupHom make_hom(const FinAbGroup& src, const FinAbGroup& dst, IntMat m) {
  if (m.rows != dst.coord_count() || m.cols != src.coord_count())
    throw ValidationError("make_hom: shape mismatch");
  // each source relation must die in dst
  const int t = static_cast<int>(src.torsion.size());
  for (int r = 0; r < t; ++r) {
    IntVec rel(src.coord_count(), Int(0));
    rel[r] = src.torsion[r];
    if (!is_zero(reduce(dst, mul(m, rel))))
      throw ValidationError("make_hom: matrix does not kill source relations");
  }
  return AbGroupHom{src, dst, std::move(m)};
}

GroupElem apply(const AbGroupHom& h, const GroupElem& x) {
  return reduce(h.dst, mul(h.m, lift(x)));
}

CokernelPresentation cokernel(const IntMat& m) {
  SNFResult s = smith_normal_form(m);
  CokernelPresentation c;
  c.u = s.u;
  c.d = s.d;
  FinAbGroup g;
  for (const Int& x : s.d)
    if (x > 1) g.torsion.push_back(x);
  int nonzero = 0;
  for (const Int& x : s.d)
    if (x != 0) ++nonzero;
  g.free_rank = m.rows - nonzero;
  c.group = g;
  return c;
}

GroupElem project(const CokernelPresentation& c, const IntVec& v) {
  IntVec y = mul(c.u, v);
  IntVec coords;
  const int n = static_cast<int>(c.d.size());
  for (int i = 0; i < n; ++i)
    if (c.d[i] > 1) coords.push_back(y[i]);
  for (int i = 0; i < static_cast<int>(y.size()); ++i)
    if (i >= n || c.d[i] == 0) coords.push_back(y[i]);
  return reduce(c.group, coords);
}

AbGroupHom projection_hom(const CokernelPresentation& c, const FinAbGroup& src) {
  if (src.coord_count() != c.u.cols)
    throw ValidationError("projection_hom: source coordinate mismatch");
  IntMat m(c.group.coord_count(), c.u.cols);
  const int n = static_cast<int>(c.d.size());
  int out = 0;
  for (int i = 0; i < n; ++i)
    if (c.d[i] > 1) {
      for (int j = 0; j < c.u.cols; ++j) m.at(out, j) = c.u.at(i, j);
      ++out;
    }
  for (int i = 0; i < c.u.rows; ++i)
    if (i >= n || c.d[i] == 0) {
      for (int j = 0; j < c.u.cols; ++j) m.at(out, j) = c.u.at(i, j);
      ++out;
    }
  return make_hom(src, c.group, std::move(m));
}

SubgroupPresentation hom_image_group(const IntMat& psi, const FinAbGroup& p) {
  if (psi.rows != p.coord_count())
    throw ValidationError("hom_image_group: psi rows must match P coordinates");
  const IntMat rel = relation_matrix(p);
  const int k = psi.cols;

  // relations among the generator classes: projection of ker[psi | rel]
  IntMat stacked = hstack(psi, rel);
  IntMat ker = kernel_basis(stacked);
  IntMat rel_q(k, ker.cols);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < ker.cols; ++j) rel_q.at(i, j) = ker.at(i, j);

  CokernelPresentation q_pres = cokernel(rel_q);

  SubgroupPresentation s;
  s.parent = p;
  s.group = q_pres.group;

  // inclusion: image of each canonical Q-generator inside P.
  // Q-generator i corresponds (through U^{-1}) to a Z^k vector; its class in P
  // is psi times that vector. U^{-1} columns solve U x = e_i.
  const int qc = s.group.coord_count();
  IntMat incl(p.coord_count(), qc);
  {
    AbGroupHom pr = projection_hom(q_pres, FinAbGroup::free_group(k));
    // find, for each canonical generator, a preimage in Z^k
    for (int i = 0; i < qc; ++i) {
      IntVec target(qc, Int(0));
      target[i] = 1;
      // solve pr.m * x = target + torsion adjustments: use stacked solve
      IntMat m2 = hstack(pr.m, relation_matrix(s.group));
      std::optional<IntVec> sol = solve(m2, target);
      if (!sol) throw ValidationError("hom_image_group: internal (generator preimage)");
      IntVec x(sol->begin(), sol->begin() + k);
      IntVec img = mul(psi, x);
      for (int r = 0; r < p.coord_count(); ++r) incl.at(r, i) = img[r];
    }
  }
  s.incl = std::move(incl);
  s.gen_classes = [&] {
    AbGroupHom pr = projection_hom(q_pres, FinAbGroup::free_group(k));
    IntMat g(qc, k);
    for (int j = 0; j < k; ++j) {
      IntVec e(k, Int(0));
      e[j] = 1;
      GroupElem cls = apply(pr, reduce(FinAbGroup::free_group(k), e));
      IntVec l = lift(cls);
      for (int i = 0; i < qc; ++i) g.at(i, j) = l[i];
    }
    return g;
  }();

  // quotient P/Q = coker [psi | rel] on lifted P-coordinates
  CokernelPresentation quo = cokernel(stacked);
  s.quotient = quo.group;
  s.quotient_proj = projection_hom(quo, p);
  return s;
}

std::optional<GroupElem> subgroup_section(const SubgroupPresentation& s, const GroupElem& w) {
  // solve incl * x = lift(w) modulo P's relations
  IntMat m = hstack(s.incl, relation_matrix(s.parent));
  std::optional<IntVec> sol = solve(m, lift(w));
  if (!sol) return std::nullopt;
  IntVec x(sol->begin(), sol->begin() + s.group.coord_count());
  return reduce(s.group, x);
}

}  // namespace gtoric
