#include "gtoric/graded_matrix.hpp"

#include <algorithm>
#include <map>

namespace gtoric {

void check_graded(const ToricGAlgebra& alg, const GradedMatrix& m) {
  if (m.entries.size() != static_cast<size_t>(m.rows()) * m.cols())
    throw ValidationError("graded matrix: entry count mismatch");
  const FinAbGroup& p = alg.grading();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      GroupElem w = sub(p, m.source[j], m.target[i]);
      if (!is_homogeneous(alg, m.at(i, j), w))
        throw ValidationError("graded matrix: entry (" + std::to_string(i) + "," +
                              std::to_string(j) + ") not homogeneous of its prescribed weight");
    }
}

GradedMatrix make_graded(const ToricGAlgebra& alg, WeightVector source, WeightVector target,
                         std::vector<AlgebraElem> entries) {
  GradedMatrix m{std::move(source), std::move(target), std::move(entries)};
  check_graded(alg, m);
  return m;
}

GradedMatrix graded_identity(const ToricGAlgebra& alg, const WeightVector& w) {
  GradedMatrix m{w, w, std::vector<AlgebraElem>(w.size() * w.size())};
  for (size_t i = 0; i < w.size(); ++i) m.at(static_cast<int>(i), static_cast<int>(i)) = one(alg);
  return m;
}

GradedMatrix graded_zero(const ToricGAlgebra& alg, const WeightVector& source,
                         const WeightVector& target) {
  return GradedMatrix{source, target, std::vector<AlgebraElem>(source.size() * target.size())};
}

GradedMatrix standard_projector(const ToricGAlgebra& alg, const WeightVector& w, int k) {
  GradedMatrix m = graded_zero(alg, w, w);
  for (int i = 0; i < k; ++i) m.at(i, i) = one(alg);
  return m;
}

GradedMatrix add(const ToricGAlgebra& alg, const GradedMatrix& f, const GradedMatrix& g) {
  if (f.source != g.source || f.target != g.target)
    throw ValidationError("graded add: weight mismatch");
  GradedMatrix m = f;
  for (size_t i = 0; i < m.entries.size(); ++i)
    m.entries[i] = add(alg, m.entries[i], g.entries[i]);
  return m;
}

GradedMatrix sub(const ToricGAlgebra& alg, const GradedMatrix& f, const GradedMatrix& g) {
  if (f.source != g.source || f.target != g.target)
    throw ValidationError("graded sub: weight mismatch");
  GradedMatrix m = f;
  for (size_t i = 0; i < m.entries.size(); ++i)
    m.entries[i] = sub(alg, m.entries[i], g.entries[i]);
  return m;
}

GradedMatrix compose(const ToricGAlgebra& alg, const GradedMatrix& f, const GradedMatrix& g) {
  if (f.source != g.target) throw ValidationError("compose: weight mismatch");
  GradedMatrix m = graded_zero(alg, g.source, f.target);
  for (int i = 0; i < f.rows(); ++i)
    for (int k = 0; k < f.cols(); ++k) {
      if (f.at(i, k).is_zero()) continue;
      for (int j = 0; j < g.cols(); ++j) {
        if (g.at(k, j).is_zero()) continue;
        m.at(i, j) = add(alg, m.at(i, j), mul(alg, f.at(i, k), g.at(k, j)));
      }
    }
  check_graded(alg, m);
  return m;
}

GradedMatrix direct_sum(const ToricGAlgebra& alg, const GradedMatrix& f, const GradedMatrix& g) {
  WeightVector src = f.source, tgt = f.target;
  src.insert(src.end(), g.source.begin(), g.source.end());
  tgt.insert(tgt.end(), g.target.begin(), g.target.end());
  GradedMatrix m = graded_zero(alg, src, tgt);
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j) m.at(i, j) = f.at(i, j);
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) m.at(f.rows() + i, f.cols() + j) = g.at(i, j);
  return m;
}

namespace {

// determinant over column subsets: expansion along rows with memoization;
// the cofactor sign flips per remaining column
AlgebraElem det_recursive(const ToricGAlgebra& alg, const GradedMatrix& f, int row, unsigned mask,
                          std::map<unsigned, AlgebraElem>& memo) {
  const int n = f.rows();
  if (row == n) return one(alg);
  auto it = memo.find(mask);
  if (it != memo.end()) return it->second;
  AlgebraElem acc;
  int sign = 1;
  for (int j = 0; j < n; ++j) {
    if (!(mask & (1u << j))) continue;
    if (!f.at(row, j).is_zero()) {
      AlgebraElem sub_det = det_recursive(alg, f, row + 1, mask & ~(1u << j), memo);
      AlgebraElem term = mul(alg, f.at(row, j), sub_det);
      acc = sign > 0 ? add(alg, acc, term) : sub(alg, acc, term);
    }
    sign = -sign;
  }
  memo[mask] = acc;
  return acc;
}

AlgebraElem det_raw(const ToricGAlgebra& alg, const GradedMatrix& f) {
  if (f.rows() != f.cols()) throw ValidationError("det: not square");
  if (f.rows() > 20) throw ResourceError("det: rank too large");
  if (f.rows() == 0) return one(alg);
  std::map<unsigned, AlgebraElem> memo;
  return det_recursive(alg, f, 0, (1u << f.rows()) - 1, memo);
}

}  // namespace

AlgebraElem det_endo(const ToricGAlgebra& alg, const GradedMatrix& f) {
  if (f.source != f.target) throw ValidationError("det_endo: source and target weights differ");
  return det_raw(alg, f);
}

bool is_unit(const ToricGAlgebra& alg, const AlgebraElem& x) {
  return unit_inverse(alg, x).has_value();
}

std::optional<AlgebraElem> unit_inverse(const ToricGAlgebra& alg, const AlgebraElem& x) {
  if (x.terms.size() != 1) return std::nullopt;
  const auto& [q, r] = *x.terms.begin();
  if (!alg.coeff().is_unit(r)) return std::nullopt;
  if (!alg.monoid().contains(-q)) return std::nullopt;
  return monomial(alg, -q, alg.coeff().inverse(r));
}

GradedMatrix adjugate(const ToricGAlgebra& alg, const GradedMatrix& f) {
  const int n = f.rows();
  if (n != f.cols()) throw ValidationError("adjugate: not square");
  // adj(f)_{ij} = (-1)^{i+j} minor_{ji}: an f.target -> f.source map
  GradedMatrix a = graded_zero(alg, f.target, f.source);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // minor with row j, column i removed
      WeightVector ms, mt;
      std::vector<AlgebraElem> ent;
      for (int r = 0; r < n; ++r) {
        if (r == j) continue;
        mt.push_back(f.target[r]);
      }
      for (int c = 0; c < n; ++c) {
        if (c == i) continue;
        ms.push_back(f.source[c]);
      }
      for (int r = 0; r < n; ++r) {
        if (r == j) continue;
        for (int c = 0; c < n; ++c) {
          if (c == i) continue;
          ent.push_back(f.at(r, c));
        }
      }
      GradedMatrix minor{std::move(ms), std::move(mt), std::move(ent)};
      AlgebraElem d = det_raw(alg, minor);
      a.at(i, j) = ((i + j) % 2 == 0) ? d : neg(alg, d);
    }
  return a;
}

GradedMatrix invert(const ToricGAlgebra& alg, const GradedMatrix& f) {
  if (f.rows() != f.cols()) throw NotInvertible("invert: not square");
  AlgebraElem d = det_raw(alg, f);
  std::optional<AlgebraElem> dinv = unit_inverse(alg, d);
  if (!dinv) throw NotInvertible("invert: determinant is not a unit");
  GradedMatrix a = adjugate(alg, f);
  for (AlgebraElem& e : a.entries) e = mul(alg, e, *dinv);
  check_graded(alg, a);
  return a;
}

std::vector<std::vector<bool>> invariant_entry_mask(const ToricGAlgebra& alg,
                                                    const GradedMatrix& f) {
  std::vector<std::vector<bool>> mask(f.rows(), std::vector<bool>(f.cols(), false));
  std::map<GroupElem, bool, GroupElemLess> cache;
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j) {
      GroupElem w = sub(alg.grading(), f.source[j], f.target[i]);
      auto it = cache.find(w);
      if (it == cache.end()) it = cache.emplace(w, weight_reachable(alg, w)).first;
      mask[i][j] = it->second;
    }
  return mask;
}

GradedMatrix restrict_to_face(const ToricGAlgebra& alg, const Face& tau, const GradedMatrix& f) {
  GradedMatrix m = f;
  for (AlgebraElem& e : m.entries) e = face_restrict(alg, tau, e);
  check_graded(alg, m);
  return m;
}

bool is_idempotent(const ToricGAlgebra& alg, const GradedMatrix& e) {
  if (e.rows() != e.cols() || e.source != e.target) return false;
  return compose(alg, e, e) == e;
}

GradedIdempotent make_idempotent(const ToricGAlgebra& alg, GradedMatrix e) {
  check_graded(alg, e);
  if (!is_idempotent(alg, e)) throw ValidationError("make_idempotent: e*e != e");
  return GradedIdempotent{std::move(e)};
}

std::vector<WeightBlock> weight_split(const ToricGAlgebra& alg, const GradedIdempotent& e,
                                      const AbGroupHom& quotient) {
  const GradedMatrix& m = e.e;
  const int n = m.rows();
  std::map<GroupElem, std::vector<int>, GroupElemLess> by_class;
  for (int i = 0; i < n; ++i) by_class[apply(quotient, m.source[i])].push_back(i);

  // off-block entries must vanish
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (m.at(i, j).is_zero()) continue;
      if (apply(quotient, m.source[i]) != apply(quotient, m.source[j]))
        throw StructuralViolation("weight_split: nonzero entry across weight classes at (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
    }

  std::vector<WeightBlock> blocks;
  for (const auto& [cls, idx] : by_class) {
    WeightBlock b;
    b.cls = cls;
    b.indices = idx;
    WeightVector w;
    for (int i : idx) w.push_back(m.source[i]);
    GradedMatrix sub_m = graded_zero(alg, w, w);
    for (size_t a = 0; a < idx.size(); ++a)
      for (size_t c = 0; c < idx.size(); ++c)
        sub_m.at(static_cast<int>(a), static_cast<int>(c)) = m.at(idx[a], idx[c]);
    b.idem = make_idempotent(alg, std::move(sub_m));
    blocks.push_back(std::move(b));
  }
  return blocks;
}

LocalGradedMatrix to_local(const GradedMatrix& m, int k) {
  LocalGradedMatrix l{m.source, m.target, {}};
  l.entries.reserve(m.entries.size());
  for (const AlgebraElem& e : m.entries) l.entries.push_back(LocalizedElem{e, k});
  return l;
}

LocalGradedMatrix compose(const Localization& ctx, const LocalGradedMatrix& f,
                          const LocalGradedMatrix& g) {
  if (f.source != g.target) throw ValidationError("compose (local): weight mismatch");
  LocalGradedMatrix m{g.source, f.target,
                      std::vector<LocalizedElem>(g.source.size() * f.target.size())};
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) {
      LocalizedElem acc{{}, 0};
      for (int k = 0; k < f.cols(); ++k)
        acc = add(ctx, acc, mul(ctx, f.at(i, k), g.at(k, j)));
      m.at(i, j) = std::move(acc);
    }
  return m;
}

bool eq(const Localization& ctx, const LocalGradedMatrix& f, const LocalGradedMatrix& g) {
  if (f.source != g.source || f.target != g.target) return false;
  for (int i = 0; i < f.rows(); ++i)
    for (int j = 0; j < f.cols(); ++j)
      if (!eq(ctx, f.at(i, j), g.at(i, j))) return false;
  return true;
}

void check_graded(const Localization& ctx, const LocalGradedMatrix& m) {
  // h is weight 0, so denominators never shift weights
  const FinAbGroup& p = ctx.alg().grading();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      GroupElem w = sub(p, m.source[j], m.target[i]);
      if (!is_homogeneous(ctx.alg(), m.at(i, j).num, w))
        throw ValidationError("local graded matrix: entry not homogeneous");
    }
}

}  // namespace gtoric
