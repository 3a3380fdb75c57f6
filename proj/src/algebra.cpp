#include "gtoric/algebra.hpp"

#include <algorithm>
#include <sstream>

#include "gtoric/enumerate.hpp"

namespace gtoric {

ToricGAlgebra::ToricGAlgebra(CoeffRing coeff, AffineMonoid monoid, FinAbGroup grading, IntMat psi)
    : coeff_(std::move(coeff)),
      monoid_(std::move(monoid)),
      grading_(std::move(grading)),
      psi_(std::move(psi)) {
  if (psi_.cols != monoid_.ambient_rank())
    throw ValidationError("algebra: psi columns must equal the lattice rank");
  if (psi_.rows != grading_.coord_count())
    throw ValidationError("algebra: psi rows must match the grading group coordinates");
}

AlgebraElem zero_elem() { return AlgebraElem{}; }

AlgebraElem monomial(const ToricGAlgebra& alg, const IntVec& point, const Scalar& coeff) {
  Scalar c = alg.coeff().normalize(coeff);
  if (c == 0) return {};
  if (!alg.monoid().contains(point))
    throw ValidationError("monomial: point " + to_string(point) + " is not in the monoid");
  AlgebraElem x;
  x.terms.emplace(point, std::move(c));
  return x;
}

AlgebraElem constant(const ToricGAlgebra& alg, const Scalar& coeff) {
  return monomial(alg, IntVec(alg.ambient_rank(), Int(0)), coeff);
}

AlgebraElem one(const ToricGAlgebra& alg) { return constant(alg, Scalar(1)); }

AlgebraElem add(const ToricGAlgebra& alg, const AlgebraElem& x, const AlgebraElem& y) {
  AlgebraElem z = x;
  for (const auto& [pt, c] : y.terms) {
    auto it = z.terms.find(pt);
    if (it == z.terms.end()) {
      z.terms.emplace(pt, c);
    } else {
      it->second = alg.coeff().add(it->second, c);
      if (it->second == 0) z.terms.erase(it);
    }
  }
  return z;
}

AlgebraElem neg(const ToricGAlgebra& alg, const AlgebraElem& x) {
  AlgebraElem z = x;
  for (auto& [pt, c] : z.terms) c = alg.coeff().neg(c);
  return z;
}

AlgebraElem sub(const ToricGAlgebra& alg, const AlgebraElem& x, const AlgebraElem& y) {
  return add(alg, x, neg(alg, y));
}

AlgebraElem mul(const ToricGAlgebra& alg, const AlgebraElem& x, const AlgebraElem& y) {
  AlgebraElem z;
  for (const auto& [px, cx] : x.terms)
    for (const auto& [py, cy] : y.terms) {
      IntVec p = px + py;
      Scalar c = alg.coeff().mul(cx, cy);
      auto it = z.terms.find(p);
      if (it == z.terms.end()) {
        if (c != 0) z.terms.emplace(std::move(p), std::move(c));
      } else {
        it->second = alg.coeff().add(it->second, c);
        if (it->second == 0) z.terms.erase(it);
      }
    }
  return z;
}

AlgebraElem scale(const ToricGAlgebra& alg, const Scalar& c, const AlgebraElem& x) {
  Scalar cn = alg.coeff().normalize(c);
  AlgebraElem z;
  if (cn == 0) return z;
  for (const auto& [pt, cc] : x.terms) {
    Scalar v = alg.coeff().mul(cn, cc);
    if (v != 0) z.terms.emplace(pt, std::move(v));
  }
  return z;
}

GroupElem weight(const ToricGAlgebra& alg, const IntVec& monoid_point) {
  return reduce(alg.grading(), mul(alg.psi(), monoid_point));
}

bool is_homogeneous(const ToricGAlgebra& alg, const AlgebraElem& x, const GroupElem& w) {
  for (const auto& [pt, c] : x.terms)
    if (weight(alg, pt) != w) return false;
  return true;
}

std::optional<GroupElem> homogeneous_weight(const ToricGAlgebra& alg, const AlgebraElem& x) {
  if (x.is_zero()) return std::nullopt;
  GroupElem w = weight(alg, x.terms.begin()->first);
  return is_homogeneous(alg, x, w) ? std::optional<GroupElem>(w) : std::nullopt;
}

bool is_invariant(const ToricGAlgebra& alg, const AlgebraElem& x) {
  return is_homogeneous(alg, x, zero_elem(alg.grading()));
}

AffineMonoid invariant_monoid_of(const ToricGAlgebra& alg) {
  return invariant_monoid(alg.monoid(), alg.psi(), alg.grading());
}

std::vector<AlgebraElem> invariant_generators(const ToricGAlgebra& alg) {
  std::vector<AlgebraElem> out;
  AffineMonoid inv = invariant_monoid_of(alg);
  for (const IntVec& q : inv.generators()) out.push_back(monomial(alg, q, Scalar(1)));
  return out;
}

bool weight_reachable(const ToricGAlgebra& alg, const GroupElem& w) {
  std::vector<IntVec> gens;
  for (const IntVec& v : alg.monoid().generators()) gens.push_back(mul(alg.psi(), v));
  const FinAbGroup& p = alg.grading();
  for (size_t r = 0; r < p.torsion.size(); ++r) {
    IntVec e(p.coord_count(), Int(0));
    e[r] = p.torsion[r];
    gens.push_back(e);
    gens.push_back(-e);
  }
  return nspan_member(lift(w), gens);
}

// -- faces --

bool supported_on_face(const ToricGAlgebra& alg, const Face& tau, const AlgebraElem& x) {
  for (const auto& [pt, c] : x.terms)
    for (int i : tau.zero_set)
      if (dot(tau.parent.functionals[i], pt) != 0) return false;
  return true;
}

AlgebraElem face_restrict(const ToricGAlgebra& alg, const Face& tau, const AlgebraElem& x) {
  AlgebraElem z;
  for (const auto& [pt, c] : x.terms) {
    bool on = true;
    for (int i : tau.zero_set)
      if (dot(tau.parent.functionals[i], pt) != 0) {
        on = false;
        break;
      }
    if (on) z.terms.emplace(pt, c);
  }
  return z;
}

AlgebraElem face_section(const ToricGAlgebra& alg, const Face& tau, const AlgebraElem& x) {
  if (!supported_on_face(alg, tau, x))
    throw ValidationError("face_section: support lies outside the face");
  return x;
}

bool is_zero_mod_face_ideal(const ToricGAlgebra& alg, const Face& tau, const AlgebraElem& x) {
  // the face ideal is spanned by the monomials off the face
  return face_restrict(alg, tau, x).is_zero();
}

// -- interior ideal --

bool monomial_in_interior_ideal(const ToricGAlgebra& alg, const IntVec& m) {
  return alg.monoid().contains(m) && strict_interior(alg.monoid().cone(), m);
}

namespace {

// Pull the monoid's cone into its lattice coordinates.
Cone monoid_local_cone(const AffineMonoid& m) {
  return pullback_cone(m.cone(), m.lattice_embed());
}

struct QuotientSetup {
  IntMat pi;        // lattice coords -> quotient coords
  SNFResult lin_snf;
  IntMat lin;       // lineality basis in lattice coords
  Cone qcone;       // pointed image cone
  int qdim = 0;
};

std::optional<QuotientSetup> quotient_of(const Cone& local) {
  QuotientSetup q;
  q.lin = local.lineality_basis;
  const int d = local.ambient_rank;
  if (q.lin.cols == d && d > 0) return std::nullopt;  // a subspace: empty quotient cone
  q.lin_snf = smith_normal_form(q.lin.cols ? q.lin : IntMat(d, 0));
  q.qdim = d - q.lin.cols;
  q.pi = IntMat(q.qdim, d);
  for (int i = 0; i < q.qdim; ++i)
    for (int j = 0; j < d; ++j) q.pi.at(i, j) = q.lin_snf.u.at(q.lin.cols + i, j);
  std::vector<IntVec> proj_rays;
  for (const IntVec& r : local.rays) {
    IntVec pr = mul(q.pi, r);
    if (!is_zero(pr)) proj_rays.push_back(primitive(pr));
  }
  q.qcone = proj_rays.empty() ? cone_from_rays(q.qdim, {}) : cone_from_rays(q.qdim, proj_rays);
  return q;
}

IntVec lift_from_quotient(const QuotientSetup& q, int d, const IntVec& y) {
  IntVec rhs(d, Int(0));
  for (int i = 0; i < q.qdim; ++i) rhs[d - q.qdim + i] = y[i];
  std::optional<IntVec> x = solve(q.lin_snf.u, rhs);
  if (!x) throw ValidationError("lift_from_quotient: internal");
  return reduce_mod_lattice(q.lin, *x);
}

// Points of the pointed cone's monoid with functional-sum value <= bound,
// filtered by pred; enumerated over the bounding box of the w-slice.
std::vector<IntVec> bounded_cone_points(const Cone& q, const Int& bound,
                                        const PointPredicate& pred, const Int& budget) {
  if (q.ambient_rank == 0 || q.rays.empty()) return {};
  IntVec w(q.ambient_rank, Int(0));
  for (const IntVec& l : q.functionals) w = w + l;
  IntVec lo(q.ambient_rank, Int(0)), hi(q.ambient_rank, Int(0));
  for (const IntVec& r : q.rays) {
    Int wr = dot(w, r);
    if (wr <= 0) throw ValidationError("bounded_cone_points: cone not pointed (internal)");
    for (int i = 0; i < q.ambient_rank; ++i) {
      lo[i] = std::min(lo[i], fdiv(bound * r[i], wr));
      hi[i] = std::max(hi[i], cdiv(bound * r[i], wr));
    }
  }
  return enumerate_box(
      lo, hi,
      [&](const IntVec& p) {
        if (is_zero(p)) return false;
        if (dot(w, p) > bound) return false;
        if (!contains(q, p)) return false;
        return pred(p);
      },
      budget);
}

}  // namespace

const std::vector<IntVec>& ToricGAlgebra::interior_generators() const {
  std::lock_guard<std::mutex> lk(cache_mutex_);
  if (interior_cache_) return *interior_cache_;

  std::vector<IntVec> out;
  Cone local = monoid_local_cone(monoid_);
  if (local.functionals.empty()) {
    // the cone is the whole space: every monoid point is interior, J = (1)
    out.push_back(IntVec(monoid_.ambient_rank(), Int(0)));
  } else if (spans_ambient(local)) {
    // (a non-spanning cone has empty strict interior)
    std::optional<QuotientSetup> q = quotient_of(local);
    if (q && !q->qcone.rays.empty()) {
      std::vector<IntVec> qgens = hilbert_basis(q->qcone, monoid_.budget());
      Int len_bound = 0;
      Int max_w = 0;
      IntVec w(q->qdim, Int(0));
      for (const IntVec& l : q->qcone.functionals) w = w + l;
      for (const IntVec& l : q->qcone.functionals) {
        Int ci = 0;
        for (const IntVec& v : qgens) ci = std::max(ci, dot(l, v));
        len_bound += ci;
      }
      for (const IntVec& v : qgens) max_w = std::max(max_w, dot(w, v));
      Int bound = len_bound * max_w;

      std::vector<IntVec> candidates = bounded_cone_points(
          q->qcone, bound,
          [&](const IntVec& p) { return strict_interior(q->qcone, p); }, monoid_.budget());

      for (const IntVec& x : candidates) {
        bool minimal = true;
        for (const IntVec& y : candidates) {
          if (y == x) continue;
          if (contains(q->qcone, x - y)) {
            minimal = false;
            break;
          }
        }
        if (minimal) {
          IntVec local_pt = lift_from_quotient(*q, local.ambient_rank, x);
          out.push_back(mul(monoid_.lattice_embed(), local_pt));
        }
      }
      std::sort(out.begin(), out.end(), IntVecLess{});
    }
  }
  interior_cache_ = std::move(out);
  return *interior_cache_;
}

bool ideal_J_power_member(const ToricGAlgebra& alg, const AlgebraElem& x, int n) {
  if (n < 0) throw ValidationError("ideal_J_power_member: negative power");
  if (n == 0) return true;
  const std::vector<IntVec>& gens = alg.interior_generators();
  std::map<std::pair<IntVec, int>, bool> memo;
  std::function<bool(const IntVec&, int)> member = [&](const IntVec& m, int k) -> bool {
    if (!alg.monoid().contains(m)) return false;
    if (k == 0) return true;
    if (k == 1 && strict_interior(alg.monoid().cone(), m)) return true;
    auto key = std::make_pair(m, k);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    bool ok = false;
    for (const IntVec& g : gens)
      if (member(m - g, k - 1)) {
        ok = true;
        break;
      }
    memo[key] = ok;
    return ok;
  };
  for (const auto& [pt, c] : x.terms)
    if (!member(pt, n)) return false;
  return true;
}

Int large_N(const ToricGAlgebra& alg, const IntVec& m) {
  const Cone& c = alg.monoid().cone();
  if (c.functionals.empty()) return 0;
  const std::vector<IntVec>& gens = alg.monoid().generators();
  Int s = 0;
  for (const IntVec& l : c.functionals)
    for (const IntVec& v : gens) {
      Int val = dot(l, v);
      if (val > 0 && (s == 0 || val < s)) s = val;
    }
  if (s == 0) return 1;  // no interior monomials, J = 0: vacuous bound
  Int n = 0;
  for (const IntVec& l : c.functionals) n = std::max(n, cdiv(dot(l, m), s));
  return std::max(n, Int(0));
}

std::vector<AlgebraElem> invariant_part_of_monomial_ideal(const ToricGAlgebra& alg,
                                                          MonomialIdealKind kind) {
  if (kind == MonomialIdealKind::zero) return {};
  if (kind == MonomialIdealKind::unit) return invariant_generators(alg);

  AffineMonoid inv = invariant_monoid_of(alg);
  const std::vector<IntVec>& kgens = inv.generators();
  if (kgens.empty()) {
    // A^G = R: the invariant part of J is J cap R = 0 unless 1 is interior
    std::vector<AlgebraElem> out;
    IntVec origin(alg.ambient_rank(), Int(0));
    if (strict_interior(alg.monoid().cone(), origin))
      out.push_back(monomial(alg, origin, Scalar(1)));
    return out;
  }

  // work in the invariant lattice's coordinates
  Cone local = monoid_local_cone(inv);
  const IntMat& embed = inv.lattice_embed();
  if (local.functionals.empty()) {
    // invariant monoid is a full torus: J cap A^G is everything or zero
    std::vector<AlgebraElem> out;
    IntVec origin(alg.ambient_rank(), Int(0));
    if (strict_interior(alg.monoid().cone(), origin))
      out.push_back(monomial(alg, origin, Scalar(1)));
    return out;
  }

  std::optional<QuotientSetup> q = quotient_of(local);
  std::vector<AlgebraElem> out;
  auto ambient_interior = [&](const IntVec& local_pt) {
    return strict_interior(alg.monoid().cone(), mul(embed, local_pt));
  };
  if (!q) {
    IntVec origin(alg.ambient_rank(), Int(0));
    if (strict_interior(alg.monoid().cone(), origin))
      out.push_back(monomial(alg, origin, Scalar(1)));
    return out;
  }
  if (q->qcone.rays.empty()) return out;

  // counting bound: a minimal element decomposes into at most
  // sum_i max_t l_i(k_t) invariant generators (ambient functionals l_i,
  // invariant generators k_t); convert the length cap to a w-cap in the
  // quotient coordinates
  Int len_bound = 0;
  for (const IntVec& l : alg.monoid().cone().functionals) {
    Int ci = 0;
    for (const IntVec& kgen : kgens) ci = std::max(ci, dot(l, kgen));
    len_bound += ci;
  }
  IntVec w(q->qdim, Int(0));
  for (const IntVec& l : q->qcone.functionals) w = w + l;
  Int max_w = 0;
  for (const IntVec& kgen : kgens) {
    std::optional<IntVec> local_k = solve(embed, kgen);
    if (!local_k) throw ValidationError("invariant_part: internal (generator outside lattice)");
    max_w = std::max(max_w, dot(w, mul(q->pi, *local_k)));
  }
  Int bound = len_bound * std::max(max_w, Int(1));

  std::vector<IntVec> candidates = bounded_cone_points(
      q->qcone, bound,
      [&](const IntVec& p) {
        return ambient_interior(lift_from_quotient(*q, local.ambient_rank, p));
      },
      alg.monoid().budget());

  for (const IntVec& x : candidates) {
    bool minimal = true;
    for (const IntVec& y : candidates) {
      if (y == x) continue;
      if (contains(q->qcone, x - y)) {
        minimal = false;
        break;
      }
    }
    if (minimal) {
      IntVec local_pt = lift_from_quotient(*q, local.ambient_rank, x);
      out.push_back(monomial(alg, mul(embed, local_pt), Scalar(1)));
    }
  }
  std::sort(out.begin(), out.end(), [](const AlgebraElem& a, const AlgebraElem& b) {
    return lex_cmp(a.terms.begin()->first, b.terms.begin()->first) < 0;
  });
  return out;
}

// -- localization --

Localization::Localization(AlgebraPtr alg, AlgebraElem h) : alg_(std::move(alg)), h_(std::move(h)) {
  if (!alg_->coeff().is_domain)
    throw ValidationError("localize: coefficient ring must be a domain");
  if (h_.is_zero()) throw ValidationError("localize: h must be nonzero");
  if (!is_invariant(*alg_, h_))
    throw ValidationError("localize: h must be invariant (weight-0 homogeneous)");
}

AlgebraElem Localization::h_power(int k) const {
  AlgebraElem p = one(*alg_);
  for (int i = 0; i < k; ++i) p = mul(*alg_, p, h_);
  return p;
}

LocalizedElem localize_elem(const AlgebraElem& a, int k) { return LocalizedElem{a, k}; }

LocalizedElem add(const Localization& ctx, const LocalizedElem& x, const LocalizedElem& y) {
  int k = std::max(x.k, y.k);
  AlgebraElem xs = mul(ctx.alg(), x.num, ctx.h_power(k - x.k));
  AlgebraElem ys = mul(ctx.alg(), y.num, ctx.h_power(k - y.k));
  return LocalizedElem{add(ctx.alg(), xs, ys), k};
}

LocalizedElem sub(const Localization& ctx, const LocalizedElem& x, const LocalizedElem& y) {
  return add(ctx, x, neg(ctx, y));
}

LocalizedElem neg(const Localization& ctx, const LocalizedElem& x) {
  return LocalizedElem{neg(ctx.alg(), x.num), x.k};
}

LocalizedElem mul(const Localization& ctx, const LocalizedElem& x, const LocalizedElem& y) {
  return LocalizedElem{mul(ctx.alg(), x.num, y.num), x.k + y.k};
}

bool eq(const Localization& ctx, const LocalizedElem& x, const LocalizedElem& y) {
  // cross-multiply (valid over a domain with h != 0)
  AlgebraElem lhs = mul(ctx.alg(), x.num, ctx.h_power(y.k));
  AlgebraElem rhs = mul(ctx.alg(), y.num, ctx.h_power(x.k));
  return lhs == rhs;
}

bool is_zero(const LocalizedElem& x) { return x.num.is_zero(); }

std::optional<AlgebraElem> exact_divide_h(const ToricGAlgebra& alg, const AlgebraElem& f,
                                          const AlgebraElem& h, int k) {
  if (k == 0) return f;
  if (h.is_zero()) return std::nullopt;

  // functional-sum grading; h must have a unique minimal slice that is a
  // single monomial with unit coefficient
  IntVec w(alg.ambient_rank(), Int(0));
  for (const IntVec& l : alg.monoid().cone().functionals) w = w + l;
  auto wval = [&](const IntVec& p) { return dot(w, p); };

  IntVec m0;
  Scalar c0;
  {
    bool first = true;
    Int best = 0;
    int count_at_best = 0;
    for (const auto& [pt, c] : h.terms) {
      Int v = wval(pt);
      if (first || v < best) {
        best = v;
        m0 = pt;
        c0 = c;
        count_at_best = 1;
        first = false;
      } else if (v == best) {
        ++count_at_best;
      }
    }
    if (count_at_best != 1) return std::nullopt;
    if (!alg.coeff().is_unit(c0)) return std::nullopt;
  }

  AlgebraElem result = f;
  for (int step = 0; step < k; ++step) {
    AlgebraElem r = result;
    AlgebraElem quotient;
    Int fmax = 0;
    for (const auto& [pt, c] : r.terms) fmax = std::max(fmax, wval(pt));
    long guard = static_cast<long>(r.terms.size() + 1) * static_cast<long>(h.terms.size() + 1) *
                     64 + 1024;
    while (!r.is_zero()) {
      if (--guard < 0) return std::nullopt;
      // minimal w-slice of r
      Int rmin = 0;
      bool first = true;
      for (const auto& [pt, c] : r.terms) {
        Int v = wval(pt);
        if (first || v < rmin) {
          rmin = v;
          first = false;
        }
      }
      if (rmin > fmax) return std::nullopt;
      AlgebraElem slice_q;
      for (const auto& [pt, c] : r.terms) {
        if (wval(pt) != rmin) continue;
        IntVec qpt = pt - m0;
        if (!alg.monoid().contains(qpt)) return std::nullopt;
        Scalar qc = alg.coeff().mul(c, alg.coeff().inverse(c0));
        slice_q.terms.emplace(std::move(qpt), std::move(qc));
      }
      quotient = add(alg, quotient, slice_q);
      r = sub(alg, r, mul(alg, slice_q, h));
    }
    result = std::move(quotient);
  }
  // verify
  AlgebraElem check = result;
  for (int step = 0; step < k; ++step) check = mul(alg, check, h);
  if (!(check == f)) return std::nullopt;
  return result;
}

// -- rendering --

std::string render(const AlgebraElem& x) {
  if (x.is_zero()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [pt, c] : x.terms) {
    if (!first) s += " + ";
    first = false;
    s += scalar_to_string(c);
    s += "*e[";
    for (size_t i = 0; i < pt.size(); ++i) {
      if (i) s += ",";
      s += pt[i].get_str();
    }
    s += "]";
  }
  return s;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  size_t b = s.find_last_not_of(" \t");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

}  // namespace

AlgebraElem parse_elem(const ToricGAlgebra& alg, const std::string& text) {
  std::string t = trim(text);
  if (t.empty()) throw ValidationError("parse_elem: empty element text");
  if (t == "0") return {};
  AlgebraElem out;
  size_t pos = 0;
  while (pos < t.size()) {
    size_t next = t.find(" + ", pos);
    std::string term = trim(next == std::string::npos ? t.substr(pos) : t.substr(pos, next - pos));
    pos = next == std::string::npos ? t.size() : next + 3;

    size_t star = term.find("*e[");
    if (star == std::string::npos || term.back() != ']')
      throw ValidationError("parse_elem: malformed term '" + term + "'");
    Scalar c = scalar_from_string(term.substr(0, star));
    std::string coords = term.substr(star + 3, term.size() - star - 4);
    IntVec pt;
    if (!trim(coords).empty()) {
      std::stringstream ss(coords);
      std::string item;
      while (std::getline(ss, item, ',')) {
        Int v;
        if (mpz_set_str(v.get_mpz_t(), trim(item).c_str(), 10) != 0)
          throw ValidationError("parse_elem: malformed exponent '" + item + "'");
        pt.push_back(v);
      }
    }
    if (static_cast<int>(pt.size()) != alg.ambient_rank())
      throw ValidationError("parse_elem: exponent arity mismatch in '" + term + "'");
    out = add(alg, out, monomial(alg, pt, c));
  }
  return out;
}

}  // namespace gtoric
