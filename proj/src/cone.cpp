#include "gtoric/cone.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>

namespace gtoric {

namespace {

struct DDRay {
  IntVec v;
  std::set<int> tight;  // indices of processed constraints vanishing on v
};

// Incremental double description with the combinatorial adjacency test.
struct DDState {
  int n;
  std::vector<IntVec> lin;
  std::vector<DDRay> rays;

  explicit DDState(int ambient) : n(ambient) {
    for (int i = 0; i < ambient; ++i) {
      IntVec e(ambient, Int(0));
      e[i] = 1;
      lin.push_back(e);
    }
  }

  void add_constraint(int idx, const IntVec& g) {
    // try to pivot a lineality generator with nonzero value
    int piv = -1;
    for (size_t i = 0; i < lin.size(); ++i)
      if (dot(lin[i], g) != 0) {
        piv = static_cast<int>(i);
        break;
      }
    if (piv >= 0) {
      IntVec b0 = lin[piv];
      Int s0 = dot(b0, g);
      if (s0 < 0) {
        b0 = -b0;
        s0 = -s0;
      }
      std::vector<IntVec> new_lin;
      for (size_t i = 0; i < lin.size(); ++i) {
        if (static_cast<int>(i) == piv) continue;
        Int si = dot(lin[i], g);
        new_lin.push_back(primitive(s0 * lin[i] - si * b0));
      }
      for (DDRay& r : rays) {
        Int sr = dot(r.v, g);
        r.v = primitive(s0 * r.v - sr * b0);
        r.tight.insert(idx);
      }
      DDRay nb;
      nb.v = primitive(b0);
      for (int j = 0; j < idx; ++j) nb.tight.insert(j);
      rays.push_back(std::move(nb));
      lin = std::move(new_lin);
      return;
    }

    std::vector<const DDRay*> pos, zero, negs;
    for (DDRay& r : rays) {
      Int s = dot(r.v, g);
      if (s > 0)
        pos.push_back(&r);
      else if (s == 0)
        zero.push_back(&r);
      else
        negs.push_back(&r);
    }

    // adjacency in the cone before this constraint: no third ray's tight
    // set contains the common tight set of the pair
    auto adjacent = [&](const DDRay& a, const DDRay& b) {
      std::set<int> t;
      std::set_intersection(a.tight.begin(), a.tight.end(), b.tight.begin(), b.tight.end(),
                            std::inserter(t, t.begin()));
      for (const DDRay& r : rays)
        if (r.v != a.v && r.v != b.v) {
          bool super = true;
          for (int c : t)
            if (!r.tight.count(c)) {
              super = false;
              break;
            }
          if (super) return false;
        }
      return true;
    };

    std::vector<DDRay> next;
    for (const DDRay* p : pos) next.push_back(*p);
    for (const DDRay* z : zero) {
      next.push_back(*z);
      next.back().tight.insert(idx);
    }
    for (const DDRay* p : pos)
      for (const DDRay* m : negs) {
        if (!adjacent(*p, *m)) continue;
        Int sp = dot(p->v, g);
        Int sm = dot(m->v, g);
        DDRay w;
        w.v = primitive(sp * m->v - sm * p->v);
        std::set_intersection(p->tight.begin(), p->tight.end(), m->tight.begin(), m->tight.end(),
                              std::inserter(w.tight, w.tight.begin()));
        w.tight.insert(idx);
        next.push_back(std::move(w));
      }

    // dedupe by vector
    std::sort(next.begin(), next.end(),
              [](const DDRay& a, const DDRay& b) { return lex_cmp(a.v, b.v) < 0; });
    next.erase(std::unique(next.begin(), next.end(),
                           [](const DDRay& a, const DDRay& b) { return a.v == b.v; }),
               next.end());
    rays = std::move(next);
  }
};

std::vector<IntVec> sorted_unique(std::vector<IntVec> v) {
  std::sort(v.begin(), v.end(), IntVecLess{});
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

GeneratorDescription dual_description(int ambient_rank, const std::vector<IntVec>& constraints) {
  DDState st(ambient_rank);
  int idx = 0;
  for (const IntVec& g : constraints) {
    if (is_zero(g)) continue;
    st.add_constraint(idx++, g);
  }
  GeneratorDescription out;
  out.lineality = hnf_columns(IntMat::from_columns(ambient_rank, st.lin));
  std::vector<IntVec> ex;
  for (const DDRay& r : st.rays) {
    IntVec v = primitive(reduce_mod_lattice(out.lineality, r.v));
    if (!is_zero(v)) ex.push_back(v);
  }
  out.extreme_rays = sorted_unique(std::move(ex));
  return out;
}

namespace {

// Saturated lattice of the linear span of the given vectors.
IntMat span_lattice(int ambient_rank, const std::vector<IntVec>& vecs) {
  if (vecs.empty()) return IntMat(ambient_rank, 0);
  IntMat perp = kernel_basis(IntMat::from_rows(vecs));
  return kernel_basis(transpose(perp));
}

std::vector<IntVec> with_lineality_pairs(const std::vector<IntVec>& extremes, const IntMat& lin) {
  std::vector<IntVec> out = extremes;
  for (int j = 0; j < lin.cols; ++j) {
    IntVec b = lin.col(j);
    out.push_back(b);
    out.push_back(-b);
  }
  return sorted_unique(std::move(out));
}

Cone build_cone(int ambient_rank, const std::vector<IntVec>& generators) {
  // dual cone generators = functionals of sigma
  GeneratorDescription dual = dual_description(ambient_rank, generators);
  std::vector<IntVec> functionals = with_lineality_pairs(dual.extreme_rays, dual.lineality);

  // primal generators recomputed from the functionals, canonically
  GeneratorDescription primal = dual_description(ambient_rank, functionals);

  Cone c;
  c.ambient_rank = ambient_rank;
  c.functionals = std::move(functionals);
  c.lineality_basis = primal.lineality;
  c.rays = with_lineality_pairs(primal.extreme_rays, primal.lineality);

  for (const IntVec& r : c.rays)
    for (const IntVec& l : c.functionals)
      if (dot(l, r) < 0) throw ValidationError("cone: inconsistent dual descriptions");
  return c;
}

}  // namespace

Cone cone_from_rays(int ambient_rank, std::vector<IntVec> rays) {
  if (ambient_rank == 0 && !rays.empty())
    throw ValidationError("cone_from_rays: rank-0 ambient with nonempty rays");
  std::vector<IntVec> gens;
  for (IntVec& r : rays) {
    if (static_cast<int>(r.size()) != ambient_rank)
      throw ValidationError("cone_from_rays: ray dimension mismatch");
    if (is_zero(r)) throw ValidationError("cone_from_rays: zero ray");
    gens.push_back(primitive(std::move(r)));
  }
  return build_cone(ambient_rank, gens);
}

Cone cone_from_inequalities(int ambient_rank, std::vector<IntVec> functionals) {
  std::vector<IntVec> fs;
  for (IntVec& l : functionals) {
    if (static_cast<int>(l.size()) != ambient_rank)
      throw ValidationError("cone_from_inequalities: functional dimension mismatch");
    if (!is_zero(l)) fs.push_back(primitive(std::move(l)));
  }
  GeneratorDescription primal = dual_description(ambient_rank, fs);
  return build_cone(ambient_rank, with_lineality_pairs(primal.extreme_rays, primal.lineality));
}

bool spans_ambient(const Cone& c) { return dim(c) == c.ambient_rank; }

int dim(const Cone& c) {
  if (c.rays.empty()) return 0;
  return rank(IntMat::from_rows(c.rays));
}

bool contains(const Cone& c, const IntVec& m) {
  for (const IntVec& l : c.functionals)
    if (dot(l, m) < 0) return false;
  // functionals cut out exactly the cone (dual lineality pairs included),
  // so no further span test is needed
  return true;
}

bool strict_interior(const Cone& c, const IntVec& m) {
  for (const IntVec& l : c.functionals)
    if (dot(l, m) <= 0) return false;
  return true;
}

namespace {

Face make_face(const Cone& c, std::vector<IntVec> face_rays) {
  Face f;
  f.parent = c;
  f.rays = sorted_unique(std::move(face_rays));
  for (size_t i = 0; i < c.functionals.size(); ++i) {
    bool vanishes = true;
    for (const IntVec& r : f.rays)
      if (dot(c.functionals[i], r) != 0) {
        vanishes = false;
        break;
      }
    if (vanishes) f.zero_set.push_back(static_cast<int>(i));
  }
  f.span_basis = span_lattice(c.ambient_rank, f.rays);
  f.dim = f.rays.empty() ? 0 : rank(IntMat::from_rows(f.rays));
  return f;
}

}  // namespace

Face full_face(const Cone& c) { return make_face(c, c.rays); }

std::vector<Face> faces(const Cone& c) {
  std::map<std::vector<IntVec>, Face> seen;
  std::vector<std::vector<IntVec>> work;

  Face whole = full_face(c);
  seen.emplace(whole.rays, whole);
  work.push_back(whole.rays);

  while (!work.empty()) {
    std::vector<IntVec> cur = std::move(work.back());
    work.pop_back();
    for (const IntVec& l : c.functionals) {
      std::vector<IntVec> sub;
      for (const IntVec& r : cur)
        if (dot(l, r) == 0) sub.push_back(r);
      if (!seen.count(sub)) {
        Face f = make_face(c, sub);
        work.push_back(f.rays);
        seen.emplace(f.rays, std::move(f));
      }
    }
  }

  std::vector<Face> out;
  for (auto& [rays_, f] : seen) out.push_back(std::move(f));
  std::sort(out.begin(), out.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.rays.size() != b.rays.size()) return a.rays.size() < b.rays.size();
    for (size_t i = 0; i < a.rays.size(); ++i) {
      int cres = lex_cmp(a.rays[i], b.rays[i]);
      if (cres) return cres < 0;
    }
    return false;
  });
  return out;
}

std::vector<Face> codim1_faces(const Cone& c) {
  const int d = dim(c);
  std::vector<Face> out;
  for (Face& f : faces(c))
    if (f.dim == d - 1) out.push_back(std::move(f));
  return out;
}

Face smallest_face(const Cone& c) {
  std::vector<IntVec> lin_rays;
  for (const IntVec& r : c.rays) {
    bool all_zero = true;
    for (const IntVec& l : c.functionals)
      if (dot(l, r) != 0) {
        all_zero = false;
        break;
      }
    if (all_zero) lin_rays.push_back(r);
  }
  return make_face(c, std::move(lin_rays));
}

bool on_face(const Face& f, const IntVec& m) {
  if (!contains(f.parent, m)) return false;
  for (int i : f.zero_set)
    if (dot(f.parent.functionals[i], m) != 0) return false;
  return true;
}

Cone pullback_cone(const Cone& c, const IntMat& embed) {
  if (embed.rows != c.ambient_rank)
    throw ValidationError("pullback_cone: embedding ambient mismatch");
  std::vector<IntVec> ineqs;
  for (const IntVec& l : c.functionals) {
    IntVec composed(embed.cols, Int(0));
    for (int j = 0; j < embed.cols; ++j)
      for (int i = 0; i < embed.rows; ++i) composed[j] += l[i] * embed.at(i, j);
    ineqs.push_back(std::move(composed));
  }
  return cone_from_inequalities(embed.cols, std::move(ineqs));
}

SpanReduction span_reduce(const Cone& c) {
  IntMat basis = span_lattice(c.ambient_rank, c.rays);
  std::vector<IntVec> new_rays;
  for (const IntVec& r : c.rays) {
    std::optional<IntVec> x = solve(basis, r);
    if (!x) throw ValidationError("span_reduce: ray not in saturated span (internal)");
    new_rays.push_back(std::move(*x));
  }
  SpanReduction out;
  out.cone = cone_from_rays(basis.cols, std::move(new_rays));
  out.embedding = std::move(basis);
  return out;
}

}  // namespace gtoric
