#include "gtoric/enumerate.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gtoric {

Int box_volume(const IntVec& lo, const IntVec& hi) {
  Int vol = 1;
  for (size_t i = 0; i < lo.size(); ++i) {
    Int w = hi[i] - lo[i] + 1;
    if (w <= 0) return 0;
    vol *= w;
  }
  return vol;
}

namespace {

void check_budget(const IntVec& lo, const IntVec& hi, const Int& budget) {
  Int vol = box_volume(lo, hi);
  if (vol > budget)
    throw ResourceError("enumeration budget exceeded: box has " + vol.get_str() +
                        " points, budget " + budget.get_str());
}

// Decode a linear index into box coordinates (last coordinate fastest).
IntVec decode(const IntVec& lo, const IntVec& widths, unsigned long k) {
  IntVec p(lo.size());
  for (size_t i = lo.size(); i-- > 0;) {
    unsigned long w = widths[i].get_ui();
    p[i] = lo[i] + static_cast<long>(k % w);
    k /= w;
  }
  return p;
}

}  // namespace

std::vector<IntVec> enumerate_box_serial(const IntVec& lo, const IntVec& hi,
                                         const PointPredicate& keep, const Int& budget) {
  check_budget(lo, hi, budget);
  std::vector<IntVec> out;
  if (lo.empty()) {
    IntVec origin;
    if (keep(origin)) out.push_back(origin);
    return out;
  }
  Int vol = box_volume(lo, hi);
  if (vol == 0) return out;
  IntVec widths(lo.size());
  for (size_t i = 0; i < lo.size(); ++i) widths[i] = hi[i] - lo[i] + 1;
  unsigned long n = vol.get_ui();
  for (unsigned long k = 0; k < n; ++k) {
    IntVec p = decode(lo, widths, k);
    if (keep(p)) out.push_back(std::move(p));
  }
  return out;
}

std::vector<IntVec> enumerate_box_parallel(const IntVec& lo, const IntVec& hi,
                                           const PointPredicate& keep, const Int& budget) {
  check_budget(lo, hi, budget);
  if (lo.empty() || box_volume(lo, hi) == 0) return enumerate_box_serial(lo, hi, keep, budget);

  IntVec widths(lo.size());
  for (size_t i = 0; i < lo.size(); ++i) widths[i] = hi[i] - lo[i] + 1;
  const unsigned long n = box_volume(lo, hi).get_ui();

  std::vector<std::vector<IntVec>> parts;
#ifdef _OPENMP
  const int nthreads = omp_get_max_threads();
#else
  const int nthreads = 1;
#endif
  parts.resize(nthreads);

#ifdef _OPENMP
#pragma omp parallel num_threads(nthreads)
  {
    const int tid = omp_get_thread_num();
    std::vector<IntVec>& local = parts[tid];
#pragma omp for schedule(static)
    for (long k = 0; k < static_cast<long>(n); ++k) {
      IntVec p = decode(lo, widths, static_cast<unsigned long>(k));
      if (keep(p)) local.push_back(std::move(p));
    }
  }
#else
  for (unsigned long k = 0; k < n; ++k) {
    IntVec p = decode(lo, widths, k);
    if (keep(p)) parts[0].push_back(std::move(p));
  }
#endif

  std::vector<IntVec> out;
  for (std::vector<IntVec>& part : parts)
    for (IntVec& p : part) out.push_back(std::move(p));
  // static schedule hands out contiguous index blocks per thread, so the
  // concatenation is already lex-sorted; sort anyway to pin the contract
  std::sort(out.begin(), out.end(), IntVecLess{});
  return out;
}

std::vector<IntVec> enumerate_box(const IntVec& lo, const IntVec& hi, const PointPredicate& keep,
                                  const Int& budget) {
  return enumerate_box_parallel(lo, hi, keep, budget);
}

}  // namespace gtoric
