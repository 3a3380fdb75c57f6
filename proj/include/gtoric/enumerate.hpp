// Lattice-point enumeration kernels.
//
// These are the hot loops of the library: every Hilbert-basis, invariant
// monoid and oracle computation reduces to scanning the integer points of
// a box through a pure predicate. The scan is data parallel; an OpenMP
// kernel does the production work and a serial reference implementation
// is kept for testing and benchmarking against it.
//
// Both kernels return the same points in the same (lexicographic) order.

#ifndef GTORIC_ENUMERATE_HPP
#define GTORIC_ENUMERATE_HPP

#include <functional>
#include <vector>

#include "gtoric/ints.hpp"

namespace gtoric {

using PointPredicate = std::function<bool(const IntVec&)>;

// Number of integer points in the box [lo, hi]; 0 if any interval is empty.
Int box_volume(const IntVec& lo, const IntVec& hi);

// Throws ResourceError if box_volume exceeds budget.
std::vector<IntVec> enumerate_box_serial(const IntVec& lo, const IntVec& hi,
                                         const PointPredicate& keep, const Int& budget);

std::vector<IntVec> enumerate_box_parallel(const IntVec& lo, const IntVec& hi,
                                           const PointPredicate& keep, const Int& budget);

// Dispatches to the parallel kernel.
std::vector<IntVec> enumerate_box(const IntVec& lo, const IntVec& hi,
                                  const PointPredicate& keep, const Int& budget);

}  // namespace gtoric

#endif
