// Benchmark: serial vs OpenMP box-enumeration kernel on a cone-membership
// predicate, the library's hot loop.

#include <chrono>
#include <cstdio>

#include "gtoric/cone.hpp"
#include "gtoric/enumerate.hpp"

using namespace gtoric;

namespace {

template <typename F>
double time_ms(F&& f, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  long side = argc > 1 ? std::atol(argv[1]) : 40;
  int reps = argc > 2 ? std::atoi(argv[2]) : 3;

  Cone c = cone_from_rays(3, {{1, 0, 0}, {1, 2, 0}, {1, 1, 3}, {0, 0, 1}});
  IntVec lo{0, 0, 0}, hi{side, side, side};
  Int budget = (Int(side) + 1) * (Int(side) + 1) * (Int(side) + 1);

  auto pred = [&](const IntVec& p) { return contains(c, p) && !strict_interior(c, p); };

  std::vector<IntVec> serial_out, parallel_out;
  double ts = time_ms([&] { serial_out = enumerate_box_serial(lo, hi, pred, budget); }, reps);
  double tp = time_ms([&] { parallel_out = enumerate_box_parallel(lo, hi, pred, budget); }, reps);

  std::printf("box side %ld (%s points), %zu kept\n", side, budget.get_str().c_str(),
              serial_out.size());
  std::printf("serial   %.2f ms\n", ts);
  std::printf("parallel %.2f ms  (speedup %.2fx)\n", tp, ts / tp);
  if (serial_out != parallel_out) {
    std::printf("MISMATCH between kernels\n");
    return 1;
  }
  return 0;
}
