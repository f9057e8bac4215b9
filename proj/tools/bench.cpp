// Benchmark comparing the OpenMP kernels against their serial references.
// Results are checked for bit-identical agreement while timing.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "octspec/cdnum.hpp"
#include "octspec/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace octspec;

namespace {

double now() {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
#endif
}

template <typename Fn>
double time_best_of(int reps, Fn&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now();
    fn();
    best = std::min(best, now() - t0);
  }
  return best;
}

void bench_matmul() {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::printf("dense matmul (row-major, n x n):\n");
  std::printf("%8s %12s %12s %9s %8s\n", "n", "serial [s]", "omp [s]", "speedup", "match");
  for (int n : {128, 256, 512}) {
    std::vector<double> a(static_cast<std::size_t>(n) * n), b(a.size());
    for (double& x : a) x = dist(gen);
    for (double& x : b) x = dist(gen);
    std::vector<double> c_serial(a.size()), c_omp(a.size());
    const double ts = time_best_of(3, [&] {
      kernels::matmul_serial(a.data(), b.data(), c_serial.data(), n, n, n);
    });
    const double tp = time_best_of(3, [&] {
      kernels::matmul(a.data(), b.data(), c_omp.data(), n, n, n);
    });
    std::printf("%8d %12.5f %12.5f %8.2fx %8s\n", n, ts, tp, ts / tp,
                c_serial == c_omp ? "exact" : "DIFFER");
  }
}

void bench_partial_sums() {
  std::printf("\npower-law partial sums (sum of n^-1.5 to N):\n");
  std::printf("%10s %12s %12s %9s %8s\n", "N", "serial [s]", "omp [s]", "speedup", "match");
  for (std::int64_t n : {1000000LL, 4000000LL, 16000000LL}) {
    const auto term = [](std::int64_t i) { return std::pow(double(i + 1), -1.5); };
    double s_serial = 0.0, s_omp = 0.0;
    const double ts = time_best_of(3, [&] { s_serial = kernels::blocked_sum_indexed_serial(n, term); });
    const double tp = time_best_of(3, [&] { s_omp = kernels::blocked_sum_indexed(n, term); });
    std::printf("%10lld %12.5f %12.5f %8.2fx %8s\n", static_cast<long long>(n), ts, tp, ts / tp,
                s_serial == s_omp ? "exact" : "DIFFER");
  }
}

void bench_zero_divisor() {
  std::printf("\ntwo-term zero-divisor search (exhaustive, exact):\n");
  std::printf("%8s %12s\n", "level", "time [s]");
  for (int v : {4, 5}) {
    const double t = time_best_of(2, [&] {
      const auto zd = find_zero_divisor(v);
      if (!zd) std::printf("  (none found at level %d?)\n", v);
    });
    std::printf("%8d %12.5f\n", v, t);
  }
}

}  // namespace

int main() {
  std::printf("octspec kernel benchmark, %d thread(s)\n\n", kernels::thread_count());
  bench_matmul();
  bench_partial_sums();
  bench_zero_divisor();
  return 0;
}
