#include "octspec/kernels.hpp"

#include <cmath>
#include <cstring>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace octspec::kernels {

namespace {
constexpr std::int64_t kSumBlock = 8192;
constexpr int kParallelMatDim = 48;  // below this the omp fork costs more than the loop
}  // namespace

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void matmul_serial(const double* a, const double* b, double* out, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    double* row = out + static_cast<std::size_t>(i) * n;
    std::memset(row, 0, sizeof(double) * n);
    for (int p = 0; p < k; ++p) {
      const double aip = a[static_cast<std::size_t>(i) * k + p];
      if (aip == 0.0) continue;
      const double* brow = b + static_cast<std::size_t>(p) * n;
      for (int j = 0; j < n; ++j) row[j] += aip * brow[j];
    }
  }
}

void matmul(const double* a, const double* b, double* out, int m, int k, int n) {
#ifdef _OPENMP
  if (m >= kParallelMatDim && n >= 2) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < m; ++i) {
      double* row = out + static_cast<std::size_t>(i) * n;
      std::memset(row, 0, sizeof(double) * n);
      for (int p = 0; p < k; ++p) {
        const double aip = a[static_cast<std::size_t>(i) * k + p];
        if (aip == 0.0) continue;
        const double* brow = b + static_cast<std::size_t>(p) * n;
        for (int j = 0; j < n; ++j) row[j] += aip * brow[j];
      }
    }
    return;
  }
#endif
  matmul_serial(a, b, out, m, k, n);
}

std::vector<double> matmul(const std::vector<double>& a, const std::vector<double>& b,
                           int m, int k, int n) {
  std::vector<double> out(static_cast<std::size_t>(m) * n);
  matmul(a.data(), b.data(), out.data(), m, k, n);
  return out;
}

void transpose(const double* a, double* out, int rows, int cols) {
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      out[static_cast<std::size_t>(j) * rows + i] = a[static_cast<std::size_t>(i) * cols + j];
}

namespace {

// Shared skeleton: per-block partial sums in parallel, serial combine in
// block order.  The block grid is fixed, so the result does not depend on
// the thread count.
template <typename BlockFn>
double blocked_reduce(std::int64_t n, bool parallel, BlockFn&& block_sum) {
  if (n <= 0) return 0.0;
  const std::int64_t nblocks = (n + kSumBlock - 1) / kSumBlock;
  std::vector<double> partial(static_cast<std::size_t>(nblocks));
#ifdef _OPENMP
  if (parallel && nblocks > 1) {
#pragma omp parallel for schedule(static)
    for (std::int64_t blk = 0; blk < nblocks; ++blk) {
      const std::int64_t lo = blk * kSumBlock;
      const std::int64_t hi = std::min<std::int64_t>(lo + kSumBlock, n);
      partial[static_cast<std::size_t>(blk)] = block_sum(lo, hi);
    }
  } else
#endif
  {
    (void)parallel;
    for (std::int64_t blk = 0; blk < nblocks; ++blk) {
      const std::int64_t lo = blk * kSumBlock;
      const std::int64_t hi = std::min<std::int64_t>(lo + kSumBlock, n);
      partial[static_cast<std::size_t>(blk)] = block_sum(lo, hi);
    }
  }
  double total = 0.0;
  for (std::int64_t blk = 0; blk < nblocks; ++blk) total += partial[static_cast<std::size_t>(blk)];
  return total;
}

}  // namespace

double blocked_sum_serial(const double* data, std::int64_t n) {
  return blocked_reduce(n, false, [data](std::int64_t lo, std::int64_t hi) {
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += data[i];
    return s;
  });
}

double blocked_sum(const double* data, std::int64_t n) {
  return blocked_reduce(n, true, [data](std::int64_t lo, std::int64_t hi) {
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += data[i];
    return s;
  });
}

double blocked_sum_indexed_serial(std::int64_t n, const std::function<double(std::int64_t)>& term) {
  return blocked_reduce(n, false, [&term](std::int64_t lo, std::int64_t hi) {
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += term(i);
    return s;
  });
}

double blocked_sum_indexed(std::int64_t n, const std::function<double(std::int64_t)>& term) {
  return blocked_reduce(n, true, [&term](std::int64_t lo, std::int64_t hi) {
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += term(i);
    return s;
  });
}

double dot(const double* a, const double* b, std::int64_t n) {
  return blocked_reduce(n, n > 4 * kSumBlock, [a, b](std::int64_t lo, std::int64_t hi) {
    double s = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) s += a[i] * b[i];
    return s;
  });
}

double frobenius_distance(const double* a, const double* b, std::int64_t n) {
  const double s = blocked_reduce(n, n > 4 * kSumBlock, [a, b](std::int64_t lo, std::int64_t hi) {
    double acc = 0.0;
    for (std::int64_t i = lo; i < hi; ++i) {
      const double d = a[i] - b[i];
      acc += d * d;
    }
    return acc;
  });
  return std::sqrt(s);
}

}  // namespace octspec::kernels
