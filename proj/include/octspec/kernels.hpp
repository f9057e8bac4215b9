#pragma once

#include <cstdint>
#include <functional>
#include <vector>

namespace octspec::kernels {

// Dense row-major kernels. Every parallel kernel computes bit-identical
// results to its serial reference regardless of the number of OpenMP
// threads: each output element is produced by exactly one thread with a
// fixed accumulation order, and reductions combine fixed-size blocks in
// index order.

// out = a * b, a is m x k, b is k x n.
void matmul_serial(const double* a, const double* b, double* out, int m, int k, int n);
void matmul(const double* a, const double* b, double* out, int m, int k, int n);

std::vector<double> matmul(const std::vector<double>& a, const std::vector<double>& b,
                           int m, int k, int n);

void transpose(const double* a, double* out, int rows, int cols);

// Deterministic blocked reductions.
double blocked_sum_serial(const double* data, std::int64_t n);
double blocked_sum(const double* data, std::int64_t n);

// Sum of term(i) for i in [0, n); term must be a pure function of i.
double blocked_sum_indexed_serial(std::int64_t n, const std::function<double(std::int64_t)>& term);
double blocked_sum_indexed(std::int64_t n, const std::function<double(std::int64_t)>& term);

double dot(const double* a, const double* b, std::int64_t n);
double frobenius_distance(const double* a, const double* b, std::int64_t n);

int thread_count();

}  // namespace octspec::kernels
