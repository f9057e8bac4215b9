#pragma once

// Shared generators for operator tests: classes of operators that are
// genuinely self-adjoint (symmetric with a verified full adjoint) in the
// flat-layout representation.

#include <cmath>

#include "octspec/qlop.hpp"
#include "octspec/rng.hpp"

namespace octspec::testing {

// Real-entry symmetric matrix acting entrywise: self-adjoint at every level.
inline QlOperator random_scalar_symmetric(Rng& rng, int v, int n, double scale = 1.0) {
  CdMatrixOperator op(v, n);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      const CdNumber r = CdNumber::real(v, rng.uniform(-scale, scale));
      op.at(k, l) = r;
      op.at(l, k) = r;
    }
  return op.to_operator();
}

// Hermitian matrix of right multiplications: over the quaternions this is
// a genuinely non-real self-adjoint operator (associativity gives the full
// adjoint relation for right actions).
inline QlOperator random_right_hermitian(Rng& rng, int v, int n, double scale = 1.0) {
  std::vector<std::vector<CdNumber>> entries(static_cast<std::size_t>(n),
                                             std::vector<CdNumber>(static_cast<std::size_t>(n),
                                                                   CdNumber(v)));
  for (int k = 0; k < n; ++k) {
    entries[k][k] = CdNumber::real(v, rng.uniform(-scale, scale));
    for (int l = k + 1; l < n; ++l) {
      const CdNumber q = rng.cd(v, scale);
      entries[k][l] = q;
      entries[l][k] = q.conjugate();
    }
  }
  return right_matrix_operator(v, n, entries);
}

// Self-adjoint test operator: scalar at any level, right-Hermitian when the
// algebra is associative.
inline QlOperator random_self_adjoint(Rng& rng, int v, int n, double scale = 1.0) {
  if (v <= 2 && rng.uniform_int(0, 1) == 1) return random_right_hermitian(rng, v, n, scale);
  return random_scalar_symmetric(rng, v, n, scale);
}

// Scalar symmetric operator with prescribed well-separated eigenvalues,
// conjugated by a random scalar rotation (Jacobi-friendly test input).
inline QlOperator scalar_with_spectrum(Rng& rng, int v, const std::vector<double>& eigs) {
  const int n = static_cast<int>(eigs.size());
  // Random orthogonal scalar matrix via Gram-Schmidt.
  Mat q(n, n);
  for (int col = 0; col < n; ++col) {
    std::vector<double> w(static_cast<std::size_t>(n));
    for (double& x : w) x = rng.uniform(-1.0, 1.0);
    for (int prev = 0; prev < col; ++prev) {
      double dot = 0.0;
      for (int r = 0; r < n; ++r) dot += w[static_cast<std::size_t>(r)] * q.at(r, prev);
      for (int r = 0; r < n; ++r) w[static_cast<std::size_t>(r)] -= dot * q.at(r, prev);
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    for (int r = 0; r < n; ++r) q.at(r, col) = w[static_cast<std::size_t>(r)] / norm;
  }
  CdMatrixOperator op(v, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      double s = 0.0;
      for (int m = 0; m < n; ++m) s += q.at(k, m) * eigs[static_cast<std::size_t>(m)] * q.at(l, m);
      op.at(k, l) = CdNumber::real(v, s);
    }
  return op.to_operator();
}

// Scalar diagonal operator diag(d_1, ..., d_n) acting entrywise.
inline QlOperator scalar_diag(int v, const std::vector<double>& diag) {
  const int n = static_cast<int>(diag.size());
  CdMatrixOperator op(v, n);
  for (int k = 0; k < n; ++k) op.at(k, k) = CdNumber::real(v, diag[static_cast<std::size_t>(k)]);
  return op.to_operator();
}

}  // namespace octspec::testing
