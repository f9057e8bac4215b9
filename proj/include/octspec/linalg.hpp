#pragma once

#include <vector>

namespace octspec {

// Dense row-major matrix, desk scale.  Heavy products route through the
// OpenMP kernels; factorizations are serial.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

  static Mat identity(int n);
  static Mat zero(int r, int c) { return Mat(r, c); }

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

  Mat transposed() const;
  Mat& operator+=(const Mat& rhs);
  Mat& operator-=(const Mat& rhs);
  Mat& operator*=(double s);

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, double s) { return a *= s; }
  friend Mat operator*(double s, Mat a) { return a *= s; }
  friend Mat operator*(const Mat& a, const Mat& b);

  std::vector<double> apply(const std::vector<double>& x) const;

  double frobenius() const;
  double max_abs() const;
};

double frobenius_distance(const Mat& a, const Mat& b);
bool is_symmetric(const Mat& a, double tol);

// LU with partial pivoting.
struct LuDecomposition {
  Mat lu;
  std::vector<int> perm;
  bool singular = false;
  int sign = 1;
};

LuDecomposition lu_factor(const Mat& a, double pivot_tol = 0.0);
std::vector<double> lu_solve(const LuDecomposition& f, const std::vector<double>& b);
Mat invert(const Mat& a);           // throws std::domain_error when singular
int rank(const Mat& a, double tol); // Gaussian elimination with threshold

// Cyclic Jacobi for real symmetric matrices; eigenvalues ascending,
// eigenvectors as matching columns of V.
struct EigenSym {
  std::vector<double> values;
  Mat vectors;
};

EigenSym jacobi_eigen_sym(const Mat& a, int max_sweeps = 64);

// Largest singular value (via Jacobi on A^T A).
double operator_norm(const Mat& a);

}  // namespace octspec
