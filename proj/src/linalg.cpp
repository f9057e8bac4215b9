#include "octspec/linalg.hpp"

#include <cmath>
#include <stdexcept>

#include "octspec/kernels.hpp"

namespace octspec {

Mat Mat::identity(int n) {
  Mat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Mat Mat::transposed() const {
  Mat t(cols, rows);
  kernels::transpose(a.data(), t.a.data(), rows, cols);
  return t;
}

Mat& Mat::operator+=(const Mat& rhs) {
  if (rhs.rows != rows || rhs.cols != cols) throw std::invalid_argument("Mat: shape mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += rhs.a[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& rhs) {
  if (rhs.rows != rows || rhs.cols != cols) throw std::invalid_argument("Mat: shape mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= rhs.a[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& x : a) x *= s;
  return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols != b.rows) throw std::invalid_argument("Mat: product shape mismatch");
  Mat out(a.rows, b.cols);
  kernels::matmul(a.a.data(), b.a.data(), out.a.data(), a.rows, a.cols, b.cols);
  return out;
}

std::vector<double> Mat::apply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != cols) throw std::invalid_argument("Mat: vector shape mismatch");
  std::vector<double> y(static_cast<std::size_t>(rows), 0.0);
  for (int i = 0; i < rows; ++i) {
    const double* row = a.data() + static_cast<std::size_t>(i) * cols;
    double s = 0.0;
    for (int j = 0; j < cols; ++j) s += row[j] * x[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  return y;
}

double Mat::frobenius() const {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

double Mat::max_abs() const {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

double frobenius_distance(const Mat& a, const Mat& b) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::invalid_argument("Mat: shape mismatch");
  return kernels::frobenius_distance(a.a.data(), b.a.data(), static_cast<std::int64_t>(a.a.size()));
}

bool is_symmetric(const Mat& a, double tol) {
  if (a.rows != a.cols) return false;
  for (int i = 0; i < a.rows; ++i)
    for (int j = i + 1; j < a.cols; ++j)
      if (std::abs(a.at(i, j) - a.at(j, i)) > tol) return false;
  return true;
}

LuDecomposition lu_factor(const Mat& a, double pivot_tol) {
  if (a.rows != a.cols) throw std::invalid_argument("lu_factor: square matrix required");
  const int n = a.rows;
  LuDecomposition f;
  f.lu = a;
  f.perm.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) f.perm[static_cast<std::size_t>(i)] = i;
  if (pivot_tol <= 0.0) pivot_tol = 1e-13 * std::max(1.0, a.max_abs()) * n;

  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::abs(f.lu.at(col, col));
    for (int r = col + 1; r < n; ++r) {
      const double cand = std::abs(f.lu.at(r, col));
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (best <= pivot_tol) {
      f.singular = true;
      continue;
    }
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(f.lu.at(piv, j), f.lu.at(col, j));
      std::swap(f.perm[static_cast<std::size_t>(piv)], f.perm[static_cast<std::size_t>(col)]);
      f.sign = -f.sign;
    }
    const double d = f.lu.at(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double m = f.lu.at(r, col) / d;
      f.lu.at(r, col) = m;
      if (m == 0.0) continue;
      for (int j = col + 1; j < n; ++j) f.lu.at(r, j) -= m * f.lu.at(col, j);
    }
  }
  return f;
}

std::vector<double> lu_solve(const LuDecomposition& f, const std::vector<double>& b) {
  if (f.singular) throw std::domain_error("lu_solve: singular matrix");
  const int n = f.lu.rows;
  std::vector<double> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double s = b[static_cast<std::size_t>(f.perm[static_cast<std::size_t>(i)])];
    for (int j = 0; j < i; ++j) s -= f.lu.at(i, j) * y[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = y[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) s -= f.lu.at(i, j) * y[static_cast<std::size_t>(j)];
    y[static_cast<std::size_t>(i)] = s / f.lu.at(i, i);
  }
  return y;
}

Mat invert(const Mat& a) {
  const LuDecomposition f = lu_factor(a);
  if (f.singular) throw std::domain_error("invert: singular matrix");
  const int n = a.rows;
  Mat inv(n, n);
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  for (int col = 0; col < n; ++col) {
    e.assign(static_cast<std::size_t>(n), 0.0);
    e[static_cast<std::size_t>(col)] = 1.0;
    const std::vector<double> x = lu_solve(f, e);
    for (int r = 0; r < n; ++r) inv.at(r, col) = x[static_cast<std::size_t>(r)];
  }
  return inv;
}

int rank(const Mat& a, double tol) {
  Mat m = a;
  const int r = m.rows;
  const int c = m.cols;
  if (tol <= 0.0) tol = 1e-10 * std::max(1.0, m.max_abs()) * std::max(r, c);
  int rk = 0;
  int row = 0;
  for (int col = 0; col < c && row < r; ++col) {
    int piv = -1;
    double best = tol;
    for (int i = row; i < r; ++i) {
      const double cand = std::abs(m.at(i, col));
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < c; ++j) std::swap(m.at(piv, j), m.at(row, j));
    const double d = m.at(row, col);
    for (int i = row + 1; i < r; ++i) {
      const double f = m.at(i, col) / d;
      if (f == 0.0) continue;
      for (int j = col; j < c; ++j) m.at(i, j) -= f * m.at(row, j);
    }
    ++row;
    ++rk;
  }
  return rk;
}

EigenSym jacobi_eigen_sym(const Mat& input, int max_sweeps) {
  if (input.rows != input.cols) throw std::invalid_argument("jacobi: square matrix required");
  const int n = input.rows;
  Mat a = input;
  Mat v = Mat::identity(n);

  auto off_diag_sq = [&a, n]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += a.at(i, j) * a.at(i, j);
    return s;
  };

  const double scale = std::max(1.0, a.max_abs());
  const double eps = 1e-30 * scale * scale * n * n;
  int sweep = 0;
  while (off_diag_sq() > eps && sweep < max_sweeps) {
    ++sweep;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a.at(p, p);
        const double aqq = a.at(q, q);
        a.at(p, p) = app - t * apq;
        a.at(q, q) = aqq + t * apq;
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a.at(r, p);
            const double arq = a.at(r, q);
            a.at(r, p) = a.at(p, r) = arp - s * (arq + tau * arp);
            a.at(r, q) = a.at(q, r) = arq + s * (arp - tau * arq);
          }
          const double vrp = v.at(r, p);
          const double vrq = v.at(r, q);
          v.at(r, p) = vrp - s * (vrq + tau * vrp);
          v.at(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  if (off_diag_sq() > 1e-18 * scale * scale * n * n)
    throw std::runtime_error("jacobi: eigensolver did not converge");

  EigenSym out;
  out.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.values[static_cast<std::size_t>(i)] = a.at(i, i);

  // Sort ascending, reorder eigenvector columns to match.
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (out.values[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] <
          out.values[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])])
        std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);

  EigenSym sorted;
  sorted.values.resize(static_cast<std::size_t>(n));
  sorted.vectors = Mat(n, n);
  for (int col = 0; col < n; ++col) {
    const int src = order[static_cast<std::size_t>(col)];
    sorted.values[static_cast<std::size_t>(col)] = out.values[static_cast<std::size_t>(src)];
    for (int r = 0; r < n; ++r) sorted.vectors.at(r, col) = v.at(r, src);
  }
  return sorted;
}

double operator_norm(const Mat& a) {
  const Mat gram = a.transposed() * a;
  const EigenSym eig = jacobi_eigen_sym(gram);
  const double top = eig.values.empty() ? 0.0 : eig.values.back();
  return std::sqrt(std::max(0.0, top));
}

}  // namespace octspec
