#include "octspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "octspec/rng.hpp"

namespace octspec {

Mat GradedResolution::step_eval(double b, double snap) const {
  Mat acc = Mat::zero(flat_dim(), flat_dim());
  Mat result = acc;
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    if (breakpoints[k] <= b + snap) result = projections[k];
  }
  return result;
}

int GradedResolution::rank_at(std::size_t k) const {
  double tr = 0.0;
  const Mat& e = projections.at(k);
  for (int i = 0; i < e.rows; ++i) tr += e.at(i, i);
  return static_cast<int>(std::lround(tr));
}

Mat complexified(const Mat& t, int s) {
  const int n = t.rows;
  Mat y(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      y.at(i, j) = t.at(i, j);
      y.at(n + i, n + j) = t.at(i, j);
    }
    y.at(i, n + i) = -static_cast<double>(s);
    y.at(n + i, i) = static_cast<double>(s);
  }
  return y;
}

Mat imaginary_unit_block(int flat_dim) {
  Mat j(2 * flat_dim, 2 * flat_dim);
  for (int i = 0; i < flat_dim; ++i) {
    j.at(i, flat_dim + i) = -1.0;
    j.at(flat_dim + i, i) = 1.0;
  }
  return j;
}

ResolventPair resolvents(const QlOperator& t) {
  if (!t.is_symmetric_flag())
    throw std::domain_error("resolvents: operator is not symmetric");
  const int fd = t.flat_dim();
  ResolventPair out;
  try {
    out.b_plus = invert(complexified(t.matrix(), +1));
    out.b_minus = invert(complexified(t.matrix(), -1));
  } catch (const std::domain_error&) {
    throw std::domain_error("resolvents: T +/- iI is singular, operator not self-adjoint");
  }
  out.norm_plus = operator_norm(out.b_plus);
  out.norm_minus = operator_norm(out.b_minus);
  out.adjoint_residual = frobenius_distance(out.b_minus, out.b_plus.transposed());

  const Mat j = imaginary_unit_block(fd);
  const Mat prod = out.b_plus * out.b_minus;
  out.identity2_residual = frobenius_distance((j * prod) * 2.0, out.b_minus - out.b_plus);
  const Mat ty = complexified(t.matrix(), 0);
  out.identity3_residual = frobenius_distance(ty * prod, (out.b_plus + out.b_minus) * 0.5);
  return out;
}

GradedResolution resolution_of_identity(const QlOperator& t) {
  if (!t.is_symmetric_flag())
    throw std::domain_error("resolution_of_identity: operator is not symmetric");
  const int fd = t.flat_dim();
  const EigenSym eig = jacobi_eigen_sym(t.matrix());

  double top = 0.0;
  for (double lam : eig.values) top = std::max(top, std::abs(lam));
  const double gap = 1e-8 * std::max(top, 1.0);

  GradedResolution r;
  r.level = t.level();
  r.dim = t.dim();
  r.diagnostics.operator_full_adjoint = t.has_full_adjoint_flag();

  // Cluster eigenvalues, then cumulative projections per cluster.
  std::size_t i = 0;
  Mat acc = Mat::zero(fd, fd);
  while (i < eig.values.size()) {
    std::size_t j = i;
    double sum = 0.0;
    while (j < eig.values.size() &&
           eig.values[j] - eig.values[i] <= gap * (1.0 + static_cast<double>(j - i))) {
      sum += eig.values[j];
      ++j;
    }
    const double b = sum / static_cast<double>(j - i);
    for (std::size_t col = i; col < j; ++col) {
      for (int rr = 0; rr < fd; ++rr) {
        const double vr = eig.vectors.at(rr, static_cast<int>(col));
        if (vr == 0.0) continue;
        for (int cc = 0; cc < fd; ++cc)
          acc.at(rr, cc) += vr * eig.vectors.at(cc, static_cast<int>(col));
      }
    }
    r.breakpoints.push_back(b);
    r.projections.push_back(acc);
    i = j;
  }

  // Last projection must be the identity; symmetrize rounding noise away.
  if (!r.projections.empty()) r.projections.back() = Mat::identity(fd);

  for (const Mat& e : r.projections) {
    const QlOperator proj(t.level(), t.dim(), e);
    if (!is_graded_projection(proj)) r.diagnostics.structural_ok = false;
    if (!commutes_with_right_generators(proj)) r.diagnostics.right_module_compatible = false;
    if (!commutes_with_left_generators(proj)) r.diagnostics.left_module_compatible = false;
  }
  return r;
}

ModuleVector riemann_reconstruct(const GradedResolution& r, const ModuleVector& x, double mesh) {
  if (mesh <= 0.0) throw std::invalid_argument("riemann_reconstruct: mesh must be positive");
  if (r.breakpoints.empty()) return ModuleVector(x.level(), x.dim());
  const double a = r.breakpoints.front() - 1.0;
  const double b = r.breakpoints.back();
  // Grid points a + i*mesh without accumulation so that refined grids nest.
  std::vector<double> partition;
  partition.push_back(a);
  for (std::int64_t i = 1;; ++i) {
    const double t = a + static_cast<double>(i) * mesh;
    if (t >= b) {
      partition.push_back(b);
      break;
    }
    partition.push_back(t);
  }
  return riemann_reconstruct(r, x, partition);
}

ModuleVector riemann_reconstruct(const GradedResolution& r, const ModuleVector& x,
                                 const std::vector<double>& partition) {
  if (partition.size() < 2) throw std::invalid_argument("riemann_reconstruct: partition too small");
  ModuleVector acc(x.level(), x.dim());
  if (r.breakpoints.empty()) return acc;

  // Each cell (t_{i-1}, t_i] contributes (E(t_i) - E(t_{i-1})) * t_i * x;
  // only cells containing breakpoints contribute, so sum the increments
  // Delta E_k weighted by the right endpoint of the owning cell.
  std::size_t cell = 1;
  Mat prev = Mat::zero(r.flat_dim(), r.flat_dim());
  for (std::size_t k = 0; k < r.breakpoints.size(); ++k) {
    const double bk = r.breakpoints[k];
    while (cell + 1 < partition.size() && partition[cell] < bk) ++cell;
    const double weight = partition[cell];
    const Mat delta = r.projections[k] - prev;
    prev = r.projections[k];
    const std::vector<double> piece = delta.apply(x.flat());
    for (std::size_t i = 0; i < piece.size(); ++i) acc.flat()[i] += weight * piece[i];
  }
  return acc;
}

std::vector<CdNumber> spectrum(const QlOperator& t) {
  const GradedResolution r = resolution_of_identity(t);
  std::vector<CdNumber> out;
  out.reserve(r.breakpoints.size());
  for (double b : r.breakpoints) out.push_back(CdNumber::real(t.level(), b));
  return out;
}

bool spectrum_point_singular(const QlOperator& t, const CdNumber& z) {
  if (z.level() != t.level()) throw std::invalid_argument("spectrum_point_singular: level mismatch");
  const Mat rz = right_scalar_action(t.level(), t.dim(), z).matrix();
  const Mat shifted = t.matrix() - rz;
  return rank(shifted, 0.0) < t.flat_dim();
}

PositivityReport positivity_report(const QlOperator& t, int samples, double tol) {
  if (!t.is_symmetric_flag())
    throw std::domain_error("positivity: operator is not symmetric");
  const EigenSym eig = jacobi_eigen_sym(t.matrix());
  double top = 1.0;
  for (double lam : eig.values) top = std::max(top, std::abs(lam));

  PositivityReport rep;
  rep.min_eigenvalue = eig.values.front();
  rep.spectral = rep.min_eigenvalue >= -tol * top;

  Rng rng(0x9d5f31c2u);
  double min_quotient = std::numeric_limits<double>::infinity();
  auto probe = [&](const std::vector<double>& flat) {
    const std::vector<double> tx = t.matrix().apply(flat);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < flat.size(); ++i) {
      num += tx[i] * flat[i];
      den += flat[i] * flat[i];
    }
    if (den > 0.0) min_quotient = std::min(min_quotient, num / den);
  };
  for (int s = 0; s < samples; ++s) probe(rng.unit_vector(t.level(), t.dim()).flat());
  std::vector<double> vmin(static_cast<std::size_t>(t.flat_dim()));
  for (int i = 0; i < t.flat_dim(); ++i) vmin[static_cast<std::size_t>(i)] = eig.vectors.at(i, 0);
  probe(vmin);

  rep.min_quotient = min_quotient;
  rep.quadratic_form = min_quotient >= -tol * top;
  return rep;
}

bool is_positive(const QlOperator& t, double tol) {
  const PositivityReport rep = positivity_report(t, 32, tol);
  if (!rep.agree())
    throw std::runtime_error("is_positive: spectral and quadratic-form criteria disagree");
  return rep.spectral;
}

UniquenessReport resolution_uniqueness_check(const GradedResolution& r1,
                                             const GradedResolution& r2, double tol) {
  UniquenessReport rep;
  if (r1.flat_dim() != r2.flat_dim()) {
    rep.equal = false;
    rep.max_residual = std::numeric_limits<double>::infinity();
    return rep;
  }
  std::vector<double> merged = r1.breakpoints;
  merged.insert(merged.end(), r2.breakpoints.begin(), r2.breakpoints.end());
  std::sort(merged.begin(), merged.end());
  for (double b : merged) {
    const double res = frobenius_distance(r1.step_eval(b), r2.step_eval(b));
    if (res > rep.max_residual) {
      rep.max_residual = res;
      rep.offending_b = b;
    }
  }
  rep.equal = rep.max_residual <= tol;
  return rep;
}

std::string resolution_to_csv(const GradedResolution& r) {
  std::ostringstream os;
  os << "b,rank\n";
  os.precision(17);
  for (std::size_t k = 0; k < r.breakpoints.size(); ++k)
    os << r.breakpoints[k] << "," << r.rank_at(k) << "\n";
  return os.str();
}

}  // namespace octspec
