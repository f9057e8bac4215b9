#include "octspec/qlop.hpp"

#include <cmath>
#include <stdexcept>

#include "octspec/rng.hpp"

namespace octspec {

namespace {

void check_same_space(const QlOperator& a, const QlOperator& b) {
  if (a.level() != b.level() || a.dim() != b.dim())
    throw std::invalid_argument("qlop: operator shape mismatch");
}

bool matrices_commute(const Mat& a, const Mat& b, double tol) {
  return frobenius_distance(a * b, b * a) <= tol;
}

}  // namespace

QlOperator::QlOperator(int level, int dim, Mat matrix)
    : level_(level), dim_(dim), matrix_(std::move(matrix)) {
  const int fd = dim * dim_of_level(level);
  if (matrix_.rows != fd || matrix_.cols != fd)
    throw std::invalid_argument("qlop: matrix must be (n*2^v) x (n*2^v)");
  const double scale = std::max(1.0, matrix_.max_abs());
  symmetric_ = is_symmetric(matrix_, kStructuralTol * scale);
  full_adjoint_ = has_full_adjoint(*this);
  graded_projection_ = is_graded_projection(*this);
  const Mat gram = matrix_.transposed() * matrix_;
  unitary_ = frobenius_distance(gram, Mat::identity(fd)) <= kStructuralTol * fd;
}

QlOperator QlOperator::identity(int level, int dim) {
  return QlOperator(level, dim, Mat::identity(dim * dim_of_level(level)));
}

QlOperator QlOperator::zero(int level, int dim) {
  const int fd = dim * dim_of_level(level);
  return QlOperator(level, dim, Mat::zero(fd, fd));
}

ModuleVector QlOperator::apply(const ModuleVector& x) const {
  if (x.level() != level_ || x.dim() != dim_)
    throw std::invalid_argument("qlop: vector shape mismatch");
  return ModuleVector(level_, dim_, matrix_.apply(x.flat()));
}

QlOperator operator+(const QlOperator& a, const QlOperator& b) {
  check_same_space(a, b);
  return QlOperator(a.level(), a.dim(), a.matrix_ + b.matrix_);
}

QlOperator operator-(const QlOperator& a, const QlOperator& b) {
  check_same_space(a, b);
  return QlOperator(a.level(), a.dim(), a.matrix_ - b.matrix_);
}

QlOperator operator*(const QlOperator& a, const QlOperator& b) {
  check_same_space(a, b);
  return QlOperator(a.level(), a.dim(), a.matrix_ * b.matrix_);
}

QlOperator operator*(double s, const QlOperator& a) {
  return QlOperator(a.level(), a.dim(), a.matrix_ * s);
}

double frobenius_distance(const QlOperator& a, const QlOperator& b) {
  check_same_space(a, b);
  return frobenius_distance(a.matrix(), b.matrix());
}

double operator_norm(const QlOperator& a) { return operator_norm(a.matrix()); }

Mat left_mult_matrix(const CdNumber& a) {
  const int d = dim_of_level(a.level());
  Mat m(d, d);
  for (int s = 0; s < d; ++s) {
    if (a[s] == 0.0) continue;
    for (int c = 0; c < d; ++c) {
      const BasisProduct p = basis_mul(s, c, a.level());
      m.at(p.index, c) += p.sign * a[s];
    }
  }
  return m;
}

Mat right_mult_matrix(const CdNumber& a) {
  const int d = dim_of_level(a.level());
  Mat m(d, d);
  for (int s = 0; s < d; ++s) {
    if (a[s] == 0.0) continue;
    for (int c = 0; c < d; ++c) {
      const BasisProduct p = basis_mul(c, s, a.level());
      m.at(p.index, c) += p.sign * a[s];
    }
  }
  return m;
}

namespace {

QlOperator block_diagonal_action(int level, int dim, const Mat& block) {
  const int d = dim_of_level(level);
  Mat m(dim * d, dim * d);
  for (int k = 0; k < dim; ++k)
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m.at(k * d + r, k * d + c) = block.at(r, c);
  return QlOperator(level, dim, std::move(m));
}

}  // namespace

QlOperator left_scalar_action(int level, int dim, const CdNumber& a) {
  if (a.level() != level) throw std::invalid_argument("qlop: level mismatch");
  return block_diagonal_action(level, dim, left_mult_matrix(a));
}

QlOperator right_scalar_action(int level, int dim, const CdNumber& a) {
  if (a.level() != level) throw std::invalid_argument("qlop: level mismatch");
  return block_diagonal_action(level, dim, right_mult_matrix(a));
}

QlOperator left_generator_action(int level, int dim, int j) {
  return left_scalar_action(level, dim, CdNumber::basis(level, j));
}

QlOperator right_generator_action(int level, int dim, int j) {
  return right_scalar_action(level, dim, CdNumber::basis(level, j));
}

CdMatrixOperator::CdMatrixOperator(int level_, int dim_) : level(level_), dim(dim_) {
  entries.assign(static_cast<std::size_t>(dim),
                 std::vector<CdNumber>(static_cast<std::size_t>(dim), CdNumber(level)));
}

CdMatrixOperator CdMatrixOperator::conjugate_transpose() const {
  CdMatrixOperator out(level, dim);
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l) out.at(k, l) = at(l, k).conjugate();
  return out;
}

QlOperator CdMatrixOperator::to_operator() const {
  const int d = dim_of_level(level);
  Mat m(dim * d, dim * d);
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l) {
      const Mat block = left_mult_matrix(at(k, l));
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m.at(k * d + r, l * d + c) = block.at(r, c);
    }
  return QlOperator(level, dim, std::move(m));
}

QlOperator right_matrix_operator(int level, int dim,
                                 const std::vector<std::vector<CdNumber>>& entries) {
  const int d = dim_of_level(level);
  Mat m(dim * d, dim * d);
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l) {
      const Mat block = right_mult_matrix(entries[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]);
      for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m.at(k * d + r, l * d + c) = block.at(r, c);
    }
  return QlOperator(level, dim, std::move(m));
}

QlOperator real_adjoint(const QlOperator& t) {
  return QlOperator(t.level(), t.dim(), t.matrix().transposed());
}

bool has_full_adjoint(const QlOperator& t, int trials, double tol) {
  const Mat adj = t.matrix().transposed();
  const double scale = 1.0 + t.matrix().max_abs();
  Rng rng(0x0c75bec5u);
  for (int i = 0; i < trials; ++i) {
    const ModuleVector x = rng.unit_vector(t.level(), t.dim());
    const ModuleVector y = rng.unit_vector(t.level(), t.dim());
    const ModuleVector tx(t.level(), t.dim(), t.matrix().apply(x.flat()));
    const ModuleVector ty(t.level(), t.dim(), adj.apply(y.flat()));
    if (distance(inner(tx, y), inner(x, ty)) > tol * scale) return false;
  }
  return true;
}

QlOperator component_project(const QlOperator& a, int j) {
  const int v = a.level();
  if (v < 2) throw std::invalid_argument("component_project: level >= 2 required");
  const int d = dim_of_level(v);
  if (j < 0 || j >= d) throw std::invalid_argument("component_project: grade index out of range");

  const Mat& m = a.matrix();
  // S = -A + sum_{k>=1} i_k (A i_k^*), all as compositions of entrywise
  // left multiplications.
  Mat s = m * (-1.0);
  for (int k = 1; k < d; ++k) {
    const Mat lk = left_generator_action(v, a.dim(), k).matrix();
    const Mat lk_conj = lk * (-1.0);  // left action of i_k^* = -i_k
    s += lk * (m * lk_conj);
  }
  const double c = 1.0 / (d - 2);
  Mat out(m.rows, m.cols);
  if (j == 0) {
    out = (m + s * c) * 0.5;
  } else {
    const Mat lj = left_generator_action(v, a.dim(), j).matrix();
    out = ((lj * (m * lj)) * (-1.0) - s * c) * 0.5;
  }
  return QlOperator(v, a.dim(), std::move(out));
}

bool SelfAdjointCriteriaReport::all_agree() const {
  const bool nulls = (null_dim_plus == 0) && (null_dim_minus == 0);
  const bool ranges = surjective_plus && surjective_minus;
  const bool dense = dense_range_plus && dense_range_minus;
  return self_adjoint == nulls && nulls == ranges && ranges == dense;
}

SelfAdjointCriteriaReport check_selfadjoint_criteria(const QlOperator& t, int m_index) {
  if (m_index < 1 || m_index >= dim_of_level(t.level()))
    throw std::invalid_argument("check_selfadjoint_criteria: generator index out of range");
  if (!t.is_symmetric_flag())
    throw std::domain_error("check_selfadjoint_criteria: operator is not symmetric");

  const Mat mi = left_generator_action(t.level(), t.dim(), m_index).matrix();
  const Mat adj = t.matrix().transposed();
  const int fd = t.flat_dim();

  SelfAdjointCriteriaReport rep;
  rep.self_adjoint = t.is_symmetric_flag() && t.has_full_adjoint_flag();
  rep.null_dim_plus = fd - rank(adj + mi, 0.0);
  rep.null_dim_minus = fd - rank(adj - mi, 0.0);
  rep.surjective_plus = rank(t.matrix() + mi, 0.0) == fd;
  rep.surjective_minus = rank(t.matrix() - mi, 0.0) == fd;
  rep.dense_range_plus = rep.surjective_plus;
  rep.dense_range_minus = rep.surjective_minus;
  return rep;
}

bool is_normal(const QlOperator& t, double tol) {
  const Mat adj = t.matrix().transposed();
  const double scale = 1.0 + t.matrix().frobenius();
  return frobenius_distance(adj * t.matrix(), t.matrix() * adj) <= tol * scale * scale;
}

bool is_graded_projection(const QlOperator& e, double tol) {
  const Mat& m = e.matrix();
  const double scale = std::max(1.0, m.max_abs());
  if (!is_symmetric(m, tol * scale)) return false;
  if (frobenius_distance(m * m, m) > tol * scale * m.rows) return false;
  // 2E - I is then an orthogonal reflection; verified explicitly.
  const Mat refl = m * 2.0 - Mat::identity(m.rows);
  return frobenius_distance(refl.transposed() * refl, Mat::identity(m.rows)) <= tol * m.rows;
}

bool commutes_with_right_generators(const QlOperator& e, double tol) {
  const double scale = std::max(1.0, e.matrix().max_abs());
  for (int j = 1; j < dim_of_level(e.level()); ++j) {
    const Mat rj = right_generator_action(e.level(), e.dim(), j).matrix();
    if (!matrices_commute(e.matrix(), rj, tol * scale * e.flat_dim())) return false;
  }
  return true;
}

bool commutes_with_left_generators(const QlOperator& e, double tol) {
  const double scale = std::max(1.0, e.matrix().max_abs());
  for (int j = 1; j < dim_of_level(e.level()); ++j) {
    const Mat lj = left_generator_action(e.level(), e.dim(), j).matrix();
    if (!matrices_commute(e.matrix(), lj, tol * scale * e.flat_dim())) return false;
  }
  return true;
}

bool commutant_check(const QlOperator& t, const QlOperator& u, double tol) {
  check_same_space(t, u);
  const Mat gram = u.matrix().transposed() * u.matrix();
  if (frobenius_distance(gram, Mat::identity(u.flat_dim())) > tol * u.flat_dim())
    throw std::domain_error("commutant_check: U is not unitary");
  const Mat conj = u.matrix().transposed() * (t.matrix() * u.matrix());
  const double scale = 1.0 + t.matrix().max_abs();
  return frobenius_distance(conj, t.matrix()) <= tol * scale * t.flat_dim();
}

nlohmann::json operator_to_json(const QlOperator& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < t.flat_dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < t.flat_dim(); ++j) row.push_back(t.matrix().at(i, j));
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"kind", "real"}, {"v", t.level()}, {"n", t.dim()}, {"matrix", rows}};
}

nlohmann::json operator_to_json(const CdMatrixOperator& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (int k = 0; k < t.dim; ++k) {
    nlohmann::json row = nlohmann::json::array();
    for (int l = 0; l < t.dim; ++l) row.push_back(t.at(k, l).coeffs());
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"kind", "cdmatrix"}, {"v", t.level}, {"n", t.dim}, {"entries", rows}};
}

QlOperator operator_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const int v = j.at("v").get<int>();
  const int n = j.at("n").get<int>();
  if (kind == "real") {
    const auto& rows = j.at("matrix");
    const int fd = n * dim_of_level(v);
    if (static_cast<int>(rows.size()) != fd)
      throw std::invalid_argument("operator_from_json: matrix row count mismatch");
    Mat m(fd, fd);
    for (int r = 0; r < fd; ++r) {
      const auto row = rows.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
      if (static_cast<int>(row.size()) != fd)
        throw std::invalid_argument("operator_from_json: matrix column count mismatch");
      for (int c = 0; c < fd; ++c) m.at(r, c) = row[static_cast<std::size_t>(c)];
    }
    return QlOperator(v, n, std::move(m));
  }
  if (kind == "cdmatrix") {
    CdMatrixOperator op(v, n);
    const auto& rows = j.at("entries");
    if (static_cast<int>(rows.size()) != n)
      throw std::invalid_argument("operator_from_json: entry row count mismatch");
    for (int k = 0; k < n; ++k) {
      const auto& row = rows.at(static_cast<std::size_t>(k));
      for (int l = 0; l < n; ++l)
        op.at(k, l) = CdNumber(v, row.at(static_cast<std::size_t>(l)).get<std::vector<double>>());
    }
    return op.to_operator();
  }
  throw std::invalid_argument("operator_from_json: unknown kind '" + kind + "'");
}

}  // namespace octspec
