#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "octspec/cdnum.hpp"
#include "octspec/hmodule.hpp"
#include "octspec/linalg.hpp"

namespace octspec {

// Test tolerances used across the operator modules.
constexpr double kArithmeticTol = 1e-12;  // exact algebraic identities
constexpr double kStructuralTol = 1e-10;  // structural operator identities
constexpr double kSpectralTol = 1e-9;     // eigendecomposition-backed reconstructions

// R-homogeneous A_v-additive operator on A_v^n as a real matrix acting on
// the flat layout.  Values are immutable; the flags are computed once at
// construction.
class QlOperator {
 public:
  QlOperator(int level, int dim, Mat matrix);

  static QlOperator identity(int level, int dim);
  static QlOperator zero(int level, int dim);

  int level() const { return level_; }
  int dim() const { return dim_; }
  int flat_dim() const { return matrix_.rows; }
  const Mat& matrix() const { return matrix_; }

  bool is_symmetric_flag() const { return symmetric_; }
  bool has_full_adjoint_flag() const { return full_adjoint_; }
  bool is_graded_projection_flag() const { return graded_projection_; }
  bool is_unitary_flag() const { return unitary_; }

  ModuleVector apply(const ModuleVector& x) const;

  friend QlOperator operator+(const QlOperator& a, const QlOperator& b);
  friend QlOperator operator-(const QlOperator& a, const QlOperator& b);
  friend QlOperator operator*(const QlOperator& a, const QlOperator& b);  // composition
  friend QlOperator operator*(double s, const QlOperator& a);

 private:
  int level_;
  int dim_;
  Mat matrix_;
  bool symmetric_ = false;
  bool full_adjoint_ = false;
  bool graded_projection_ = false;
  bool unitary_ = false;
};

double frobenius_distance(const QlOperator& a, const QlOperator& b);
double operator_norm(const QlOperator& a);

// 2^v x 2^v real matrices of x -> a*x and x -> x*a.
Mat left_mult_matrix(const CdNumber& a);
Mat right_mult_matrix(const CdNumber& a);

// Entrywise actions on A_v^n (block-diagonal).
QlOperator left_scalar_action(int level, int dim, const CdNumber& a);
QlOperator right_scalar_action(int level, int dim, const CdNumber& a);
QlOperator left_generator_action(int level, int dim, int j);
QlOperator right_generator_action(int level, int dim, int j);

// n x n matrix of Cayley-Dickson entries acting by (Ax)_k = sum_l a_kl x_l
// (left multiplication); the induced real matrix stacks L_{a_kl} blocks.
struct CdMatrixOperator {
  int level = 0;
  int dim = 0;
  std::vector<std::vector<CdNumber>> entries;

  CdMatrixOperator(int level, int dim);
  CdNumber& at(int k, int l) { return entries[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)]; }
  const CdNumber& at(int k, int l) const {
    return entries[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)];
  }
  CdMatrixOperator conjugate_transpose() const;
  QlOperator to_operator() const;
};

// Same shape but acting by (Ax)_k = sum_l x_l * a_kl; over the quaternions
// a Hermitian entry matrix gives a genuinely self-adjoint operator.
QlOperator right_matrix_operator(int level, int dim, const std::vector<std::vector<CdNumber>>& entries);

// Transpose in the flat layout: Re<Tx;y> = Re<x;T'y> always.
QlOperator real_adjoint(const QlOperator& t);

// Verified predicate: <Tx;y> == <x;T'y> as full Cayley-Dickson numbers on
// `trials` random unit pairs.  Scale-relative tolerance.
bool has_full_adjoint(const QlOperator& t, int trials = 16, double tol = kStructuralTol);

// Component projection of the operator onto its grade-j part; generator
// actions compose as left-multiplication operators.  Requires v >= 2.
QlOperator component_project(const QlOperator& a, int j);

struct SelfAdjointCriteriaReport {
  int null_dim_plus = -1;       // dim ker(T' + MI)
  int null_dim_minus = -1;      // dim ker(T' - MI)
  bool surjective_plus = false;  // rank(T + MI) full
  bool surjective_minus = false;
  bool dense_range_plus = false;   // equals surjectivity in finite dimension
  bool dense_range_minus = false;
  bool self_adjoint = false;       // symmetric + verified full adjoint
  bool all_agree() const;
};

// The four equivalent statements for symmetric T and M = i_m, m >= 1.
SelfAdjointCriteriaReport check_selfadjoint_criteria(const QlOperator& t, int m_index);

// ||T'T - TT'||_F <= tol, with T' the real adjoint.
bool is_normal(const QlOperator& t, double tol = kStructuralTol);

// E idempotent, symmetric, and 2E - I orthogonal.
bool is_graded_projection(const QlOperator& e, double tol = kStructuralTol);

// Module-compatibility diagnostics for projections.
bool commutes_with_right_generators(const QlOperator& e, double tol = kStructuralTol);
bool commutes_with_left_generators(const QlOperator& e, double tol = kStructuralTol);

// U'TU == T for unitary U: the finite-dimensional affiliation relation.
bool commutant_check(const QlOperator& t, const QlOperator& u, double tol = kStructuralTol);

// JSON forms:
//   {"kind":"real","v":v,"n":n,"matrix":[[...]]}
//   {"kind":"cdmatrix","v":v,"n":n,"entries":[[[c x 2^v]...]...]}
nlohmann::json operator_to_json(const QlOperator& t);
nlohmann::json operator_to_json(const CdMatrixOperator& t);
QlOperator operator_from_json(const nlohmann::json& j);

}  // namespace octspec
