#pragma once

#include <vector>

#include "octspec/qlop.hpp"

namespace octspec {

// Right-continuous step family of graded projections E(b) with E = I past
// the last breakpoint and 0 below the first.
struct GradedResolution {
  int level = 0;
  int dim = 0;
  std::vector<double> breakpoints;     // strictly increasing
  std::vector<Mat> projections;        // cumulative; back() == I

  struct Diagnostics {
    bool structural_ok = true;           // idempotent/symmetric/reflection checks
    bool right_module_compatible = true; // commutes with every R_{i_j}
    bool left_module_compatible = true;  // commutes with every L_{i_j}
    bool operator_full_adjoint = false;
  };
  Diagnostics diagnostics;

  int flat_dim() const { return dim * dim_of_level(level); }
  // Step evaluation; breakpoints within `snap` of b count as <= b.
  Mat step_eval(double b, double snap = 1e-9) const;
  int rank_at(std::size_t k) const;  // round(trace E_k)
};

// Complexification blocks on Y = X + iX: [[T, -s I], [s I, T]] is T + s*iI.
Mat complexified(const Mat& t, int s);
Mat imaginary_unit_block(int flat_dim);  // [[0,-I],[I,0]]

struct ResolventPair {
  Mat b_plus;   // (T + iI)^{-1} on the doubled space
  Mat b_minus;  // (T - iI)^{-1}
  double norm_plus = 0.0;
  double norm_minus = 0.0;
  double adjoint_residual = 0.0;    // ||B_- - B_+^T||_F
  double identity2_residual = 0.0;  // 2(iI)B+B- = B- - B+
  double identity3_residual = 0.0;  // T B+B- = (B+ + B-)/2
};

// Requires symmetric T; inversion failure signals a non-self-adjoint input.
ResolventPair resolvents(const QlOperator& t);

// Jacobi eigendecomposition; eigenvalues clustered into breakpoints with a
// gap threshold of 1e-8 * max|eigenvalue|.
GradedResolution resolution_of_identity(const QlOperator& t);

// Riemann sum of dE.b x over a partition of [b_1 - 1, b_m] with the given
// mesh (right endpoints as weights); error is bounded by mesh * ||x||.
ModuleVector riemann_reconstruct(const GradedResolution& r, const ModuleVector& x, double mesh);
// Same sum over an explicit increasing partition (first point below all
// breakpoints); passing the breakpoints themselves reproduces Tx exactly.
ModuleVector riemann_reconstruct(const GradedResolution& r, const ModuleVector& x,
                                 const std::vector<double>& partition);

// Real eigenvalue set of a self-adjoint operator, as Cayley-Dickson numbers.
std::vector<CdNumber> spectrum(const QlOperator& t);

// Singularity probe for the spectrum: is T - R_z singular (z acting by
// right multiplication on the flat layout)?
bool spectrum_point_singular(const QlOperator& t, const CdNumber& z);

struct PositivityReport {
  bool spectral = false;        // min eigenvalue >= -tol
  bool quadratic_form = false;  // Re<Tx;x> >= -tol ||x||^2 on probe vectors
  double min_eigenvalue = 0.0;
  double min_quotient = 0.0;
  bool agree() const { return spectral == quadratic_form; }
};

// Probe set is `samples` random vectors plus the minimizing eigenvector,
// so the quadratic-form side realizes the spectral infimum.
PositivityReport positivity_report(const QlOperator& t, int samples = 32,
                                   double tol = kStructuralTol);
bool is_positive(const QlOperator& t, double tol = kStructuralTol);

struct UniquenessReport {
  bool equal = true;
  double max_residual = 0.0;
  double offending_b = 0.0;
};

// Projection-wise comparison over merged breakpoints.
UniquenessReport resolution_uniqueness_check(const GradedResolution& r1,
                                             const GradedResolution& r2, double tol);

// CSV rows "b,rank" per breakpoint.
std::string resolution_to_csv(const GradedResolution& r);

}  // namespace octspec
