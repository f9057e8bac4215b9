#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "json.hpp"
#include "octspec/qlop.hpp"
#include "octspec/spectral.hpp"

namespace octspec {

// Borel cell: half-open real interval [lo, hi) or a finite value set.
struct BorelCell {
  bool is_points = false;
  double lo = 0.0;
  double hi = 0.0;
  bool lo_inf = false;  // lo = -infinity
  bool hi_inf = false;  // hi = +infinity
  std::vector<CdNumber> points;

  static BorelCell interval(double lo, double hi);
  static BorelCell ray_above(double lo);   // [lo, +inf)
  static BorelCell ray_below(double hi);   // (-inf, hi)
  static BorelCell whole_line();
  static BorelCell point_set(std::vector<CdNumber> pts);

  // Half-open membership with snapping: values within `snap` of lo count
  // as inside, values within `snap` of hi as outside.
  bool contains(double b, double snap = 1e-9) const;
  bool contains(const CdNumber& z, double snap = 1e-9) const;
};

// Finite list of disjoint cells with one value per cell; evaluation falls
// back to the default value, or is undefined when none was given.
class StepFunction {
 public:
  StepFunction(int value_level, std::vector<std::pair<BorelCell, CdNumber>> cells,
               std::optional<CdNumber> default_value);

  static StepFunction indicator(int value_level, const BorelCell& cell);
  static StepFunction constant(const CdNumber& value);

  int value_level() const { return level_; }
  const std::vector<std::pair<BorelCell, CdNumber>>& cells() const { return cells_; }
  const std::optional<CdNumber>& default_value() const { return default_; }

  bool defined_at(double b) const;
  CdNumber eval(double b) const;           // throws std::domain_error if undefined
  CdNumber eval(const CdNumber& z) const;  // point cells first, then real axis
  bool real_valued(double tol = 1e-12) const;
  double sup_abs_on(const std::vector<double>& points) const;

 private:
  int level_;
  std::vector<std::pair<BorelCell, CdNumber>> cells_;
  std::optional<CdNumber> default_;
};

// f(T) = sum_k Delta E_k . (left action of f(b_k)); theta(1) = I,
// theta(id) = T.  Requires symmetric T and f defined on its spectrum.
QlOperator apply(const StepFunction& f, const QlOperator& t);

// Same spectral sum with an arbitrary value assignment on the spectrum.
QlOperator apply_pointwise(const QlOperator& t, const std::function<CdNumber(double)>& f);

// E(V) = chi_V(T).
QlOperator spectral_measure(const QlOperator& t, const BorelCell& v);

// <E(V).h x; x> summed over breakpoints inside V.
CdNumber scalar_measure(const QlOperator& t, const ModuleVector& x, const BorelCell& v,
                        const StepFunction& h);

// ||(f o g)(T) - f(g(T))|| <= tol; g must be real-valued on sp(T).
bool compose_check(const StepFunction& f, const StepFunction& g, const QlOperator& t, double tol);

// Unique positive square root via the calculus; pre: is_positive(T).
QlOperator positive_sqrt(const QlOperator& t);

// Polynomials with Cayley-Dickson coefficients and explicit bracketing.
struct PolynomialFactor {
  bool is_power = false;
  int exponent = 0;   // for powers
  CdNumber coeff;     // for coefficient factors

  static PolynomialFactor power(int e) { return {true, e, CdNumber(0)}; }
  static PolynomialFactor coefficient(CdNumber a) { return {false, 0, std::move(a)}; }
};

struct PolynomialTerm {
  std::vector<PolynomialFactor> factors;
  // Merge positions: step s multiplies the items at positions q[s], q[s]+1
  // of the current factor list.  Empty means left-to-right.
  std::vector<int> bracketing;
  int degree() const;
};

struct Polynomial {
  int level = 0;
  std::vector<PolynomialTerm> terms;
  int degree() const;
};

CdNumber polynomial_eval(const Polynomial& p, const CdNumber& z);
QlOperator polynomial_apply(const Polynomial& p, const QlOperator& t);

struct GrowthReport {
  bool pass = false;
  double empirical_c = 0.0;
  int degree = 0;
};

// Samples |z| in (radius, 10*radius] on random directions and reports the
// worst ratio |leading part(z)| / |z|^n.
GrowthReport growth_check(const Polynomial& p, int samples, double radius = 2.0,
                          double min_c = 0.0);

// Orthonormal basis of range(E) as columns (eigenvectors with eigenvalue 1).
Mat range_basis(const Mat& projection);
// B^T m B for a basis B of a subspace.
Mat compress_to_range(const Mat& m, const Mat& basis);

// JSON: {"cells":[{"lo":r|"-inf","hi":r|"inf","value":[...]}, ...],
//        "default":[...]} with point cells as {"points":[[...],...]}.
nlohmann::json stepfunction_to_json(const StepFunction& f);
StepFunction stepfunction_from_json(const nlohmann::json& j);
nlohmann::json polynomial_to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j);

}  // namespace octspec
