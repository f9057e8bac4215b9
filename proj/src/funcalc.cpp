#include "octspec/funcalc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "octspec/rng.hpp"

namespace octspec {

BorelCell BorelCell::interval(double lo, double hi) {
  BorelCell c;
  c.lo = lo;
  c.hi = hi;
  return c;
}

BorelCell BorelCell::ray_above(double lo) {
  BorelCell c;
  c.lo = lo;
  c.hi_inf = true;
  return c;
}

BorelCell BorelCell::ray_below(double hi) {
  BorelCell c;
  c.lo_inf = true;
  c.hi = hi;
  return c;
}

BorelCell BorelCell::whole_line() {
  BorelCell c;
  c.lo_inf = true;
  c.hi_inf = true;
  return c;
}

BorelCell BorelCell::point_set(std::vector<CdNumber> pts) {
  BorelCell c;
  c.is_points = true;
  c.points = std::move(pts);
  return c;
}

bool BorelCell::contains(double b, double snap) const {
  if (is_points) {
    for (const CdNumber& p : points) {
      CdNumber diff = p;
      diff[0] -= b;
      if (diff.norm() <= snap) return true;
    }
    return false;
  }
  const bool above = lo_inf || b >= lo - snap;
  const bool below = hi_inf || b < hi - snap;
  return above && below;
}

bool BorelCell::contains(const CdNumber& z, double snap) const {
  if (is_points) {
    for (const CdNumber& p : points)
      if (distance(p, z) <= snap) return true;
    return false;
  }
  // Interval cells live on the real axis.
  double imag_sq = 0.0;
  for (int j = 1; j < z.size(); ++j) imag_sq += z[j] * z[j];
  if (std::sqrt(imag_sq) > snap) return false;
  return contains(z[0], snap);
}

StepFunction::StepFunction(int value_level, std::vector<std::pair<BorelCell, CdNumber>> cells,
                           std::optional<CdNumber> default_value)
    : level_(value_level), cells_(std::move(cells)), default_(std::move(default_value)) {
  for (const auto& [cell, value] : cells_)
    if (value.level() != level_) throw std::invalid_argument("StepFunction: value level mismatch");
  if (default_ && default_->level() != level_)
    throw std::invalid_argument("StepFunction: default level mismatch");
}

StepFunction StepFunction::indicator(int value_level, const BorelCell& cell) {
  return StepFunction(value_level, {{cell, CdNumber::real(value_level, 1.0)}},
                      CdNumber(value_level));
}

StepFunction StepFunction::constant(const CdNumber& value) {
  return StepFunction(value.level(), {{BorelCell::whole_line(), value}}, value);
}

bool StepFunction::defined_at(double b) const {
  if (default_) return true;
  for (const auto& [cell, value] : cells_)
    if (cell.contains(b)) return true;
  return false;
}

CdNumber StepFunction::eval(double b) const {
  for (const auto& [cell, value] : cells_)
    if (cell.contains(b)) return value;
  if (default_) return *default_;
  throw std::domain_error("StepFunction: undefined at " + std::to_string(b));
}

CdNumber StepFunction::eval(const CdNumber& z) const {
  for (const auto& [cell, value] : cells_)
    if (cell.contains(z)) return value;
  if (default_) return *default_;
  throw std::domain_error("StepFunction: undefined at " + z.str());
}

bool StepFunction::real_valued(double tol) const {
  auto real = [tol](const CdNumber& c) {
    for (int j = 1; j < c.size(); ++j)
      if (std::abs(c[j]) > tol) return false;
    return true;
  };
  for (const auto& [cell, value] : cells_)
    if (!real(value)) return false;
  return !default_ || real(*default_);
}

double StepFunction::sup_abs_on(const std::vector<double>& points) const {
  double m = 0.0;
  for (double b : points) m = std::max(m, eval(b).norm());
  return m;
}

QlOperator apply_pointwise(const QlOperator& t, const std::function<CdNumber(double)>& f) {
  const GradedResolution r = resolution_of_identity(t);
  const int fd = t.flat_dim();
  Mat out(fd, fd);
  Mat prev = Mat::zero(fd, fd);
  for (std::size_t k = 0; k < r.breakpoints.size(); ++k) {
    const CdNumber value = f(r.breakpoints[k]);
    if (value.level() != t.level())
      throw std::invalid_argument("apply: value level does not match the operator");
    const Mat delta = r.projections[k] - prev;
    prev = r.projections[k];
    if (value.is_zero()) continue;
    const Mat lv = left_scalar_action(t.level(), t.dim(), value).matrix();
    out += delta * lv;
  }
  return QlOperator(t.level(), t.dim(), std::move(out));
}

QlOperator apply(const StepFunction& f, const QlOperator& t) {
  return apply_pointwise(t, [&f](double b) { return f.eval(b); });
}

QlOperator spectral_measure(const QlOperator& t, const BorelCell& v) {
  return apply(StepFunction::indicator(t.level(), v), t);
}

CdNumber scalar_measure(const QlOperator& t, const ModuleVector& x, const BorelCell& v,
                        const StepFunction& h) {
  const GradedResolution r = resolution_of_identity(t);
  CdNumber acc(t.level());
  Mat prev = Mat::zero(t.flat_dim(), t.flat_dim());
  for (std::size_t k = 0; k < r.breakpoints.size(); ++k) {
    const Mat delta = r.projections[k] - prev;
    prev = r.projections[k];
    if (!v.contains(r.breakpoints[k])) continue;
    const CdNumber value = h.eval(r.breakpoints[k]);
    const QlOperator lv = left_scalar_action(t.level(), t.dim(), value);
    ModuleVector weighted = lv.apply(x);
    weighted = ModuleVector(x.level(), x.dim(), delta.apply(weighted.flat()));
    acc += inner(weighted, x);
  }
  return acc;
}

bool compose_check(const StepFunction& f, const StepFunction& g, const QlOperator& t, double tol) {
  if (!g.real_valued())
    throw std::domain_error("compose_check: g must be real-valued on the spectrum");
  const QlOperator gt = apply(g, t);
  const QlOperator fgt = apply(f, gt);
  const QlOperator composed = apply_pointwise(t, [&](double b) { return f.eval(g.eval(b)[0]); });
  return frobenius_distance(fgt, composed) <= tol;
}

QlOperator positive_sqrt(const QlOperator& t) {
  if (!is_positive(t)) throw std::domain_error("positive_sqrt: operator has negative spectrum");
  return apply_pointwise(t, [&](double b) {
    return CdNumber::real(t.level(), std::sqrt(std::max(0.0, b)));
  });
}

int PolynomialTerm::degree() const {
  int d = 0;
  for (const PolynomialFactor& f : factors)
    if (f.is_power) d += f.exponent;
  return d;
}

int Polynomial::degree() const {
  int d = 0;
  for (const PolynomialTerm& t : terms) d = std::max(d, t.degree());
  return d;
}

namespace {

// Fold a factor list by the explicit bracketing vector; empty bracketing
// multiplies left-to-right.
template <typename Value, typename MulFn>
Value fold_bracketed(std::vector<Value> items, const std::vector<int>& bracketing, MulFn mul) {
  if (items.empty()) throw std::invalid_argument("polynomial: empty term");
  if (bracketing.empty()) {
    Value acc = items.front();
    for (std::size_t i = 1; i < items.size(); ++i) acc = mul(acc, items[i]);
    return acc;
  }
  if (bracketing.size() != items.size() - 1)
    throw std::invalid_argument("polynomial: malformed bracketing vector");
  for (int pos : bracketing) {
    if (pos < 0 || pos + 1 >= static_cast<int>(items.size()))
      throw std::invalid_argument("polynomial: malformed bracketing vector");
    items[static_cast<std::size_t>(pos)] =
        mul(items[static_cast<std::size_t>(pos)], items[static_cast<std::size_t>(pos) + 1]);
    items.erase(items.begin() + pos + 1);
  }
  return items.front();
}

CdNumber cd_power(const CdNumber& z, int e) {
  CdNumber acc = CdNumber::real(z.level(), 1.0);
  for (int i = 0; i < e; ++i) acc = CdNumber::mul(acc, z);
  return acc;
}

}  // namespace

CdNumber polynomial_eval(const Polynomial& p, const CdNumber& z) {
  if (z.level() != p.level) throw std::invalid_argument("polynomial_eval: level mismatch");
  CdNumber acc(p.level);
  for (const PolynomialTerm& term : p.terms) {
    std::vector<CdNumber> items;
    items.reserve(term.factors.size());
    for (const PolynomialFactor& f : term.factors)
      items.push_back(f.is_power ? cd_power(z, f.exponent) : f.coeff);
    acc += fold_bracketed(std::move(items), term.bracketing,
                          [](const CdNumber& a, const CdNumber& b) { return CdNumber::mul(a, b); });
  }
  return acc;
}

QlOperator polynomial_apply(const Polynomial& p, const QlOperator& t) {
  if (t.level() != p.level) throw std::invalid_argument("polynomial_apply: level mismatch");
  const QlOperator ident = QlOperator::identity(t.level(), t.dim());
  QlOperator acc = QlOperator::zero(t.level(), t.dim());
  for (const PolynomialTerm& term : p.terms) {
    std::vector<QlOperator> items;
    items.reserve(term.factors.size());
    for (const PolynomialFactor& f : term.factors) {
      if (f.is_power) {
        QlOperator pw = ident;
        for (int i = 0; i < f.exponent; ++i) pw = pw * t;
        items.push_back(pw);
      } else {
        items.push_back(left_scalar_action(t.level(), t.dim(), f.coeff));
      }
    }
    acc = acc + fold_bracketed(std::move(items), term.bracketing,
                               [](const QlOperator& a, const QlOperator& b) { return a * b; });
  }
  return acc;
}

GrowthReport growth_check(const Polynomial& p, int samples, double radius, double min_c) {
  GrowthReport rep;
  rep.degree = p.degree();
  Polynomial lead;
  lead.level = p.level;
  for (const PolynomialTerm& term : p.terms)
    if (term.degree() == rep.degree) lead.terms.push_back(term);

  Rng rng(0x54a1c9d3u);
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const double mag = radius * (1.0 + 9.0 * rng.uniform(0.0, 1.0));  // |z| in (R, 10R]
    const CdNumber z = rng.unit_cd(p.level) * mag;
    const double ratio = polynomial_eval(lead, z).norm() / std::pow(mag, rep.degree);
    worst = std::min(worst, ratio);
  }
  rep.empirical_c = worst;
  rep.pass = worst > min_c;
  return rep;
}

Mat range_basis(const Mat& projection) {
  const EigenSym eig = jacobi_eigen_sym(projection);
  std::vector<int> cols;
  for (int i = 0; i < static_cast<int>(eig.values.size()); ++i)
    if (eig.values[static_cast<std::size_t>(i)] > 0.5) cols.push_back(i);
  Mat basis(projection.rows, static_cast<int>(cols.size()));
  for (int c = 0; c < static_cast<int>(cols.size()); ++c)
    for (int r = 0; r < projection.rows; ++r)
      basis.at(r, c) = eig.vectors.at(r, cols[static_cast<std::size_t>(c)]);
  return basis;
}

Mat compress_to_range(const Mat& m, const Mat& basis) {
  return basis.transposed() * (m * basis);
}

namespace {

nlohmann::json endpoint_to_json(double value, bool inf, bool lower) {
  if (inf) return lower ? "-inf" : "inf";
  return value;
}

}  // namespace

nlohmann::json stepfunction_to_json(const StepFunction& f) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& [cell, value] : f.cells()) {
    nlohmann::json c;
    if (cell.is_points) {
      nlohmann::json pts = nlohmann::json::array();
      for (const CdNumber& p : cell.points) pts.push_back(p.coeffs());
      c["points"] = pts;
    } else {
      c["lo"] = endpoint_to_json(cell.lo, cell.lo_inf, true);
      c["hi"] = endpoint_to_json(cell.hi, cell.hi_inf, false);
    }
    c["value"] = value.coeffs();
    cells.push_back(std::move(c));
  }
  nlohmann::json out{{"v", f.value_level()}, {"cells", cells}};
  if (f.default_value()) out["default"] = f.default_value()->coeffs();
  return out;
}

StepFunction stepfunction_from_json(const nlohmann::json& j) {
  const int v = j.at("v").get<int>();
  std::vector<std::pair<BorelCell, CdNumber>> cells;
  for (const auto& c : j.at("cells")) {
    BorelCell cell;
    if (c.contains("points")) {
      std::vector<CdNumber> pts;
      for (const auto& p : c.at("points")) pts.emplace_back(v, p.get<std::vector<double>>());
      cell = BorelCell::point_set(std::move(pts));
    } else {
      const auto& lo = c.at("lo");
      const auto& hi = c.at("hi");
      if (lo.is_string()) cell.lo_inf = true;
      else cell.lo = lo.get<double>();
      if (hi.is_string()) cell.hi_inf = true;
      else cell.hi = hi.get<double>();
    }
    cells.emplace_back(cell, CdNumber(v, c.at("value").get<std::vector<double>>()));
  }
  std::optional<CdNumber> def;
  if (j.contains("default")) def = CdNumber(v, j.at("default").get<std::vector<double>>());
  return StepFunction(v, std::move(cells), std::move(def));
}

nlohmann::json polynomial_to_json(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const PolynomialTerm& t : p.terms) {
    nlohmann::json factors = nlohmann::json::array();
    for (const PolynomialFactor& f : t.factors) {
      if (f.is_power) factors.push_back(nlohmann::json{{"power", f.exponent}});
      else factors.push_back(nlohmann::json{{"coeff", f.coeff.coeffs()}});
    }
    terms.push_back(nlohmann::json{{"factors", factors}, {"bracketing", t.bracketing}});
  }
  return nlohmann::json{{"v", p.level}, {"terms", terms}};
}

Polynomial polynomial_from_json(const nlohmann::json& j) {
  Polynomial p;
  p.level = j.at("v").get<int>();
  for (const auto& t : j.at("terms")) {
    PolynomialTerm term;
    for (const auto& f : t.at("factors")) {
      if (f.contains("power")) term.factors.push_back(PolynomialFactor::power(f.at("power").get<int>()));
      else term.factors.push_back(
          PolynomialFactor::coefficient(CdNumber(p.level, f.at("coeff").get<std::vector<double>>())));
    }
    if (t.contains("bracketing")) term.bracketing = t.at("bracketing").get<std::vector<int>>();
    p.terms.push_back(std::move(term));
  }
  return p;
}

}  // namespace octspec
