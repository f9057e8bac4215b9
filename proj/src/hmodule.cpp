#include "octspec/hmodule.hpp"

#include <cmath>
#include <stdexcept>

namespace octspec {

namespace {
void check_shapes(const ModuleVector& x, const ModuleVector& y) {
  if (x.level() != y.level() || x.dim() != y.dim())
    throw std::invalid_argument("hmodule: shape mismatch");
}
}  // namespace

ModuleVector::ModuleVector(int level, int dim) : level_(level), dim_(dim) {
  if (dim < 0) throw std::invalid_argument("hmodule: negative dimension");
  flat_.assign(static_cast<std::size_t>(dim) * dim_of_level(level), 0.0);
}

ModuleVector::ModuleVector(int level, int dim, std::vector<double> flat)
    : level_(level), dim_(dim), flat_(std::move(flat)) {
  if (static_cast<int>(flat_.size()) != dim * dim_of_level(level))
    throw std::invalid_argument("hmodule: flat storage must have n*2^v slots");
}

ModuleVector ModuleVector::unit(int level, int dim, int entry) {
  ModuleVector x(level, dim);
  x.set_entry(entry, CdNumber::real(level, 1.0));
  return x;
}

ModuleVector ModuleVector::from_entries(const std::vector<CdNumber>& entries) {
  if (entries.empty()) throw std::invalid_argument("hmodule: empty entry list");
  ModuleVector x(entries.front().level(), static_cast<int>(entries.size()));
  for (int k = 0; k < x.dim(); ++k) x.set_entry(k, entries[static_cast<std::size_t>(k)]);
  return x;
}

CdNumber ModuleVector::entry(int k) const {
  if (k < 0 || k >= dim_) throw std::invalid_argument("hmodule: entry index out of range");
  const int d = dim_of_level(level_);
  std::vector<double> c(flat_.begin() + static_cast<std::ptrdiff_t>(k) * d,
                        flat_.begin() + static_cast<std::ptrdiff_t>(k + 1) * d);
  return CdNumber(level_, std::move(c));
}

void ModuleVector::set_entry(int k, const CdNumber& value) {
  if (k < 0 || k >= dim_) throw std::invalid_argument("hmodule: entry index out of range");
  if (value.level() != level_) throw std::invalid_argument("hmodule: level mismatch");
  const int d = dim_of_level(level_);
  for (int j = 0; j < d; ++j) flat_[static_cast<std::size_t>(k) * d + j] = value[j];
}

double ModuleVector::norm_sq() const {
  double s = 0.0;
  for (double c : flat_) s += c * c;
  return s;
}

double ModuleVector::norm() const { return std::sqrt(norm_sq()); }

ModuleVector& ModuleVector::operator+=(const ModuleVector& rhs) {
  check_shapes(*this, rhs);
  for (std::size_t i = 0; i < flat_.size(); ++i) flat_[i] += rhs.flat_[i];
  return *this;
}

ModuleVector& ModuleVector::operator-=(const ModuleVector& rhs) {
  check_shapes(*this, rhs);
  for (std::size_t i = 0; i < flat_.size(); ++i) flat_[i] -= rhs.flat_[i];
  return *this;
}

ModuleVector& ModuleVector::operator*=(double s) {
  for (double& c : flat_) c *= s;
  return *this;
}

CdNumber inner(const ModuleVector& x, const ModuleVector& y) {
  check_shapes(x, y);
  CdNumber acc(x.level());
  for (int k = 0; k < x.dim(); ++k) acc += CdNumber::mul(x.entry(k), y.entry(k).conjugate());
  return acc;
}

ModuleVector grade_project(const ModuleVector& x, int j) {
  const int d = dim_of_level(x.level());
  if (j < 0 || j >= d) throw std::invalid_argument("hmodule: grade index out of range");
  ModuleVector out(x.level(), x.dim());
  for (int k = 0; k < x.dim(); ++k)
    out.flat()[static_cast<std::size_t>(k) * d + j] = x.flat()[static_cast<std::size_t>(k) * d + j];
  return out;
}

double distance(const ModuleVector& x, const ModuleVector& y) {
  check_shapes(x, y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.flat().size(); ++i) {
    const double di = x.flat()[i] - y.flat()[i];
    s += di * di;
  }
  return std::sqrt(s);
}

nlohmann::json vector_to_json(const ModuleVector& x) {
  nlohmann::json entries = nlohmann::json::array();
  for (int k = 0; k < x.dim(); ++k) entries.push_back(x.entry(k).coeffs());
  return nlohmann::json{{"v", x.level()}, {"n", x.dim()}, {"entries", entries}};
}

ModuleVector vector_from_json(const nlohmann::json& j) {
  const int v = j.at("v").get<int>();
  const int n = j.at("n").get<int>();
  const auto& entries = j.at("entries");
  if (static_cast<int>(entries.size()) != n)
    throw std::invalid_argument("hmodule: entry count does not match n");
  ModuleVector x(v, n);
  for (int k = 0; k < n; ++k) {
    auto c = entries.at(static_cast<std::size_t>(k)).get<std::vector<double>>();
    x.set_entry(k, CdNumber(v, std::move(c)));
  }
  return x;
}

}  // namespace octspec
