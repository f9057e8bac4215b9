#pragma once

#include <vector>

#include "json.hpp"
#include "octspec/cdnum.hpp"

namespace octspec {

// Vector in A_v^n, stored flat and entry-major: entry k occupies slots
// [k*2^v, (k+1)*2^v).  All operator matrices act on this layout.
class ModuleVector {
 public:
  ModuleVector(int level, int dim);
  ModuleVector(int level, int dim, std::vector<double> flat);

  static ModuleVector unit(int level, int dim, int entry);  // e_{entry}
  static ModuleVector from_entries(const std::vector<CdNumber>& entries);

  int level() const { return level_; }
  int dim() const { return dim_; }
  int flat_size() const { return static_cast<int>(flat_.size()); }
  const std::vector<double>& flat() const { return flat_; }
  std::vector<double>& flat() { return flat_; }

  CdNumber entry(int k) const;
  void set_entry(int k, const CdNumber& value);

  double norm_sq() const;
  double norm() const;

  ModuleVector& operator+=(const ModuleVector& rhs);
  ModuleVector& operator-=(const ModuleVector& rhs);
  ModuleVector& operator*=(double s);
  friend ModuleVector operator+(ModuleVector a, const ModuleVector& b) { return a += b; }
  friend ModuleVector operator-(ModuleVector a, const ModuleVector& b) { return a -= b; }
  friend ModuleVector operator*(ModuleVector a, double s) { return a *= s; }
  friend ModuleVector operator*(double s, ModuleVector a) { return a *= s; }

 private:
  int level_;
  int dim_;
  std::vector<double> flat_;
};

// sum_k x_k * conj(y_k); conjugate-linear in the second argument.
CdNumber inner(const ModuleVector& x, const ModuleVector& y);

// Keeps only the i_j component of every entry; sum over j restores x.
ModuleVector grade_project(const ModuleVector& x, int j);

double distance(const ModuleVector& x, const ModuleVector& y);

// JSON form {"v": int, "n": int, "entries": [[2^v reals] x n]}.
nlohmann::json vector_to_json(const ModuleVector& x);
ModuleVector vector_from_json(const nlohmann::json& j);

}  // namespace octspec
