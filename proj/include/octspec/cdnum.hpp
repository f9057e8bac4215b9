#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace octspec {

// Element count of the level-v Cayley-Dickson algebra.
inline int dim_of_level(int v) { return 1 << v; }

// Highest supported algebra level (tables are precomputed up to here).
// Defaults to 6, override with the OCTSPEC_VMAX environment variable.
int max_level();

// i_j * i_k = sign * i_index, exact in integer arithmetic.
struct BasisProduct {
  int sign;
  int index;
};

// Doubling recursion on (a,b)(c,d) = (ac - conj(d)b, da + b conj(c)) with
// i_{2^(v-1)} = (0,1).
BasisProduct basis_mul(int j, int k, int v);

// 0 iff j == 0 or k == 0 or j == k, else 1; generators satisfy
// i_j i_k = (-1)^kappa(j,k) i_k i_j.
int kappa(int j, int k);

class CdNumber {
 public:
  explicit CdNumber(int level);
  CdNumber(int level, std::vector<double> coeffs);

  static CdNumber real(int level, double value);
  static CdNumber basis(int level, int index, double scale = 1.0);

  int level() const { return level_; }
  int size() const { return static_cast<int>(coeffs_.size()); }
  double operator[](int j) const { return coeffs_[static_cast<std::size_t>(j)]; }
  double& operator[](int j) { return coeffs_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  CdNumber conjugate() const;
  double real_part() const { return coeffs_[0]; }
  double norm_sq() const;
  double norm() const;
  // conj(a)/|a|^2; for level >= 4 the candidate is verified against
  // a * cand == cand * a == 1 and rejected when the algebra says no.
  CdNumber inverse() const;

  bool is_zero(double tol = 0.0) const;

  CdNumber& operator+=(const CdNumber& rhs);
  CdNumber& operator-=(const CdNumber& rhs);
  CdNumber& operator*=(double s);

  friend CdNumber operator+(CdNumber a, const CdNumber& b) { return a += b; }
  friend CdNumber operator-(CdNumber a, const CdNumber& b) { return a -= b; }
  friend CdNumber operator*(CdNumber a, double s) { return a *= s; }
  friend CdNumber operator*(double s, CdNumber a) { return a *= s; }
  friend CdNumber operator-(CdNumber a) { return a *= -1.0; }
  friend CdNumber operator*(const CdNumber& a, const CdNumber& b) { return mul(a, b); }

  static CdNumber mul(const CdNumber& a, const CdNumber& b);

  std::string str() const;

 private:
  int level_;
  std::vector<double> coeffs_;
};

inline double distance(const CdNumber& a, const CdNumber& b) { return (a - b).norm(); }
bool approx_equal(const CdNumber& a, const CdNumber& b, double tol);

struct ZeroDivisorPair {
  CdNumber a;
  CdNumber b;
};

// Exhaustive search over two-term generator combinations i_j +/- i_k;
// exact integer cancellation test.  Requires v >= 4.
std::optional<ZeroDivisorPair> find_zero_divisor(int v);

// JSON form {"v": int, "c": [2^v reals]}.
nlohmann::json cd_to_json(const CdNumber& a);
CdNumber cd_from_json(const nlohmann::json& j);

}  // namespace octspec
