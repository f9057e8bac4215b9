#include "octspec/cdnum.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace octspec {

int max_level() {
  static const int value = [] {
    if (const char* env = std::getenv("OCTSPEC_VMAX")) {
      char* end = nullptr;
      const long parsed = std::strtol(env, &end, 10);
      if (end != env && parsed >= 0 && parsed <= 10) return static_cast<int>(parsed);
    }
    return 6;
  }();
  return value;
}

int kappa(int j, int k) { return (j == 0 || k == 0 || j == k) ? 0 : 1; }

namespace {

void check_level(int v) {
  if (v < 0 || v > max_level())
    throw std::invalid_argument("cdnum: level " + std::to_string(v) + " out of range [0, " +
                                std::to_string(max_level()) + "]");
}

BasisProduct basis_mul_recursive(int j, int k, int v) {
  if (v == 0) return {+1, 0};
  const int half = 1 << (v - 1);
  const bool jh = j >= half;
  const bool kh = k >= half;
  const int jl = j & (half - 1);
  const int kl = k & (half - 1);
  if (!jh && !kh) return basis_mul_recursive(jl, kl, v - 1);
  if (!jh && kh) {
    // (x,0)(0,y) = (0, y x)
    const BasisProduct p = basis_mul_recursive(kl, jl, v - 1);
    return {p.sign, p.index + half};
  }
  if (jh && !kh) {
    // (0,x)(y,0) = (0, x conj(y))
    const BasisProduct p = basis_mul_recursive(jl, kl, v - 1);
    const int s = (kl == 0) ? +1 : -1;
    return {s * p.sign, p.index + half};
  }
  // (0,x)(0,y) = (-conj(y) x, 0)
  const BasisProduct p = basis_mul_recursive(kl, jl, v - 1);
  const int s = (kl == 0) ? +1 : -1;
  return {-s * p.sign, p.index};
}

// One signed multiplication table per level, built once.
struct BasisTable {
  std::vector<signed char> sign;
  std::vector<int> index;
  int dim = 0;

  const BasisProduct at(int j, int k) const {
    const std::size_t pos = static_cast<std::size_t>(j) * dim + k;
    return {static_cast<int>(sign[pos]), index[pos]};
  }
};

const BasisTable& table_for(int v) {
  static std::vector<BasisTable> tables;
  static std::once_flag once;
  std::call_once(once, [] {
    tables.resize(static_cast<std::size_t>(max_level()) + 1);
    for (int lv = 0; lv <= max_level(); ++lv) {
      BasisTable& t = tables[static_cast<std::size_t>(lv)];
      t.dim = dim_of_level(lv);
      t.sign.resize(static_cast<std::size_t>(t.dim) * t.dim);
      t.index.resize(static_cast<std::size_t>(t.dim) * t.dim);
      for (int j = 0; j < t.dim; ++j)
        for (int k = 0; k < t.dim; ++k) {
          const BasisProduct p = basis_mul_recursive(j, k, lv);
          const std::size_t pos = static_cast<std::size_t>(j) * t.dim + k;
          t.sign[pos] = static_cast<signed char>(p.sign);
          t.index[pos] = p.index;
        }
    }
  });
  return tables[static_cast<std::size_t>(v)];
}

}  // namespace

BasisProduct basis_mul(int j, int k, int v) {
  check_level(v);
  const int dim = dim_of_level(v);
  if (j < 0 || j >= dim || k < 0 || k >= dim)
    throw std::invalid_argument("cdnum: basis index out of range for level " + std::to_string(v));
  return table_for(v).at(j, k);
}

CdNumber::CdNumber(int level) : level_(level) {
  check_level(level);
  coeffs_.assign(static_cast<std::size_t>(dim_of_level(level)), 0.0);
}

CdNumber::CdNumber(int level, std::vector<double> coeffs) : level_(level), coeffs_(std::move(coeffs)) {
  check_level(level);
  if (static_cast<int>(coeffs_.size()) != dim_of_level(level))
    throw std::invalid_argument("cdnum: coefficient count must be 2^v");
}

CdNumber CdNumber::real(int level, double value) {
  CdNumber r(level);
  r.coeffs_[0] = value;
  return r;
}

CdNumber CdNumber::basis(int level, int index, double scale) {
  CdNumber r(level);
  if (index < 0 || index >= r.size())
    throw std::invalid_argument("cdnum: basis index out of range");
  r.coeffs_[static_cast<std::size_t>(index)] = scale;
  return r;
}

CdNumber CdNumber::conjugate() const {
  CdNumber r(*this);
  for (std::size_t j = 1; j < r.coeffs_.size(); ++j) r.coeffs_[j] = -r.coeffs_[j];
  return r;
}

double CdNumber::norm_sq() const {
  double s = 0.0;
  for (double c : coeffs_) s += c * c;
  return s;
}

double CdNumber::norm() const { return std::sqrt(norm_sq()); }

CdNumber CdNumber::inverse() const {
  const double n2 = norm_sq();
  if (n2 == 0.0) throw std::domain_error("cdnum: division by zero");
  CdNumber cand = conjugate();
  cand *= 1.0 / n2;
  if (level_ >= 4) {
    const CdNumber one = CdNumber::real(level_, 1.0);
    const double tol = 1e-12 * (1.0 + norm());
    if (distance(mul(*this, cand), one) > tol || distance(mul(cand, *this), one) > tol)
      throw std::domain_error("cdnum: element is not invertible at level >= 4");
  }
  return cand;
}

bool CdNumber::is_zero(double tol) const {
  for (double c : coeffs_)
    if (std::abs(c) > tol) return false;
  return true;
}

CdNumber& CdNumber::operator+=(const CdNumber& rhs) {
  if (rhs.level_ != level_) throw std::invalid_argument("cdnum: level mismatch");
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] += rhs.coeffs_[j];
  return *this;
}

CdNumber& CdNumber::operator-=(const CdNumber& rhs) {
  if (rhs.level_ != level_) throw std::invalid_argument("cdnum: level mismatch");
  for (std::size_t j = 0; j < coeffs_.size(); ++j) coeffs_[j] -= rhs.coeffs_[j];
  return *this;
}

CdNumber& CdNumber::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

CdNumber CdNumber::mul(const CdNumber& a, const CdNumber& b) {
  if (a.level_ != b.level_) throw std::invalid_argument("cdnum: level mismatch");
  const BasisTable& t = table_for(a.level_);
  CdNumber out(a.level_);
  const int dim = a.size();
  for (int j = 0; j < dim; ++j) {
    const double aj = a.coeffs_[static_cast<std::size_t>(j)];
    if (aj == 0.0) continue;
    for (int k = 0; k < dim; ++k) {
      const double bk = b.coeffs_[static_cast<std::size_t>(k)];
      if (bk == 0.0) continue;
      const BasisProduct p = t.at(j, k);
      out.coeffs_[static_cast<std::size_t>(p.index)] += p.sign * aj * bk;
    }
  }
  return out;
}

bool approx_equal(const CdNumber& a, const CdNumber& b, double tol) {
  return a.level() == b.level() && distance(a, b) <= tol;
}

std::string CdNumber::str() const {
  std::ostringstream os;
  bool first = true;
  for (int j = 0; j < size(); ++j) {
    const double c = coeffs_[static_cast<std::size_t>(j)];
    if (c == 0.0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    const double mag = std::abs(c);
    if (j == 0) {
      os << mag;
    } else {
      if (mag != 1.0) os << mag << "*";
      os << "i" << j;
    }
  }
  if (first) os << "0";
  return os.str();
}

namespace {

// Candidate enumeration for the zero-divisor search; rank is the scan
// position so parallel workers can agree on the lexicographically first hit.
struct TwoTerm {
  int j, k, sj;  // i_j + sj * i_k with j < k, sj in {+1,-1}
};

std::vector<TwoTerm> two_term_candidates(int dim) {
  std::vector<TwoTerm> out;
  for (int j = 1; j < dim; ++j)
    for (int k = j + 1; k < dim; ++k)
      for (int sj : {+1, -1}) out.push_back({j, k, sj});
  return out;
}

// (i_j + s i_k)(i_p + t i_q) expanded into four signed basis terms;
// returns true iff they cancel exactly.
bool product_is_zero(const BasisTable& t, const TwoTerm& a, const TwoTerm& b, int dim,
                     std::vector<int>& scratch) {
  scratch.assign(static_cast<std::size_t>(dim), 0);
  const BasisProduct p1 = t.at(a.j, b.j);
  const BasisProduct p2 = t.at(a.j, b.k);
  const BasisProduct p3 = t.at(a.k, b.j);
  const BasisProduct p4 = t.at(a.k, b.k);
  scratch[static_cast<std::size_t>(p1.index)] += p1.sign;
  scratch[static_cast<std::size_t>(p2.index)] += b.sj * p2.sign;
  scratch[static_cast<std::size_t>(p3.index)] += a.sj * p3.sign;
  scratch[static_cast<std::size_t>(p4.index)] += a.sj * b.sj * p4.sign;
  for (int c : scratch)
    if (c != 0) return false;
  return true;
}

}  // namespace

std::optional<ZeroDivisorPair> find_zero_divisor(int v) {
  check_level(v);
  if (v < 4) throw std::invalid_argument("cdnum: zero divisors require level >= 4");
  const int dim = dim_of_level(v);
  const BasisTable& t = table_for(v);
  const std::vector<TwoTerm> cands = two_term_candidates(dim);
  const std::int64_t na = static_cast<std::int64_t>(cands.size());

  std::int64_t best = -1;  // rank = ia * na + ib of the first hit
#ifdef _OPENMP
#pragma omp parallel
  {
    std::vector<int> scratch;
    std::int64_t local_best = -1;
#pragma omp for schedule(static)
    for (std::int64_t ia = 0; ia < na; ++ia) {
      for (std::int64_t ib = 0; ib < na; ++ib) {
        const std::int64_t rank = ia * na + ib;
        if (local_best >= 0 && rank >= local_best) break;
        if (product_is_zero(t, cands[static_cast<std::size_t>(ia)],
                            cands[static_cast<std::size_t>(ib)], dim, scratch)) {
          local_best = rank;
          break;
        }
      }
    }
#pragma omp critical
    {
      if (local_best >= 0 && (best < 0 || local_best < best)) best = local_best;
    }
  }
#else
  {
    std::vector<int> scratch;
    for (std::int64_t ia = 0; ia < na && best < 0; ++ia)
      for (std::int64_t ib = 0; ib < na; ++ib)
        if (product_is_zero(t, cands[static_cast<std::size_t>(ia)],
                            cands[static_cast<std::size_t>(ib)], dim, scratch)) {
          best = ia * na + ib;
          break;
        }
  }
#endif

  if (best < 0) return std::nullopt;
  const TwoTerm& a = cands[static_cast<std::size_t>(best / na)];
  const TwoTerm& b = cands[static_cast<std::size_t>(best % na)];
  CdNumber za(v), zb(v);
  za[a.j] = 1.0;
  za[a.k] = a.sj;
  zb[b.j] = 1.0;
  zb[b.k] = b.sj;
  return ZeroDivisorPair{za, zb};
}

nlohmann::json cd_to_json(const CdNumber& a) {
  return nlohmann::json{{"v", a.level()}, {"c", a.coeffs()}};
}

CdNumber cd_from_json(const nlohmann::json& j) {
  const int v = j.at("v").get<int>();
  auto c = j.at("c").get<std::vector<double>>();
  return CdNumber(v, std::move(c));
}

}  // namespace octspec
