#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "octspec/cdnum.hpp"

namespace octspec {

// Periodic Cayley-Dickson amplitude; the coefficient is folded into the
// period entries, so a tail term evaluates to amplitude(n) * n^alpha.
class PhaseSequence {
 public:
  PhaseSequence(int level, std::vector<CdNumber> period, std::string rule_id = "");

  static PhaseSequence ones(int level);
  static PhaseSequence constant(const CdNumber& u);
  static PhaseSequence generator_cycle(int level);  // 1, i_1, ..., i_{2^v-1}
  static PhaseSequence from_rule(int level, const std::string& rule_id);

  int level() const { return level_; }
  std::int64_t period_length() const { return static_cast<std::int64_t>(period_.size()); }
  const std::vector<CdNumber>& period() const { return period_; }
  const std::string& rule_id() const { return rule_id_; }
  const CdNumber& at(std::int64_t n) const;  // n is 1-based

  PhaseSequence conjugated() const;
  PhaseSequence scaled(double s) const;
  bool unit_modulus(double tol = 1e-9) const;
  double max_abs() const;

  static PhaseSequence pointwise_product(const PhaseSequence& a, const PhaseSequence& b);
  static PhaseSequence pointwise_sum(const PhaseSequence& a, const PhaseSequence& b);

 private:
  int level_;
  std::vector<CdNumber> period_;
  std::string rule_id_;
};

struct TailTerm {
  double alpha;
  PhaseSequence amplitude;
};

// Eventually-power-law sequence n -> t_n: explicit head for n <= N, then
// t_n = sum_i amplitude_i(n) * n^alpha_i.
class DiagSymbol {
 public:
  explicit DiagSymbol(int level);
  DiagSymbol(int level, std::vector<CdNumber> head, std::vector<TailTerm> tail);

  // Canonical single-term symbol c * n^alpha * phase(n), c >= 0.
  static DiagSymbol power_law(int level, double c, double alpha, const PhaseSequence& phase);
  static DiagSymbol zero(int level) { return DiagSymbol(level); }

  int level() const { return level_; }
  std::int64_t head_size() const { return static_cast<std::int64_t>(head_.size()); }
  const std::vector<CdNumber>& head() const { return head_; }
  const std::vector<TailTerm>& tail() const { return tail_; }

  CdNumber value_at(std::int64_t n) const;
  double modulus_sq_at(std::int64_t n) const;
  double modulus_at(std::int64_t n) const;

  std::int64_t period() const;  // lcm of tail periods, 1 when tail empty

  // Leading exponent of |t_n| on the residue class of n (classes indexed
  // by (n-1) mod P for a given joint period); nullopt when the class
  // vanishes identically beyond the head.
  std::optional<double> class_leading_alpha(std::int64_t joint_period, std::int64_t cls) const;
  // Modulus of the combined leading amplitude on that class.
  double class_leading_modulus(std::int64_t joint_period, std::int64_t cls) const;
  // True when the class tail is exactly one power term (no subleading).
  bool class_is_pure(std::int64_t joint_period, std::int64_t cls) const;

  bool tail_is_zero() const;
  bool real_valued(double tol = 1e-12) const;
  bool real_nonnegative(double tol = 1e-12) const;

 private:
  int level_;
  std::vector<CdNumber> head_;
  std::vector<TailTerm> tail_;
};

DiagSymbol hat_add(const DiagSymbol& t, const DiagSymbol& b);
DiagSymbol hat_mul(const DiagSymbol& t, const DiagSymbol& b);  // pointwise t_n * b_n
DiagSymbol adjoint_symbol(const DiagSymbol& t);
DiagSymbol scalar_mul_symbol(const CdNumber& b, const DiagSymbol& t);  // n -> b * t_n

// Square-summable sequence (a module element); construction rejects
// sequences whose tail exponent fails 2*beta < -1.
class PowerVector {
 public:
  explicit PowerVector(DiagSymbol seq);
  static PowerVector power_law(int level, double d, double beta, const PhaseSequence& phase);
  const DiagSymbol& seq() const { return seq_; }

 private:
  DiagSymbol seq_;
};

// Entrywise b_n * x_n.
DiagSymbol apply_symbol(const DiagSymbol& b, const DiagSymbol& x);

struct DomainVerdict {
  bool member = false;
  bool borderline = false;  // decisive exponent exactly -1 (harmonic), decided divergent
  double exponent = 0.0;    // max over contributing residue classes of 2(alpha+beta)
  std::vector<std::pair<std::int64_t, double>> partial_sums;  // (N, S_N)
  std::optional<std::pair<double, double>> limit_bracket;     // [S+lo, S+hi] for the full sum
  std::optional<std::int64_t> crossing_index;  // first N with S_N > 1000 when divergent
};

// Decides sum |x_n|^2 |t_n|^2 < infinity via the tail exponent; numeric
// partial sums at N in {1e3,1e4,1e5,1e6} (capped by evidence_horizon;
// pass 0 to skip the numeric evidence).
DomainVerdict domain_contains(const DiagSymbol& t, const PowerVector& x,
                              std::int64_t evidence_horizon = 1000000);

// x in D(T) and x in D(B), i.e. membership in D(T + B).
DomainVerdict naive_add_domain(const DiagSymbol& t, const DiagSymbol& b, const PowerVector& x,
                               std::int64_t evidence_horizon = 1000000);
// x in D(TB) = { x : x in D(B), Bx in D(T) }.
DomainVerdict naive_mul_domain(const DiagSymbol& t, const DiagSymbol& b, const PowerVector& x,
                               std::int64_t evidence_horizon = 1000000);

struct SupportDescriptor {
  enum class Kind { None, UpTo, From, All };
  Kind kind = Kind::None;
  std::int64_t boundary = 0;
};

struct BoundingProjection {
  double threshold = 0.0;
  std::int64_t period = 1;
  std::vector<std::int64_t> head_included;       // explicit head indices
  std::vector<SupportDescriptor> tail_support;   // one per residue class
  double attained_norm = 0.0;                    // max |t_n| over the support
  bool norm_ok = true;                           // attained_norm <= threshold

  bool contains(std::int64_t n, std::int64_t head_size) const;
};

struct BoundingSequence {
  std::vector<BoundingProjection> projections;
  bool monotone = true;  // supports nested along increasing thresholds (probed)
};

// _mF projects onto { e_n : |t_n| <= m }; thresholds strictly increasing.
BoundingSequence bounding_sequence(const DiagSymbol& t, const std::vector<double>& thresholds);

// Upper bound on ||Tx - T _mF x||^2 for x in D(T): the excluded-index sum.
double core_residual_sq(const DiagSymbol& t, const PowerVector& x, const BoundingProjection& f,
                        std::int64_t horizon = 100000);

struct AdjointLawsReport {
  bool involution_exact = false;    // adjoint(adjoint(T)) == T
  double law5_residual = 0.0;       // ((bI)B ^+ T)^* vs B^*(b^*I) ^+ T^*
  double law6_residual = 0.0;       // (B ^. T)^* vs T^* ^. B^*
  bool tail_exponents_match = false;
  bool pass(double tol = 1e-12) const {
    return involution_exact && tail_exponents_match && law5_residual <= tol && law6_residual <= tol;
  }
};

AdjointLawsReport adjoint_laws_check(const DiagSymbol& t, const DiagSymbol& b,
                                     const CdNumber& scalar, std::int64_t horizon = 1000);

struct NormalityReport {
  bool pointwise_normal = false;      // conj(t) t == t conj(t) on the horizon
  double max_residual = 0.0;
  bool bounding_commutes = false;     // _mF T == T _mF at symbol level
  bool product_real_nonnegative = false;  // (T ^. T^*) symbol
};

NormalityReport normality_report(const DiagSymbol& t, std::int64_t horizon = 1000);
bool is_affiliated_normal(const DiagSymbol& t);

struct SpectrumClosure {
  int level = 0;
  std::vector<CdNumber> head_points;
  std::vector<TailTerm> tail_curve;
  bool unbounded = false;                // some class has leading alpha > 0
  std::vector<CdNumber> limit_points;    // accumulation points of the tail
  bool contains(const CdNumber& z, double tol = 1e-9) const;
  std::string describe() const;
};

SpectrumClosure spectrum_closure(const DiagSymbol& t);

// For nonnegative real symbols: membership in D(T ^+ Q) implies membership
// in D(T) and D(Q) on every sampled vector (zero violations required).
bool positive_sum_check(const DiagSymbol& t, const DiagSymbol& q, int samples,
                        std::uint64_t seed = 0);

struct Example52Report {
  std::int64_t horizon = 0;
  DomainVerdict q_integral;        // divergent
  DomainVerdict sum_integral;      // sum n^{-3/2}, convergent
  DomainVerdict product_integral;  // same series through C ^. Q
  bool x_in_q = true;
  bool x_in_q_hat_b = false;
  bool x_in_c_hat_q = false;
  bool x_in_cq = true;
  bool x_in_qc_reverse = false;    // the reverse-order product is closed
  bool sum_differs = false;        // Q+B != Q ^+ B
  bool product_differs = false;    // CQ != C ^. Q
  bool matches_expected() const {
    return !x_in_q && x_in_q_hat_b && x_in_c_hat_q && !x_in_cq && sum_differs && product_differs;
  }
  std::string text() const;
  nlohmann::json to_json() const;
};

Example52Report example52_report(std::int64_t horizon = 1000000);

// JSON: {"v":v,"head":[[...]...],"tail":{"c":r,"alpha":a,"phase":id}} in the
// canonical single-term case, {"tail":{"terms":[{"alpha":a,"period":[[...]...]}]}}
// otherwise.  Phase rule ids: "ones", "gen-cycle", or "period:<k>" inline.
nlohmann::json symbol_to_json(const DiagSymbol& t);
DiagSymbol symbol_from_json(const nlohmann::json& j);
nlohmann::json verdict_to_json(const DomainVerdict& v);

}  // namespace octspec
