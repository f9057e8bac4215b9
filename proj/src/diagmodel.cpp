#include "octspec/diagmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "octspec/kernels.hpp"
#include "octspec/rng.hpp"

namespace octspec {

namespace {

constexpr double kExponentEps = 1e-12;
constexpr std::int64_t kPeriodCap = 4096;
constexpr std::int64_t kScanCap = 2000000;
constexpr double kDivergenceBound = 1000.0;

double neg_inf() { return -std::numeric_limits<double>::infinity(); }

}  // namespace

PhaseSequence::PhaseSequence(int level, std::vector<CdNumber> period, std::string rule_id)
    : level_(level), period_(std::move(period)), rule_id_(std::move(rule_id)) {
  if (period_.empty()) throw std::invalid_argument("PhaseSequence: empty period");
  for (const CdNumber& c : period_)
    if (c.level() != level_) throw std::invalid_argument("PhaseSequence: level mismatch");
}

PhaseSequence PhaseSequence::ones(int level) {
  return PhaseSequence(level, {CdNumber::real(level, 1.0)}, "ones");
}

PhaseSequence PhaseSequence::constant(const CdNumber& u) {
  return PhaseSequence(u.level(), {u});
}

PhaseSequence PhaseSequence::generator_cycle(int level) {
  std::vector<CdNumber> period;
  for (int j = 0; j < dim_of_level(level); ++j) period.push_back(CdNumber::basis(level, j));
  return PhaseSequence(level, std::move(period), "gen-cycle");
}

PhaseSequence PhaseSequence::from_rule(int level, const std::string& rule_id) {
  if (rule_id == "ones") return ones(level);
  if (rule_id == "gen-cycle") return generator_cycle(level);
  throw std::invalid_argument("PhaseSequence: unknown rule id '" + rule_id + "'");
}

const CdNumber& PhaseSequence::at(std::int64_t n) const {
  return period_[static_cast<std::size_t>((n - 1) % period_length())];
}

PhaseSequence PhaseSequence::conjugated() const {
  std::vector<CdNumber> p;
  p.reserve(period_.size());
  for (const CdNumber& c : period_) p.push_back(c.conjugate());
  return PhaseSequence(level_, std::move(p));
}

PhaseSequence PhaseSequence::scaled(double s) const {
  std::vector<CdNumber> p;
  p.reserve(period_.size());
  for (const CdNumber& c : period_) p.push_back(c * s);
  return PhaseSequence(level_, std::move(p));
}

bool PhaseSequence::unit_modulus(double tol) const {
  for (const CdNumber& c : period_)
    if (std::abs(c.norm() - 1.0) > tol) return false;
  return true;
}

double PhaseSequence::max_abs() const {
  double m = 0.0;
  for (const CdNumber& c : period_) m = std::max(m, c.norm());
  return m;
}

namespace {

std::int64_t merged_period(std::int64_t a, std::int64_t b) {
  const std::int64_t p = std::lcm(a, b);
  if (p > kPeriodCap) throw std::domain_error("diagmodel: phase family closure violation (period)");
  return p;
}

}  // namespace

PhaseSequence PhaseSequence::pointwise_product(const PhaseSequence& a, const PhaseSequence& b) {
  if (a.level() != b.level()) throw std::invalid_argument("PhaseSequence: level mismatch");
  const std::int64_t p = merged_period(a.period_length(), b.period_length());
  std::vector<CdNumber> period;
  period.reserve(static_cast<std::size_t>(p));
  for (std::int64_t n = 1; n <= p; ++n) period.push_back(CdNumber::mul(a.at(n), b.at(n)));
  return PhaseSequence(a.level(), std::move(period));
}

PhaseSequence PhaseSequence::pointwise_sum(const PhaseSequence& a, const PhaseSequence& b) {
  if (a.level() != b.level()) throw std::invalid_argument("PhaseSequence: level mismatch");
  const std::int64_t p = merged_period(a.period_length(), b.period_length());
  std::vector<CdNumber> period;
  period.reserve(static_cast<std::size_t>(p));
  for (std::int64_t n = 1; n <= p; ++n) period.push_back(a.at(n) + b.at(n));
  return PhaseSequence(a.level(), std::move(period));
}

DiagSymbol::DiagSymbol(int level) : level_(level) {}

DiagSymbol::DiagSymbol(int level, std::vector<CdNumber> head, std::vector<TailTerm> tail)
    : level_(level), head_(std::move(head)), tail_(std::move(tail)) {
  for (const CdNumber& c : head_)
    if (c.level() != level_) throw std::invalid_argument("DiagSymbol: head level mismatch");
  for (const TailTerm& t : tail_)
    if (t.amplitude.level() != level_) throw std::invalid_argument("DiagSymbol: tail level mismatch");
}

DiagSymbol DiagSymbol::power_law(int level, double c, double alpha, const PhaseSequence& phase) {
  if (c < 0.0) throw std::invalid_argument("DiagSymbol: canonical coefficient must be >= 0");
  if (c == 0.0) return DiagSymbol(level);
  return DiagSymbol(level, {}, {TailTerm{alpha, phase.scaled(c)}});
}

CdNumber DiagSymbol::value_at(std::int64_t n) const {
  if (n < 1) throw std::invalid_argument("DiagSymbol: index must be >= 1");
  if (n <= head_size()) return head_[static_cast<std::size_t>(n - 1)];
  CdNumber acc(level_);
  for (const TailTerm& t : tail_)
    acc += t.amplitude.at(n) * std::pow(static_cast<double>(n), t.alpha);
  return acc;
}

double DiagSymbol::modulus_sq_at(std::int64_t n) const { return value_at(n).norm_sq(); }

double DiagSymbol::modulus_at(std::int64_t n) const { return std::sqrt(modulus_sq_at(n)); }

std::int64_t DiagSymbol::period() const {
  std::int64_t p = 1;
  for (const TailTerm& t : tail_) p = merged_period(p, t.amplitude.period_length());
  return p;
}

namespace {

double amplitude_scale(const std::vector<TailTerm>& tail) {
  double s = 1.0;
  for (const TailTerm& t : tail) s = std::max(s, t.amplitude.max_abs());
  return s;
}

// Distinct alphas (descending) with the combined amplitude on one class.
std::vector<std::pair<double, CdNumber>> class_groups(const DiagSymbol& sym, std::int64_t period,
                                                      std::int64_t cls) {
  if (period % sym.period() != 0)
    throw std::invalid_argument("DiagSymbol: joint period must be a multiple of the own period");
  std::map<double, CdNumber, std::greater<double>> groups;
  const std::int64_t n = cls + 1;
  for (const TailTerm& t : sym.tail()) {
    auto it = groups.find(t.alpha);
    if (it == groups.end()) groups.emplace(t.alpha, t.amplitude.at(n));
    else it->second += t.amplitude.at(n);
  }
  return {groups.begin(), groups.end()};
}

}  // namespace

std::optional<double> DiagSymbol::class_leading_alpha(std::int64_t joint_period,
                                                      std::int64_t cls) const {
  const double zero_tol = 1e-14 * amplitude_scale(tail_);
  for (const auto& [alpha, amp] : class_groups(*this, joint_period, cls))
    if (amp.norm() > zero_tol) return alpha;
  return std::nullopt;
}

double DiagSymbol::class_leading_modulus(std::int64_t joint_period, std::int64_t cls) const {
  const double zero_tol = 1e-14 * amplitude_scale(tail_);
  for (const auto& [alpha, amp] : class_groups(*this, joint_period, cls))
    if (amp.norm() > zero_tol) return amp.norm();
  return 0.0;
}

bool DiagSymbol::class_is_pure(std::int64_t joint_period, std::int64_t cls) const {
  const double zero_tol = 1e-14 * amplitude_scale(tail_);
  int nonzero = 0;
  for (const auto& [alpha, amp] : class_groups(*this, joint_period, cls))
    if (amp.norm() > zero_tol) ++nonzero;
  return nonzero <= 1;
}

bool DiagSymbol::tail_is_zero() const {
  const std::int64_t p = period();
  for (std::int64_t cls = 0; cls < p; ++cls)
    if (class_leading_alpha(p, cls)) return false;
  return true;
}

bool DiagSymbol::real_valued(double tol) const {
  auto real = [tol](const CdNumber& c) {
    for (int j = 1; j < c.size(); ++j)
      if (std::abs(c[j]) > tol) return false;
    return true;
  };
  for (const CdNumber& c : head_)
    if (!real(c)) return false;
  for (const TailTerm& t : tail_)
    for (const CdNumber& c : t.amplitude.period())
      if (!real(c)) return false;
  return true;
}

bool DiagSymbol::real_nonnegative(double tol) const {
  if (!real_valued(tol)) return false;
  for (const CdNumber& c : head_)
    if (c[0] < -tol) return false;
  // Nonnegativity of multi-term tails is checked on one merged period of
  // evaluated values past the head.
  const std::int64_t p = period();
  for (std::int64_t k = 0; k < p; ++k) {
    const std::int64_t n = head_size() + 1 + k;
    if (value_at(n)[0] < -tol * std::max(1.0, modulus_at(n))) return false;
  }
  return true;
}

namespace {

// Merge terms with equal (alpha, period length) pointwise and drop exact
// all-zero amplitudes.
std::vector<TailTerm> normalize_terms(std::vector<TailTerm> raw) {
  std::vector<TailTerm> merged;
  for (TailTerm& add : raw) {
    bool found = false;
    for (TailTerm& have : merged) {
      if (have.alpha == add.alpha &&
          have.amplitude.period_length() == add.amplitude.period_length()) {
        have.amplitude = PhaseSequence::pointwise_sum(have.amplitude, add.amplitude);
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(std::move(add));
  }
  std::vector<TailTerm> pruned;
  for (const TailTerm& term : merged) {
    bool zero = true;
    for (const CdNumber& c : term.amplitude.period())
      if (!c.is_zero(1e-300)) zero = false;
    if (!zero) pruned.push_back(term);
  }
  return pruned;
}

}  // namespace

DiagSymbol hat_add(const DiagSymbol& t, const DiagSymbol& b) {
  if (t.level() != b.level()) throw std::invalid_argument("hat_add: level mismatch");
  const std::int64_t head_n = std::max(t.head_size(), b.head_size());
  std::vector<CdNumber> head;
  head.reserve(static_cast<std::size_t>(head_n));
  for (std::int64_t n = 1; n <= head_n; ++n) head.push_back(t.value_at(n) + b.value_at(n));

  std::vector<TailTerm> terms = t.tail();
  terms.insert(terms.end(), b.tail().begin(), b.tail().end());
  return DiagSymbol(t.level(), std::move(head), normalize_terms(std::move(terms)));
}

DiagSymbol hat_mul(const DiagSymbol& t, const DiagSymbol& b) {
  if (t.level() != b.level()) throw std::invalid_argument("hat_mul: level mismatch");
  const std::int64_t head_n = std::max(t.head_size(), b.head_size());
  std::vector<CdNumber> head;
  head.reserve(static_cast<std::size_t>(head_n));
  for (std::int64_t n = 1; n <= head_n; ++n)
    head.push_back(CdNumber::mul(t.value_at(n), b.value_at(n)));

  std::vector<TailTerm> terms;
  for (const TailTerm& lt : t.tail())
    for (const TailTerm& rt : b.tail())
      terms.push_back(TailTerm{lt.alpha + rt.alpha,
                               PhaseSequence::pointwise_product(lt.amplitude, rt.amplitude)});
  return DiagSymbol(t.level(), std::move(head), normalize_terms(std::move(terms)));
}

DiagSymbol adjoint_symbol(const DiagSymbol& t) {
  std::vector<CdNumber> head;
  head.reserve(static_cast<std::size_t>(t.head_size()));
  for (const CdNumber& c : t.head()) head.push_back(c.conjugate());
  std::vector<TailTerm> tail;
  for (const TailTerm& term : t.tail())
    tail.push_back(TailTerm{term.alpha, term.amplitude.conjugated()});
  return DiagSymbol(t.level(), std::move(head), std::move(tail));
}

DiagSymbol scalar_mul_symbol(const CdNumber& b, const DiagSymbol& t) {
  if (b.level() != t.level()) throw std::invalid_argument("scalar_mul_symbol: level mismatch");
  std::vector<CdNumber> head;
  for (const CdNumber& c : t.head()) head.push_back(CdNumber::mul(b, c));
  std::vector<TailTerm> tail;
  for (const TailTerm& term : t.tail()) {
    std::vector<CdNumber> period;
    for (const CdNumber& c : term.amplitude.period()) period.push_back(CdNumber::mul(b, c));
    tail.push_back(TailTerm{term.alpha, PhaseSequence(t.level(), std::move(period))});
  }
  return DiagSymbol(t.level(), std::move(head), std::move(tail));
}

namespace {

bool square_summable(const DiagSymbol& seq) {
  const std::int64_t p = seq.period();
  for (std::int64_t cls = 0; cls < p; ++cls) {
    const auto beta = seq.class_leading_alpha(p, cls);
    if (beta && 2.0 * (*beta) >= -1.0 - kExponentEps) return false;
  }
  return true;
}

}  // namespace

PowerVector::PowerVector(DiagSymbol seq) : seq_(std::move(seq)) {
  if (!square_summable(seq_))
    throw std::domain_error("PowerVector: tail exponent fails square-summability (2*beta < -1)");
}

PowerVector PowerVector::power_law(int level, double d, double beta, const PhaseSequence& phase) {
  return PowerVector(DiagSymbol::power_law(level, d, beta, phase));
}

DiagSymbol apply_symbol(const DiagSymbol& b, const DiagSymbol& x) { return hat_mul(b, x); }

namespace {

std::vector<std::int64_t> evidence_marks(std::int64_t horizon) {
  std::vector<std::int64_t> marks;
  for (std::int64_t m : {1000LL, 10000LL, 100000LL, 1000000LL})
    if (m <= horizon) marks.push_back(m);
  if (marks.empty() || marks.back() != horizon) marks.push_back(horizon);
  return marks;
}

}  // namespace

DomainVerdict domain_contains(const DiagSymbol& t, const PowerVector& xv,
                              std::int64_t evidence_horizon) {
  const DiagSymbol& x = xv.seq();
  if (t.level() != x.level()) throw std::invalid_argument("domain_contains: level mismatch");
  const std::int64_t p = merged_period(t.period(), x.period());

  DomainVerdict verdict;
  verdict.exponent = neg_inf();
  verdict.member = true;
  bool all_pure = true;
  std::vector<std::int64_t> contributing;
  for (std::int64_t cls = 0; cls < p; ++cls) {
    const auto at = t.class_leading_alpha(p, cls);
    const auto ax = x.class_leading_alpha(p, cls);
    if (!at || !ax) continue;
    contributing.push_back(cls);
    const double e = 2.0 * (*at + *ax);
    verdict.exponent = std::max(verdict.exponent, e);
    if (std::abs(e + 1.0) <= kExponentEps) verdict.borderline = true;
    if (e >= -1.0 - kExponentEps) verdict.member = false;
    if (!t.class_is_pure(p, cls) || !x.class_is_pure(p, cls)) all_pure = false;
  }

  if (evidence_horizon <= 0) return verdict;

  const auto summand = [&t, &x](std::int64_t i) {
    const std::int64_t n = i + 1;
    return t.modulus_sq_at(n) * x.modulus_sq_at(n);
  };

  const std::vector<std::int64_t> marks = evidence_marks(evidence_horizon);
  double running = 0.0;
  std::int64_t done = 0;
  for (std::int64_t mark : marks) {
    running += kernels::blocked_sum_indexed(mark - done,
                                            [&](std::int64_t i) { return summand(i + done); });
    done = mark;
    verdict.partial_sums.emplace_back(mark, running);
  }

  const std::int64_t heads = std::max(t.head_size(), x.head_size());
  if (verdict.member && all_pure && !contributing.empty() && done > heads) {
    // Integral bracket on the remaining tail, per residue class.
    double lower = 0.0;
    double upper = 0.0;
    for (std::int64_t cls : contributing) {
      const double e = 2.0 * (*t.class_leading_alpha(p, cls) + *x.class_leading_alpha(p, cls));
      std::int64_t n1 = done + 1;
      while ((n1 - 1) % p != cls) ++n1;
      const double g1 = summand(n1 - 1);
      const double k = g1 / std::pow(static_cast<double>(n1), e);
      const double integral =
          k * std::pow(static_cast<double>(n1), e + 1.0) / (-(e + 1.0)) / static_cast<double>(p);
      lower += integral;
      upper += g1 + integral;
    }
    const double s = verdict.partial_sums.back().second;
    verdict.limit_bracket = std::make_pair(s + lower, s + upper);
  }

  if (!verdict.member) {
    double s = 0.0;
    for (std::int64_t n = 1; n <= kScanCap; ++n) {
      s += summand(n - 1);
      if (s > kDivergenceBound) {
        verdict.crossing_index = n;
        break;
      }
    }
  }
  return verdict;
}

DomainVerdict naive_add_domain(const DiagSymbol& t, const DiagSymbol& b, const PowerVector& x,
                               std::int64_t evidence_horizon) {
  const DomainVerdict vt = domain_contains(t, x, evidence_horizon);
  const DomainVerdict vb = domain_contains(b, x, evidence_horizon);
  DomainVerdict out;
  out.member = vt.member && vb.member;
  out.borderline = vt.borderline || vb.borderline;
  out.exponent = std::max(vt.exponent, vb.exponent);
  for (std::size_t i = 0; i < vt.partial_sums.size() && i < vb.partial_sums.size(); ++i)
    out.partial_sums.emplace_back(vt.partial_sums[i].first,
                                  vt.partial_sums[i].second + vb.partial_sums[i].second);
  if (vt.crossing_index) out.crossing_index = vt.crossing_index;
  else if (vb.crossing_index) out.crossing_index = vb.crossing_index;
  return out;
}

DomainVerdict naive_mul_domain(const DiagSymbol& t, const DiagSymbol& b, const PowerVector& x,
                               std::int64_t evidence_horizon) {
  const DomainVerdict vb = domain_contains(b, x, evidence_horizon);
  if (!vb.member) {
    DomainVerdict out = vb;
    out.member = false;
    return out;
  }
  const PowerVector bx(apply_symbol(b, x.seq()));
  return domain_contains(t, bx, evidence_horizon);
}

bool BoundingProjection::contains(std::int64_t n, std::int64_t head_size) const {
  if (n <= head_size)
    return std::binary_search(head_included.begin(), head_included.end(), n);
  const SupportDescriptor& d = tail_support[static_cast<std::size_t>((n - 1) % period)];
  switch (d.kind) {
    case SupportDescriptor::Kind::None: return false;
    case SupportDescriptor::Kind::All: return true;
    case SupportDescriptor::Kind::UpTo: return n <= d.boundary;
    case SupportDescriptor::Kind::From: return n >= d.boundary;
  }
  return false;
}

namespace {

// Support of { n in class : |t_n| <= m } for one residue class, together
// with the attained maximum modulus over that support.
std::pair<SupportDescriptor, double> class_support(const DiagSymbol& t, std::int64_t p,
                                                   std::int64_t cls, std::int64_t head_n,
                                                   double threshold) {
  SupportDescriptor d;
  const auto lead = t.class_leading_alpha(p, cls);
  auto first_member = [&](std::int64_t from) {
    std::int64_t n = std::max<std::int64_t>(from, head_n + 1);
    while ((n - 1) % p != cls) ++n;
    return n;
  };
  const std::int64_t start = first_member(1);

  if (!lead) {  // class vanishes beyond the head
    d.kind = SupportDescriptor::Kind::All;
    return {d, 0.0};
  }
  const double alpha = *lead;
  const double k = t.class_leading_modulus(p, cls);
  const bool pure = t.class_is_pure(p, cls);

  if (pure) {
    if (alpha > 0.0) {
      // |t_n| = k n^alpha increasing; cutoff by inverting the power law.
      std::int64_t cut =
          static_cast<std::int64_t>(std::floor(std::pow(threshold / k, 1.0 / alpha) + 1e-9));
      if (cut < 0) cut = 0;
      while (k * std::pow(static_cast<double>(cut + 1), alpha) <= threshold * (1.0 + 1e-12)) ++cut;
      while (cut >= 1 && k * std::pow(static_cast<double>(cut), alpha) > threshold * (1.0 + 1e-12))
        --cut;
      if (cut < start) {
        d.kind = SupportDescriptor::Kind::None;
        return {d, 0.0};
      }
      d.kind = SupportDescriptor::Kind::UpTo;
      d.boundary = cut;
      std::int64_t last = cut;
      while ((last - 1) % p != cls) --last;
      const double attained =
          last >= start ? k * std::pow(static_cast<double>(last), alpha) : 0.0;
      return {d, attained};
    }
    if (alpha == 0.0) {
      if (k <= threshold * (1.0 + 1e-12)) {
        d.kind = SupportDescriptor::Kind::All;
        return {d, k};
      }
      d.kind = SupportDescriptor::Kind::None;
      return {d, 0.0};
    }
    // alpha < 0: decreasing, support is a suffix.
    double from = std::pow(k / threshold, -1.0 / alpha);
    std::int64_t n0 = std::max<std::int64_t>(start, static_cast<std::int64_t>(std::ceil(from - 1e-9)));
    while ((n0 - 1) % p != cls) ++n0;
    while (n0 - p >= start &&
           k * std::pow(static_cast<double>(n0 - p), alpha) <= threshold * (1.0 + 1e-12))
      n0 -= p;
    d.kind = (n0 <= start) ? SupportDescriptor::Kind::All : SupportDescriptor::Kind::From;
    d.boundary = n0;
    const std::int64_t witness = std::max(start, n0);
    return {d, k * std::pow(static_cast<double>(witness), alpha)};
  }

  // Mixed tail: bounded explicit scan for the contiguous prefix/suffix.
  if (alpha > 0.0) {
    const double bound = std::pow(2.0 * threshold / k, 1.0 / alpha);
    if (bound > static_cast<double>(kScanCap))
      throw std::runtime_error("bounding_sequence: support scan exceeds desk scale");
    std::int64_t last_ok = 0;
    double attained = 0.0;
    for (std::int64_t n = start; n <= static_cast<std::int64_t>(bound) + p; n += p) {
      const double mod = t.modulus_at(n);
      if (mod <= threshold * (1.0 + 1e-12)) {
        last_ok = n;
        attained = std::max(attained, mod);
      } else {
        break;
      }
    }
    if (last_ok == 0) {
      d.kind = SupportDescriptor::Kind::None;
      return {d, 0.0};
    }
    d.kind = SupportDescriptor::Kind::UpTo;
    d.boundary = last_ok;
    return {d, attained};
  }
  // alpha <= 0 mixed: scan for the last violation within the desk window.
  std::int64_t last_violation = 0;
  double attained = 0.0;
  const std::int64_t mono = std::min<std::int64_t>(kScanCap, 100000);
  for (std::int64_t n = start; n <= mono; n += p) {
    const double mod = t.modulus_at(n);
    if (mod > threshold * (1.0 + 1e-12)) last_violation = n;
  }
  if (alpha == 0.0 && k > threshold * (1.0 + 1e-12))
    throw std::runtime_error("bounding_sequence: mixed bounded class exceeds threshold at infinity");
  if (last_violation == 0) {
    d.kind = SupportDescriptor::Kind::All;
    for (std::int64_t n = start; n <= std::min(mono, start + 64 * p); n += p)
      attained = std::max(attained, t.modulus_at(n));
    attained = std::max(attained, alpha == 0.0 ? k : 0.0);
    return {d, attained};
  }
  d.kind = SupportDescriptor::Kind::From;
  d.boundary = last_violation + p;
  for (std::int64_t n = d.boundary; n <= std::min(mono + p, d.boundary + 64 * p); n += p)
    attained = std::max(attained, t.modulus_at(n));
  return {d, attained};
}

}  // namespace

BoundingSequence bounding_sequence(const DiagSymbol& t, const std::vector<double>& thresholds) {
  for (std::size_t i = 1; i < thresholds.size(); ++i)
    if (thresholds[i] <= thresholds[i - 1])
      throw std::invalid_argument("bounding_sequence: thresholds must be strictly increasing");

  BoundingSequence seq;
  const std::int64_t p = t.period();
  for (double m : thresholds) {
    BoundingProjection proj;
    proj.threshold = m;
    proj.period = p;
    double attained = 0.0;
    for (std::int64_t n = 1; n <= t.head_size(); ++n) {
      const double mod = t.modulus_at(n);
      if (mod <= m * (1.0 + 1e-12)) {
        proj.head_included.push_back(n);
        attained = std::max(attained, mod);
      }
    }
    for (std::int64_t cls = 0; cls < p; ++cls) {
      auto [desc, cls_attained] = class_support(t, p, cls, t.head_size(), m);
      proj.tail_support.push_back(desc);
      attained = std::max(attained, cls_attained);
    }
    proj.attained_norm = attained;
    proj.norm_ok = attained <= m * (1.0 + 1e-9) + 1e-12;
    seq.projections.push_back(std::move(proj));
  }

  for (std::size_t i = 0; i + 1 < seq.projections.size() && seq.monotone; ++i)
    for (std::int64_t n = 1; n <= 256; ++n)
      if (seq.projections[i].contains(n, t.head_size()) &&
          !seq.projections[i + 1].contains(n, t.head_size())) {
        seq.monotone = false;
        break;
      }
  return seq;
}

double core_residual_sq(const DiagSymbol& t, const PowerVector& xv, const BoundingProjection& f,
                        std::int64_t horizon) {
  const DiagSymbol& x = xv.seq();
  double sum = 0.0;
  for (std::int64_t n = 1; n <= horizon; ++n)
    if (!f.contains(n, t.head_size())) sum += t.modulus_sq_at(n) * x.modulus_sq_at(n);

  // Analytic bound for excluded class tails past the horizon.
  const std::int64_t p = merged_period(merged_period(t.period(), x.period()), f.period);
  for (std::int64_t cls = 0; cls < p; ++cls) {
    const auto at = t.class_leading_alpha(p, cls);
    const auto ax = x.class_leading_alpha(p, cls);
    if (!at || !ax) continue;
    const double e = 2.0 * (*at + *ax);
    if (e >= -1.0) continue;  // not in the domain; residual bound meaningless
    std::int64_t n1 = horizon + 1;
    while ((n1 - 1) % p != cls) ++n1;
    if (f.contains(n1, t.head_size())) {
      const SupportDescriptor& d = f.tail_support[static_cast<std::size_t>((n1 - 1) % f.period)];
      if (d.kind == SupportDescriptor::Kind::All || d.kind == SupportDescriptor::Kind::From)
        continue;  // included from here on
      n1 = std::max(n1, d.boundary + 1);
      while ((n1 - 1) % p != cls) ++n1;
    }
    const double g1 = t.modulus_sq_at(n1) * x.modulus_sq_at(n1);
    const double k = g1 / std::pow(static_cast<double>(n1), e);
    // Tight integral bound for pure power classes, 4x margin otherwise.
    const double margin =
        (t.class_is_pure(p, cls) && x.class_is_pure(p, cls)) ? 1.0 : 4.0;
    sum += margin * (g1 + k * std::pow(static_cast<double>(n1), e + 1.0) / (-(e + 1.0)) /
                              static_cast<double>(p));
  }
  return sum;
}

AdjointLawsReport adjoint_laws_check(const DiagSymbol& t, const DiagSymbol& b,
                                     const CdNumber& scalar, std::int64_t horizon) {
  AdjointLawsReport rep;
  const DiagSymbol t_adj = adjoint_symbol(t);
  const DiagSymbol b_adj = adjoint_symbol(b);

  // Involution: conjugating twice restores the symbol exactly.
  const DiagSymbol twice = adjoint_symbol(t_adj);
  rep.involution_exact = true;
  for (std::int64_t n = 1; n <= horizon; ++n)
    if (distance(twice.value_at(n), t.value_at(n)) != 0.0) rep.involution_exact = false;

  // (5): ((bI)B ^+ T)^* equals B^*(b^*I) ^+ T^* pointwise.
  const DiagSymbol lhs5 = adjoint_symbol(hat_add(scalar_mul_symbol(scalar, b), t));
  // B^*(b^*I) maps x to B^*(conj(b) x); its diagonal symbol multiplies by
  // conj(b) on the right of the conjugated entry.
  DiagSymbol rhs5_first = hat_mul(b_adj, DiagSymbol::power_law(t.level(), 1.0, 0.0,
                                                               PhaseSequence::constant(scalar.conjugate())));
  const DiagSymbol rhs5 = hat_add(rhs5_first, t_adj);
  for (std::int64_t n = 1; n <= horizon; ++n)
    rep.law5_residual = std::max(rep.law5_residual, distance(lhs5.value_at(n), rhs5.value_at(n)));

  // (6): (B ^. T)^* = T^* ^. B^*.
  const DiagSymbol lhs6 = adjoint_symbol(hat_mul(b, t));
  const DiagSymbol rhs6 = hat_mul(t_adj, b_adj);
  for (std::int64_t n = 1; n <= horizon; ++n)
    rep.law6_residual = std::max(rep.law6_residual, distance(lhs6.value_at(n), rhs6.value_at(n)));

  auto alpha_set = [](const DiagSymbol& s) {
    std::vector<double> alphas;
    for (const TailTerm& term : s.tail()) alphas.push_back(term.alpha);
    std::sort(alphas.begin(), alphas.end());
    alphas.erase(std::unique(alphas.begin(), alphas.end()), alphas.end());
    return alphas;
  };
  rep.tail_exponents_match = alpha_set(lhs5) == alpha_set(rhs5) && alpha_set(lhs6) == alpha_set(rhs6);
  return rep;
}

NormalityReport normality_report(const DiagSymbol& t, std::int64_t horizon) {
  NormalityReport rep;
  const DiagSymbol t_adj = adjoint_symbol(t);
  const DiagSymbol left = hat_mul(t_adj, t);
  const DiagSymbol right = hat_mul(t, t_adj);
  rep.pointwise_normal = true;
  rep.product_real_nonnegative = true;
  for (std::int64_t n = 1; n <= horizon; ++n) {
    const CdNumber l = left.value_at(n);
    const CdNumber r = right.value_at(n);
    rep.max_residual = std::max(rep.max_residual, distance(l, r));
    if (distance(l, r) > 1e-10 * (1.0 + l.norm())) rep.pointwise_normal = false;
    if (l[0] < -1e-12 * (1.0 + l.norm())) rep.product_real_nonnegative = false;
    for (int j = 1; j < l.size(); ++j)
      if (std::abs(l[j]) > 1e-10 * (1.0 + l.norm())) rep.product_real_nonnegative = false;
  }
  // The bounding projections are diagonal indicator symbols; they commute
  // with T entry by entry because the indicator is real scalar.
  rep.bounding_commutes = true;
  return rep;
}

bool is_affiliated_normal(const DiagSymbol& t) {
  return normality_report(t).pointwise_normal;
}

bool SpectrumClosure::contains(const CdNumber& z, double tol) const {
  for (const CdNumber& h : head_points)
    if (distance(h, z) <= tol) return true;
  for (const CdNumber& l : limit_points)
    if (distance(l, z) <= tol) return true;

  DiagSymbol curve(level, {}, tail_curve);
  const std::int64_t p = curve.period();
  for (std::int64_t n = 1; n <= 64 * p; ++n)
    if (distance(curve.value_at(n), z) <= tol) return true;
  const double zmod = z.norm();
  for (std::int64_t cls = 0; cls < p; ++cls) {
    const auto lead = curve.class_leading_alpha(p, cls);
    if (!lead || *lead == 0.0) continue;
    const double k = curve.class_leading_modulus(p, cls);
    if (k <= 0.0 || zmod <= 0.0) continue;
    const double guess = std::pow(zmod / k, 1.0 / *lead);
    if (!std::isfinite(guess) || guess > 1e15) continue;
    const std::int64_t center = static_cast<std::int64_t>(std::llround(guess));
    for (std::int64_t n = std::max<std::int64_t>(1, center - 4 * p); n <= center + 4 * p; ++n)
      if ((n - 1) % p == cls && distance(curve.value_at(n), z) <= tol) return true;
  }
  return false;
}

std::string SpectrumClosure::describe() const {
  std::ostringstream os;
  os << "spectrum closure: " << head_points.size() << " head point(s)";
  for (const TailTerm& t : tail_curve)
    os << "; tail curve amplitude period " << t.amplitude.period_length() << " with n^" << t.alpha;
  if (!limit_points.empty()) {
    os << "; limit points:";
    for (const CdNumber& l : limit_points) os << " " << l.str();
  }
  os << (unbounded ? "; unbounded spectrum" : "; bounded spectrum");
  return os.str();
}

SpectrumClosure spectrum_closure(const DiagSymbol& t) {
  SpectrumClosure out;
  out.level = t.level();
  for (const CdNumber& h : t.head()) {
    bool seen = false;
    for (const CdNumber& have : out.head_points)
      if (distance(have, h) <= 1e-12) seen = true;
    if (!seen) out.head_points.push_back(h);
  }
  out.tail_curve = t.tail();
  const std::int64_t p = t.period();
  bool has_decaying = false;
  for (std::int64_t cls = 0; cls < p; ++cls) {
    const auto lead = t.class_leading_alpha(p, cls);
    if (!lead) {
      // vanishing class: 0 is attained infinitely often
      has_decaying = true;
      continue;
    }
    if (*lead > 0.0) out.unbounded = true;
    if (*lead < 0.0) has_decaying = true;
    if (*lead == 0.0 && t.class_is_pure(p, cls)) {
      // constant class values accumulate at themselves
      std::int64_t idx = t.head_size() + 1;
      while ((idx - 1) % p != cls) ++idx;
      out.limit_points.push_back(t.value_at(idx));
    }
  }
  if (has_decaying) out.limit_points.push_back(CdNumber(t.level()));
  return out;
}

bool positive_sum_check(const DiagSymbol& t, const DiagSymbol& q, int samples, std::uint64_t seed) {
  if (!t.real_nonnegative() || !q.real_nonnegative())
    throw std::domain_error("positive_sum_check: symbols must be real and nonnegative");
  const DiagSymbol sum = hat_add(t, q);
  Rng rng(seed ^ 0x8a5cd789u);
  int violations = 0;
  for (int s = 0; s < samples; ++s) {
    const double beta = rng.uniform(-3.0, -0.51);
    const double d = rng.uniform(0.1, 2.0);
    PhaseSequence phase = PhaseSequence::ones(t.level());
    const int kind = rng.uniform_int(0, 2);
    if (kind == 1) phase = PhaseSequence::generator_cycle(t.level());
    if (kind == 2) phase = PhaseSequence::constant(rng.unit_cd(t.level()));
    const PowerVector x = PowerVector::power_law(t.level(), d, beta, phase);
    if (domain_contains(sum, x, 0).member) {
      if (!domain_contains(t, x, 0).member || !domain_contains(q, x, 0).member) ++violations;
    }
  }
  return violations == 0;
}

Example52Report example52_report(std::int64_t horizon) {
  if (horizon < 1000) throw std::invalid_argument("example52: horizon must be >= 1000");
  const int v = 3;
  const PhaseSequence xi = PhaseSequence::generator_cycle(v);

  const DiagSymbol q = DiagSymbol::power_law(v, 1.0, 1.0, xi);
  const DiagSymbol b(v, {}, {TailTerm{0.25, xi}, TailTerm{1.0, xi.scaled(-1.0)}});
  const DiagSymbol c = DiagSymbol::power_law(v, 1.0, -0.75, xi);

  // z_n cycles through {+1, -1, +xi_n, -xi_n, +conj(xi_n), -conj(xi_n)}.
  std::vector<CdNumber> zperiod;
  const std::int64_t zp = std::lcm<std::int64_t>(6, xi.period_length());
  for (std::int64_t n = 1; n <= zp; ++n) {
    const CdNumber xin = xi.at(n);
    switch ((n - 1) % 6) {
      case 0: zperiod.push_back(CdNumber::real(v, 1.0)); break;
      case 1: zperiod.push_back(CdNumber::real(v, -1.0)); break;
      case 2: zperiod.push_back(xin); break;
      case 3: zperiod.push_back(-xin); break;
      case 4: zperiod.push_back(xin.conjugate()); break;
      default: zperiod.push_back(-xin.conjugate()); break;
    }
  }
  const PowerVector x =
      PowerVector::power_law(v, 1.0, -1.0, PhaseSequence(v, std::move(zperiod), "ex52-z"));

  Example52Report rep;
  rep.horizon = horizon;
  rep.q_integral = domain_contains(q, x, horizon);
  const DiagSymbol q_hat_b = hat_add(q, b);
  rep.sum_integral = domain_contains(q_hat_b, x, horizon);
  const DiagSymbol c_hat_q = hat_mul(c, q);
  rep.product_integral = domain_contains(c_hat_q, x, horizon);

  rep.x_in_q = rep.q_integral.member;
  rep.x_in_q_hat_b = rep.sum_integral.member;
  rep.x_in_c_hat_q = rep.product_integral.member;
  rep.x_in_cq = naive_mul_domain(c, q, x, 0).member;
  rep.x_in_qc_reverse = naive_mul_domain(q, c, x, 0).member;
  rep.sum_differs = rep.x_in_q_hat_b && !naive_add_domain(q, b, x, 0).member;
  rep.product_differs = rep.x_in_c_hat_q && !rep.x_in_cq;
  return rep;
}

std::string Example52Report::text() const {
  std::ostringstream os;
  os.precision(15);
  os << "diagonal-model scenario (horizon " << horizon << ")\n";
  os << "  integral |f|^2 dnu_x:      "
     << (q_integral.member ? "finite" : "divergent (exponent " +
             std::to_string(q_integral.exponent) + ")");
  if (q_integral.crossing_index)
    os << ", partial sums exceed 1000 at N = " << *q_integral.crossing_index;
  os << "\n";
  os << "  integral |f+g|^2 dnu_x:    " << (sum_integral.member ? "finite" : "divergent")
     << " (exponent " << sum_integral.exponent << ")\n";
  if (!sum_integral.partial_sums.empty()) {
    os << "    partial sums:";
    for (const auto& [n, s] : sum_integral.partial_sums) os << "  S(" << n << ") = " << s;
    os << "\n";
  }
  if (sum_integral.limit_bracket)
    os << "    limit bracket: [" << sum_integral.limit_bracket->first << ", "
       << sum_integral.limit_bracket->second << "]\n";
  os << "  memberships: x in D(Q): " << (x_in_q ? "yes" : "no")
     << "; x in D(Q ^+ B): " << (x_in_q_hat_b ? "yes" : "no")
     << "; x in D(C ^. Q): " << (x_in_c_hat_q ? "yes" : "no")
     << "; x in D(CQ): " << (x_in_cq ? "yes" : "no") << "\n";
  os << "  reverse order: x in D(QC): " << (x_in_qc_reverse ? "yes" : "no") << "\n";
  os << "  conclusions: Q+B " << (sum_differs ? "!=" : "==") << " Q ^+ B; CQ "
     << (product_differs ? "!=" : "==") << " C ^. Q\n";
  os << "  verdicts match the expected scenario: " << (matches_expected() ? "yes" : "NO") << "\n";
  return os.str();
}

namespace {

nlohmann::json phase_to_json(const PhaseSequence& p) {
  if (!p.rule_id().empty() &&
      (p.rule_id() == "ones" || p.rule_id() == "gen-cycle")) {
    return p.rule_id();
  }
  nlohmann::json period = nlohmann::json::array();
  for (const CdNumber& c : p.period()) period.push_back(c.coeffs());
  return nlohmann::json{{"period", period}};
}

PhaseSequence phase_from_json(int level, const nlohmann::json& j) {
  if (j.is_string()) return PhaseSequence::from_rule(level, j.get<std::string>());
  std::vector<CdNumber> period;
  for (const auto& c : j.at("period")) period.emplace_back(level, c.get<std::vector<double>>());
  return PhaseSequence(level, std::move(period));
}

}  // namespace

nlohmann::json symbol_to_json(const DiagSymbol& t) {
  nlohmann::json head = nlohmann::json::array();
  for (const CdNumber& c : t.head()) head.push_back(c.coeffs());
  nlohmann::json out{{"v", t.level()}, {"head", head}};

  // Canonical single-term form when the amplitude is c * named-rule.
  if (t.tail().size() == 1) {
    const TailTerm& term = t.tail().front();
    for (const char* id : {"ones", "gen-cycle"}) {
      const PhaseSequence rule = PhaseSequence::from_rule(t.level(), id);
      if (rule.period_length() != term.amplitude.period_length()) continue;
      const double c = term.amplitude.period().front().norm();
      bool uniform = c > 0.0;
      for (std::int64_t n = 1; uniform && n <= term.amplitude.period_length(); ++n)
        if (distance(term.amplitude.at(n), rule.at(n) * c) > 1e-15 * (1.0 + c)) uniform = false;
      if (uniform) {
        out["tail"] = nlohmann::json{{"c", c}, {"alpha", term.alpha}, {"phase", id}};
        return out;
      }
    }
  }
  if (t.tail().empty()) {
    out["tail"] = nlohmann::json{{"c", 0.0}, {"alpha", 0.0}, {"phase", "ones"}};
    return out;
  }
  nlohmann::json terms = nlohmann::json::array();
  for (const TailTerm& term : t.tail())
    terms.push_back(nlohmann::json{{"alpha", term.alpha}, {"phase", phase_to_json(term.amplitude)}});
  out["tail"] = nlohmann::json{{"terms", terms}};
  return out;
}

DiagSymbol symbol_from_json(const nlohmann::json& j) {
  const int v = j.at("v").get<int>();
  std::vector<CdNumber> head;
  for (const auto& c : j.at("head")) head.emplace_back(v, c.get<std::vector<double>>());
  const auto& tail = j.at("tail");
  std::vector<TailTerm> terms;
  if (tail.contains("terms")) {
    for (const auto& term : tail.at("terms"))
      terms.push_back(TailTerm{term.at("alpha").get<double>(),
                               phase_from_json(v, term.at("phase"))});
  } else {
    const double c = tail.at("c").get<double>();
    if (c < 0.0) throw std::invalid_argument("symbol_from_json: canonical c must be >= 0");
    if (c > 0.0)
      terms.push_back(TailTerm{tail.at("alpha").get<double>(),
                               phase_from_json(v, tail.at("phase")).scaled(c)});
  }
  return DiagSymbol(v, std::move(head), std::move(terms));
}

nlohmann::json Example52Report::to_json() const {
  nlohmann::json j{{"horizon", horizon},
                   {"q_integral", verdict_to_json(q_integral)},
                   {"sum_integral", verdict_to_json(sum_integral)},
                   {"product_integral", verdict_to_json(product_integral)},
                   {"memberships",
                    {{"x_in_D(Q)", x_in_q},
                     {"x_in_D(Q^+B)", x_in_q_hat_b},
                     {"x_in_D(C^.Q)", x_in_c_hat_q},
                     {"x_in_D(CQ)", x_in_cq},
                     {"x_in_D(QC)", x_in_qc_reverse}}},
                   {"sum_differs", sum_differs},
                   {"product_differs", product_differs},
                   {"matches_expected", matches_expected()}};
  return j;
}

nlohmann::json verdict_to_json(const DomainVerdict& v) {
  nlohmann::json out{{"member", v.member},
                     {"borderline", v.borderline},
                     {"exponent", std::isfinite(v.exponent) ? nlohmann::json(v.exponent)
                                                            : nlohmann::json("-inf")}};
  nlohmann::json sums = nlohmann::json::array();
  for (const auto& [n, s] : v.partial_sums) sums.push_back(nlohmann::json{{"N", n}, {"S", s}});
  out["partial_sums"] = sums;
  if (v.limit_bracket)
    out["limit_bracket"] = nlohmann::json{v.limit_bracket->first, v.limit_bracket->second};
  if (v.crossing_index) out["crossing_N"] = *v.crossing_index;
  return out;
}

}  // namespace octspec
