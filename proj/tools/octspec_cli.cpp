// Command-line front door: loads operators, symbols and step functions
// from JSON, runs the analyses, and emits reports plus CSV/JSON artifacts.
//
// Exit codes: 0 success, 2 input validation failure, 1 computation failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "octspec/cdnum.hpp"
#include "octspec/diagmodel.hpp"
#include "octspec/funcalc.hpp"
#include "octspec/hmodule.hpp"
#include "octspec/qlop.hpp"
#include "octspec/rng.hpp"
#include "octspec/spectral.hpp"

using namespace octspec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitComputation = 1;
constexpr int kExitValidation = 2;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

// ---------------------------------------------------------------- algebra

int run_algebra_table(int v) {
  const int d = dim_of_level(v);
  std::ostringstream os;
  os << "multiplication table for level " << v << " (" << d << " generators)\n";
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      const BasisProduct p = basis_mul(j, k, v);
      os << (p.sign > 0 ? " +" : " -") << "i" << p.index;
    }
    os << "\n";
  }
  std::cout << os.str();
  return kExitOk;
}

int run_algebra_identities(int v, int trials, std::uint64_t seed) {
  Rng rng(seed);
  bool ok = true;
  auto line = [&ok](const std::string& name, double residual, double tol) {
    const bool pass = residual <= tol;
    ok = ok && pass;
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << "  max residual " << fmt(residual)
              << " (tol " << fmt(tol) << ")\n";
  };

  // kappa commutation, exhaustive and exact
  {
    bool exact = true;
    for (int j = 0; j < dim_of_level(v); ++j)
      for (int k = 0; k < dim_of_level(v); ++k) {
        const BasisProduct jk = basis_mul(j, k, v);
        const BasisProduct kj = basis_mul(k, j, v);
        if (jk.index != kj.index) exact = false;
        if (jk.sign != ((kappa(j, k) == 0) ? kj.sign : -kj.sign)) exact = false;
      }
    ok = ok && exact;
    std::cout << (exact ? "[PASS] " : "[FAIL] ") << "kappa commutation (exhaustive, exact)\n";
  }

  double assoc = 0.0, alt = 0.0, trace = 0.0, norm_mult = 0.0;
  for (int rep = 0; rep < trials; ++rep) {
    const CdNumber a = rng.cd(v), b = rng.cd(v), c = rng.cd(v);
    if (v <= 2) assoc = std::max(assoc, distance((a * b) * c, a * (b * c)));
    alt = std::max(alt, distance((a * a) * b, a * (a * b)));
    alt = std::max(alt, distance((a * b) * b, a * (b * b)));
    trace = std::max(trace, std::abs(((a * b) * c).real_part() - (a * (b * c)).real_part()));
    if (v <= 3)
      norm_mult = std::max(norm_mult, std::abs((a * b).norm() - a.norm() * b.norm()));
  }
  if (v <= 2) line("associativity", assoc, 1e-12);
  if (v <= 3) {
    line("alternativity", alt, 1e-12);
    line("norm multiplicativity", norm_mult, 1e-12);
  }
  line("trace associativity", trace, 1e-12);
  return ok ? kExitOk : kExitComputation;
}

int run_algebra_zerodivisor(int v) {
  const auto zd = find_zero_divisor(v);
  if (!zd) {
    std::cout << "no two-term zero divisor found at level " << v << "\n";
    return kExitComputation;
  }
  std::cout << "a = " << zd->a.str() << "\n";
  std::cout << "b = " << zd->b.str() << "\n";
  std::cout << "|a| = " << fmt(zd->a.norm()) << ", |b| = " << fmt(zd->b.norm())
            << ", |a*b| = " << fmt((zd->a * zd->b).norm()) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- spectral

int run_spectral(const std::string& operator_path, double mesh, const std::string& csv_path,
                 const std::string& json_path, bool full, std::uint64_t seed) {
  const QlOperator t = operator_from_json(load_json(operator_path));
  if (!t.is_symmetric_flag())
    throw std::invalid_argument("spectral: operator is not symmetric");

  const auto res = resolvents(t);
  const auto r = resolution_of_identity(t);

  std::ostringstream os;
  os.precision(17);
  os << "operator: level " << t.level() << ", module dimension " << t.dim() << "\n";
  os << "full adjoint verified: " << (t.has_full_adjoint_flag() ? "yes" : "no") << "\n";
  os << "breakpoints (b, rank E_b):\n";
  for (std::size_t k = 0; k < r.breakpoints.size(); ++k)
    os << "  " << r.breakpoints[k] << "  " << r.rank_at(k) << "\n";
  os << "resolvent identities: 2(iI)B+B- = B- - B+ residual " << res.identity2_residual
     << "; T B+B- = (B+ + B-)/2 residual " << res.identity3_residual << "\n";
  os << "resolvent norms: " << res.norm_plus << ", " << res.norm_minus << " (bound 1)\n";

  Rng rng(seed);
  const ModuleVector x = rng.unit_vector(t.level(), t.dim());
  const double err = distance(riemann_reconstruct(r, x, mesh), t.apply(x));
  os << "riemann reconstruction at mesh " << mesh << ": error " << err << " (bound "
     << mesh * x.norm() << ")\n";
  os << "graded projections: structural "
     << (r.diagnostics.structural_ok ? "ok" : "FAILED") << ", right-module compatible "
     << (r.diagnostics.right_module_compatible ? "yes" : "no") << ", left-module compatible "
     << (r.diagnostics.left_module_compatible ? "yes" : "no") << "\n";
  std::cout << os.str();

  if (!csv_path.empty()) write_text(csv_path, resolution_to_csv(r));
  if (!json_path.empty()) {
    nlohmann::json out{{"breakpoints", r.breakpoints}};
    nlohmann::json ranks = nlohmann::json::array();
    for (std::size_t k = 0; k < r.breakpoints.size(); ++k) ranks.push_back(r.rank_at(k));
    out["ranks"] = ranks;
    if (full) {
      nlohmann::json projections = nlohmann::json::array();
      for (const Mat& e : r.projections) {
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < e.rows; ++i) {
          nlohmann::json row = nlohmann::json::array();
          for (int j = 0; j < e.cols; ++j) row.push_back(e.at(i, j));
          rows.push_back(std::move(row));
        }
        projections.push_back(std::move(rows));
      }
      out["projections"] = projections;
    }
    write_text(json_path, out.dump(2) + "\n");
  }
  const bool pass = err <= mesh * x.norm() && res.identity2_residual < 1e-9 &&
                    res.identity3_residual < 1e-9;
  return pass ? kExitOk : kExitComputation;
}

// -------------------------------------------------------------------- calc

int run_calc(const std::string& operator_path, const std::string& function_path,
             const std::string& out_path) {
  const QlOperator t = operator_from_json(load_json(operator_path));
  const StepFunction f = stepfunction_from_json(load_json(function_path));
  if (!t.is_symmetric_flag()) throw std::invalid_argument("calc: operator is not symmetric");
  if (f.value_level() != t.level())
    throw std::invalid_argument("calc: function level does not match the operator");
  for (const CdNumber& z : spectrum(t))
    if (!f.defined_at(z.real_part()))
      throw std::invalid_argument("calc: function undefined on part of the spectrum");

  const QlOperator ft = apply(f, t);
  std::vector<double> points;
  for (const CdNumber& z : spectrum(t)) points.push_back(z.real_part());
  const double sup = f.sup_abs_on(points);
  const double norm = operator_norm(ft);
  std::cout << "||f(T)|| = " << fmt(norm) << ", sup |f| on the spectrum = " << fmt(sup)
            << (norm <= sup + 1e-10 ? "  [bound holds]" : "  [BOUND VIOLATED]") << "\n";
  if (!out_path.empty()) write_text(out_path, operator_to_json(ft).dump(2) + "\n");
  return norm <= sup + 1e-10 ? kExitOk : kExitComputation;
}

// -------------------------------------------------------------------- diag

int run_diag(const std::string& symbol_path, const std::string& vector_path,
             std::int64_t horizon, const std::string& thresholds_csv,
             const std::string& out_path) {
  const DiagSymbol t = symbol_from_json(load_json(symbol_path));
  std::ostringstream os;
  os.precision(17);

  const auto normality = normality_report(t);
  os << "symbol: level " << t.level() << ", head " << t.head_size() << ", tail terms "
     << t.tail().size() << "\n";
  os << "affiliated-normal (pointwise T*T = TT*): "
     << (normality.pointwise_normal ? "yes" : "no") << "\n";
  os << spectrum_closure(t).describe() << "\n";

  nlohmann::json out{{"normal", normality.pointwise_normal}};

  if (!thresholds_csv.empty()) {
    std::vector<double> thresholds;
    std::stringstream ss(thresholds_csv);
    std::string item;
    while (std::getline(ss, item, ',')) thresholds.push_back(std::stod(item));
    const auto seq = bounding_sequence(t, thresholds);
    os << "bounding sequence:\n";
    for (const auto& proj : seq.projections)
      os << "  threshold " << proj.threshold << ": attained norm " << proj.attained_norm
         << (proj.norm_ok ? " (ok)" : " (EXCEEDED)") << "\n";
  }

  if (!vector_path.empty()) {
    const PowerVector x{symbol_from_json(load_json(vector_path))};
    const DomainVerdict v = domain_contains(t, x, horizon);
    os << "domain verdict: " << (v.member ? "member" : "not a member") << ", exponent "
       << v.exponent << (v.borderline ? " (borderline)" : "") << "\n";
    for (const auto& [n, s] : v.partial_sums) os << "  S(" << n << ") = " << s << "\n";
    if (v.limit_bracket)
      os << "  limit bracket [" << v.limit_bracket->first << ", " << v.limit_bracket->second
         << "]\n";
    if (v.crossing_index) os << "  partial sums exceed 1000 at N = " << *v.crossing_index << "\n";
    out["verdict"] = verdict_to_json(v);
  }
  std::cout << os.str();
  if (!out_path.empty()) write_text(out_path, out.dump(2) + "\n");
  return kExitOk;
}

// --------------------------------------------------------------- selftest

int run_selftest(std::uint64_t seed) {
  Rng rng(seed);
  int failures = 0;
  auto report = [&failures](const std::string& name, bool pass) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << "\n";
    if (!pass) ++failures;
  };

  // kappa rule, exhaustive for v in {2,3,4}
  bool kappa_ok = true;
  for (int v = 2; v <= 4; ++v)
    for (int j = 0; j < dim_of_level(v); ++j)
      for (int k = 0; k < dim_of_level(v); ++k) {
        const BasisProduct jk = basis_mul(j, k, v);
        const BasisProduct kj = basis_mul(k, j, v);
        if (jk.index != kj.index || jk.sign != ((kappa(j, k) == 0) ? kj.sign : -kj.sign))
          kappa_ok = false;
      }
  report("kappa commutation v in {2,3,4}", kappa_ok);

  // algebra identities
  double assoc = 0.0, alt = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const CdNumber a2 = rng.cd(2), b2 = rng.cd(2), c2 = rng.cd(2);
    assoc = std::max(assoc, distance((a2 * b2) * c2, a2 * (b2 * c2)));
    const CdNumber a3 = rng.cd(3), b3 = rng.cd(3);
    alt = std::max(alt, distance((a3 * a3) * b3, a3 * (a3 * b3)));
  }
  report("quaternion associativity <= 1e-12", assoc <= 1e-12);
  report("octonion alternativity <= 1e-12", alt <= 1e-12);

  const auto zd = find_zero_divisor(4);
  report("sedenion zero divisor with |a*b| = 0", zd && (zd->a * zd->b).is_zero());

  // component projections resolve the identity decomposition
  {
    CdMatrixOperator a(3, 2);
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) a.at(k, l) = rng.cd(3);
    const QlOperator op = a.to_operator();
    QlOperator sum = QlOperator::zero(3, 2);
    for (int j = 0; j < 8; ++j) sum = sum + component_project(op, j);
    report("component projections sum to the operator",
           frobenius_distance(sum, op) < 1e-10 * (1.0 + op.matrix().frobenius()));
  }

  // resolvent identities on a random self-adjoint operator
  {
    CdMatrixOperator s(2, 3);
    for (int k = 0; k < 3; ++k)
      for (int l = k; l < 3; ++l) {
        const CdNumber r = CdNumber::real(2, rng.uniform(-1.0, 1.0));
        s.at(k, l) = r;
        s.at(l, k) = r;
      }
    const auto res = resolvents(s.to_operator());
    report("resolvent identities <= 1e-10",
           res.identity2_residual <= 1e-10 && res.identity3_residual <= 1e-10);
    report("resolvent norm bound", res.norm_plus <= 1.0 + 1e-12 && res.norm_minus <= 1.0 + 1e-12);
  }

  // the quantitative diagonal-model scenario at a reduced horizon
  {
    const Example52Report rep = example52_report(100000);
    report("diagonal-model scenario verdicts", rep.matches_expected());
  }

  std::cout << (failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
  return failures == 0 ? kExitOk : kExitComputation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cayley-Dickson operator toolbox: exact hypercomplex arithmetic, spectral "
               "resolutions, Borel step-function calculus, and the unbounded diagonal model"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for all randomized checks (default 0)");

  // algebra
  auto* algebra = app.add_subcommand("algebra", "multiplication tables, identity suites, zero divisors");
  int alg_v = 2;
  int alg_trials = 1000;
  std::string alg_action;
  algebra->add_option("--v", alg_v, "algebra level")->required();
  algebra->add_option("--trials", alg_trials, "random trials for the identity suite");
  algebra->add_option("action", alg_action, "table | identities | zerodivisor")->required();

  // spectral
  auto* spectral_cmd = app.add_subcommand("spectral", "graded resolution, resolvents, Riemann reconstruction");
  std::string sp_operator, sp_csv, sp_json;
  double sp_mesh = 1e-3;
  bool sp_full = false;
  spectral_cmd->add_option("operator", sp_operator, "operator JSON file")->required();
  spectral_cmd->add_option("--mesh", sp_mesh, "partition mesh (default 1e-3)");
  spectral_cmd->add_option("--csv", sp_csv, "write breakpoints/ranks CSV here");
  spectral_cmd->add_option("--json", sp_json, "write resolution JSON here");
  spectral_cmd->add_flag("--full", sp_full, "include full projection matrices in the JSON");

  // calc
  auto* calc = app.add_subcommand("calc", "apply a Borel step function to an operator");
  std::string calc_operator, calc_function, calc_out;
  calc->add_option("operator", calc_operator, "operator JSON file")->required();
  calc->add_option("function", calc_function, "step function JSON file")->required();
  calc->add_option("--out", calc_out, "write f(T) as operator JSON here");

  // diag
  auto* diag = app.add_subcommand("diag", "diagonal-model symbol analyses");
  std::string diag_symbol, diag_vector, diag_thresholds, diag_out;
  std::int64_t diag_horizon = 1000000;
  diag->add_option("--symbol", diag_symbol, "diagonal symbol JSON file")->required();
  diag->add_option("--vector", diag_vector, "power vector JSON file");
  diag->add_option("--horizon", diag_horizon, "partial-sum horizon");
  diag->add_option("--thresholds", diag_thresholds, "bounding thresholds, comma separated");
  diag->add_option("--out", diag_out, "write the verdict JSON here");

  // example52
  auto* ex52 = app.add_subcommand("example52", "unbounded diagonal operators: the sum/product closure scenario");
  std::int64_t ex52_horizon = 1000000;
  std::string ex52_out;
  ex52->add_option("--horizon", ex52_horizon, "partial-sum horizon (>= 1000)");
  ex52->add_option("--out", ex52_out, "write the report JSON here");

  // selftest
  auto* selftest = app.add_subcommand("selftest", "compact identity and spectral battery");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*algebra) {
      if (alg_v < 0 || alg_v > max_level())
        throw std::invalid_argument("algebra: level out of range");
      if (alg_action == "table") return run_algebra_table(alg_v);
      if (alg_action == "identities") return run_algebra_identities(alg_v, alg_trials, seed);
      if (alg_action == "zerodivisor") return run_algebra_zerodivisor(alg_v);
      throw std::invalid_argument("algebra: unknown action '" + alg_action + "'");
    }
    if (*spectral_cmd) return run_spectral(sp_operator, sp_mesh, sp_csv, sp_json, sp_full, seed);
    if (*calc) return run_calc(calc_operator, calc_function, calc_out);
    if (*diag) return run_diag(diag_symbol, diag_vector, diag_horizon, diag_thresholds, diag_out);
    if (*ex52) {
      if (ex52_horizon < 1000) throw std::invalid_argument("example52: horizon must be >= 1000");
      const Example52Report rep = example52_report(ex52_horizon);
      std::cout << rep.text();
      if (!ex52_out.empty()) write_text(ex52_out, rep.to_json().dump(2) + "\n");
      return rep.matches_expected() ? kExitOk : kExitComputation;
    }
    if (*selftest) return run_selftest(seed);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return kExitValidation;
}
