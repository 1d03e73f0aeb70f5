#include "oscdeform/report.hpp"

#include "oscdeform/eigensystem.hpp"
#include "oscdeform/errors.hpp"
#include "oscdeform/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

namespace oscdeform {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string fmt(double v) { return format_real(v); }

std::string short_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class SuiteBuilder {
 public:
  explicit SuiteBuilder(std::string name) { result_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) result_.failures.push_back(what);
  }

  SuiteResult finish(std::string summary) {
    result_.passed = result_.failures.empty();
    result_.summary = std::to_string(checks_ - static_cast<int>(result_.failures.size())) + "/" +
                      std::to_string(checks_) + " checks; " + std::move(summary);
    return std::move(result_);
  }

 private:
  SuiteResult result_;
  int checks_ = 0;
};

double rel_err(double value, double expected) {
  return std::abs(value - expected) / std::max(std::abs(expected), 1e-300);
}

// Closed-form normalization of the preset family, if the family has one.
std::optional<double> closed_form_norm(const ScanConfig& cfg, int n) {
  if (!cfg.preset) return std::nullopt;
  const double lam = cfg.lambda;
  switch (*cfg.preset) {
    case PresetKind::harmonic: return norm_case_ii(n, 1.0);
    case PresetKind::case_i: return norm_case_i(n);
    case PresetKind::case_ii: return norm_case_ii(n, lam);
    case PresetKind::case_iii: return norm_case_iii(n, lam);
    case PresetKind::lambda_shift:
      // exp(-x²/2) H_n(x + λ/√2) form; the general form carries an extra exp(-λ²/4).
      return norm_lambda_shift(n, lam) * std::exp(lam * lam / 4.0);
  }
  return std::nullopt;
}

// Closed-form position variance where the family has one: p² (n + 1/2).
std::optional<double> closed_form_var_x(const ScanConfig& cfg, const HamCoeffs& h, int n) {
  if (!cfg.preset) return std::nullopt;
  switch (*cfg.preset) {
    case PresetKind::harmonic:
    case PresetKind::case_i:
    case PresetKind::case_ii: return -2.0 * h.A * (n + 0.5);
    default: return std::nullopt;
  }
}

}  // namespace

int VerifyReport::passed() const {
  return static_cast<int>(
      std::count_if(suites.begin(), suites.end(), [](const auto& s) { return s.passed; }));
}

VerifyReport run_verify(const ScanConfig& cfg) {
  validate(cfg);
  const CParams c = resolve_cparams(cfg);
  const HamCoeffs h = coeffs_from_c(c);
  const QuadratureRule rule = gauss_hermite(cfg.quad_order);
  const QuadratureRule alt_rule = gauss_hermite(cfg.quad_order / 2 + 7);
  const ChangeOfVariable cov = change_of_variable(h);
  VerifyReport report;

  {
    SuiteBuilder s("constraint");
    const double r = constraint_residual(c);
    s.check(std::abs(r) <= kConstraintTolerance,
            "c1 + c5 + c1*c5 - c2*c4 = 0 violated (residual " + fmt(r) + ")");
    s.check(is_admissible(h), "admissibility A<0, B<1 violated");
    report.suites.push_back(s.finish("constraint residual " + short_real(r)));
  }

  {
    SuiteBuilder s("spectrum");
    double worst_level = 0.0;
    double worst_resid = 0.0;
    for (int n = 0; n <= cfg.n_max; ++n) {
      const double e = energy_general(h, cov, n);
      const double dev = std::abs(e - (n + 0.5));
      worst_level = std::max(worst_level, dev);
      s.check(dev < 1e-10, "E_n = n + 1/2 violated at n=" + std::to_string(n) + " (E = " +
                               fmt(e) + ")");
      if (n <= 8) {
        const double resid = max_eigen_equation_residual(EigenState(h, n, rule));
        worst_resid = std::max(worst_resid, resid);
        s.check(resid < 1e-7, "H psi_n = (n + 1/2) psi_n violated at n=" + std::to_string(n) +
                                  " (relative residual " + fmt(resid) + ")");
      }
    }
    std::string fock_note = "truncated spectrum skipped (non-normal H)";
    const TruncatedOperators t = build_truncated(c, cfg.dim);
    if (is_symmetric(t.h) || is_triangular(t.h)) {
      // Strongly squeezed eigenvectors have long Fock tails; double the truncation until the
      // lowest levels settle, requiring the deviation never to grow on the way.
      try {
        const int k = std::min(5, cfg.dim / 2);
        double dev = spectrum_deviation(spectrum_check(t, k));
        int dim = cfg.dim;
        bool monotone = true;
        while (dev >= 1e-6 && dim < 4 * cfg.dim) {
          dim *= 2;
          const double next = spectrum_deviation(spectrum_check(build_truncated(c, dim), k));
          if (next > dev + 1e-12) monotone = false;
          dev = next;
        }
        s.check(dev < 1e-6, "truncated Fock-space spectrum deviates from n + 1/2 by " + fmt(dev) +
                                " at dim " + std::to_string(dim));
        s.check(monotone, "truncated spectrum does not converge monotonically in dim");
        fock_note = "truncated spectrum deviation " + short_real(dev) + " at dim " +
                    std::to_string(dim);
      } catch (const SpectrumError& e) {
        s.check(false, std::string("truncated spectrum: ") + e.what());
      }
    }
    report.suites.push_back(s.finish("max |E_n - (n+1/2)| " + short_real(worst_level) +
                                     ", eigen-equation residual " + short_real(worst_resid) +
                                     ", " + fock_note));
  }

  {
    SuiteBuilder s("normalization");
    double worst = 0.0;
    for (int n = 0; n <= cfg.n_max; ++n) {
      const EigenState st(h, n, rule);
      // Independent rule of a different order.
      const EnvelopeNodes nodes = envelope_nodes(h, alt_rule);
      double integral = 0.0;
      for (std::size_t i = 0; i < nodes.x.size(); ++i) {
        const double v = st(nodes.x[i]);
        integral += nodes.w[i] * v * v * std::exp(-2.0 * (st.envelope().exponent(nodes.x[i]) -
                                                          nodes.log_peak)) /
                    nodes.scale;
      }
      worst = std::max(worst, std::abs(integral - 1.0));
      s.check(std::abs(integral - 1.0) < 1e-9,
              "∫psi_n² dx = 1 violated at n=" + std::to_string(n) + " (" + fmt(integral) + ")");
      if (n + 2 <= 2 * alt_rule.order()) {
        const int nodes_found = sign_changes(st);
        s.check(nodes_found == n, "psi_" + std::to_string(n) + " has " +
                                      std::to_string(nodes_found) + " sign changes");
      }
      if (const auto closed = closed_form_norm(cfg, n)) {
        const double err = rel_err(st.norm(), *closed);
        s.check(err < 1e-9, "closed-form N_" + std::to_string(n) + " mismatch (relative " +
                                fmt(err) + ")");
      }
    }
    report.suites.push_back(s.finish("max |∫psi² - 1| " + short_real(worst)));
  }

  {
    SuiteBuilder s("heisenberg");
    double lowest = 1e300;
    for (int n = 0; n <= cfg.n_max; ++n) {
      const MomentReport m = moments_quadrature(h, n, rule);
      lowest = std::min(lowest, m.product);
      s.check(m.product >= 0.5 - 1e-9,
              "Heisenberg bound violated at n=" + std::to_string(n) + " (" + fmt(m.product) + ")");
      s.check(!(m.squeezed_x && m.squeezed_p), "x and p both squeezed at n=" + std::to_string(n));
      if (n == 0) {
        s.check(std::abs(m.product - 0.5) < 1e-9,
                "ground-state coherence Δx·Δp = 1/2 violated (" + fmt(m.product) + ")");
        const MomentReport g = ground_moments_closed(h);
        const double scale = std::max(1.0, std::abs(g.mean_x));
        s.check(std::abs(g.mean_x - m.mean_x) < 1e-9 * scale &&
                    std::abs(g.var_x - m.var_x) < 1e-9 && std::abs(g.var_p - m.var_p) < 1e-9,
                "closed-form ground moments disagree with quadrature");
        const SqueezeVerdict v = squeezing_verdict_ground(h);
        s.check(v.x == m.squeezed_x && v.p == m.squeezed_p,
                "ground squeezing verdict B < 2A+1 disagrees with the variance");
      }
      if (const auto vx = closed_form_var_x(cfg, h, n)) {
        s.check(rel_err(m.var_x, *vx) < 1e-9,
                "var_x = p²(n + 1/2) violated at n=" + std::to_string(n));
        s.check(std::abs(m.product - (n + 0.5)) < 1e-9,
                "Δx·Δp = n + 1/2 violated at n=" + std::to_string(n));
      }
    }
    report.suites.push_back(s.finish("min Δx·Δp " + short_real(lowest)));
  }

  {
    SuiteBuilder s("commutator");
    const TruncatedOperators t = build_truncated(c, cfg.dim);
    const double comm = commutator_residual(t);
    const WignerResiduals w = wigner_residuals(t);
    s.check(comm < 1e-10, "[b, b†] = 1 violated on the interior block (" + fmt(comm) + ")");
    s.check(w.lowering < 1e-10, "[H, b] = -b violated on the interior block (" +
                                    fmt(w.lowering) + ")");
    s.check(w.raising < 1e-10, "[H, b†] = b† violated on the interior block (" +
                                   fmt(w.raising) + ")");
    s.check(is_symmetric(t.h) == is_selfadjoint(h),
            "matrix symmetry of H disagrees with the B = C = 0 criterion");
    report.suites.push_back(s.finish("[b,b†] residual " + short_real(comm) + ", Wigner " +
                                     short_real(std::max(w.lowering, w.raising))));
  }

  {
    SuiteBuilder s("gram");
    const int n_max = std::max(1, cfg.n_max);
    const Eigen::MatrixXd g = gram_matrix(h, n_max, rule);
    double off = 0.0;
    for (int i = 0; i <= n_max; ++i) {
      s.check(std::abs(g(i, i) - 1.0) < 1e-9, "G[n][n] = 1 violated at n=" + std::to_string(i));
      for (int j = 0; j <= n_max; ++j)
        if (i != j) off = std::max(off, std::abs(g(i, j)));
    }
    std::string kind = "non-orthogonal family";
    if (is_selfadjoint(h)) {
      kind = "selfadjoint, orthogonal";
      s.check(off < 1e-8, "eigenfunctions of a selfadjoint H are not orthogonal (max overlap " +
                              fmt(off) + ")");
    }
    report.suites.push_back(s.finish(kind + ", max overlap " + short_real(off)));
  }
  return report;
}

std::string format_verify_text(const VerifyReport& report) {
  std::ostringstream out;
  for (const auto& s : report.suites) {
    out << (s.passed ? "PASS " : "FAIL ") << s.name << ": " << s.summary << "\n";
    for (const auto& f : s.failures) out << "    - " << f << "\n";
  }
  out << report.passed() << "/" << report.suites.size() << " suites pass\n";
  return out.str();
}

nlohmann::json verify_json(const VerifyReport& report) {
  nlohmann::json j;
  j["passed"] = report.passed();
  j["total"] = report.suites.size();
  j["suites"] = nlohmann::json::array();
  for (const auto& s : report.suites)
    j["suites"].push_back(
        {{"name", s.name}, {"passed", s.passed}, {"summary", s.summary}, {"failures", s.failures}});
  return j;
}

namespace {

template <class F>
void parallel_for(std::size_t count, F&& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, std::clamp(std::thread::hardware_concurrency(), 1u, 8u));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::jthread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

std::vector<ScanRow> run_scan(const ScanConfig& cfg) {
  validate(cfg);
  const QuadratureRule rule = gauss_hermite(cfg.quad_order);
  std::vector<ScanRow> rows;
  if (cfg.c) {
    const HamCoeffs h = coeffs_from_c(*cfg.c);
    rows.resize(static_cast<std::size_t>(cfg.n_max + 1));
    parallel_for(rows.size(), [&](std::size_t i) {
      rows[i] = {"custom", std::nan(""), static_cast<int>(i),
                 moments_quadrature(h, static_cast<int>(i), rule)};
    });
    return rows;
  }
  const PresetKind kind = *cfg.preset;
  const std::vector<double> lams = grid_points(effective_grid(cfg));
  rows.resize(static_cast<std::size_t>(cfg.n_max + 1) * lams.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const int n = static_cast<int>(i / lams.size());
    const double lam = lams[i % lams.size()];
    const HamCoeffs h = coeffs_from_c(preset({kind, lam}));
    rows[i] = {std::string(preset_name(kind)), lam, n, moments_quadrature(h, n, rule)};
  });
  return rows;
}

std::vector<SqueezingWindow> scan_windows(const ScanConfig& cfg) {
  validate(cfg);
  if (!cfg.preset) return {};
  const QuadratureRule rule = gauss_hermite(cfg.quad_order);
  std::vector<SqueezingWindow> wins(static_cast<std::size_t>(cfg.n_max + 1));
  const LambdaGrid grid = effective_grid(cfg);
  parallel_for(wins.size(), [&](std::size_t n) {
    wins[n] = squeezing_window_scan(*cfg.preset, static_cast<int>(n), grid, 1e-6, rule);
  });
  return wins;
}

std::string format_scan_csv(const std::vector<ScanRow>& rows) {
  std::string out = "preset,lambda,n,mean_x,var_x,var_p,product,squeezed_x,squeezed_p\n";
  for (const auto& r : rows) {
    out += r.preset + ",";
    out += (std::isnan(r.lambda) ? std::string() : fmt(r.lambda)) + ",";
    out += std::to_string(r.n) + ",";
    out += fmt(r.moments.mean_x) + "," + fmt(r.moments.var_x) + "," + fmt(r.moments.var_p) + "," +
           fmt(r.moments.product) + ",";
    out += std::string(r.moments.squeezed_x ? "true" : "false") + ",";
    out += std::string(r.moments.squeezed_p ? "true" : "false") + "\n";
  }
  return out;
}

nlohmann::json scan_json(const std::vector<ScanRow>& rows,
                         const std::vector<SqueezingWindow>& windows) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = {{"preset", r.preset},
                          {"n", r.n},
                          {"mean_x", r.moments.mean_x},
                          {"var_x", r.moments.var_x},
                          {"var_p", r.moments.var_p},
                          {"product", r.moments.product},
                          {"squeezed_x", r.moments.squeezed_x},
                          {"squeezed_p", r.moments.squeezed_p}};
    row["lambda"] = std::isnan(r.lambda) ? nlohmann::json(nullptr) : nlohmann::json(r.lambda);
    j["rows"].push_back(row);
  }
  j["windows"] = nlohmann::json::array();
  for (const auto& w : windows) {
    nlohmann::json iv = nlohmann::json::array();
    for (const auto& i : w.intervals)
      iv.push_back({{"lo", i.lo ? nlohmann::json(*i.lo) : nlohmann::json(nullptr)},
                    {"hi", i.hi ? nlohmann::json(*i.hi) : nlohmann::json(nullptr)}});
    j["windows"].push_back({{"preset", std::string(preset_name(w.preset))},
                            {"n", w.n},
                            {"lambda_min", w.grid.min},
                            {"lambda_max", w.grid.max},
                            {"resolution", w.resolution},
                            {"intervals", iv}});
  }
  return j;
}

std::vector<SpectrumLine> run_spectrum(const ScanConfig& cfg, int levels) {
  validate(cfg);
  const CParams c = resolve_cparams(cfg);
  const HamCoeffs h = coeffs_from_c(c);
  const ChangeOfVariable cov = change_of_variable(h);
  const TruncatedOperators t = build_truncated(c, cfg.dim);
  const std::vector<double> fock = spectrum_check(t, levels);
  std::vector<SpectrumLine> lines;
  for (int n = 0; n < levels; ++n)
    lines.push_back({n, energy_general(h, cov, n), fock[static_cast<std::size_t>(n)]});
  return lines;
}

std::string format_spectrum_text(const std::vector<SpectrumLine>& lines) {
  std::string out = "n,closed_form,truncated,deviation\n";
  for (const auto& l : lines)
    out += std::to_string(l.n) + "," + fmt(l.closed_form) + "," + fmt(l.truncated) + "," +
           fmt(l.truncated - (l.n + 0.5)) + "\n";
  return out;
}

std::string discrepancy_report() {
  std::ostringstream out;
  out << "Closed forms versus independent oracles\n";
  out << "=======================================\n\n";

  out << "[1] Position variance of the lambda-shifted states exp(-x^2/2) H_n(x + lambda/sqrt2)\n";
  out << "    quoted : 2n + 1/2 - (2 l^2 + 1) L_{n-1}^(1)(-l^2)/L_n^(0)(-l^2)"
         " - 2 l^2 (L_n^(1)(-l^2)/L_n^(0)(-l^2))^2\n";
  out << "    oracle : Gauss-Hermite quadrature of the normalized state\n";
  out << "    n, lambda, quoted, oracle, quoted - oracle\n";
  for (int n : {0, 1, 2, 3})
    for (double lam : {0.0, 0.5, 1.0, 2.0}) {
      const double quoted = printed_variance_lambda_shift(n, lam);
      const double oracle = variance_lambda_shift_oracle(n, lam);
      out << "    " << n << ", " << fmt(lam) << ", " << fmt(quoted) << ", " << fmt(oracle) << ", "
          << fmt(quoted - oracle) << "\n";
    }
  {
    const double quoted = printed_variance_lambda_shift(1, 1.0);
    const double oracle = variance_lambda_shift_oracle(1, 1.0);
    out << "    at n=1, lambda=1: quoted = " << fmt(quoted) << ", oracle = " << fmt(oracle)
        << ", difference = " << fmt(quoted - oracle) << "\n";
  }
  out << "    n=1 oracle closed form: (3 + l^4) / (2 (1 + l^2)^2); x-squeezed iff |lambda| > 1\n";
  out << "    squeezing threshold radius r(n) (smallest lambda > 0 with var_x < 1/2):\n";
  double prev = 1e300;
  bool monotone = true;
  for (int n = 1; n <= 8; ++n) {
    const SqueezingWindow w =
        squeezing_window_scan(PresetKind::lambda_shift, n, {0.0, 4.0, 161});
    double r = std::nan("");
    for (const auto& iv : w.intervals)
      if (iv.lo) {
        r = *iv.lo;
        break;
      }
    out << "      n=" << n << "  r=" << short_real(r) << "\n";
    if (!(r < prev)) monotone = false;
    prev = r;
  }
  out << "    r(n) strictly decreasing over n=1..8: " << (monotone ? "yes" : "no") << "\n\n";

  out << "[2] Coefficients of c1=c5=2/3, c2=c4=4/3, c3=c6=lambda\n";
  out << "    quoted : A = -1/18, C = 9/2, E = 3 sqrt2 lambda, F = lambda^2, B = C = 0\n";
  {
    const HamCoeffs h = coeffs_from_c(preset({PresetKind::case_i, 1.0}));
    out << "    recomputed at lambda=1: A=" << fmt(h.A) << " B=" << fmt(h.B) << " C=" << fmt(h.C)
        << " D=" << fmt(h.D) << " E=" << fmt(h.E) << " F=" << fmt(h.F) << "\n";
    out << "    the quoted \"C = 9/2\" is the D coefficient; C = 0\n\n";
  }

  out << "[3] Normalization of b = a + lambda a†, b† = a† eigenfunctions\n";
  out << "    quoted : N_n = pi^(-1/4)/n! ((1+l)/(1-l))^(1/4) (1+l)^(n/2) F_n(l)^(-1/2)\n";
  out << "    n, lambda, quoted, quadrature, relative difference\n";
  for (double lam : {-0.5, 0.0, 0.5, 0.9})
    for (int n = 0; n <= 6; ++n) {
      const double quoted = norm_case_iii(n, lam);
      const double quad = normalize(coeffs_from_c(preset({PresetKind::case_iii, lam})), n);
      out << "    " << n << ", " << fmt(lam) << ", " << fmt(quoted) << ", " << fmt(quad) << ", "
          << short_real(rel_err(quoted, quad)) << "\n";
    }
  out << "\n";

  out << "[4] Ladder prefactors b psi_n = k- psi_{n-1}, b† psi_n = k+ psi_{n+1}\n";
  out << "    quoted : k- = n/sqrt(-A) N_n/N_{n-1} (1+c1-c2), k+ = 1/(2 sqrt(-A)) N_n/N_{n+1} "
         "(1+c5-c4)\n";
  out << "    preset, n, k- quoted, k- measured, k+ quoted, k+ measured, k+(n) k-(n+1)\n";
  for (const PresetId id : {PresetId{PresetKind::lambda_shift, 1.0}, PresetId{PresetKind::case_iii, 0.5},
                            PresetId{PresetKind::case_ii, 4.0}})
    for (int n : {1, 2, 3}) {
      const CParams c = preset(id);
      const double lq = lowering_constant_closed(c, n);
      const double lm = lowering_constant_measured(c, n).constant;
      const double rq = raising_constant_closed(c, n);
      const double rm = raising_constant_measured(c, n).constant;
      const double prod = rq * lowering_constant_closed(c, n + 1);
      out << "    " << preset_name(id.kind) << "(" << short_real(id.lambda) << "), " << n << ", "
          << fmt(lq) << ", " << fmt(lm) << ", " << fmt(rq) << ", " << fmt(rm) << ", "
          << fmt(prod) << "\n";
    }
  out << "    the products reproduce n+1 for any normalization, so the quoted prefactors\n"
         "    are mutually consistent\n\n";

  out << "[5] Ground-state mean position\n";
  out << "    quoted : <x>_0 = (2EA + C)/(1 - B); oracle: quadrature; derived: C + 2EA/(1 - B)\n";
  {
    std::mt19937_64 rng(20);
    for (int i = 0; i < 3; ++i) {
      const HamCoeffs h = coeffs_from_c(sample_admissible(rng));
      const double quoted = (2.0 * h.E * h.A + h.C) / (1.0 - h.B);
      const double derived = ground_moments_closed(h).mean_x;
      const double oracle = moments_quadrature(h, 0).mean_x;
      out << "    B=" << short_real(h.B) << " C=" << short_real(h.C) << ": quoted "
          << fmt(quoted) << ", derived " << fmt(derived) << ", oracle " << fmt(oracle) << "\n";
    }
    out << "    the two expressions coincide only when B = 0 or C = 0\n";
  }
  return out.str();
}

}  // namespace oscdeform
