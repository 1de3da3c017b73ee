#pragma once

// Experiment drivers behind the CLI subcommands: determinant runs,
// asymptotic evaluation, sweep comparisons and RHP residual reports.

#include <chrono>
#include <iomanip>
#include <mutex>
#include <ostream>

#include "gskdet/asymptotics.hpp"
#include "gskdet/config.hpp"
#include "gskdet/kernel.hpp"
#include "gskdet/parallel.hpp"
#include "gskdet/rhp_solver.hpp"
#include "gskdet/selftest.hpp"

namespace gskdet::cli {

/// Central 4th-order finite difference of log det in x (phase-continued
/// across the stencil).
inline cplx dlogdet_fd(const ProblemSpec& spec, double step = 0.25) {
  double x = spec.x;
  std::vector<double> xs = {x - 2 * step, x - step, x, x + step, x + 2 * step};
  std::vector<cplx> lg = log_det_sweep(spec, xs);
  return (lg[0] - 8.0 * lg[1] + 8.0 * lg[3] - lg[4]) / (12.0 * step);
}

/// Builds the full record for one sweep point.
inline SweepRecord make_record(const ProblemSpec& spec, bool with_fd) {
  auto t0 = std::chrono::steady_clock::now();
  SweepRecord r;
  r.x = spec.x;
  r.det_num = fredholm_det(spec);
  Theorem1Result th = theorem1_det(spec);
  r.det_asym = th.value;
  r.abs_Bx = std::abs(th.leading);
  r.abs_b1_x32 = std::abs(th.saddle / th.leading);
  r.abs_osc_plus = std::abs(th.osc_plus);
  r.abs_osc_minus = std::abs(th.osc_minus);
  r.rel_err = std::abs(r.det_num / r.det_asym - 1.0);
  AsymCoeffs c = coeffs_dlogdet(spec);
  double x = spec.x;
  r.dlogdet_formula =
      c.a_m1 + c.a_0 / x + c.a_1 * std::pow(x, -1.5) + (c.a_2_osc + c.a_2_no) / (x * x);
  if (with_fd) r.dlogdet_fd = dlogdet_fd(spec);
  auto t1 = std::chrono::steady_clock::now();
  r.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return r;
}

inline int cmd_selftest(std::ostream& os, const SelftestOptions& opt = {}) {
  return run_selftest(os, opt);
}

inline int cmd_det(const RunConfig& cfg, std::ostream& os) {
  ProblemSpec spec = cfg.to_spec(cfg.xs.at(0));
  SweepRecord r = make_record(spec, /*with_fd=*/true);
  os << std::setprecision(15) << "det(I+V) at x = " << r.x << ": " << r.det_num.real()
     << (r.det_num.imag() < 0 ? " - " : " + ") << std::abs(r.det_num.imag()) << "i\n"
     << "asymptotic: " << r.det_asym.real() << (r.det_asym.imag() < 0 ? " - " : " + ")
     << std::abs(r.det_asym.imag()) << "i  (rel_err " << std::scientific << r.rel_err << ")\n";
  if (!cfg.out_path.empty()) append_csv_atomic(cfg.out_path, csv_row(r), true);
  return 0;
}

inline int cmd_asym(const RunConfig& cfg, std::ostream& os) {
  ProblemSpec spec = cfg.to_spec(cfg.xs.at(0));
  Theorem1Result th = theorem1_det(spec);
  AsymCoeffs c = coeffs_dlogdet(spec);
  SFactors s = S_factors(spec);
  auto prc = [&os](const char* name, cplx v) {
    os << "  " << std::left << std::setw(12) << name << std::setprecision(15) << v.real()
       << (v.imag() < 0 ? " - " : " + ") << std::abs(v.imag()) << "i\n";
  };
  os << "regime: " << to_string(spec.regime) << ", lambda0 = " << spec.lambda0 << "\n";
  os << "theorem-level factors:\n";
  prc("B_x[nu]", th.leading);
  prc("b1", b1(spec));
  prc("B_x[nu+1]", B_x(spec, +1));
  prc("B_x[nu-1]", B_x(spec, -1));
  prc("C1", C1_functional(spec));
  prc("S_plus", s.S_plus);
  prc("S_minus", s.S_minus);
  prc("S_zero", s.S_zero);
  prc("C[nu,u,g]", constant_C(spec));
  prc("det0", det0(spec));
  prc("det_asym", th.value);
  os << "dlogdet coefficients:\n";
  prc("a_-1", c.a_m1);
  prc("a_0", c.a_0);
  prc("a_1", c.a_1);
  prc("a_2_osc", c.a_2_osc);
  prc("a_2_no", c.a_2_no);
  return 0;
}

inline int cmd_compare(const RunConfig& cfg, std::ostream& os) {
  if (cfg.xs.size() < 3) {
    os << "compare: need an increasing x-list with >= 3 points\n";
    return 2;
  }
  for (std::size_t i = 1; i < cfg.xs.size(); ++i)
    if (cfg.xs[i] <= cfg.xs[i - 1]) {
      os << "compare: x-list must be strictly increasing\n";
      return 2;
    }
  std::vector<SweepRecord> recs(cfg.xs.size());
  std::string failure;
  std::mutex fail_mu;
  try {
    parallel_for(cfg.xs.size(), [&](std::size_t i) {
      ProblemSpec spec = cfg.to_spec(cfg.xs[i]);
      recs[i] = make_record(spec, /*with_fd=*/true);
    });
  } catch (const std::exception& e) {
    std::lock_guard<std::mutex> lock(fail_mu);
    failure = e.what();
  }
  if (!cfg.out_path.empty()) {
    std::string payload;
    for (const auto& r : recs)
      if (r.x > 0) payload += csv_row(r);
    if (!failure.empty()) payload += std::string("# aborted: ") + failure + "\n";
    append_csv_atomic(cfg.out_path, payload, true);
  }
  if (!failure.empty()) {
    os << "compare: aborted: " << failure << "\n";
    return 1;
  }
  os << csv_header();
  for (const auto& r : recs) os << csv_row(r);
  std::vector<double> xs, errs;
  for (const auto& r : recs) {
    xs.push_back(r.x);
    errs.push_back(std::max(r.rel_err, 1e-300));
  }
  double slope = fit_log_slope(xs, errs);
  os << "# rel_err decay exponent: " << std::setprecision(4) << slope << "\n";
  return 0;
}

inline int cmd_rhp(const RunConfig& cfg, std::ostream& os) {
  ProblemSpec spec = cfg.to_spec(cfg.xs.at(0));
  os << "regime: " << to_string(spec.regime) << ", lambda0 = " << spec.lambda0
     << ", delta = " << spec.delta << "\n";
  int failures = 0;
  auto report = [&](const char* name, double resid, double tol) {
    bool ok = resid <= tol;
    if (!ok) ++failures;
    os << (ok ? "PASS " : "FAIL ") << std::left << std::setw(28) << name << " residual "
       << std::scientific << std::setprecision(3) << resid << "  (tol " << tol << ")\n";
  };

  // parametrix determinants at mid-radius points
  double det_resid = 0.0;
  for (int k = 0; k < 8; ++k) {
    cplx dir = std::exp(iunit * (2.0 * pi * k / 8 + 0.19));
    cplx off = 0.5 * spec.delta * dir;
    det_resid = std::max(det_resid,
                         std::abs(parametrix_Pm(spec, cplx(-spec.q, 0.0) + off).det() - 1.0));
    det_resid = std::max(det_resid,
                         std::abs(parametrix_Pp(spec, cplx(spec.q, 0.0) + off).det() - 1.0));
    det_resid = std::max(det_resid,
                         std::abs(parametrix_P0(spec, cplx(spec.lambda0, 0.0) + off).det() - 1.0));
  }
  report("parametrix_unit_det", det_resid, 1e-9);

  PiSolution sol(spec);
  os << "  ||Delta|| sup on disk nodes: " << std::scientific << sol.delta_sup()
     << ", operator norm estimate: " << sol.operator_norm() << "\n";
  os << "  ||Delta|| sup on dropped exterior samples: " << exterior_delta_report(spec) << "\n";

  double detpi = 0.0;
  for (int k = 0; k < 10; ++k) {
    cplx z(spec.lambda0 + 2.1 * spec.delta * std::cos(0.6 * k + 0.3),
           2.2 * spec.delta * (std::sin(0.8 * k) + 1.3));
    if (!sol.clear_of_contour(z)) continue;
    detpi = std::max(detpi, std::abs(sol.at(z).det() - 1.0));
  }
  report("pi_unit_det", detpi, 1e-6);

  double decay_far = (sol.at(cplx(1e4, 1.0)) - Mat2::identity()).norm();
  double decay_near = (sol.at(cplx(10.0 + spec.lambda0, 1.0)) - Mat2::identity()).norm();
  report("pi_identity_at_infinity", decay_far / std::max(decay_near, 1e-300), 1e-3);

  cplx probe(spec.lambda0, 3.0);
  double mismatch = (sol.at(probe) - Pi_heuristic(spec, probe, 3)).norm();
  os << "  ||Pi_numeric - Pi_heuristic(3)|| at lambda0+3i: " << mismatch << "\n";

  cplx dd = dlogdet_rhp(spec, sol);
  cplx fd = dlogdet_fd(spec);
  report("dlogdet_rhp_vs_fd", std::abs(dd - fd) / std::abs(fd), 0.01);

  return failures == 0 ? 0 : 1;
}

}  // namespace gskdet::cli
