#pragma once

// A kernel instance: the phase functions nu, u, g with their exact
// derivatives, the interval endpoint q, the oscillation parameter x, the
// detected saddle point of u and the regime classification.

#include <string>

#include "gskdet/expr.hpp"
#include "gskdet/scalar.hpp"

namespace gskdet {

enum class Regime { TimeLike, SpaceLike };

inline const char* to_string(Regime r) {
  return r == Regime::TimeLike ? "time-like" : "space-like";
}

/// Newton search for the saddle point of u: the root of u' with
/// u''(lambda0) < 0.  Returns the saddle and its regime relative to q.
inline std::pair<double, Regime> detect_saddle(const AnalyticExpr& u, double guess, double q) {
  AnalyticExpr u1 = u.derivative(1);
  AnalyticExpr u2 = u.derivative(2);
  double lam = guess;
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    cplx d1 = u1(cplx(lam, 0.0));
    if (std::abs(d1) <= 1e-13) {
      converged = true;
      break;
    }
    cplx d2 = u2(cplx(lam, 0.0));
    if (std::abs(d2) < 1e-14)
      throw numeric_error("detect_saddle: u'' vanishes along the Newton path");
    lam -= (d1 / d2).real();
    if (!std::isfinite(lam)) throw numeric_error("detect_saddle: iteration diverged");
  }
  if (!converged) {
    cplx d1 = u1(cplx(lam, 0.0));
    if (std::abs(d1) > 1e-13)
      throw numeric_error("detect_saddle: Newton did not converge to a root of u'");
  }
  double upp = u2(cplx(lam, 0.0)).real();
  if (!(upp < 0.0))
    throw numeric_error("detect_saddle: u''(lambda0) >= 0; not a maximum-type saddle");
  if (std::abs(lam - q) < 1e-6 || std::abs(lam + q) < 1e-6)
    throw numeric_error("detect_saddle: lambda0 too close to +-q");
  if (lam < -q)
    throw numeric_error("detect_saddle: lambda0 < -q is outside the treated regimes");
  Regime reg = (lam < q) ? Regime::TimeLike : Regime::SpaceLike;
  return {lam, reg};
}

struct ProblemSpec {
  AnalyticExpr nu, u, g;
  AnalyticExpr nu1, nu2;      // nu', nu''
  AnalyticExpr u1, u2, u3, u4;  // u' .. u''''
  AnalyticExpr g1, g2;        // g', g''

  double q = 1.0;
  double x = 100.0;
  double lambda0 = 0.0;
  Regime regime = Regime::SpaceLike;

  double ce_width = 0.0;   // C_E truncation half-width
  double ce_height = 0.25;
  int n_nodes = 160;       // Nystrom nodes on [-q,q]
  int n_quad = 128;        // functional integrals on [-q,q]
  double delta = 0.0;      // RHP disk radius
  int n_circle = 128;      // nodes per disk boundary

  static ProblemSpec make(AnalyticExpr nu, AnalyticExpr u, AnalyticExpr g, double q, double x,
                          double saddle_guess = 0.0) {
    if (!(q > 0.0)) throw numeric_error("ProblemSpec: q > 0 required");
    if (!(x > 0.0)) throw numeric_error("ProblemSpec: x > 0 required");
    ProblemSpec s;
    s.nu = nu;
    s.u = u;
    s.g = g;
    s.nu1 = nu.derivative(1);
    s.nu2 = nu.derivative(2);
    s.u1 = u.derivative(1);
    s.u2 = u.derivative(2);
    s.u3 = s.u2.derivative(1);
    s.u4 = s.u3.derivative(1);
    s.g1 = g.derivative(1);
    s.g2 = g.derivative(2);
    s.q = q;
    s.x = x;
    auto [lam0, reg] = detect_saddle(u, saddle_guess, q);
    s.lambda0 = lam0;
    s.regime = reg;
    s.ce_width = std::max(q, std::abs(lam0)) + 8.0;
    s.delta = std::min(std::abs(lam0 - q), 2.0 * q) / 4.0;
    s.validate();
    return s;
  }

  ProblemSpec with_x(double new_x) const {
    ProblemSpec s = *this;
    if (!(new_x > 0.0)) throw numeric_error("ProblemSpec: x > 0 required");
    s.x = new_x;
    return s;
  }

  void validate() const {
    cplx nq = nu(cplx(q, 0.0)), nmq = nu(cplx(-q, 0.0));
    if (std::abs(nq.real()) >= 0.5 || std::abs(nmq.real()) >= 0.5)
      throw numeric_error("ProblemSpec: |Re nu(+-q)| < 1/2 violated");
    // sin(pi nu) must not vanish near [-q,q]; the identically-zero
    // free-fermion point nu == 0 is the one admitted exception (every
    // kernel formula is regular there in its sine-absorbed form)
    double min_sin = 1e300, max_nu = 0.0;
    for (int k = 0; k <= 64; ++k) {
      double t = -q + 2.0 * q * k / 64.0;
      cplx n = nu(cplx(t, 0.0));
      min_sin = std::min(min_sin, std::abs(std::sin(pi * n)));
      max_nu = std::max(max_nu, std::abs(n));
    }
    if (min_sin < 1e-8 && max_nu > 1e-14)
      throw numeric_error("ProblemSpec: sin(pi nu) vanishes on [-q,q]");
    cplx upp = u2(cplx(lambda0, 0.0));
    if (!(upp.real() < 0.0))
      throw numeric_error("ProblemSpec: u''(lambda0) < 0 violated");
  }

  // scalar accessors at complex argument
  cplx nu_at(cplx z) const { return nu(z); }
  cplx u_at(cplx z) const { return u(z); }
  cplx g_at(cplx z) const { return g(z); }

  /// e(lambda) = exp(-i x u / 2 - g / 2)
  cplx e_fn(cplx z) const { return std::exp(-0.5 * iunit * x * u(z) - 0.5 * g(z)); }
  /// e^2(lambda)
  cplx e2(cplx z) const { return std::exp(-iunit * x * u(z) - g(z)); }
  /// e^{-2}(lambda)
  cplx einv2(cplx z) const { return std::exp(iunit * x * u(z) + g(z)); }
  /// d/dz log e = -(i x u' + g')/2
  cplx dlog_e(cplx z) const { return -0.5 * (iunit * x * u1(z) + g1(z)); }
};

}  // namespace gskdet
