#pragma once

// Test-only oracles, independent of the library implementation paths
// they check.

#include <complex>

#include "gskdet/quadrature.hpp"
#include "gskdet/scalar.hpp"

namespace oracles {

using gskdet::cplx;
using gskdet::pi;

/// log Gamma by high-order Stirling after lifting the argument; only
/// shares std::log with the library's Lanczos route.
inline cplx log_gamma_stirling(cplx z) {
  cplx shift = 0.0;
  while (z.real() < 25.0) {
    shift += std::log(z);
    z += 1.0;
  }
  // Stirling with Bernoulli terms B_{2n}/(2n(2n-1) z^{2n-1})
  static const double bern[] = {1.0 / 6,      -1.0 / 30,     1.0 / 42,      -1.0 / 30,
                                5.0 / 66,     -691.0 / 2730, 7.0 / 6,       -3617.0 / 510,
                                43867.0 / 798};
  cplx r = (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi);
  cplx zp = z;
  for (std::size_t n = 1; n <= sizeof(bern) / sizeof(bern[0]); ++n) {
    r += bern[n - 1] / (2.0 * n * (2.0 * n - 1.0) * zp);
    zp *= z * z;
  }
  return r - shift;
}

/// Kummer series in long double precision, 400-term cap.
inline cplx phi_series_ld(cplx a, cplx c, cplx z) {
  std::complex<long double> term = 1.0L, sum = 1.0L;
  std::complex<long double> al(a.real(), a.imag()), cl(c.real(), c.imag()),
      zl(z.real(), z.imag());
  for (int n = 0; n < 400; ++n) {
    term *= (al + (long double)n) / (cl + (long double)n) * zl / (long double)(n + 1);
    sum += term;
    if (std::abs(term) < 1e-22L * std::abs(sum) && n > 4) break;
  }
  return cplx((double)sum.real(), (double)sum.imag());
}

/// int_0^z pi t cot(pi t) dt by quadrature (integrand finite at 0).
inline cplx cot_integral(double z) {
  gskdet::QuadratureRule r = gskdet::gauss_legendre(128, 0.0, z);
  gskdet::KahanSum s;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    double t = r.nodes[i].real();
    double v = (std::abs(t) < 1e-10) ? 1.0 : pi * t / std::tan(pi * t);
    s.add(r.weights[i] * v);
  }
  return s.value();
}

/// Exponential integral Ei(x) for real x != 0 by the convergent series
/// Ei(x) = gamma + log|x| + sum x^n/(n n!).
inline double ei(double x) {
  const double euler_gamma = 0.57721566490153286060651209008240243;
  double sum = 0.0, term = 1.0;
  for (int n = 1; n < 120; ++n) {
    term *= x / n;
    sum += term / n;
    if (std::abs(term / n) < 1e-18 * (1.0 + std::abs(sum))) break;
  }
  return euler_gamma + std::log(std::abs(x)) + sum;
}

/// Least-squares slope helper re-exported for the tests.
using gskdet::fit_log_slope;

}  // namespace oracles
