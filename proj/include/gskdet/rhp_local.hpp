#pragma once

// Local RHP data: the scalar solution alpha of the diagonal jump, the
// edge coefficient functions C^{(L/R)}, the CHF parametrices around
// lambda0 and +-q, their jump matrices, and the matrix coefficients of
// the inverse-parametrix expansions.

#include "gskdet/mat2.hpp"
#include "gskdet/problem.hpp"
#include "gskdet/quadrature.hpp"
#include "gskdet/special_functions.hpp"

namespace gskdet {

// ---------------------------------------------------------------------
// alpha and kappa

/// log kappa(lam) = -int_{-q}^{q} (nu(lam)-nu(mu))/(lam-mu) dmu.  The
/// integrand is analytic in mu with a removable point at mu = lam.
inline cplx log_kappa(const ProblemSpec& spec, cplx lam) {
  QuadratureRule r = gauss_legendre(spec.n_quad, -spec.q, spec.q);
  const cplx nl = spec.nu(lam);
  KahanSum s;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    cplx mu = r.nodes[i];
    cplx d = lam - mu;
    cplx val = (std::abs(d) < 1e-8) ? spec.nu1(lam) : (nl - spec.nu(mu)) / d;
    s.add(r.weights[i] * val);
  }
  return -s.value();
}

inline cplx kappa(const ProblemSpec& spec, cplx lam) { return std::exp(log_kappa(spec, lam)); }

/// alpha(lam) = kappa(lam) ((lam+q)/(lam-q))^{nu(lam)} for lam off the
/// cut [-q,q]; tends to 1 at infinity.
inline cplx alpha(const ProblemSpec& spec, cplx lam) {
  if (lam.imag() == 0.0 && std::abs(lam.real()) <= spec.q)
    throw numeric_error("alpha: lam on the cut [-q,q]; use alpha_sided");
  cplx ratio = (lam + spec.q) / (lam - spec.q);
  return kappa(spec, lam) * pow_principal(ratio, spec.nu(lam));
}

/// Boundary value of alpha on the open cut; side = +1 from above,
/// side = -1 from below.
inline cplx alpha_sided(const ProblemSpec& spec, double lam, int side) {
  if (!(lam > -spec.q && lam < spec.q))
    throw numeric_error("alpha_sided: lam must lie inside (-q,q)");
  if (side != 1 && side != -1) throw std::invalid_argument("alpha_sided: side must be +-1");
  double mag = (lam + spec.q) / (spec.q - lam);
  cplx logr(std::log(mag), side > 0 ? -pi : pi);
  cplx z(lam, 0.0);
  return std::exp(log_kappa(spec, z) + spec.nu(z) * logr);
}

// ---------------------------------------------------------------------
// edge coefficient functions

namespace rhp_detail {

/// (e^w - 1)/w, stable at w = 0.
inline cplx expm1_over(cplx w) {
  if (std::abs(w) < 1e-4) {
    return 1.0 + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0 + w / 120.0)));
  }
  return (std::exp(w) - 1.0) / w;
}

/// sin(pi nu) / (pi nu), stable at nu = 0.
inline cplx sinc_pi(cplx nu) {
  cplx w = pi * nu;
  if (std::abs(w) < 1e-4) {
    cplx w2 = w * w;
    return 1.0 - w2 / 6.0 * (1.0 - w2 / 20.0);
  }
  return std::sin(w) / w;
}

/// (u(s) - u(c)) / (s - c) continued through s = c.
inline cplx du_ratio(const ProblemSpec& spec, cplx s, double c) {
  cplx d = s - cplx(c, 0.0);
  if (std::abs(d) < 1e-7) {
    cplx zc(c, 0.0);
    return spec.u1(zc) + d * (0.5 * spec.u2(zc) + d * (spec.u3(zc) / 6.0));
  }
  return (spec.u(s) - spec.u(cplx(c, 0.0))) / d;
}

}  // namespace rhp_detail

/// C^{(L)} without its (e^{-2 i pi nu} - 1) factor; analytic on the disk
/// around -q.
inline cplx c_left_reduced(const ProblemSpec& spec, cplx s) {
  const double q = spec.q, x = spec.x;
  cplx nu = spec.nu(s);
  cplx k2 = std::exp(2.0 * log_kappa(spec, s));
  cplx pow1 = pow_principal(x * (cplx(q, 0.0) - s), -2.0 * nu);
  cplx ratio = 1.0 / rhp_detail::du_ratio(spec, s, -q);  // (s+q)/(u(s)-u(-q))
  cplx pow_ratio = pow_principal(ratio, 2.0 * nu);
  cplx eg = std::exp(-spec.g(s) - iunit * x * spec.u(cplx(-q, 0.0)));
  return -k2 * eg * pow1 * pow_ratio;
}

/// C^{(R)} without its (e^{-2 i pi nu} - 1) factor; analytic on the disk
/// around q.  The du ratio gets the +i0^+ branch, which matters in the
/// time-like regime where u'(q) < 0.
inline cplx c_right_reduced(const ProblemSpec& spec, cplx s) {
  const double q = spec.q, x = spec.x;
  cplx nu = spec.nu(s);
  cplx k2 = std::exp(2.0 * log_kappa(spec, s));
  cplx ratio = rhp_detail::du_ratio(spec, s, q);  // (u(s)-u(q))/(s-q)
  cplx pow_ratio = pow_upper(ratio, 2.0 * nu);
  cplx pow1 = pow_principal(x * (s + q), 2.0 * nu);
  cplx eg = std::exp(-spec.g(s) - iunit * x * spec.u(cplx(q, 0.0)));
  return -k2 * eg * pow_ratio * pow1;
}

inline cplx e_ratio(cplx nu) {
  return -2.0 * iunit * pi * nu * rhp_detail::expm1_over(-2.0 * iunit * pi * nu);
}

inline cplx c_left(const ProblemSpec& spec, cplx s) {
  return c_left_reduced(spec, s) * e_ratio(spec.nu(s));
}

inline cplx c_right(const ProblemSpec& spec, cplx s) {
  return c_right_reduced(spec, s) * e_ratio(spec.nu(s));
}

/// CHF coefficient pair of a parametrix; b12 b21 = -nu^2.
struct EdgeCoeffs {
  cplx b12;
  cplx b21;
};

/// Coefficients of the parametrix at -q (same form in both regimes).
inline EdgeCoeffs edge_b_minus(const ProblemSpec& spec, cplx s) {
  cplx nu = spec.nu(s);
  cplx cl_red = c_left_reduced(spec, s);
  // sin(pi nu)/(e^{-2 i pi nu}-1) and its reciprocal, nu-cancelled
  cplx s1 = rhp_detail::sinc_pi(nu);
  cplx e1 = rhp_detail::expm1_over(-2.0 * iunit * pi * nu);
  cplx g1m = gamma_fn(1.0 - nu);
  EdgeCoeffs out;
  out.b12 = -iunit * g1m * g1m / pi * (s1 / (-2.0 * iunit * e1)) / cl_red;
  // -i pi C_L inv_gamma(-nu)^2 / sin(pi nu); inv_gamma(-nu) = -nu/Gamma(1-nu)
  out.b21 = -iunit * pi * cl_red * (-2.0 * iunit * pi * nu) * e1 * (nu * nu) /
            (g1m * g1m * pi * nu * s1);
  return out;
}

/// Coefficients of the parametrix at q; regime-dependent.
inline EdgeCoeffs edge_b_plus(const ProblemSpec& spec, cplx s) {
  cplx nu = spec.nu(s);
  cplx cr_red = c_right_reduced(spec, s);
  cplx s1 = rhp_detail::sinc_pi(nu);
  cplx e1 = rhp_detail::expm1_over(-2.0 * iunit * pi * nu);
  EdgeCoeffs out;
  if (spec.regime == Regime::TimeLike) {
    cplx g1m = gamma_fn(1.0 - nu);
    // i pi / (C_R Gamma^2(-nu) sin(pi nu)): the nu factors cancel
    out.b12 = iunit * pi / (cr_red * g1m * g1m * (-2.0 * iunit * pi) * e1 * pi * s1);
    out.b21 = iunit / pi * g1m * g1m * cr_red * (-2.0 * iunit * pi * nu) * e1 * pi * nu * s1;
  } else {
    cplx g1p = gamma_fn(1.0 + nu);
    out.b12 = iunit * g1p * g1p / pi * (s1 / (-2.0 * iunit * e1)) / cr_red;
    // i pi C_R inv_gamma(nu)^2 / sin(pi nu); inv_gamma(nu) = nu/Gamma(1+nu)
    out.b21 = iunit * pi * cr_red * (-2.0 * iunit * pi * nu) * e1 * (nu * nu) /
              (g1p * g1p * pi * nu * s1);
  }
  return out;
}

// ---------------------------------------------------------------------
// saddle parametrization

struct OmegaH {
  cplx omega;
  cplx h;
};

/// Local parametrization u(lam) - u(lambda0) = -omega^2(lam) with
/// omega = (lam - lambda0) h(lam) and h(lambda0) = sqrt(-u''(lambda0)/2) > 0.
inline OmegaH omega_h(const ProblemSpec& spec, cplx lam) {
  const cplx z0(spec.lambda0, 0.0);
  cplx d = lam - z0;
  cplx w;
  if (std::abs(d) < 1e-6) {
    w = -0.5 * spec.u2(z0) - d * (spec.u3(z0) / 6.0 + d * spec.u4(z0) / 24.0);
  } else {
    w = -(spec.u(lam) - spec.u(z0)) / (d * d);
  }
  if (!(w.real() > 0.0))
    throw numeric_error("omega_h: branch of h left the right half-plane; reduce delta");
  cplx h = std::sqrt(w);
  return {d * h, h};
}

// ---------------------------------------------------------------------
// jump matrix scalars

/// P(lam) = alpha^{-2}(lam) e^{-2}(lam); the sigma^+ jump entry of M.
inline cplx jump_P(const ProblemSpec& spec, cplx lam) {
  cplx a = alpha(spec, lam);
  return spec.einv2(lam) / (a * a);
}

/// Q(lam) = alpha^2 e^2 (e^{-2 i pi nu} - 1)^2 with alpha continued from
/// the lower half-plane (N and N^{(L)}).
inline cplx jump_Q_lower(const ProblemSpec& spec, cplx lam) {
  cplx a = (lam.imag() == 0.0 && std::abs(lam.real()) < spec.q)
               ? alpha_sided(spec, lam.real(), -1)
               : alpha(spec, lam);
  cplx f = e_ratio(spec.nu(lam));
  return a * a * spec.e2(lam) * f * f;
}

/// Q^{(R)}(lam) = alpha_+^2 e^{4 i pi nu} e^2 (e^{-2 i pi nu} - 1)^2,
/// the upper-half-plane continuation used by N^{(R)} (time-like).
inline cplx jump_Q_upper(const ProblemSpec& spec, cplx lam) {
  cplx a = (lam.imag() == 0.0 && std::abs(lam.real()) < spec.q)
               ? alpha_sided(spec, lam.real(), +1)
               : alpha(spec, lam);
  cplx nu = spec.nu(lam);
  cplx f = e_ratio(nu);
  return a * a * std::exp(4.0 * iunit * pi * nu) * spec.e2(lam) * f * f;
}

inline Mat2 jump_M(const ProblemSpec& spec, cplx lam) {
  return Mat2::identity() + jump_P(spec, lam) * sigma_plus;
}

inline Mat2 jump_N_lower(const ProblemSpec& spec, cplx lam) {
  return Mat2::identity() + jump_Q_lower(spec, lam) * sigma_minus;
}

inline Mat2 jump_N_upper(const ProblemSpec& spec, cplx lam) {
  return Mat2::identity() + jump_Q_upper(spec, lam) * sigma_minus;
}

/// Local parameterization of P near -q through C^{(L)}; valid in the
/// upper neighborhood where the M jump curve lives.
inline cplx jump_P_local_left(const ProblemSpec& spec, cplx lam) {
  cplx nu = spec.nu(lam);
  cplx zeta = spec.x * (spec.u(lam) - spec.u(cplx(-spec.q, 0.0)));
  return std::exp(iunit * zeta) * pow_principal(zeta, -2.0 * nu) *
         (std::exp(2.0 * iunit * pi * nu) - 1.0) / c_left(spec, lam);
}

/// Local parameterization of P near q.  Time-like uses
/// zeta = x(u(q)-u(lam)); space-like uses x(u(lam)-u(q)) with a sign.
inline cplx jump_P_local_right(const ProblemSpec& spec, cplx lam) {
  cplx nu = spec.nu(lam);
  cplx uq = spec.u(cplx(spec.q, 0.0));
  if (spec.regime == Regime::TimeLike) {
    cplx zeta = spec.x * (uq - spec.u(lam));
    return std::exp(-iunit * zeta) * pow_principal(zeta, 2.0 * nu) *
           (std::exp(2.0 * iunit * pi * nu) - 1.0) / c_right(spec, lam);
  }
  cplx zeta = spec.x * (spec.u(lam) - uq);
  return -std::exp(iunit * zeta) * pow_principal(zeta, 2.0 * nu) *
         (std::exp(-2.0 * iunit * pi * nu) - 1.0) / c_right(spec, lam);
}

// ---------------------------------------------------------------------
// parametrices

namespace rhp_detail {

/// Psi with a deterministic +i0 side when the argument lands exactly on
/// the branch cut (quadrature nodes on the jump rays of exactly
/// quadratic phase functions do this).
inline cplx psi_cut_safe(cplx a, cplx c, cplx z) {
  if (z.imag() == 0.0 && z.real() < 0.0) z = cplx(z.real(), 1e-15 * std::abs(z.real()));
  return tricomi_psi(a, c, z);
}

}  // namespace rhp_detail

/// Entry function of the saddle parametrix: b-bar_21 (time-like) or
/// b-bar_12 (space-like); holomorphic on the saddle disk.
inline cplx saddle_b_bar(const ProblemSpec& spec, cplx lam) {
  cplx exu0 = std::exp(iunit * spec.x * spec.u(cplx(spec.lambda0, 0.0)));
  if (spec.regime == Regime::TimeLike) {
    cplx a = (lam.imag() == 0.0 && std::abs(lam.real()) < spec.q)
                 ? alpha_sided(spec, lam.real(), -1)
                 : alpha(spec, lam);
    cplx nu = spec.nu(lam);
    cplx f = e_ratio(nu);
    cplx v = a * a * f * f * std::exp(-spec.g(lam)) / exu0;
    if (lam.imag() > 0.0) v *= std::exp(4.0 * iunit * pi * nu);
    return v;
  }
  cplx a = alpha(spec, lam);
  return std::exp(spec.g(lam)) * exu0 / (a * a);
}

/// Parametrix around the saddle point lambda0.
inline Mat2 parametrix_P0(const ProblemSpec& spec, cplx lam) {
  OmegaH oh = omega_h(spec, lam);
  cplx w2 = oh.omega * oh.omega;
  if (std::abs(spec.x * w2) < 1e-14)
    throw numeric_error("parametrix_P0: evaluation point too close to lambda0");
  cplx bb = saddle_b_bar(spec, lam);
  cplx pref = std::sqrt(pi * spec.x) * oh.omega / (2.0 * iunit * pi);
  if (spec.regime == Regime::TimeLike) {
    cplx psi = rhp_detail::psi_cut_safe(1.0, 1.5, iunit * spec.x * w2);
    return Mat2::identity() - (bb * std::exp(-iunit * pi / 4.0) * pref * psi) * sigma_minus;
  }
  cplx psi = rhp_detail::psi_cut_safe(1.0, 1.5, -iunit * spec.x * w2);
  return Mat2::identity() - (bb * std::exp(iunit * pi / 4.0) * pref * psi) * sigma_plus;
}

namespace rhp_detail {

inline Mat2 sector_L(cplx arg_variable, cplx phase_entry, bool swap_slots) {
  double th = std::arg(arg_variable);
  if (th > 0.5 * pi)
    return swap_slots ? Mat2::diag(phase_entry, 1.0) : Mat2::diag(1.0, phase_entry);
  if (th < -0.5 * pi)
    return swap_slots ? Mat2::diag(1.0, phase_entry) : Mat2::diag(phase_entry, 1.0);
  return Mat2::identity();
}

}  // namespace rhp_detail

/// Parametrix around -q (identical in both regimes).
inline Mat2 parametrix_Pm(const ProblemSpec& spec, cplx lam) {
  const cplx zmq(-spec.q, 0.0);
  cplx nu = spec.nu(lam);
  cplx zeta = spec.u(lam) - spec.u(zmq);
  if (std::abs(zeta) < 1e-13)
    throw numeric_error("parametrix_Pm: evaluation point too close to -q");
  EdgeCoeffs b = edge_b_minus(spec, lam);
  cplx xz = spec.x * zeta;
  Mat2 psi{rhp_detail::psi_cut_safe(nu, 1.0, -iunit * xz),
           iunit * b.b12 * rhp_detail::psi_cut_safe(1.0 - nu, 1.0, iunit * xz),
           -iunit * b.b21 * rhp_detail::psi_cut_safe(1.0 + nu, 1.0, -iunit * xz),
           rhp_detail::psi_cut_safe(-nu, 1.0, iunit * xz)};
  // L = I on |arg zeta| < pi/2; diag(1, e^{2 i pi nu}) above; swapped below
  Mat2 L = rhp_detail::sector_L(zeta, std::exp(2.0 * iunit * pi * nu), false);
  Mat2 tail = Mat2::diag(pow_principal(xz, nu), pow_principal(xz, -nu));
  return psi * L * tail * std::exp(-iunit * pi * nu / 2.0);
}

/// Parametrix around q; the time-like and space-like variants differ in
/// the b coefficients, the power tail and the constant phase.
inline Mat2 parametrix_Pp(const ProblemSpec& spec, cplx lam) {
  const cplx zq(spec.q, 0.0);
  cplx nu = spec.nu(lam);
  cplx zeta = spec.u(lam) - spec.u(zq);
  if (std::abs(zeta) < 1e-13)
    throw numeric_error("parametrix_Pp: evaluation point too close to q");
  EdgeCoeffs b = edge_b_plus(spec, lam);
  cplx xz = spec.x * zeta;
  Mat2 psi{rhp_detail::psi_cut_safe(-nu, 1.0, -iunit * xz),
           iunit * b.b12 * rhp_detail::psi_cut_safe(1.0 + nu, 1.0, iunit * xz),
           -iunit * b.b21 * rhp_detail::psi_cut_safe(1.0 - nu, 1.0, -iunit * xz),
           rhp_detail::psi_cut_safe(nu, 1.0, iunit * xz)};
  if (spec.regime == Regime::TimeLike) {
    // L sectors follow arg[u(q)-u(lam)]; e^{2 i pi nu} sits in the first
    // slot above the axis
    Mat2 L = rhp_detail::sector_L(-zeta, std::exp(2.0 * iunit * pi * nu), true);
    Mat2 tail = Mat2::diag(pow_principal(-spec.x * zeta, -nu), pow_principal(-spec.x * zeta, nu));
    return psi * L * tail * std::exp(-iunit * pi * nu / 2.0);
  }
  Mat2 L = rhp_detail::sector_L(zeta, std::exp(-2.0 * iunit * pi * nu), false);
  Mat2 tail = Mat2::diag(pow_principal(xz, -nu), pow_principal(xz, nu));
  return psi * L * tail * std::exp(iunit * pi * nu / 2.0);
}

// ---------------------------------------------------------------------
// expansion matrices of the inverse parametrices

namespace rhp_detail {

/// (s -+ q)/(u(s) - u(-+q)) continued through the edge.
inline cplx edge_ratio(const ProblemSpec& spec, int side, cplx s) {
  return 1.0 / du_ratio(spec, s, side > 0 ? spec.q : -spec.q);
}

}  // namespace rhp_detail

/// V^{(side;n)}(s): matrix coefficient of the expansion of the inverse
/// edge parametrix; side = -1 for -q, +1 for q; n in {0,1}.
inline Mat2 Vmat(const ProblemSpec& spec, int side, int n, cplx s) {
  if (n < 0 || n > 1) throw std::invalid_argument("Vmat: n must be 0 or 1");
  if (side != 1 && side != -1) throw std::invalid_argument("Vmat: side must be +-1");
  cplx nu = spec.nu(s);
  cplx ratio = rhp_detail::edge_ratio(spec, side, s);
  cplx pre = (n == 0) ? -iunit : cplx(-1.0, 0.0);  // (-i)^{n+1}
  cplx rp = (n == 0) ? ratio : ratio * ratio;
  double sgn = (n % 2 == 0) ? -1.0 : 1.0;  // (-1)^{n+1}
  Mat2 m;
  if (side < 0) {
    EdgeCoeffs b = edge_b_minus(spec, s);
    m = Mat2{sgn * pochhammer_sq(-nu, n + 1), iunit * double(n + 1) * b.b12 * sgn * pochhammer_sq(1.0 - nu, n),
             -iunit * double(n + 1) * b.b21 * pochhammer_sq(1.0 + nu, n), pochhammer_sq(nu, n + 1)};
  } else {
    EdgeCoeffs b = edge_b_plus(spec, s);
    m = Mat2{sgn * pochhammer_sq(nu, n + 1), iunit * double(n + 1) * b.b12 * sgn * pochhammer_sq(1.0 + nu, n),
             -iunit * double(n + 1) * b.b21 * pochhammer_sq(1.0 - nu, n), pochhammer_sq(-nu, n + 1)};
  }
  return (pre * rp) * m;
}

/// d^{(n)}(s): scalar coefficient of the expansion of the inverse saddle
/// parametrix; n in {0,1}.
inline cplx d_coeff(const ProblemSpec& spec, int n, cplx s) {
  if (n < 0 || n > 1) throw std::invalid_argument("d_coeff: n must be 0 or 1");
  OmegaH oh = omega_h(spec, s);
  cplx h_pow = (n == 0) ? oh.h : oh.h * oh.h * oh.h;
  double gam = std::tgamma(0.5 + n);
  cplx bb = saddle_b_bar(spec, s);
  cplx i_pow = (n == 0) ? cplx(1.0) : iunit;  // i^n
  if (spec.regime == Regime::TimeLike) {
    return -i_pow * gam / (2.0 * pi) * std::exp(-iunit * pi / 4.0) * bb / h_pow;
  }
  return bb * std::conj(i_pow) * gam / (2.0 * pi) * std::exp(iunit * pi / 4.0) / h_pow;
}

/// Derivatives f^{(k)}(center), k = 0..max_order, of an analytic Mat2
/// field by trapezoid Cauchy integrals on a small circle.
template <class F>
std::vector<Mat2> cauchy_derivatives(F&& f, cplx center, double radius, int n, int max_order) {
  std::vector<Mat2> vals(static_cast<std::size_t>(n));
  std::vector<cplx> phases(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    double th = 2.0 * pi * (j + 0.5) / n;  // off the jump rays
    phases[j] = std::exp(iunit * th);
    vals[j] = f(center + radius * phases[j]);
  }
  std::vector<Mat2> out(std::size_t(max_order) + 1);
  double factorial = 1.0;
  for (int k = 0; k <= max_order; ++k) {
    if (k > 0) factorial *= k;
    Mat2 acc = Mat2::zero();
    for (int j = 0; j < n; ++j) {
      cplx w = std::pow(phases[j], -double(k)) / double(n);
      acc = acc + w * vals[j];
    }
    out[std::size_t(k)] = (factorial / std::pow(radius, double(k))) * acc;
  }
  return out;
}

}  // namespace gskdet
