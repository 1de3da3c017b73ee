#pragma once

// Complex special functions backing the parametrices and the closed-form
// asymptotics: log Gamma, Barnes G, squared Pochhammer symbols, Kummer's
// Phi and Tricomi's Psi confluent hypergeometric functions.

#include <algorithm>
#include <array>
#include <cmath>

#include "gskdet/scalar.hpp"

namespace gskdet {

struct CHFParams {
  cplx a;
  cplx c;
  cplx z;
};

namespace sf_detail {

// Lanczos g = 7, 9-term coefficient set.
inline constexpr double lanczos_g = 7.0;
inline constexpr std::array<double, 9> lanczos_c = {
    0.99999999999980993227684700473478,
    676.520368121885098567009190444019,
    -1259.13921672240287047156078755283,
    771.3234287776530788486528258894,
    -176.61502916214059906584551354,
    12.507343278686904814458936853,
    -0.13857109526572011689554707,
    9.984369578019570859563e-6,
    1.50563273514931155834e-7};

inline cplx lanczos_series(cplx z) {
  cplx s = lanczos_c[0];
  for (std::size_t i = 1; i < lanczos_c.size(); ++i) s += lanczos_c[i] / (z + double(i));
  return s;
}

inline bool near_nonpositive_integer(cplx z, double tol = 1e-12) {
  if (z.real() > 0.5) return false;
  double r = std::round(z.real());
  return r <= 0.0 && std::abs(z.real() - r) < tol && std::abs(z.imag()) < tol;
}

}  // namespace sf_detail

/// Principal-branch log Gamma (continuous off the negative real axis).
inline cplx log_gamma(cplx z) {
  if (sf_detail::near_nonpositive_integer(z))
    throw numeric_error("log_gamma: pole at non-positive integer");
  if (z.real() < 0.5) {
    // reflection; the log sin term is unwound so the result stays on the
    // principal branch for moderate |Im z|
    cplx ls = std::log(std::sin(pi * z));
    if (std::abs(z.imag()) > 7.0) {
      // log sin(pi z) ~ -i sgn(Im z) pi z + log(+-i/2); avoid overflow wrap
      double sgn = z.imag() > 0 ? 1.0 : -1.0;
      ls = -iunit * sgn * pi * z + std::log(cplx(0.0, sgn * 0.5)) +
           std::log(1.0 - std::exp(2.0 * iunit * sgn * pi * z));
    }
    return std::log(cplx(pi)) - ls - log_gamma(1.0 - z);
  }
  cplx zm = z - 1.0;
  cplx t = zm + sf_detail::lanczos_g + 0.5;
  return 0.5 * std::log(2.0 * pi) + (zm + 0.5) * std::log(t) - t +
         std::log(sf_detail::lanczos_series(zm));
}

inline cplx gamma_fn(cplx z) { return std::exp(log_gamma(z)); }

/// 1/Gamma(z); entire, exact zero at the poles of Gamma.
inline cplx inv_gamma(cplx z) {
  if (sf_detail::near_nonpositive_integer(z)) return cplx(0.0);
  if (z.real() < 0.5) return std::sin(pi * z) * gamma_fn(1.0 - z) / pi;
  return std::exp(-log_gamma(z));
}

/// ((z)_n)^2 with (z)_0 = 1.
inline cplx pochhammer_sq(cplx z, int n) {
  if (n < 0) throw std::invalid_argument("pochhammer_sq: n >= 0 required");
  cplx p = 1.0;
  for (int k = 0; k < n; ++k) p *= z + double(k);
  return p * p;
}

/// log of Barnes G via upward recurrence into the asymptotic region.
/// G(1) = G(2) = G(3) = 1 and G(z+1) = Gamma(z) G(z).
inline cplx log_barnes_g(cplx z) {
  if (std::abs(z) > 20.5)
    throw numeric_error("log_barnes_g: |z| beyond documented range");
  if (sf_detail::near_nonpositive_integer(z)) {
    // G vanishes at non-positive integers; log diverges.
    throw numeric_error("log_barnes_g: zero of G at non-positive integer");
  }
  // lift until the asymptotic series at zs is accurate
  cplx zs = z;
  cplx shift = 0.0;
  while (zs.real() < 18.0) {
    shift += log_gamma(zs);
    zs += 1.0;
  }
  // log G(zs) expansion around infinity, zs = 1 + w
  cplx w = zs - 1.0;
  const double log_2pi = std::log(2.0 * pi);
  const double zeta_prime_m1 = -0.16542114370045092921391966024278;
  cplx lw = std::log(w);
  cplx r = 0.5 * w * w * lw - 0.75 * w * w + 0.5 * w * log_2pi - lw / 12.0 + zeta_prime_m1;
  // Bernoulli tail: sum B_{2k+2} / (4 k (k+1) w^{2k})
  static constexpr std::array<double, 6> bern = {-1.0 / 30,  1.0 / 42,      -1.0 / 30,
                                                 5.0 / 66,   -691.0 / 2730, 7.0 / 6};
  cplx w2 = w * w;
  cplx wp = w2;
  for (std::size_t k = 1; k <= bern.size(); ++k) {
    double den = 4.0 * double(k) * double(k + 1);
    r += bern[k - 1] / (den * wp);
    wp *= w2;
  }
  return r - shift;
}

inline cplx barnes_g(cplx z) { return std::exp(log_barnes_g(z)); }

/// Kummer's Phi(a,c;z) by its power series; compensated summation,
/// terms until |term| < 1e-16 |sum| twice in a row, hard cap 500.
inline cplx kummer_phi(const CHFParams& p) {
  if (sf_detail::near_nonpositive_integer(p.c))
    throw numeric_error("kummer_phi: c is a non-positive integer");
  KahanSum sum;
  sum.add(1.0);
  cplx term = 1.0;
  int small_streak = 0;
  for (int n = 0; n < 500; ++n) {
    term *= (p.a + double(n)) / (p.c + double(n)) * p.z / double(n + 1);
    sum.add(term);
    if (std::abs(term) < 1e-16 * std::abs(sum.value())) {
      if (++small_streak >= 2) return sum.value();
    } else {
      small_streak = 0;
    }
  }
  throw numeric_error("kummer_phi: series did not converge within 500 terms");
}

inline cplx kummer_phi(cplx a, cplx c, cplx z) { return kummer_phi(CHFParams{a, c, z}); }

namespace sf_detail {

// Divergent large-z expansion of Psi, truncated at the smallest term.
// Valid for -3pi/2 < arg z < 3pi/2; the truncation floor is ~e^{-|z|}.
inline cplx psi_asymptotic(cplx a, cplx c, cplx z) {
  KahanSum sum;
  sum.add(1.0);
  cplx term = 1.0;
  double best = 1.0;
  for (int n = 0; n < 80; ++n) {
    term *= -(a + double(n)) * (a - c + 1.0 + double(n)) / (double(n + 1) * z);
    double m = std::abs(term);
    if (m > best) break;  // past the optimal truncation point
    sum.add(term);
    best = m;
    if (m < 1e-18) break;
  }
  return pow_principal(z, -a) * sum.value();
}

// Phi<->Psi connection formula; c away from the integers.
inline cplx psi_connection(cplx a, cplx c, cplx z, double extra_z_phase = 0.0) {
  cplx t1 = gamma_fn(1.0 - c) * inv_gamma(a - c + 1.0) * kummer_phi(a, c, z);
  cplx t2 = gamma_fn(c - 1.0) * inv_gamma(a) *
            pow_principal(z, 1.0 - c) * std::exp(iunit * extra_z_phase * (1.0 - c)) *
            kummer_phi(a - c + 1.0, 2.0 - c, z);
  return t1 + t2;
}

// Laplace representation Psi(a,c;z) = 1/Gamma(a) int_0^inf e^{-zt}
// t^{a-1} (1+t)^{c-a-1} dt on the rotated ray t = s e^{i theta} with
// theta ~ -arg z, by exp-sinh (double-exponential) quadrature.  Valid
// for any z off the cut; free of the integer-c degeneracy, and the
// route of choice wherever the Kummer series cancel badly.  Needs
// Re a > 0 (lifted below).
inline cplx psi_laplace_raw(cplx a, cplx c, cplx z) {
  // keep the ray at least 0.3 rad away from the (1+t) branch point
  const double theta_max = pi - 0.3;
  double theta = std::clamp(-std::arg(z), -theta_max, theta_max);
  const cplx eith = std::exp(iunit * theta);
  const cplx zr = z * eith;  // arg within 0.05 of zero
  const double h = 0.035;
  KahanSum s;
  for (double v = -4.8; v <= 5.5; v += h) {
    double ls = 0.5 * pi * std::sinh(v);  // log s
    double t = std::exp(ls);
    if (zr.real() * t > 120.0) break;
    cplx integrand =
        std::exp(-zr * t + (a - 1.0) * ls + (c - a - 1.0) * std::log(1.0 + t * eith));
    s.add(integrand * (t * 0.5 * pi * std::cosh(v) * h));
  }
  return std::exp(iunit * theta * a) * inv_gamma(a) * s.value();
}

// Lifts Re a above 0.4 with the three-term a-recurrence
//   Psi(a,c;z) = (2a + 2 + z - c) Psi(a+1,c;z) - (a+1)(a+2-c) Psi(a+2,c;z)
inline cplx psi_laplace(cplx a, cplx c, cplx z) {
  if (a.real() >= 0.4) return psi_laplace_raw(a, c, z);
  cplx p1 = psi_laplace_raw(a + 1.0, c, z);
  cplx p2 = psi_laplace_raw(a + 2.0, c, z);
  return (2.0 * (a + 1.0) + z - c) * p1 - (a + 1.0) * (a + 2.0 - c) * p2;
}

// c -> 1 is a pole of each connection term but not of their sum; a
// two-level Richardson average over c = 1 +- eps, 1 +- 2 eps removes the
// O(eps^2) error and keeps the pole cancellation at the 1e-11 level.
inline cplx psi_near_c1(cplx a, cplx c, cplx z, double extra_z_phase) {
  const double eps = 1e-4;
  auto avg_at = [&](double e) {
    return 0.5 * (psi_connection(a, c + e, z, extra_z_phase) +
                  psi_connection(a, c - e, z, extra_z_phase));
  };
  cplx a1 = avg_at(eps);
  cplx a2 = avg_at(2 * eps);
  return (4.0 * a1 - a2) / 3.0;
}

inline cplx psi_impl(cplx a, cplx c, cplx z, double extra_z_phase) {
  if (inv_gamma(a) == cplx(0.0) && extra_z_phase == 0.0) {
    // a at a non-positive integer: Psi truncates to a polynomial
    KahanSum sum;
    sum.add(1.0);
    cplx term = 1.0;
    int n_top = int(std::round(-a.real()));
    if (n_top == 0) return sum.value();
    for (int n = 0; n < n_top; ++n) {
      term *= -(a + double(n)) * (a - c + 1.0 + double(n)) / (double(n + 1) * z);
      sum.add(term);
    }
    return pow_principal(z, -a) * sum.value();
  }
  if (std::abs(z) >= 30.0 && extra_z_phase == 0.0) return psi_asymptotic(a, c, z);
  if (z == cplx(0.0)) throw numeric_error("tricomi_psi: z = 0");
  // the Kummer-series route loses precision once |z| grows; switch to
  // the rotated Laplace representation outside a small disk
  if (std::abs(z) >= 2.5 && extra_z_phase == 0.0) return psi_laplace(a, c, z);
  double cr_dist = std::abs(c - std::round(c.real()));
  if (std::abs(c.imag()) < 1e-8 && cr_dist < 1e-3) {
    double cr = std::round(c.real());
    if (cr == 1.0) return psi_near_c1(a, c, z, extra_z_phase);
    throw numeric_error("tricomi_psi: integer c degeneracy not supported except c = 1");
  }
  return psi_connection(a, c, z, extra_z_phase);
}

}  // namespace sf_detail

/// Tricomi's Psi(a,c;z), principal branch (cut on the negative real
/// z-axis).  Real negative z is flagged; approach the cut with a small
/// imaginary offset to select a side.
inline cplx tricomi_psi(const CHFParams& p) {
  if (p.z.imag() == 0.0 && p.z.real() < 0.0 && inv_gamma(p.a) != cplx(0.0))
    throw numeric_error("tricomi_psi: z on the branch cut; offset the argument");
  return sf_detail::psi_impl(p.a, p.c, p.z, 0.0);
}

inline cplx tricomi_psi(cplx a, cplx c, cplx z) { return tricomi_psi(CHFParams{a, c, z}); }

/// Residual of the monodromy identity for Psi(a,1;z):
///   Im z < 0:  Psi(a,1;z e^{2 i pi}) = Psi(a,1;z) e^{-2 i pi a}
///                + 2 pi i e^{-i pi a + z} / Gamma^2(a) Psi(1-a,1;-z)
///   Im z > 0:  Psi(a,1;z e^{-2 i pi}) = Psi(a,1;z) e^{2 i pi a}
///                - 2 pi i e^{i pi a + z} / Gamma^2(a) Psi(1-a,1;-z)
/// Both sides are evaluated independently (the left through the
/// phase-continued connection formula).
inline double psi_monodromy_check(const CHFParams& p) {
  const cplx a = p.a, z = p.z;
  if (z.imag() == 0.0) throw numeric_error("psi_monodromy_check: need Im z != 0");
  cplx ig = inv_gamma(a);
  if (ig == cplx(0.0)) return 0.0;  // correction term vanishes, Psi single-valued
  double s = z.imag() < 0.0 ? 1.0 : -1.0;
  cplx lhs = sf_detail::psi_impl(a, 1.0, z, s * 2.0 * pi);
  cplx rhs = sf_detail::psi_impl(a, 1.0, z, 0.0) * std::exp(-s * 2.0 * iunit * pi * a) +
             s * 2.0 * pi * iunit * std::exp(-s * iunit * pi * a + z) * ig * ig *
                 sf_detail::psi_impl(1.0 - a, 1.0, -z, 0.0);
  return std::abs(lhs - rhs);
}

}  // namespace gskdet
