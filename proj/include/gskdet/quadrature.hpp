#pragma once

// Gauss-Legendre rules on real intervals and trapezoid rules on circles.
// Node counts are kept as powers of two so self-convergence checks by
// node doubling stay cheap.

#include <cmath>
#include <vector>

#include "gskdet/scalar.hpp"

namespace gskdet {

/// Nodes and complex weights of a quadrature rule along a path in C;
/// weights include the path Jacobian, so sum w_i f(z_i) ~ int f dz.
struct QuadratureRule {
  std::vector<cplx> nodes;
  std::vector<cplx> weights;

  template <class F>
  cplx integrate(F&& f) const {
    KahanSum s;
    for (std::size_t i = 0; i < nodes.size(); ++i) s.add(weights[i] * f(nodes[i]));
    return s.value();
  }
};

namespace quad_detail {

/// Nodes/weights on [-1,1] by Newton iteration on P_n.
inline void gauss_legendre_unit(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

}  // namespace quad_detail

/// n-point Gauss-Legendre rule on the real interval [a,b].
inline QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 2) throw std::invalid_argument("gauss_legendre: n >= 2 required");
  std::vector<double> x, w;
  quad_detail::gauss_legendre_unit(n, x, w);
  QuadratureRule rule;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes.emplace_back(mid + half * x[i], 0.0);
    rule.weights.emplace_back(half * w[i], 0.0);
  }
  return rule;
}

/// Gauss-Legendre rule along the straight segment from a to b in C.
inline QuadratureRule gauss_legendre_segment(int n, cplx a, cplx b) {
  std::vector<double> x, w;
  quad_detail::gauss_legendre_unit(n, x, w);
  QuadratureRule rule;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  const cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.nodes.push_back(mid + half * x[i]);
    rule.weights.push_back(half * w[i]);
  }
  return rule;
}

/// Trapezoid rule on the circle |z - center| = radius; spectrally
/// accurate for integrands analytic in an annulus around the circle.
/// orientation +1 is counterclockwise.
inline QuadratureRule circle_rule(cplx center, double radius, int n, int orientation = +1) {
  if (n < 16) throw std::invalid_argument("circle_rule: n >= 16 required");
  if (orientation != 1 && orientation != -1)
    throw std::invalid_argument("circle_rule: orientation must be +-1");
  QuadratureRule rule;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  for (int j = 0; j < n; ++j) {
    double th = 2.0 * pi * j / n;
    cplx e = std::exp(iunit * th);
    rule.nodes.push_back(center + radius * e);
    rule.weights.push_back(double(orientation) * 2.0 * pi * iunit * radius * e / double(n));
  }
  return rule;
}

}  // namespace gskdet
