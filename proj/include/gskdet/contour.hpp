#pragma once

// Oriented piecewise-straight complex paths, the kernel's integration
// contour, Cauchy transforms and principal-value integrals with
// singularity subtraction.

#include <functional>
#include <vector>

#include "gskdet/quadrature.hpp"
#include "gskdet/scalar.hpp"

namespace gskdet {

struct Segment {
  cplx a;
  cplx b;
  bool on_axis = false;  // lies on the real axis

  cplx at(double t) const { return a + t * (b - a); }
  cplx direction() const { return b - a; }
  double length() const { return std::abs(b - a); }
};

/// Oriented contour made of straight pieces; consecutive pieces share
/// endpoints.
struct Contour {
  std::vector<Segment> segments;

  cplx start() const { return segments.front().a; }
  cplx end() const { return segments.back().b; }

  void validate() const {
    if (segments.empty()) throw numeric_error("contour: empty");
    for (std::size_t i = 1; i < segments.size(); ++i) {
      if (std::abs(segments[i].a - segments[i - 1].b) > 1e-12)
        throw numeric_error("contour: pieces do not share endpoints");
    }
  }

  /// Index of the piece whose interior contains lam, or -1.
  int locate_on_piece(cplx lam, double tol = 1e-12) const {
    for (std::size_t i = 0; i < segments.size(); ++i) {
      const Segment& s = segments[i];
      cplx d = s.direction();
      double len = std::abs(d);
      cplx rel = (lam - s.a) / d;
      if (std::abs(rel.imag()) * len < tol && rel.real() > tol && rel.real() < 1.0 - tol)
        return int(i);
    }
    return -1;
  }
};

/// Integration contour for the kernel's E-function: descends from
/// -width + i height to the real axis left of -q, runs along the axis
/// past q (and past lambda0 in the space-like regime), then descends to
/// -i height toward +width.
inline Contour build_CE(double q, double lambda0, double width, double height) {
  if (!(width > std::max(q, std::abs(lambda0)) + 2.0))
    throw numeric_error("build_CE: width too small");
  if (!(height > 0.0) || height > 0.5)
    throw numeric_error("build_CE: height must be in (0, 0.5]");
  const double margin = 1.0;
  double a_on = -q - margin;
  double b_on = std::max(q, lambda0) + margin;
  if (a_on <= -width + 1.0 || b_on >= width - 1.0)
    throw numeric_error("build_CE: on-axis extent conflicts with width");
  Contour c;
  c.segments.push_back({cplx(-width, height), cplx(a_on, 0.0), false});
  c.segments.push_back({cplx(a_on, 0.0), cplx(b_on, 0.0), true});
  c.segments.push_back({cplx(b_on, 0.0), cplx(width, -height), false});
  c.validate();
  return c;
}

namespace contour_detail {

/// int_a^b ds/(s-lam) for lam off the open segment (a,b), branch
/// continuous along the segment.  Bisects until the principal log of the
/// endpoint ratio is safe.
inline cplx segment_log(cplx a, cplx b, cplx lam, int depth = 0) {
  cplx wa = a - lam, wb = b - lam;
  if (wa == cplx(0.0) || wb == cplx(0.0))
    throw numeric_error("segment_log: lam at a segment endpoint");
  cplx ratio = wb / wa;
  bool unsafe = std::abs(std::arg(ratio)) > 0.5 * pi ||
                (wa.real() < 0.0 && wb.real() < 0.0 &&
                 ((wa.imag() > 0.0) != (wb.imag() > 0.0)));
  if (unsafe && depth < 40) {
    cplx mid = 0.5 * (a + b);
    return segment_log(a, mid, lam, depth + 1) + segment_log(mid, b, lam, depth + 1);
  }
  return std::log(ratio);
}

/// PV of int_a^b ds/(s-lam) for lam strictly inside the straight
/// segment; the symmetric limit gives log(|b-lam| / |lam-a|).
inline cplx segment_log_pv(cplx a, cplx b, cplx lam) {
  return cplx(std::log(std::abs(b - lam) / std::abs(lam - a)), 0.0);
}

}  // namespace contour_detail

/// PV integral of f(s) / (s - lam) over the contour, by singularity
/// subtraction: per piece  int (f(s)-f(lam))/(s-lam) ds  plus
/// f(lam) * log terms combined across pieces.
template <class F>
cplx principal_value(F&& f, const Contour& path, cplx lam, int n_per_piece = 128) {
  path.validate();
  int sing = path.locate_on_piece(lam);
  if (sing < 0)
    throw numeric_error("principal_value: lam not strictly inside a smooth piece");
  const cplx flam = f(lam);
  KahanSum total;
  cplx logsum = 0.0;
  for (std::size_t i = 0; i < path.segments.size(); ++i) {
    const Segment& s = path.segments[i];
    if (int(i) == sing) {
      // split at the singularity so nodes avoid lam
      for (const auto& half : {Segment{s.a, lam}, Segment{lam, s.b}}) {
        QuadratureRule r = gauss_legendre_segment(n_per_piece, half.a, half.b);
        total.add(r.integrate([&](cplx z) { return (f(z) - flam) / (z - lam); }));
      }
      logsum += contour_detail::segment_log_pv(s.a, s.b, lam);
    } else {
      QuadratureRule r = gauss_legendre_segment(n_per_piece, s.a, s.b);
      total.add(r.integrate([&](cplx z) { return (f(z) - flam) / (z - lam); }));
      logsum += contour_detail::segment_log(s.a, s.b, lam);
    }
  }
  return total.value() + flam * logsum;
}

/// Cauchy transform C[f](lam) = int f(s)/(s-lam) ds/(2 i pi) for lam off
/// the path.
template <class F>
cplx cauchy_transform(F&& f, const Contour& path, cplx lam, int n_per_piece = 128) {
  path.validate();
  if (path.locate_on_piece(lam, 1e-9) >= 0)
    throw numeric_error("cauchy_transform: lam on path; use the sided overload");
  KahanSum total;
  for (const Segment& s : path.segments) {
    QuadratureRule r = gauss_legendre_segment(n_per_piece, s.a, s.b);
    total.add(r.integrate([&](cplx z) { return f(z) / (z - lam); }));
  }
  return total.value() / (2.0 * iunit * pi);
}

/// Cauchy transform over an arbitrary quadrature rule (closed circles
/// etc.); lam must stay away from the nodes.
template <class F>
cplx cauchy_transform(F&& f, const QuadratureRule& rule, cplx lam) {
  KahanSum total;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    total.add(rule.weights[i] * f(rule.nodes[i]) / (rule.nodes[i] - lam));
  return total.value() / (2.0 * iunit * pi);
}

/// Sided boundary value of the Cauchy transform for lam on the path:
/// the half-residue (Plemelj) realization of the local semicircle
/// deformation.  side = +1 is the left of the oriented path.
template <class F>
cplx cauchy_transform_sided(F&& f, const Contour& path, cplx lam, int side,
                            int n_per_piece = 128) {
  if (side != 1 && side != -1)
    throw std::invalid_argument("cauchy_transform_sided: side must be +-1");
  cplx pv = principal_value(f, path, lam, n_per_piece);
  return pv / (2.0 * iunit * pi) + 0.5 * double(side) * f(lam);
}

}  // namespace gskdet
