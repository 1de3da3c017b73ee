#pragma once

// The kernel V(lambda,mu) built from the oscillating factors e and E,
// and det(I + V) on [-q,q] by symmetrized Nystrom discretization.

#include <Eigen/Core>
#include <Eigen/LU>

#include "gskdet/contour.hpp"
#include "gskdet/parallel.hpp"
#include "gskdet/problem.hpp"

namespace gskdet {

/// Evaluates E, E' on (-q,q).  The principal-value integral over C_E is
/// discretized once into composite panels with cached e^{-2} values; the
/// panel containing the singularity is re-split at each evaluation
/// point, which keeps quadrature nodes safely away from it.
class EEvaluator {
 public:
  explicit EEvaluator(const ProblemSpec& spec)
      : spec_(spec), ce_(build_CE(spec.q, spec.lambda0, spec.ce_width, spec.ce_height)) {
    build_panels();
  }

  const ProblemSpec& spec() const { return spec_; }
  const Contour& contour() const { return ce_; }

  /// sin(pi nu(lam)) E(lam) and its lambda-derivative; this combination
  /// is regular even where cot(pi nu) has poles.
  struct Value {
    cplx Es;
    cplx Es1;
  };

  Value Es_with_derivative(double lam) const { return eval(lam, true); }
  cplx Es(double lam) const { return eval(lam, false).Es; }

  cplx E(double lam) const {
    cplx sn = std::sin(pi * spec_.nu(cplx(lam, 0.0)));
    if (std::abs(sn) < 1e-12)
      throw numeric_error("EEvaluator: cot(pi nu) pole at the evaluation point");
    return eval(lam, false).Es / sn;
  }

  struct EValue {
    cplx E;
    cplx E1;
  };

  EValue E_with_derivative(double lam) const {
    cplx z(lam, 0.0);
    cplx sn = std::sin(pi * spec_.nu(z));
    if (std::abs(sn) < 1e-12)
      throw numeric_error("EEvaluator: cot(pi nu) pole at the evaluation point");
    Value v = eval(lam, true);
    cplx snd = pi * spec_.nu1(z) * std::cos(pi * spec_.nu(z));
    return {v.Es / sn, (v.Es1 * sn - v.Es * snd) / (sn * sn)};
  }

  /// Magnitude of the integrand at the truncation boundary of the
  /// off-axis tails; reported so the truncation of C_E is measured, not
  /// assumed.
  double tail_magnitude() const { return tail_drop_; }

 private:
  struct Panel {
    std::vector<cplx> nodes, weights, fvals;
    bool axis = false;
    double lo = 0.0, hi = 0.0;  // axis extent when axis == true
  };

  ProblemSpec spec_;
  Contour ce_;
  std::vector<Panel> panels_;
  double axis_lo_ = 0.0, axis_hi_ = 0.0;
  double tail_drop_ = 0.0;
  cplx eff_start_, eff_end_;  // contour endpoints after tail truncation

  void add_panel(cplx a, cplx b, int n, bool axis) {
    QuadratureRule r = gauss_legendre_segment(n, a, b);
    Panel p;
    p.nodes = std::move(r.nodes);
    p.weights = std::move(r.weights);
    p.axis = axis;
    if (axis) {
      p.lo = a.real();
      p.hi = b.real();
    }
    p.fvals.resize(p.nodes.size());
    for (std::size_t i = 0; i < p.nodes.size(); ++i) p.fvals[i] = spec_.einv2(p.nodes[i]);
    panels_.push_back(std::move(p));
  }

  // largest |u'| along a segment, sampled
  double u1_sup(cplx a, cplx b) const {
    double m = 0.0;
    for (int k = 0; k <= 32; ++k)
      m = std::max(m, std::abs(spec_.u1(a + (b - a) * (k / 32.0))));
    return m;
  }

  void build_panels() {
    const Segment& left = ce_.segments[0];
    const Segment& axis = ce_.segments[1];
    const Segment& right = ce_.segments[2];
    axis_lo_ = axis.a.real();
    axis_hi_ = axis.b.real();

    // every panel is short enough that a 32-point rule resolves the
    // e^{i x u} oscillation along it
    auto panel_length = [&](cplx a, cplx b) {
      return 40.0 / (spec_.x * u1_sup(a, b) + 1.0);
    };

    // ramps: walk from the axis junction outward and stop once the
    // integrand envelope is below working precision.  The stop point
    // becomes the effective contour endpoint, so the log terms and the
    // subtracted kernel see the same truncated path; the dropped tail
    // magnitude is recorded for the truncation report.  Panels keep the
    // contour orientation even when the walk runs against it.
    auto ramp_panels = [&](cplx junction, cplx far, bool toward_junction) -> cplx {
      double total = std::abs(far - junction);
      cplx dir = (far - junction) / total;
      double len = panel_length(junction, far);
      int count = std::max(2, int(std::ceil(total / len)));
      len = total / count;
      for (int k = 0; k < count; ++k) {
        cplx a = junction + (k * len) * dir;
        double envelope = std::abs(spec_.einv2(a));
        if (envelope < 1e-18) {
          tail_drop_ = std::max(tail_drop_, envelope);
          return a;
        }
        cplx b = junction + ((k + 1) * len) * dir;
        if (toward_junction) add_panel(b, a, 32, false);
        else add_panel(a, b, 32, false);
      }
      tail_drop_ = std::max(tail_drop_, std::abs(spec_.einv2(far)));
      return far;
    };

    double span = axis_hi_ - axis_lo_;
    double target = panel_length(axis.a, axis.b);
    int n_panels = std::max(4, int(std::ceil(span / target)));
    double len = span / n_panels;
    eff_start_ = ramp_panels(left.b, left.a, /*toward_junction=*/true);
    for (int k = 0; k < n_panels; ++k)
      add_panel(cplx(axis_lo_ + k * len, 0.0), cplx(axis_lo_ + (k + 1) * len, 0.0), 32, true);
    eff_end_ = ramp_panels(right.a, right.b, /*toward_junction=*/false);
  }

  Value eval(double lam, bool with_derivative) const {
    if (!(lam > -spec_.q && lam < spec_.q))
      throw numeric_error("EEvaluator: lam must lie strictly inside (-q,q)");
    const cplx zlam(lam, 0.0);
    const cplx flam = spec_.einv2(zlam);
    const cplx w1 = iunit * spec_.x * spec_.u1(zlam) + spec_.g1(zlam);
    const cplx f1lam = w1 * flam;

    KahanSum p0, p1;
    auto accumulate = [&](cplx s, cplx w, cplx f) {
      cplx d = s - zlam;
      cplx k1 = (f - flam) / d;
      p0.add(w * k1);
      if (with_derivative) p1.add(w * (k1 - f1lam) / d);
    };

    for (const Panel& p : panels_) {
      if (p.axis && lam >= p.lo && lam <= p.hi) {
        // re-split this panel at lam
        for (const auto& half : {std::pair<double, double>{p.lo, lam}, {lam, p.hi}}) {
          if (half.second - half.first < 1e-13) continue;
          QuadratureRule r =
              gauss_legendre_segment(32, cplx(half.first, 0.0), cplx(half.second, 0.0));
          for (std::size_t i = 0; i < r.nodes.size(); ++i)
            accumulate(r.nodes[i], r.weights[i], spec_.einv2(r.nodes[i]));
        }
      } else {
        for (std::size_t i = 0; i < p.nodes.size(); ++i)
          accumulate(p.nodes[i], p.weights[i], p.fvals[i]);
      }
    }

    // log terms: ramps get the continued principal log, the axis piece
    // the symmetric-limit (real) log
    cplx L = contour_detail::segment_log(eff_start_, ce_.segments[0].b, zlam) +
             contour_detail::segment_log_pv(ce_.segments[1].a, ce_.segments[1].b, zlam) +
             contour_detail::segment_log(ce_.segments[2].a, eff_end_, zlam);
    cplx P = p0.value() + flam * L;

    const cplx nu = spec_.nu(zlam);
    const cplx sn = std::sin(pi * nu);
    const cplx cs = std::cos(pi * nu);
    const cplx e = spec_.e_fn(zlam);

    // sin(pi nu) E = i e [ sin(pi nu) P/(2 pi) + f cos(pi nu)/2 ]
    Value out;
    cplx bracket = sn * P / (2.0 * pi) + 0.5 * flam * cs;
    out.Es = iunit * e * bracket;
    if (with_derivative) {
      cplx Lp = 1.0 / (eff_start_ - zlam) - 1.0 / (eff_end_ - zlam);
      cplx P1 = p1.value() + f1lam * L + flam * Lp;
      cplx nu1 = spec_.nu1(zlam);
      cplx bracket1 = pi * nu1 * cs * P / (2.0 * pi) + sn * P1 / (2.0 * pi) +
                      0.5 * (f1lam * cs - flam * pi * nu1 * sn);
      out.Es1 = spec_.dlog_e(zlam) * out.Es + iunit * e * bracket1;
    }
    return out;
  }
};

namespace kernel_detail {

/// sin(pi nu) e and its derivative.
inline std::pair<cplx, cplx> sine_e(const ProblemSpec& s, double lam) {
  cplx z(lam, 0.0);
  cplx nu = s.nu(z);
  cplx e = s.e_fn(z);
  cplx sn = std::sin(pi * nu);
  cplx val = sn * e;
  cplx der = e * (pi * s.nu1(z) * std::cos(pi * nu) + sn * s.dlog_e(z));
  return {val, der};
}

}  // namespace kernel_detail

/// Kernel value V(lambda, mu) for lambda, mu in (-q, q), computed from
/// the sine-weighted factors (regular for every admissible nu); the
/// diagonal is the removable limit evaluated from derivatives.
inline cplx V_kernel(const EEvaluator& ev, double lam, double mu) {
  const ProblemSpec& s = ev.spec();
  if (std::abs(lam - mu) < 1e-12 * s.q) {
    auto v = ev.Es_with_derivative(lam);
    auto [se, se1] = kernel_detail::sine_e(s, lam);
    return 4.0 * (v.Es1 * se - v.Es * se1) / (2.0 * iunit * pi);
  }
  cplx El = ev.Es(lam), Em = ev.Es(mu);
  cplx el = kernel_detail::sine_e(s, lam).first, em = kernel_detail::sine_e(s, mu).first;
  return 4.0 * (El * em - Em * el) / (2.0 * iunit * pi * (lam - mu));
}

/// Convenience overload; builds a throwaway evaluator.
inline cplx V_kernel(const ProblemSpec& spec, double lam, double mu) {
  return V_kernel(EEvaluator(spec), lam, mu);
}

/// Nystrom discretization I + [sqrt(w_i) V(x_i,x_j) sqrt(w_j)]; the
/// square-root weighting keeps the matrix symmetric.
struct KernelMatrix {
  QuadratureRule rule;
  Eigen::MatrixXcd m;
};

inline KernelMatrix build_kernel_matrix(const ProblemSpec& spec) {
  if (spec.n_nodes < 32) throw numeric_error("fredholm_det: n_nodes >= 32 required");
  EEvaluator ev(spec);
  const int n = spec.n_nodes;
  QuadratureRule rule = gauss_legendre(n, -spec.q, spec.q);

  std::vector<cplx> Es(n), Es1(n), se(n), se1(n), sqw(n);
  parallel_for(std::size_t(n), [&](std::size_t i) {
    double t = rule.nodes[i].real();
    auto val = ev.Es_with_derivative(t);
    Es[i] = val.Es;
    Es1[i] = val.Es1;
    auto [v, d] = kernel_detail::sine_e(spec, t);
    se[i] = v;
    se1[i] = d;
    sqw[i] = std::sqrt(rule.weights[i]);
  });

  KernelMatrix km;
  km.rule = rule;
  km.m.resize(n, n);
  const cplx two_i_pi = 2.0 * iunit * pi;
  for (int i = 0; i < n; ++i) {
    double ti = rule.nodes[i].real();
    for (int j = 0; j <= i; ++j) {
      cplx v;
      if (i == j) {
        v = 4.0 * (Es1[i] * se[i] - Es[i] * se1[i]) / two_i_pi;
      } else {
        double tj = rule.nodes[j].real();
        v = 4.0 * (Es[i] * se[j] - Es[j] * se[i]) / (two_i_pi * (ti - tj));
      }
      cplx entry = sqw[i] * v * sqw[j];
      km.m(i, j) = entry;
      km.m(j, i) = entry;
      if (i == j) km.m(i, i) += 1.0;
    }
  }
  return km;
}

/// det(I + V) on [-q,q] by LU with partial pivoting.
inline cplx fredholm_det(const ProblemSpec& spec) {
  KernelMatrix km = build_kernel_matrix(spec);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(km.m);
  cplx det = lu.determinant();
  if (!finite(det)) throw numeric_error("fredholm_det: LU breakdown (non-finite determinant)");
  return det;
}

/// log det along an increasing sweep of x, with the imaginary part
/// continued across points (principal branch at xs[0]).
inline std::vector<cplx> log_det_sweep(const ProblemSpec& spec, const std::vector<double>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] < xs[i - 1]) throw numeric_error("log_det_sweep: xs must be increasing");
  std::vector<cplx> dets(xs.size());
  parallel_for(xs.size(), [&](std::size_t i) { dets[i] = fredholm_det(spec.with_x(xs[i])); });

  std::vector<cplx> out(xs.size());
  double phase = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(dets[i]) < 1e-12)
      throw numeric_error("log_det_sweep: determinant vanished along the sweep");
    cplx lg = std::log(dets[i]);
    if (i == 0) {
      phase = lg.imag();
    } else {
      double d = lg.imag() - phase;
      d -= 2.0 * pi * std::round(d / (2.0 * pi));
      // steps approaching pi cannot be unwound unambiguously
      if (std::abs(d) >= 0.75 * pi)
        throw numeric_error("log_det_sweep: phase step too close to pi; use a denser x grid");
      phase += d;
    }
    out[i] = cplx(lg.real(), phase);
  }
  return out;
}

}  // namespace gskdet
