#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace gskdet {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline const cplx iunit{0.0, 1.0};

/// Numeric failure inside a library routine (poles, non-convergence,
/// geometry violations).  Carries a human-readable reason.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

/// v^a with the principal branch of the logarithm, arg in (-pi, pi].
inline cplx pow_principal(cplx v, cplx a) {
  if (v == cplx(0.0)) throw numeric_error("pow_principal: zero base");
  return std::exp(a * std::log(v));
}

/// v^a with the +i0^+ regularized branch: arg(v) is taken in
/// (-pi/2, 3pi/2], so negative real v gets arg = +pi and the branch is
/// continuous across the negative real axis.
inline cplx pow_upper(cplx v, cplx a) {
  if (v == cplx(0.0)) throw numeric_error("pow_upper: zero base");
  double th = std::arg(v);
  if (th <= -pi / 2) th += 2 * pi;
  return std::exp(a * (std::log(std::abs(v)) + iunit * th));
}

/// log with arg in (-pi/2, 3pi/2]; companion of pow_upper.
inline cplx log_upper(cplx v) {
  if (v == cplx(0.0)) throw numeric_error("log_upper: zero argument");
  double th = std::arg(v);
  if (th <= -pi / 2) th += 2 * pi;
  return cplx(std::log(std::abs(v)), th);
}

/// Compensated (Kahan) accumulator for complex sums whose terms
/// alternate in sign.
class KahanSum {
 public:
  void add(cplx term) {
    cplx y = term - comp_;
    cplx t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  cplx value() const { return sum_; }

 private:
  cplx sum_{0.0};
  cplx comp_{0.0};
};

inline bool finite(cplx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Least-squares slope of log|y| against log x.  Used by the scaling-law
/// and decay-rate fits.
inline double fit_log_slope(const std::vector<double>& xs,
                            const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("fit_log_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0) || !(ys[i] > 0))
      throw std::invalid_argument("fit_log_slope: nonpositive data");
    double lx = std::log(xs[i]), ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace gskdet
