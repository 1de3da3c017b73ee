#pragma once

// 2x2 complex matrices: jump matrices, parametrices and Pi values.

#include <array>

#include "gskdet/scalar.hpp"

namespace gskdet {

struct Mat2 {
  cplx a11{0.0}, a12{0.0}, a21{0.0}, a22{0.0};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 zero() { return {}; }
  static Mat2 diag(cplx d1, cplx d2) { return {d1, 0.0, 0.0, d2}; }

  Mat2 operator+(const Mat2& o) const {
    return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
  }
  Mat2 operator-(const Mat2& o) const {
    return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
  }
  Mat2 operator*(const Mat2& o) const {
    return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
            a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
  }
  friend Mat2 operator*(cplx s, const Mat2& m) {
    return {s * m.a11, s * m.a12, s * m.a21, s * m.a22};
  }
  Mat2 operator*(cplx s) const { return s * *this; }
  Mat2 operator/(cplx s) const { return {a11 / s, a12 / s, a21 / s, a22 / s}; }

  cplx det() const { return a11 * a22 - a12 * a21; }
  cplx trace() const { return a11 + a22; }

  Mat2 inverse() const {
    cplx d = det();
    if (d == cplx(0.0)) throw numeric_error("Mat2: singular matrix");
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }

  /// max-abs entry norm (the paper's L-infinity matrix norm)
  double norm() const {
    return std::max(std::max(std::abs(a11), std::abs(a12)),
                    std::max(std::abs(a21), std::abs(a22)));
  }

  bool finite_entries() const {
    return finite(a11) && finite(a12) && finite(a21) && finite(a22);
  }
};

inline Mat2 commutator(const Mat2& a, const Mat2& b) { return a * b - b * a; }

inline const Mat2 sigma3{1.0, 0.0, 0.0, -1.0};
inline const Mat2 sigma_plus{0.0, 1.0, 0.0, 0.0};
inline const Mat2 sigma_minus{0.0, 0.0, 1.0, 0.0};

}  // namespace gskdet
