#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace amo {

// Row-major 2x2 matrix [[a, b], [c, d]] over double or complex<double>.
template <class T>
struct Mat2 {
  T a{}, b{}, c{}, d{};

  static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }

  T trace() const { return a + d; }
  T det() const { return a * d - b * c; }

  // Kahan's compensated 2x2 determinant: accurate to ~1 ulp of the true
  // determinant of the stored entries even when a*d and b*c nearly cancel.
  double det_compensated() const
    requires std::is_same_v<T, double>
  {
    double w = b * c;
    double e = std::fma(b, c, -w);
    double f = std::fma(a, d, -w);
    return f - e;
  }

  friend Mat2 operator*(const Mat2& l, const Mat2& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
  }
  friend Mat2 operator-(const Mat2& l, const Mat2& r) {
    return {l.a - r.a, l.b - r.b, l.c - r.c, l.d - r.d};
  }
};

using Mat2d = Mat2<double>;
using Mat2c = Mat2<std::complex<double>>;

inline double entry_abs(double x) { return std::abs(x); }
inline double entry_abs(const std::complex<double>& x) { return std::abs(x); }

inline double max_abs_entry(const Mat2d& m) {
  return std::max(std::max(entry_abs(m.a), entry_abs(m.b)),
                  std::max(entry_abs(m.c), entry_abs(m.d)));
}
inline double max_abs_entry(const Mat2c& m) {
  return std::max(std::max(entry_abs(m.a), entry_abs(m.b)),
                  std::max(entry_abs(m.c), entry_abs(m.d)));
}

inline double frobenius_norm(const Mat2d& m) {
  return std::sqrt(m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d);
}
inline double frobenius_norm(const Mat2c& m) {
  return std::sqrt(std::norm(m.a) + std::norm(m.b) + std::norm(m.c) +
                   std::norm(m.d));
}

namespace detail {
inline double scale_entry(double x, int e) { return std::ldexp(x, -e); }
inline std::complex<double> scale_entry(const std::complex<double>& x, int e) {
  return {std::ldexp(x.real(), -e), std::ldexp(x.imag(), -e)};
}
}  // namespace detail

// Long matrix products kept overflow-free: the represented matrix is
// unit * exp(log_scale). The unit part is renormalized by an exact power
// of two after every multiplication, so its max entry magnitude stays in
// [1/2, 2] and no rounding is introduced by the rescaling itself.
template <class T>
struct ScaledMat2 {
  Mat2<T> unit = Mat2<T>::identity();
  double log_scale = 0.0;

  static ScaledMat2 from(const Mat2<T>& m) {
    ScaledMat2 s{m, 0.0};
    s.renormalize();
    return s;
  }

  void renormalize() {
    double m = max_abs_entry(unit);
    if (m == 0.0 || !std::isfinite(m)) return;
    int e = 0;
    std::frexp(m, &e);  // m = f * 2^e with f in [1/2, 1)
    unit.a = detail::scale_entry(unit.a, e);
    unit.b = detail::scale_entry(unit.b, e);
    unit.c = detail::scale_entry(unit.c, e);
    unit.d = detail::scale_entry(unit.d, e);
    log_scale += e * 0.6931471805599453094;
  }

  // this := lhs * this (new factor applied on the left).
  void left_multiply(const Mat2<T>& lhs) {
    unit = lhs * unit;
    renormalize();
  }

  // this := this * rhs (new factor appended on the right).
  void right_multiply(const Mat2<T>& rhs) {
    unit = unit * rhs;
    renormalize();
  }

  // ln of the Frobenius norm of the represented matrix.
  double log_frobenius() const {
    return log_scale + std::log(frobenius_norm(unit));
  }

  // ln |det| of the represented matrix. For long hyperbolic products the
  // unit part's determinant shrinks like exp(-2 log_scale); the compensated
  // form keeps the cancellation from fabricating a zero.
  double log_abs_det() const {
    if constexpr (std::is_same_v<T, double>) {
      return 2.0 * log_scale + std::log(std::abs(unit.det_compensated()));
    } else {
      return 2.0 * log_scale + std::log(entry_abs(unit.det()));
    }
  }
};

using ScaledMat2d = ScaledMat2<double>;
using ScaledMat2c = ScaledMat2<std::complex<double>>;

// Moebius action of [[a,b],[c,d]] on z: (a z + b) / (c z + d). The overall
// scale of the matrix cancels, so the unit part of a ScaledMat2 acts alike.
inline std::complex<double> moebius(const Mat2c& m, std::complex<double> z) {
  return (m.a * z + m.b) / (m.c * z + m.d);
}
inline std::complex<double> moebius(const Mat2d& m, std::complex<double> z) {
  return (m.a * z + m.b) / (m.c * z + m.d);
}

// Rotation by angle 2 pi theta: [[cos, -sin], [sin, cos]].
inline Mat2d rotation(double theta) {
  double c = std::cos(6.2831853071795864769 * theta);
  double s = std::sin(6.2831853071795864769 * theta);
  return {c, -s, s, c};
}

// Inverse via the adjugate; the determinant must be nonzero.
template <class T>
Mat2<T> inverse(const Mat2<T>& m) {
  T dt = m.det();
  return {m.d / dt, -m.b / dt, -m.c / dt, m.a / dt};
}

}  // namespace amo
