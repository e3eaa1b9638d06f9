#pragma once

#include <algorithm>
#include <cmath>

namespace nklab {

// 2x2 real matrix, plain value type.
struct Mat2 {
  double e00 = 0.0, e01 = 0.0, e10 = 0.0, e11 = 0.0;

  constexpr Mat2() = default;
  constexpr Mat2(double a00, double a01, double a10, double a11)
      : e00(a00), e01(a01), e10(a10), e11(a11) {}

  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr Mat2 zero() { return {}; }

  constexpr double trace() const { return e00 + e11; }
  constexpr double det() const { return e00 * e11 - e01 * e10; }

  friend constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.e00 + b.e00, a.e01 + b.e01, a.e10 + b.e10, a.e11 + b.e11};
  }
  friend constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.e00 - b.e00, a.e01 - b.e01, a.e10 - b.e10, a.e11 - b.e11};
  }
  friend constexpr Mat2 operator-(const Mat2& a) {
    return {-a.e00, -a.e01, -a.e10, -a.e11};
  }
  friend constexpr Mat2 operator*(double s, const Mat2& a) {
    return {s * a.e00, s * a.e01, s * a.e10, s * a.e11};
  }
  friend constexpr Mat2 operator*(const Mat2& a, double s) { return s * a; }
  friend constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.e00 * b.e00 + a.e01 * b.e10, a.e00 * b.e01 + a.e01 * b.e11,
            a.e10 * b.e00 + a.e11 * b.e10, a.e10 * b.e01 + a.e11 * b.e11};
  }
};

// Transposed cofactor matrix: adj(m)·m = det(m)·Id.
constexpr Mat2 adjugate(const Mat2& m) { return {m.e11, -m.e01, -m.e10, m.e00}; }

// <a,b> = -1/2 Trace(adj(a)·b); signature (2,2) on M(2,R).
constexpr double inner(const Mat2& a, const Mat2& b) {
  return -0.5 * (a.e11 * b.e00 - a.e01 * b.e10 - a.e10 * b.e01 + a.e00 * b.e11);
}

inline double max_abs(const Mat2& m) {
  return std::max(std::max(std::fabs(m.e00), std::fabs(m.e01)),
                  std::max(std::fabs(m.e10), std::fabs(m.e11)));
}

inline double frob_norm(const Mat2& m) {
  return std::sqrt(m.e00 * m.e00 + m.e01 * m.e01 + m.e10 * m.e10 + m.e11 * m.e11);
}

}  // namespace nklab
