#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "nklab/mat2.hpp"

namespace nklab {

// Traceless 2x2 matrix (element of sl(2,R)). Tracelessness is exact by
// construction: only e00, e01, e10 are stored-free, e11 = -e00.
class Sl2Elem {
 public:
  constexpr Sl2Elem() = default;
  constexpr Sl2Elem(double a00, double a01, double a10)
      : m_(a00, a01, a10, -a00) {}

  static Sl2Elem from_mat(const Mat2& m) {
    if (std::fabs(m.trace()) > 1e-9)
      throw std::invalid_argument("Sl2Elem: matrix is not traceless");
    double d = 0.5 * (m.e00 - m.e11);  // symmetrize away trace roundoff
    return {d, m.e01, m.e10};
  }

  // x·i + y·j + z·k in the split-quaternion basis.
  static constexpr Sl2Elem from_coeffs(double x, double y, double z) {
    return {z, x + y, -x + y};
  }

  constexpr const Mat2& mat() const { return m_; }

  constexpr double coeff_i() const { return 0.5 * (m_.e01 - m_.e10); }
  constexpr double coeff_j() const { return 0.5 * (m_.e01 + m_.e10); }
  constexpr double coeff_k() const { return m_.e00; }

  friend constexpr Sl2Elem operator+(const Sl2Elem& a, const Sl2Elem& b) {
    return {a.m_.e00 + b.m_.e00, a.m_.e01 + b.m_.e01, a.m_.e10 + b.m_.e10};
  }
  friend constexpr Sl2Elem operator-(const Sl2Elem& a, const Sl2Elem& b) {
    return {a.m_.e00 - b.m_.e00, a.m_.e01 - b.m_.e01, a.m_.e10 - b.m_.e10};
  }
  friend constexpr Sl2Elem operator-(const Sl2Elem& a) {
    return {-a.m_.e00, -a.m_.e01, -a.m_.e10};
  }
  friend constexpr Sl2Elem operator*(double s, const Sl2Elem& a) {
    return {s * a.m_.e00, s * a.m_.e01, s * a.m_.e10};
  }
  friend constexpr Sl2Elem operator*(const Sl2Elem& a, double s) { return s * a; }

 private:
  Mat2 m_;
};

constexpr double inner(const Sl2Elem& a, const Sl2Elem& b) {
  return inner(a.mat(), b.mat());
}

// alpha x beta = 1/2 (alpha·beta - beta·alpha); traceless by construction.
constexpr Sl2Elem cross(const Sl2Elem& a, const Sl2Elem& b) {
  const Mat2& p = a.mat();
  const Mat2& q = b.mat();
  double c00 = 0.5 * (p.e01 * q.e10 - p.e10 * q.e01);
  double c01 = 0.5 * ((p.e00 * q.e01 + p.e01 * q.e11) - (q.e00 * p.e01 + q.e01 * p.e11));
  double c10 = 0.5 * ((p.e10 * q.e00 + p.e11 * q.e10) - (q.e10 * p.e00 + q.e11 * p.e10));
  return {c00, c01, c10};
}

// Split quaternions: i² = -Id, j² = k² = Id; <i,i> = -1, <j,j> = <k,k> = 1.
constexpr Sl2Elem sq_i() { return {0.0, 1.0, -1.0}; }
constexpr Sl2Elem sq_j() { return {0.0, 1.0, 1.0}; }
constexpr Sl2Elem sq_k() { return {1.0, 0.0, 0.0}; }

constexpr Sl2Elem sq_basis(int idx) {
  return idx == 0 ? sq_i() : (idx == 1 ? sq_j() : sq_k());
}

// Point of SL(2,R) = {det = 1}, i.e. the quadric <a,a> = -1 in M(2,R).
class SL2Point {
 public:
  SL2Point() : m_(Mat2::identity()) {}
  explicit SL2Point(const Mat2& m) : m_(m) {
    double d = m_.det();
    if (std::fabs(d - 1.0) > 1e-12) {
      if (std::fabs(d - 1.0) > 1e-6 || d <= 0.0)
        throw std::invalid_argument("SL2Point: determinant too far from 1");
      m_ = (1.0 / std::sqrt(d)) * m_;
    }
  }

  static SL2Point identity() { return SL2Point(); }

  const Mat2& mat() const { return m_; }

  SL2Point inverse() const {
    SL2Point p;
    p.m_ = adjugate(m_);  // det = 1, adjugate is the exact inverse
    return p;
  }

  friend SL2Point operator*(const SL2Point& a, const SL2Point& b) {
    return SL2Point(a.m_ * b.m_);
  }

 private:
  Mat2 m_;
};

// Closed-form exponential, branching on d = det(alpha):
//   d > 0: cos(√d)·Id + sin(√d)/√d · alpha
//   d < 0: cosh(√-d)·Id + sinh(√-d)/√-d · alpha
//   |d| small: Id + alpha (nilpotent).
inline SL2Point exp_sl2(const Sl2Elem& alpha) {
  double d = alpha.mat().det();
  double c, s;
  if (d > 1e-14) {
    double r = std::sqrt(d);
    c = std::cos(r);
    s = std::sin(r) / r;
  } else if (d < -1e-14) {
    double r = std::sqrt(-d);
    c = std::cosh(r);
    s = std::sinh(r) / r;
  } else {
    c = 1.0;
    s = 1.0;
  }
  return SL2Point(c * Mat2::identity() + s * alpha.mat());
}

// Deterministic RNG. Maps mt19937_64 output to doubles by hand so the
// stream is identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  double uniform(double lo, double hi) {
    double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 gen_;
};

inline Sl2Elem sample_sl2_elem(Rng& rng) {
  double a = rng.uniform(-1.0, 1.0);
  double b = rng.uniform(-1.0, 1.0);
  double c = rng.uniform(-1.0, 1.0);
  return {a, b, c};
}

inline SL2Point sample_point(Rng& rng) { return exp_sl2(sample_sl2_elem(rng)); }

inline SL2Point sample_point(std::uint64_t seed) {
  Rng rng(seed);
  return sample_point(rng);
}

}  // namespace nklab
