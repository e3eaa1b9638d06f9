#pragma once

#include <functional>

#include "nklab/sl2.hpp"

namespace nklab {

inline constexpr double kSqrt3 = 1.7320508075688772935;

struct ProductPoint {
  SL2Point a, b;
};

// Element of M(2,R)² = R⁸₄, used for flat-space derivatives.
struct AmbientVector {
  Mat2 first, second;

  friend AmbientVector operator+(const AmbientVector& x, const AmbientVector& y) {
    return {x.first + y.first, x.second + y.second};
  }
  friend AmbientVector operator-(const AmbientVector& x, const AmbientVector& y) {
    return {x.first - y.first, x.second - y.second};
  }
  friend AmbientVector operator*(double s, const AmbientVector& x) {
    return {s * x.first, s * x.second};
  }
};

// Tangent vector (a·alpha, b·beta) at (a,b), stored as the Lie-algebra pair.
struct TangentPair {
  ProductPoint base;
  Sl2Elem alpha, beta;
};

inline double max_abs(const TangentPair& x) {
  return std::max(max_abs(x.alpha.mat()), max_abs(x.beta.mat()));
}

// Componentwise Frobenius norm of the (alpha, beta) representation; used as
// the residual norm everywhere (never vanishes on a nonzero error vector,
// unlike the indefinite metric norm).
inline double residual_norm(const TangentPair& x) {
  double fa = frob_norm(x.alpha.mat());
  double fb = frob_norm(x.beta.mat());
  return std::sqrt(fa * fa + fb * fb);
}

inline void require_same_base(const TangentPair& x, const TangentPair& y) {
  if (max_abs(x.base.a.mat() - y.base.a.mat()) > 1e-9 ||
      max_abs(x.base.b.mat() - y.base.b.mat()) > 1e-9)
    throw std::invalid_argument("tangent vectors based at different points");
}

inline TangentPair operator+(const TangentPair& x, const TangentPair& y) {
  require_same_base(x, y);
  return {x.base, x.alpha + y.alpha, x.beta + y.beta};
}
inline TangentPair operator-(const TangentPair& x, const TangentPair& y) {
  require_same_base(x, y);
  return {x.base, x.alpha - y.alpha, x.beta - y.beta};
}
inline TangentPair operator-(const TangentPair& x) {
  return {x.base, -x.alpha, -x.beta};
}
inline TangentPair operator*(double s, const TangentPair& x) {
  return {x.base, s * x.alpha, s * x.beta};
}

inline AmbientVector ambient(const TangentPair& x) {
  return {x.base.a.mat() * x.alpha.mat(), x.base.b.mat() * x.beta.mat()};
}

// Project an ambient vector at (a,b) back to a TangentPair: left-translate to
// the Lie algebra and drop the trace part (tangency to the quadric <a,a>=-1
// is exactly tracelessness of a⁻¹·v).
inline TangentPair project_tangent(const ProductPoint& base, const AmbientVector& v) {
  Mat2 va = adjugate(base.a.mat()) * v.first;
  Mat2 vb = adjugate(base.b.mat()) * v.second;
  return {base,
          Sl2Elem(0.5 * (va.e00 - va.e11), va.e01, va.e10),
          Sl2Elem(0.5 * (vb.e00 - vb.e11), vb.e01, vb.e10)};
}

// g(X,Y) = 2/3·<(aα,bβ),(aγ,bδ)> − 1/3·<(aβ,bα),(aγ,bδ)>, which by
// left-invariance reduces to constant-coefficient algebra on (α,β).
inline double metric_g(const TangentPair& x, const TangentPair& y) {
  require_same_base(x, y);
  double ac = inner(x.alpha, y.alpha);
  double bd = inner(x.beta, y.beta);
  double bc = inner(x.beta, y.alpha);
  double ad = inner(x.alpha, y.beta);
  return (2.0 / 3.0) * (ac + bd) - (1.0 / 3.0) * (bc + ad);
}

// J(aα,bβ) = 1/√3 (a(α−2β), b(2α−β)).
inline TangentPair cx_J(const TangentPair& x) {
  return {x.base, (1.0 / kSqrt3) * (x.alpha - 2.0 * x.beta),
          (1.0 / kSqrt3) * (2.0 * x.alpha - x.beta)};
}

// P(aα,bβ) = (aβ,bα).
inline TangentPair ps_P(const TangentPair& x) { return {x.base, x.beta, x.alpha}; }

// Q = reflection of the product splitting: Q(X₁,X₂) = (−X₁,X₂).
inline TangentPair ps_Q(const TangentPair& x) { return {x.base, -x.alpha, x.beta}; }

// G(X,Y) = (∇_X J)Y in closed form:
// 2/(3√3)·(a(−α×γ−α×δ+γ×β+2β×δ), b(−2α×γ+α×δ−γ×β+β×δ)).
inline TangentPair tensor_G(const TangentPair& x, const TangentPair& y) {
  require_same_base(x, y);
  const Sl2Elem &a = x.alpha, &b = x.beta, &c = y.alpha, &d = y.beta;
  double s = 2.0 / (3.0 * kSqrt3);
  Sl2Elem first = -cross(a, c) - cross(a, d) + cross(c, b) + 2.0 * cross(b, d);
  Sl2Elem second = -2.0 * cross(a, c) + cross(a, d) - cross(c, b) + cross(b, d);
  return {x.base, s * first, s * second};
}

// Closed-form ambient curvature tensor (coefficients -5/6, -1/6, -2/3):
// R(X,Y)Z = -5/6 (g(Y,Z)X - g(X,Z)Y)
//           -1/6 (g(JY,Z)JX - g(JX,Z)JY - 2 g(JX,Y)JZ)
//           -2/3 (g(PY,Z)PX - g(PX,Z)PY + g(JPY,Z)JPX - g(JPX,Z)JPY).
inline TangentPair curvature_R(const TangentPair& x, const TangentPair& y,
                               const TangentPair& z) {
  require_same_base(x, y);
  require_same_base(x, z);
  TangentPair jx = cx_J(x), jy = cx_J(y), jz = cx_J(z);
  TangentPair px = ps_P(x), py = ps_P(y);
  TangentPair jpx = cx_J(px), jpy = cx_J(py);
  TangentPair r =
      (-5.0 / 6.0) * (metric_g(y, z) * x - metric_g(x, z) * y) +
      (-1.0 / 6.0) * (metric_g(jy, z) * jx - metric_g(jx, z) * jy -
                      2.0 * metric_g(jx, y) * jz) +
      (-2.0 / 3.0) * (metric_g(py, z) * px - metric_g(px, z) * py +
                      metric_g(jpy, z) * jpx - metric_g(jpx, z) * jpy);
  return r;
}

// Product (bi-invariant) metric <X,Y> + <U,V> on SL(2,R)×SL(2,R); equals
// 2g(X,Y) + g(X,PY).
inline double product_metric(const TangentPair& x, const TangentPair& y) {
  require_same_base(x, y);
  return inner(x.alpha, y.alpha) + inner(x.beta, y.beta);
}

// Residual of the constant-type identity with Z=X, W=Y:
// g(G(X,Y),G(X,Y)) = -2/3 (g(X,X)g(Y,Y) - g(X,Y)² - g(JX,Y)²)
// (the g(JX,X)g(Y,JY) term vanishes identically by skew-adjointness of J).
inline double constant_type_residual(const TangentPair& x, const TangentPair& y) {
  TangentPair g = tensor_G(x, y);
  double lhs = metric_g(g, g);
  double jxy = metric_g(cx_J(x), y);
  double rhs = (-2.0 / 3.0) *
               (metric_g(x, x) * metric_g(y, y) - metric_g(x, y) * metric_g(x, y) -
                jxy * jxy);
  return std::fabs(lhs - rhs);
}

// --- ambient isometries -----------------------------------------------------

using PointMap = std::function<ProductPoint(const ProductPoint&)>;

inline ProductPoint isometry_phi1(const ProductPoint& p) { return {p.b, p.a}; }

inline ProductPoint isometry_phi2(const ProductPoint& p) {
  SL2Point pinv = p.a.inverse();
  return {pinv, p.b * pinv};
}

inline ProductPoint isometry_phi_abc(const ProductPoint& p, const SL2Point& a,
                                     const SL2Point& b, const SL2Point& c) {
  return {a * p.a * c, b * p.b * c};
}

// Generic pushforward: differentiate t ↦ phi(a·exp(tα), b·exp(tβ)) by central
// differences and project back to a TangentPair at phi(base).
inline TangentPair pushforward(const PointMap& phi, const TangentPair& x,
                               double step = 1e-5) {
  auto curve = [&](double t) {
    return phi({SL2Point(x.base.a.mat() * exp_sl2(t * x.alpha).mat()),
                SL2Point(x.base.b.mat() * exp_sl2(t * x.beta).mat())});
  };
  ProductPoint plus = curve(step), minus = curve(-step);
  AmbientVector v{(0.5 / step) * (plus.a.mat() - minus.a.mat()),
                  (0.5 / step) * (plus.b.mat() - minus.b.mat())};
  return project_tangent(phi(x.base), v);
}

}  // namespace nklab
