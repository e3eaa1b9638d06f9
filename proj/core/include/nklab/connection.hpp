#pragma once

#include <array>
#include <functional>

#include "nklab/nk.hpp"

namespace nklab {

// The field (p,q) ↦ (p·alpha, q·beta).
struct LeftInvariantField {
  Sl2Elem alpha, beta;

  TangentPair at(const ProductPoint& p) const { return {p, alpha, beta}; }
};

// 3x3x3 coefficient table c_ij^k of a connection in a fixed frame.
struct ConnectionTable {
  std::array<std::array<std::array<double, 3>, 3>, 3> coeffs{};

  double& operator()(int i, int j, int k) { return coeffs[i][j][k]; }
  double operator()(int i, int j, int k) const { return coeffs[i][j][k]; }
};

// Euclidean derivative on R⁸₄: D_X Y = (aαγ, bβδ) for X = (aα,bβ), Y = (pγ,qδ).
inline AmbientVector flat_derivative(const TangentPair& x, const LeftInvariantField& y) {
  return {x.base.a.mat() * (x.alpha.mat() * y.alpha.mat()),
          x.base.b.mat() * (x.beta.mat() * y.beta.mat())};
}

// Levi-Civita connection of the product metric via the flat embedding:
// ∇ᴱ_X Y = D_X Y − ½<X,Y>(a,b) − ½<Y,QX>(−a,b), followed by an explicit
// tangency projection (floating-point hygiene; mathematically a no-op).
inline TangentPair product_connection(const TangentPair& x, const LeftInvariantField& y) {
  AmbientVector d = flat_derivative(x, y);
  TangentPair yv = y.at(x.base);
  double xy = product_metric(x, yv);
  double yqx = product_metric(yv, ps_Q(x));
  const Mat2& a = x.base.a.mat();
  const Mat2& b = x.base.b.mat();
  AmbientVector v{d.first - 0.5 * xy * a + 0.5 * yqx * a,
                  d.second - 0.5 * xy * b - 0.5 * yqx * b};
  return project_tangent(x.base, v);
}

// Nearly Kähler Levi-Civita connection: ∇̃_X Y = ∇ᴱ_X Y − ½(JG(X,PY) + JG(Y,PX)).
inline TangentPair nk_connection(const TangentPair& x, const LeftInvariantField& y) {
  TangentPair yv = y.at(x.base);
  TangentPair corr = cx_J(tensor_G(x, ps_P(yv))) + cx_J(tensor_G(yv, ps_P(x)));
  return product_connection(x, y) - 0.5 * corr;
}

// ∇̃ maps left-invariant fields to left-invariant fields; this computes the
// constant coefficients directly (∇ᴱ of left-invariant fields is (α×γ, β×δ)).
inline LeftInvariantField nk_connection_lif(const LeftInvariantField& x,
                                            const LeftInvariantField& y) {
  ProductPoint id{};
  TangentPair xv = x.at(id), yv = y.at(id);
  TangentPair e{id, cross(x.alpha, y.alpha), cross(x.beta, y.beta)};
  TangentPair corr = cx_J(tensor_G(xv, ps_P(yv))) + cx_J(tensor_G(yv, ps_P(xv)));
  TangentPair r = e - 0.5 * corr;
  return {r.alpha, r.beta};
}

inline LeftInvariantField lie_bracket(const LeftInvariantField& x,
                                      const LeftInvariantField& y) {
  return {2.0 * cross(x.alpha, y.alpha), 2.0 * cross(x.beta, y.beta)};
}

// ‖∇̃_X(JY) − J∇̃_X Y − G(X,Y)‖; zero iff G is the covariant derivative of J.
inline double nabla_J_check(const TangentPair& x, const LeftInvariantField& y) {
  LeftInvariantField jy{(1.0 / kSqrt3) * (y.alpha - 2.0 * y.beta),
                        (1.0 / kSqrt3) * (2.0 * y.alpha - y.beta)};
  TangentPair lhs = nk_connection(x, jy) - cx_J(nk_connection(x, y));
  return residual_norm(lhs - tensor_G(x, y.at(x.base)));
}

// ‖(∇̃_X P)Y − ½(JG(X,PY) + JPG(X,Y))‖.
inline double nabla_P_check(const TangentPair& x, const LeftInvariantField& y) {
  LeftInvariantField py{y.beta, y.alpha};
  TangentPair yv = y.at(x.base);
  TangentPair lhs = nk_connection(x, py) - ps_P(nk_connection(x, y));
  TangentPair rhs =
      0.5 * (cx_J(tensor_G(x, ps_P(yv))) + cx_J(ps_P(tensor_G(x, yv))));
  return residual_norm(lhs - rhs);
}

// R(X,Y)Z = ∇̃_X ∇̃_Y Z − ∇̃_Y ∇̃_X Z − ∇̃_[X,Y] Z, purely algebraic on
// left-invariant fields. Independent oracle for the closed-form curvature_R.
inline TangentPair connection_curvature(const LeftInvariantField& x,
                                        const LeftInvariantField& y,
                                        const LeftInvariantField& z,
                                        const ProductPoint& base) {
  LeftInvariantField xyz = nk_connection_lif(x, nk_connection_lif(y, z));
  LeftInvariantField yxz = nk_connection_lif(y, nk_connection_lif(x, z));
  LeftInvariantField bz = nk_connection_lif(lie_bracket(x, y), z);
  return xyz.at(base) - yxz.at(base) - bz.at(base);
}

// Covariant derivative of an arbitrary tangent field along X, by central
// differences of the ambient representative; used for tensoriality checks and
// numeric immersions.
inline TangentPair nk_connection_fd(const TangentPair& x,
                                    const std::function<TangentPair(const ProductPoint&)>& field,
                                    double step = 1e-5) {
  auto point_at = [&](double t) {
    return ProductPoint{SL2Point(x.base.a.mat() * exp_sl2(t * x.alpha).mat()),
                        SL2Point(x.base.b.mat() * exp_sl2(t * x.beta).mat())};
  };
  AmbientVector plus = ambient(field(point_at(step)));
  AmbientVector minus = ambient(field(point_at(-step)));
  TangentPair de = project_tangent(x.base, (0.5 / step) * (plus - minus));
  TangentPair yv = field(x.base);
  TangentPair corr = cx_J(tensor_G(x, ps_P(yv))) + cx_J(tensor_G(yv, ps_P(x)));
  return de - 0.5 * corr;
}

}  // namespace nklab
