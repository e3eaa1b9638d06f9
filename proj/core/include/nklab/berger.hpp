#pragma once

#include <array>

#include "nklab/connection.hpp"
#include "nklab/lagrangian.hpp"

namespace nklab {

// One-parameter family of left-invariant Lorentzian metrics on SL(2,R),
// rescaling the bi-invariant metric along one axis of the split-quaternion
// frame X_1 = i (timelike), X_3 = k (spacelike):
//   axis 1: g~(X,Y) = 4/kappa (<X,Y> + (1 - 4 tau^2/kappa) <X,X_1><Y,X_1>)
//   axis 3: g~(X,Y) = 4/kappa (<X,Y> + (4 tau^2/kappa - 1) <X,X_3><Y,X_3>)
// with kappa > 0 and tau != 0.
struct BergerMetric {
  double kappa = 2.0;
  double tau = 1.0;
  int axis = 1;  // 1 = timelike stretch, 3 = spacelike stretch
};

double berger_eval(const BergerMetric& m, const Sl2Elem& x, const Sl2Elem& y);

// Scales c_i of the orthonormal frame E~_i = c_i X_i; Gram(E~) = diag(-1,1,1).
std::array<double, 3> berger_frame_scales(const BergerMetric& m);

// max |g~(E~_i, E~_j) - diag(-1,1,1)_ij|.
double berger_gram_residual(const BergerMetric& m);

// Closed-form Levi-Civita coefficients of g~ in the frame E~_i.
ConnectionTable berger_connection_table(const BergerMetric& m);

// Independent oracle: the same coefficients from the Koszul formula using
// only the frame brackets and the constant Gram matrix.
ConnectionTable koszul_connection_table(const BergerMetric& m);

double table_distance(const ConnectionTable& a, const ConnectionTable& b);

// Torsion: coefficients of nabla_i E_j - nabla_j E_i - [E_i, E_j].
double berger_torsion_residual(const BergerMetric& m);

// Metric compatibility with constant products: Gamma_ij^m eta_mk symmetric
// part in (j,k) must vanish.
double berger_compatibility_residual(const BergerMetric& m);

// The left-invariant frame carried by the second built-in immersion that
// realizes the timelike-stretched metric with kappa = 2, tau = -1/sqrt(6):
// F_1 = -sqrt(3/2) X_1, F_2 = X_2/sqrt(2), F_3 = X_3/sqrt(2).
std::array<LeftInvariantField, 3> identification_frame();

// Product-metric Levi-Civita coefficients of the pushed-forward frame.
ConnectionTable product_connection_table_f();

// Induced (nearly Kähler) Levi-Civita coefficients of the same frame; must
// equal berger_connection_table({2, -1/sqrt(6), 1}).
ConnectionTable nk_connection_table_f();

// Expected constants of that table (+-sqrt(3/2) and +-1/sqrt(6) pattern).
ConnectionTable reference_table_f();

// Induced-connection constants of the frame (the 5/sqrt(6), 1/sqrt(6)
// pattern), which must match berger_connection_table({2, -1/sqrt(6), 1}).
ConnectionTable reference_induced_table_f();

// max |g(F_i, F_j) - diag(-1,1,1)_ij| in the induced metric (frame is
// orthonormal for the induced metric of the second built-in immersion).
double identification_gram_residual();

// Same construction for the third built-in immersion, which realizes a
// spacelike-stretched metric: F_1 = X_1/sqrt(2), F_2 = X_2/sqrt(2),
// F_3 = -sqrt(3/2) X_3 pushed through u -> (u, kuk).
std::array<LeftInvariantField, 3> identification_frame_spacelike();
ConnectionTable nk_connection_table_f_spacelike();

// Recovers (kappa, tau) of the spacelike family from two coefficients of an
// induced connection table; the remaining entries cross-check the fit.
BergerMetric fit_spacelike(const ConnectionTable& t);

}  // namespace nklab
