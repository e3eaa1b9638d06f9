#pragma once

#include <array>
#include <functional>
#include <string>

#include <json.hpp>

#include "nklab/connection.hpp"
#include "nklab/nk.hpp"
#include "nklab/normal_forms.hpp"

namespace nklab {

// Immersion SL(2,R) -> SL(2,R) x SL(2,R). Built-in maps carry a closed-form
// differential with base-point-independent Lie-algebra coefficients; numeric
// maps fall back to central differences.
struct ImmersionSpec {
  std::string name;
  std::function<ProductPoint(const SL2Point&)> map;
  // closed-form differential coefficients (alpha, beta) of df(v); null for
  // numeric specs
  std::function<std::pair<Sl2Elem, Sl2Elem>(const Sl2Elem&)> lif_diff;
  double fd_step = 1e-5;

  bool left_invariant() const { return static_cast<bool>(lif_diff); }
};

// The three built-in immersions: u -> (Id,u), u -> (u, iui), u -> (u, kuk),
// plus the deliberately non-Lagrangian test map u -> (u, uc) for a fixed
// non-central c.
ImmersionSpec builtin_immersion(const std::string& name);

// {"p": {...}, "q": {...}} where each side lists coefficients of the linear
// combination over {"u","iui","kuk","juj","const"} ("const" multiplies Id).
ImmersionSpec immersion_from_json(const nlohmann::json& j, double fd_step = 1e-5);

TangentPair differential(const ImmersionSpec& spec, const SL2Point& u,
                         const Sl2Elem& v);

// max over basis pairs of |g(df(X_i), J df(X_j))|.
double lagrangian_residual(const ImmersionSpec& spec, const SL2Point& u);

struct LagrangianFrame {
  std::array<TangentPair, 3> e;
  // coefficients of each frame vector over the basis differentials
  // df(i), df(j), df(k): e[k] = sum_i coeffs(i,k) df(basis_i)
  Mat3 coeffs = Mat3::Identity();
  int delta = 1;
  double epsilon = 1.0;
};

LagrangianFrame build_frame(const ImmersionSpec& spec, const SL2Point& u);

OperatorPair extract_AB(const LagrangianFrame& frame);

AngleTriple angle_functions(const OperatorPair& pair);

// h_ij^k in the normal frame {JE_k} and the tangential connection
// coefficients omega_ij^k; computed from nabla~ of the frame fields.
struct FrameDerivatives {
  std::array<std::array<std::array<double, 3>, 3>, 3> h{};
  std::array<std::array<std::array<double, 3>, 3>, 3> omega{};
  double projection_residual = 0;
};

FrameDerivatives second_fundamental_form(const ImmersionSpec& spec,
                                         const SL2Point& u);

// norm of the Delta-trace of h (for Delta_1: -h_11^k + h_22^k + h_33^k).
double minimality_residual(const FrameDerivatives& d, const LagrangianFrame& frame);

double gauss_residual(const ImmersionSpec& spec, const SL2Point& u);
double codazzi_residual(const ImmersionSpec& spec, const SL2Point& u);

// sectional curvature K(E_i, E_j) of the induced metric from the intrinsic
// curvature tensor (frame-coefficient computation).
double sectional_curvature(const ImmersionSpec& spec, const SL2Point& u, int i,
                           int j);

// sectional curvature of the plane spanned by sum_i a_i E_i and sum_i b_i E_i.
double sectional_curvature_plane(const ImmersionSpec& spec, const SL2Point& u,
                                 const Vec3& a, const Vec3& b);

// Immersion composed with an ambient isometry: which=1 swaps the factors,
// which=2 is (p,q) -> (p^-1, q p^-1). Exact differential is kept for the swap;
// the second one falls back to finite differences.
ImmersionSpec compose_isometry(const ImmersionSpec& spec, int which);

// Codazzi right-hand side with X=E_1, Y=E_2, Z=E_2 for the refined
// non-diagonalizable cases (2, 3, 4); returns coefficients over {JE_1,JE_2,JE_3}.
// Params: case 2 {"two_theta_1"}; case 3 {"sign"}; case 4
// {"two_theta_1","two_theta_2","lambda"} with 2*theta_1 + theta_2 = 0 mod pi.
Vec3 codazzi_obstruction(int case_id, const ParamMap& params);

// Angle maps of the ambient isometries: which=1: theta -> pi - theta;
// which=2: theta -> pi/3 - theta (stored doubled, mod 2 pi).
AngleTriple isometry_angle_map(const AngleTriple& t, int which);

// --- consistency checks used by the verification suites ---------------------

// |g(G(E_i,E_j),E_k)| and |g(h(X,Y),JZ) - g(h(X,Z),JY)| maxima.
double normality_residual(const ImmersionSpec& spec, const SL2Point& u);
double h_symmetry_residual(const FrameDerivatives& d, const LagrangianFrame& f);

// max |E_i(2theta_j)| by central differences (step for the angle derivative).
double angle_derivative_residual(const ImmersionSpec& spec, const SL2Point& u,
                                 double step = 1e-4);

// residual of h_ij^k cos(th_j - th_k) = (delta_k eps_ij^k / sqrt6 - w_ij^k)
// sin(th_j - th_k) over j != k, for diagonalizable-type frames.
double sff_relation_residual(const ImmersionSpec& spec, const SL2Point& u);

// commutator identity on the angle derivatives (both sides by finite
// differences; ~0 for the built-ins).
double angle_commutator_residual(const ImmersionSpec& spec, const SL2Point& u,
                                 double step = 1e-4);

// 2x2 minors of the (alpha, beta) coefficient matrix of each frame vector.
double linear_dependence_residual(const LagrangianFrame& frame);

}  // namespace nklab
