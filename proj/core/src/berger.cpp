#include "nklab/berger.hpp"

#include <cmath>
#include <stdexcept>

namespace nklab {

namespace {

const double kEta[3] = {-1.0, 1.0, 1.0};

void require_admissible(const BergerMetric& m) {
  if (m.kappa <= 0) throw std::invalid_argument("berger: kappa must be > 0");
  if (m.tau == 0) throw std::invalid_argument("berger: tau must be nonzero");
  if (m.axis != 1 && m.axis != 3)
    throw std::invalid_argument("berger: axis must be 1 or 3");
}

Sl2Elem frame_x(int i) { return sq_basis(i); }

Sl2Elem frame_e(const BergerMetric& m, int i) {
  return berger_frame_scales(m)[i] * frame_x(i);
}

}  // namespace

double berger_eval(const BergerMetric& m, const Sl2Elem& x, const Sl2Elem& y) {
  require_admissible(m);
  double base = inner(x, y);
  Sl2Elem axis = (m.axis == 1) ? sq_i() : sq_k();
  double w = (m.axis == 1) ? (1.0 - 4.0 * m.tau * m.tau / m.kappa)
                           : (4.0 * m.tau * m.tau / m.kappa - 1.0);
  return (4.0 / m.kappa) * (base + w * inner(x, axis) * inner(y, axis));
}

std::array<double, 3> berger_frame_scales(const BergerMetric& m) {
  require_admissible(m);
  double s = std::sqrt(m.kappa) / 2.0;
  double t = m.kappa / (4.0 * m.tau);
  if (m.axis == 1) return {t, s, s};
  return {s, s, t};
}

double berger_gram_residual(const BergerMetric& m) {
  double r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double expect = (i == j) ? kEta[i] : 0.0;
      r = std::max(r, std::fabs(berger_eval(m, frame_e(m, i), frame_e(m, j)) -
                                expect));
    }
  return r;
}

ConnectionTable berger_connection_table(const BergerMetric& m) {
  require_admissible(m);
  double tau = m.tau;
  double mix = m.kappa / (2.0 * tau) - tau;
  ConnectionTable t;
  if (m.axis == 1) {
    t(0, 1, 2) = mix;
    t(0, 2, 1) = -mix;
    t(1, 0, 2) = -tau;
    t(1, 2, 0) = -tau;
    t(2, 0, 1) = tau;
    t(2, 1, 0) = tau;
  } else {
    t(0, 1, 2) = tau;
    t(0, 2, 1) = -tau;
    t(1, 0, 2) = -tau;
    t(1, 2, 0) = -tau;
    t(2, 0, 1) = mix;
    t(2, 1, 0) = mix;
  }
  return t;
}

ConnectionTable koszul_connection_table(const BergerMetric& m) {
  std::array<Sl2Elem, 3> e;
  for (int i = 0; i < 3; ++i) e[i] = frame_e(m, i);
  auto bracket = [&](int i, int j) { return 2.0 * cross(e[i], e[j]); };
  ConnectionTable t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double rhs = berger_eval(m, bracket(i, j), e[k]) -
                     berger_eval(m, bracket(j, k), e[i]) +
                     berger_eval(m, bracket(k, i), e[j]);
        t(i, j, k) = kEta[k] * 0.5 * rhs;  // Gram is diag(-1,1,1), so
                                           // raising an index is a sign flip
      }
  return t;
}

double table_distance(const ConnectionTable& a, const ConnectionTable& b) {
  double r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        r = std::max(r, std::fabs(a(i, j, k) - b(i, j, k)));
  return r;
}

double berger_torsion_residual(const BergerMetric& m) {
  std::array<Sl2Elem, 3> e;
  for (int i = 0; i < 3; ++i) e[i] = frame_e(m, i);
  ConnectionTable t = berger_connection_table(m);
  double r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Sl2Elem v = 2.0 * cross(e[i], e[j]);
      for (int k = 0; k < 3; ++k)
        v = v - (t(i, j, k) - t(j, i, k)) * e[k];
      r = std::max(r, frob_norm(v.mat()));
    }
  return r;
}

double berger_compatibility_residual(const BergerMetric& m) {
  ConnectionTable t = berger_connection_table(m);
  double r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        r = std::max(r, std::fabs(t(i, j, k) * kEta[k] + t(i, k, j) * kEta[j]));
  return r;
}

// --- identification with the second built-in immersion -----------------------

std::array<LeftInvariantField, 3> identification_frame() {
  ImmersionSpec spec = builtin_immersion("example2");
  double scale[3] = {-std::sqrt(1.5), 1.0 / std::sqrt(2.0),
                     1.0 / std::sqrt(2.0)};
  std::array<LeftInvariantField, 3> f;
  for (int i = 0; i < 3; ++i) {
    auto [alpha, beta] = spec.lif_diff(scale[i] * sq_basis(i));
    f[i] = {alpha, beta};
  }
  return f;
}

namespace {

// coefficients of a left-invariant value over the F-frame in a given metric,
// with a reconstruction check (the values must be tangent to the frame span)
std::array<double, 3> decompose_f(
    const std::array<LeftInvariantField, 3>& f, const LeftInvariantField& v,
    const std::function<double(const TangentPair&, const TangentPair&)>& met) {
  ProductPoint id{};
  Eigen::Matrix3d gram;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) gram(i, j) = met(f[i].at(id), f[j].at(id));
    rhs(i) = met(v.at(id), f[i].at(id));
  }
  Eigen::Vector3d c = gram.ldlt().solve(rhs);
  TangentPair rec = v.at(id);
  for (int i = 0; i < 3; ++i) rec = rec - c(i) * f[i].at(id);
  if (residual_norm(rec) > 1e-9)
    throw std::runtime_error("connection value not in the frame span");
  return {c(0), c(1), c(2)};
}

}  // namespace

ConnectionTable product_connection_table_f() {
  auto f = identification_frame();
  ConnectionTable t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      LeftInvariantField v{cross(f[i].alpha, f[j].alpha),
                           cross(f[i].beta, f[j].beta)};
      auto c = decompose_f(f, v, product_metric);
      for (int k = 0; k < 3; ++k) t(i, j, k) = c[k];
    }
  return t;
}

ConnectionTable nk_connection_table_f() {
  auto f = identification_frame();
  ConnectionTable t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      LeftInvariantField v = nk_connection_lif(f[i], f[j]);
      auto c = decompose_f(f, v, metric_g);
      for (int k = 0; k < 3; ++k) t(i, j, k) = c[k];
    }
  return t;
}

ConnectionTable reference_table_f() {
  double a = std::sqrt(1.5), b = 1.0 / std::sqrt(6.0);
  ConnectionTable t;
  t(0, 1, 2) = -a;
  t(0, 2, 1) = a;
  t(1, 0, 2) = a;
  t(1, 2, 0) = b;
  t(2, 0, 1) = -a;
  t(2, 1, 0) = -b;
  return t;
}

ConnectionTable reference_induced_table_f() {
  double a = 5.0 / std::sqrt(6.0), b = 1.0 / std::sqrt(6.0);
  ConnectionTable t;
  t(0, 1, 2) = -a;
  t(0, 2, 1) = a;
  t(1, 0, 2) = b;
  t(1, 2, 0) = b;
  t(2, 0, 1) = -b;
  t(2, 1, 0) = -b;
  return t;
}

std::array<LeftInvariantField, 3> identification_frame_spacelike() {
  ImmersionSpec spec = builtin_immersion("example3");
  double scale[3] = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0),
                     -std::sqrt(1.5)};
  std::array<LeftInvariantField, 3> f;
  for (int i = 0; i < 3; ++i) {
    auto [alpha, beta] = spec.lif_diff(scale[i] * sq_basis(i));
    f[i] = {alpha, beta};
  }
  return f;
}

ConnectionTable nk_connection_table_f_spacelike() {
  auto f = identification_frame_spacelike();
  ConnectionTable t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      LeftInvariantField v = nk_connection_lif(f[i], f[j]);
      auto c = decompose_f(f, v, metric_g);
      for (int k = 0; k < 3; ++k) t(i, j, k) = c[k];
    }
  return t;
}

BergerMetric fit_spacelike(const ConnectionTable& t) {
  double tau = t(0, 1, 2);
  double mix = t(2, 0, 1);  // kappa/(2 tau) - tau
  if (std::fabs(tau) < 1e-12)
    throw std::invalid_argument("fit: vanishing tau coefficient");
  double kappa = 2.0 * tau * (mix + tau);
  BergerMetric m{kappa, tau, 3};
  require_admissible(m);
  return m;
}

double identification_gram_residual() {
  auto f = identification_frame();
  ProductPoint id{};
  double r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double expect = (i == j) ? kEta[i] : 0.0;
      r = std::max(r, std::fabs(metric_g(f[i].at(id), f[j].at(id)) - expect));
    }
  return r;
}

}  // namespace nklab
