#include "nklab/lagrangian.hpp"

#include <cmath>
#include <utility>

namespace nklab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_2pi(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

// signed circular difference a - b reduced to (-pi, pi]
double circ_diff(double a, double b) {
  double d = std::fmod(a - b, kTwoPi);
  if (d <= -kPi) d += kTwoPi;
  if (d > kPi) d -= kTwoPi;
  return d;
}

Sl2Elem conj_by(const Mat2& c, const Sl2Elem& v) {
  // c v c for the split-quaternion units (c in {i,j,k}); traceless again
  return Sl2Elem::from_mat(c * v.mat() * c);
}

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

}  // namespace

// --- immersion specs ---------------------------------------------------------

ImmersionSpec builtin_immersion(const std::string& name) {
  ImmersionSpec s;
  s.name = name;
  const Mat2 mi = sq_i().mat(), mk = sq_k().mat();
  if (name == "example1") {
    s.map = [](const SL2Point& u) { return ProductPoint{SL2Point(), u}; };
    s.lif_diff = [](const Sl2Elem& v) {
      return std::pair<Sl2Elem, Sl2Elem>(Sl2Elem(), v);
    };
  } else if (name == "example2") {
    s.map = [mi](const SL2Point& u) {
      return ProductPoint{u, SL2Point(mi * u.mat() * mi)};
    };
    // q(u) = i u i, so q^{-1} dq(v) = -i v i (using i^2 = -Id)
    s.lif_diff = [mi](const Sl2Elem& v) {
      return std::pair<Sl2Elem, Sl2Elem>(v, -1.0 * conj_by(mi, v));
    };
  } else if (name == "example3") {
    s.map = [mk](const SL2Point& u) {
      return ProductPoint{u, SL2Point(mk * u.mat() * mk)};
    };
    // q(u) = k u k, so q^{-1} dq(v) = k v k (using k^2 = Id)
    s.lif_diff = [mk](const Sl2Elem& v) {
      return std::pair<Sl2Elem, Sl2Elem>(v, conj_by(mk, v));
    };
  } else if (name == "nonlagrangian") {
    // u -> (u, u c) with a fixed non-central c: right translation on one
    // factor only, which destroys the Lagrangian condition
    const Mat2 c = exp_sl2(0.5 * sq_j()).mat();
    const Mat2 cinv = adjugate(c);
    s.map = [c](const SL2Point& u) {
      return ProductPoint{u, SL2Point(u.mat() * c)};
    };
    s.lif_diff = [c, cinv](const Sl2Elem& v) {
      return std::pair<Sl2Elem, Sl2Elem>(v,
                                         Sl2Elem::from_mat(cinv * v.mat() * c));
    };
  } else {
    throw std::invalid_argument("unknown built-in immersion: " + name);
  }
  return s;
}

namespace {

Mat2 json_component(const nlohmann::json& j, const SL2Point& u) {
  const Mat2 mi = sq_i().mat(), mj = sq_j().mat(), mk = sq_k().mat();
  auto coeff = [&](const char* key) {
    if (!j.contains(key)) return 0.0;
    if (!j[key].is_number())
      throw std::invalid_argument("immersion coefficients must be numbers");
    return j[key].get<double>();
  };
  Mat2 m = Mat2::zero();
  m = m + coeff("u") * u.mat();
  m = m + coeff("iui") * (mi * u.mat() * mi);
  m = m + coeff("kuk") * (mk * u.mat() * mk);
  m = m + coeff("juj") * (mj * u.mat() * mj);
  m = m + coeff("const") * Mat2::identity();
  return m;
}

}  // namespace

ImmersionSpec immersion_from_json(const nlohmann::json& j, double fd_step) {
  if (!j.is_object() || !j.contains("p") || !j.contains("q"))
    throw std::invalid_argument("immersion JSON needs objects p and q");
  nlohmann::json p = j["p"], q = j["q"];
  if (!p.is_object() || !q.is_object())
    throw std::invalid_argument("immersion JSON needs objects p and q");
  for (const auto* side : {&p, &q})
    for (const auto& [key, value] : side->items())
      if (key != "u" && key != "iui" && key != "kuk" && key != "juj" &&
          key != "const")
        throw std::invalid_argument("unknown immersion basis key: " + key);
  ImmersionSpec s;
  s.name = j.value("name", std::string("custom"));
  s.fd_step = fd_step;
  s.map = [p, q](const SL2Point& u) {
    return ProductPoint{SL2Point(json_component(p, u)),
                        SL2Point(json_component(q, u))};
  };
  return s;
}

// --- differential and Lagrangian test ---------------------------------------

TangentPair differential(const ImmersionSpec& spec, const SL2Point& u,
                         const Sl2Elem& v) {
  TangentPair d;
  if (spec.left_invariant()) {
    auto [alpha, beta] = spec.lif_diff(v);
    d = TangentPair{spec.map(u), alpha, beta};
  } else {
    double s = spec.fd_step;
    ProductPoint plus = spec.map(SL2Point(u.mat() * exp_sl2(s * v).mat()));
    ProductPoint minus = spec.map(SL2Point(u.mat() * exp_sl2(-s * v).mat()));
    AmbientVector dv{(0.5 / s) * (plus.a.mat() - minus.a.mat()),
                     (0.5 / s) * (plus.b.mat() - minus.b.mat())};
    d = project_tangent(spec.map(u), dv);
  }
  double n = residual_norm(d);
  if (!std::isfinite(n)) throw std::runtime_error("differential is not finite");
  if (n < 1e-10 && residual_norm({d.base, v, Sl2Elem()}) > 1e-10)
    throw std::runtime_error("degenerate differential");
  return d;
}

double lagrangian_residual(const ImmersionSpec& spec, const SL2Point& u) {
  std::array<TangentPair, 3> d;
  for (int i = 0; i < 3; ++i) d[i] = differential(spec, u, sq_basis(i));
  double r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r = std::max(r, std::fabs(metric_g(d[i], cx_J(d[j]))));
  return r;
}

// --- frame construction ------------------------------------------------------

namespace {

TangentPair combine(const std::array<TangentPair, 3>& d, const Vec3& c) {
  return c(0) * d[0] + c(1) * d[1] + c(2) * d[2];
}

const double kSqrt23 = std::sqrt(2.0 / 3.0);

}  // namespace

LagrangianFrame build_frame(const ImmersionSpec& spec, const SL2Point& u) {
  std::array<TangentPair, 3> d;
  for (int i = 0; i < 3; ++i) d[i] = differential(spec, u, sq_basis(i));

  Mat3 gram;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gram(i, j) = metric_g(d[i], d[j]);
  Eigen::SelfAdjointEigenSolver<Mat3> es(gram);
  int negatives = 0;
  for (int k = 0; k < 3; ++k) {
    if (std::fabs(es.eigenvalues()(k)) < 1e-10)
      throw std::runtime_error("induced metric is degenerate");
    if (es.eigenvalues()(k) < 0) ++negatives;
  }
  if (negatives != 1)
    throw std::runtime_error("induced metric is not Lorentzian");

  // eigenvalues ascending: the single negative one comes first, which is the
  // timelike slot of the (-,+,+) Gram
  LagrangianFrame f;
  for (int k = 0; k < 3; ++k) {
    Vec3 c = es.eigenvectors().col(k) /
             std::sqrt(std::fabs(es.eigenvalues()(k)));
    f.coeffs.col(k) = c;
    f.e[k] = combine(d, c);
  }
  f.delta = 1;

  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (std::fabs(metric_g(f.e[i], cx_J(f.e[j]))) > 1e-8)
        throw std::runtime_error("frame is not Lagrangian at this point");

  // orient so JG(E1,E2) = +sqrt(2/3) E3 (total negation flips the sign)
  double c3 = metric_g(cx_J(tensor_G(f.e[0], f.e[1])), f.e[2]);
  if (std::fabs(std::fabs(c3) - kSqrt23) > 1e-7)
    throw std::runtime_error("frame violates the JG normalization");
  if (c3 < 0) {
    for (int k = 0; k < 3; ++k) {
      f.e[k] = -f.e[k];
      f.coeffs.col(k) = -f.coeffs.col(k);
    }
  }
  f.epsilon = 1.0;

  // full table check: JG(E1,E3) = -sqrt(2/3) E2, JG(E2,E3) = -sqrt(2/3) E1
  double r13 = residual_norm(cx_J(tensor_G(f.e[0], f.e[2])) + kSqrt23 * f.e[1]);
  double r23 = residual_norm(cx_J(tensor_G(f.e[1], f.e[2])) + kSqrt23 * f.e[0]);
  if (std::max(r13, r23) > 1e-7)
    throw std::runtime_error("frame violates the JG normalization");
  return f;
}

OperatorPair extract_AB(const LagrangianFrame& frame) {
  Mat3 delta = delta_matrix(frame.delta);
  Mat3 m, n;
  std::array<TangentPair, 3> pe;
  for (int j = 0; j < 3; ++j) pe[j] = ps_P(frame.e[j]);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      m(i, j) = metric_g(pe[j], frame.e[i]);
      n(i, j) = metric_g(pe[j], cx_J(frame.e[i]));
    }
  OperatorPair pair{delta * m, delta * n, frame.delta};
  for (int j = 0; j < 3; ++j) {
    TangentPair rec = pe[j];
    for (int k = 0; k < 3; ++k)
      rec = rec - pair.A(k, j) * frame.e[k] -
            pair.B(k, j) * cx_J(frame.e[k]);
    if (residual_norm(rec) > 1e-6)
      throw std::runtime_error("PE_j does not decompose over TM + JTM");
  }
  return pair;
}

AngleTriple angle_functions(const OperatorPair& pair) {
  double off = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j)
        off = std::max({off, std::fabs(pair.A(i, j)), std::fabs(pair.B(i, j))});
  if (off <= 1e-7)
    return {wrap_2pi(std::atan2(pair.B(0, 0), pair.A(0, 0))),
            wrap_2pi(std::atan2(pair.B(1, 1), pair.A(1, 1))),
            wrap_2pi(std::atan2(pair.B(2, 2), pair.A(2, 2)))};
  Classification c = classify(pair);
  if (c.case_id != 1)
    throw std::runtime_error("operator pair is not of diagonalizable type");
  return {c.params.at("two_theta_1"), c.params.at("two_theta_2"),
          c.params.at("two_theta_3")};
}

// --- frame fields and covariant derivatives ----------------------------------

namespace {

// re-order/re-sign a freshly built frame to match a reference frame's
// coefficient columns (needed for finite differences of frame-dependent data)
void align_frame(const LagrangianFrame& ref, LagrangianFrame& f) {
  std::array<TangentPair, 3> e = f.e;
  Mat3 c = f.coeffs;
  std::array<bool, 3> used{false, false, false};
  for (int k = 0; k < 3; ++k) {
    int best = -1;
    double best_dist = 0;
    double sign = 1;
    for (int j = 0; j < 3; ++j) {
      if (used[j]) continue;
      double dplus = (c.col(j) - ref.coeffs.col(k)).norm();
      double dminus = (c.col(j) + ref.coeffs.col(k)).norm();
      double dist = std::min(dplus, dminus);
      if (best < 0 || dist < best_dist) {
        best = j;
        best_dist = dist;
        sign = (dplus <= dminus) ? 1.0 : -1.0;
      }
    }
    used[best] = true;
    f.e[k] = sign * e[best];
    f.coeffs.col(k) = sign * c.col(best);
  }
}

LagrangianFrame frame_at(const ImmersionSpec& spec, const SL2Point& u,
                         const LagrangianFrame* ref) {
  LagrangianFrame f = build_frame(spec, u);
  if (ref) align_frame(*ref, f);
  return f;
}

Sl2Elem domain_direction(const LagrangianFrame& f, int i) {
  Sl2Elem w;
  for (int m = 0; m < 3; ++m) w = w + f.coeffs(m, i) * sq_basis(m);
  return w;
}

SL2Point moved_point(const SL2Point& u, const Sl2Elem& w, double t) {
  return SL2Point(u.mat() * exp_sl2(t * w).mat());
}

// nabla~ of frame field E_j along E_i
TangentPair frame_covariant(const ImmersionSpec& spec, const SL2Point& u,
                            const LagrangianFrame& f, int i, int j) {
  if (spec.left_invariant()) {
    LeftInvariantField y{f.e[j].alpha, f.e[j].beta};
    return nk_connection(f.e[i], y);
  }
  double s = spec.fd_step;
  Sl2Elem w = domain_direction(f, i);
  AmbientVector plus = ambient(frame_at(spec, moved_point(u, w, s), &f).e[j]);
  AmbientVector minus = ambient(frame_at(spec, moved_point(u, w, -s), &f).e[j]);
  TangentPair de = project_tangent(f.e[0].base, (0.5 / s) * (plus - minus));
  TangentPair x = f.e[i], y = f.e[j];
  TangentPair corr = cx_J(tensor_G(x, ps_P(y))) + cx_J(tensor_G(y, ps_P(x)));
  return de - 0.5 * corr;
}

FrameDerivatives frame_derivatives(const ImmersionSpec& spec, const SL2Point& u,
                                   const LagrangianFrame& f) {
  FrameDerivatives d;
  Mat3 delta = delta_matrix(f.delta);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      TangentPair t = frame_covariant(spec, u, f, i, j);
      TangentPair rec = t;
      for (int k = 0; k < 3; ++k) {
        double w = 0, hh = 0;
        for (int l = 0; l < 3; ++l) {
          w += delta(k, l) * metric_g(t, f.e[l]);
          hh += delta(k, l) * metric_g(t, cx_J(f.e[l]));
        }
        d.omega[i][j][k] = w;
        d.h[i][j][k] = hh;
        rec = rec - w * f.e[k] - hh * cx_J(f.e[k]);
      }
      d.projection_residual =
          std::max(d.projection_residual, residual_norm(rec));
    }
  return d;
}

struct PointData {
  LagrangianFrame frame;
  OperatorPair pair;
  FrameDerivatives derivs;
  AngleTriple angles;
};

PointData point_data(const ImmersionSpec& spec, const SL2Point& u,
                     const LagrangianFrame* ref, bool with_derivs = true) {
  PointData p{frame_at(spec, u, ref), {}, {}, {}};
  p.pair = extract_AB(p.frame);
  if (with_derivs) p.derivs = frame_derivatives(spec, u, p.frame);
  p.angles = angle_functions(p.pair);
  return p;
}

double angle_component(const AngleTriple& t, int j) {
  return j == 0 ? t.t1 : (j == 1 ? t.t2 : t.t3);
}

}  // namespace

FrameDerivatives second_fundamental_form(const ImmersionSpec& spec,
                                         const SL2Point& u) {
  LagrangianFrame f = build_frame(spec, u);
  FrameDerivatives d = frame_derivatives(spec, u, f);
  if (d.projection_residual > 1e-6)
    throw std::runtime_error("covariant derivative not in TM + JTM");
  return d;
}

double minimality_residual(const FrameDerivatives& d,
                           const LagrangianFrame& frame) {
  Mat3 delta = delta_matrix(frame.delta);
  double r = 0;
  for (int k = 0; k < 3; ++k) {
    double tr = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) tr += delta(i, j) * d.h[i][j][k];
    r = std::max(r, std::fabs(tr));
  }
  return r;
}

// --- Gauss and Codazzi -------------------------------------------------------

namespace {

// intrinsic curvature coefficients R(E_i,E_j)E_k = sum_l coeff(l) E_l, using
// finite-difference directional derivatives of the omega table
double intrinsic_curvature(const ImmersionSpec& spec, const SL2Point& u,
                           const PointData& base,
                           const std::array<PointData, 3>& plus,
                           const std::array<PointData, 3>& minus, double step,
                           int i, int j, int k, int l) {
  auto dw = [&](int dir, int a, int b, int c) {
    return (plus[dir].derivs.omega[a][b][c] -
            minus[dir].derivs.omega[a][b][c]) /
           (2.0 * step);
  };
  const auto& w = base.derivs.omega;
  double r = dw(i, j, k, l) - dw(j, i, k, l);
  for (int m = 0; m < 3; ++m) {
    r += w[j][k][m] * w[i][m][l] - w[i][k][m] * w[j][m][l];
    r -= (w[i][j][m] - w[j][i][m]) * w[m][k][l];
  }
  return r;
}

std::array<PointData, 3> offset_data(const ImmersionSpec& spec,
                                     const SL2Point& u, const PointData& base,
                                     double step) {
  std::array<PointData, 3> out;
  for (int i = 0; i < 3; ++i) {
    Sl2Elem w = domain_direction(base.frame, i);
    out[i] = point_data(spec, moved_point(u, w, step), &base.frame);
  }
  return out;
}

}  // namespace

double gauss_residual(const ImmersionSpec& spec, const SL2Point& u) {
  double step = 1e-4;
  PointData base = point_data(spec, u, nullptr);
  std::array<PointData, 3> plus = offset_data(spec, u, base, step);
  std::array<PointData, 3> minus = offset_data(spec, u, base, -step);
  Mat3 delta = delta_matrix(base.frame.delta);
  const Mat3 &a = base.pair.A, &b = base.pair.B;
  Mat3 da = delta * a, db = delta * b;
  const auto& h = base.derivs.h;

  double res = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double lhs =
              intrinsic_curvature(spec, u, base, plus, minus, step, i, j, k, l);
          double rhs = (-5.0 / 6.0) * (delta(j, k) * (l == i ? 1 : 0) -
                                       delta(i, k) * (l == j ? 1 : 0));
          rhs += (-2.0 / 3.0) * (da(k, j) * a(l, i) - da(k, i) * a(l, j) +
                                 db(k, j) * b(l, i) - db(k, i) * b(l, j));
          // shape-operator terms: -S_{h(X,Z)}Y + S_{h(Y,Z)}X
          for (int m = 0; m < 3; ++m)
            for (int n = 0; n < 3; ++n)
              for (int p = 0; p < 3; ++p) {
                rhs -= delta(l, m) * h[i][k][n] * h[j][m][p] * delta(p, n);
                rhs += delta(l, m) * h[j][k][n] * h[i][m][p] * delta(p, n);
              }
          res = std::max(res, std::fabs(lhs - rhs));
        }
  return res;
}

double codazzi_residual(const ImmersionSpec& spec, const SL2Point& u) {
  double step = 1e-4;
  PointData base = point_data(spec, u, nullptr);
  std::array<PointData, 3> plus = offset_data(spec, u, base, step);
  std::array<PointData, 3> minus = offset_data(spec, u, base, -step);
  Mat3 delta = delta_matrix(base.frame.delta);
  const Mat3 &a = base.pair.A, &b = base.pair.B;
  Mat3 da = delta * a, db = delta * b;
  const auto& h = base.derivs.h;
  const auto& w = base.derivs.omega;

  // normal-connection coefficients: nabla^perp_{E_i} JE_l = sum_m sigma JE_m,
  // sigma_il^m = omega_il^m + gamma_il^m with G(E_i,E_l) = sum gamma JE_m
  double gamma[3][3][3];
  for (int i = 0; i < 3; ++i)
    for (int l = 0; l < 3; ++l) {
      TangentPair g = tensor_G(base.frame.e[i], base.frame.e[l]);
      for (int m = 0; m < 3; ++m) {
        double v = 0;
        for (int n = 0; n < 3; ++n)
          v += delta(m, n) * metric_g(g, cx_J(base.frame.e[n]));
        gamma[i][l][m] = v;
      }
    }

  auto dh = [&](int dir, int aa, int bb, int cc) {
    return (plus[dir].derivs.h[aa][bb][cc] - minus[dir].derivs.h[aa][bb][cc]) /
           (2.0 * step);
  };
  // (nabla-bar_{E_i} h)(E_j, E_k) coefficient over JE_m
  auto nabla_bar_h = [&](int i, int j, int k, int m) {
    double r = dh(i, j, k, m);
    for (int l = 0; l < 3; ++l) {
      r += h[j][k][l] * (w[i][l][m] + gamma[i][l][m]);
      r -= w[i][j][l] * h[l][k][m];
      r -= w[i][k][l] * h[j][l][m];
    }
    return r;
  };

  double res = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int m = 0; m < 3; ++m) {
          double lhs = nabla_bar_h(i, j, k, m) - nabla_bar_h(j, i, k, m);
          double rhs = (-2.0 / 3.0) * (da(k, j) * b(m, i) - da(k, i) * b(m, j) -
                                       db(k, j) * a(m, i) + db(k, i) * a(m, j));
          res = std::max(res, std::fabs(lhs - rhs));
        }
  return res;
}

double sectional_curvature(const ImmersionSpec& spec, const SL2Point& u, int i,
                           int j) {
  double step = 1e-4;
  PointData base = point_data(spec, u, nullptr);
  std::array<PointData, 3> plus = offset_data(spec, u, base, step);
  std::array<PointData, 3> minus = offset_data(spec, u, base, -step);
  Mat3 delta = delta_matrix(base.frame.delta);
  // g(R(E_i,E_j)E_j, E_i) = sum_l coeff_l delta(l,i)
  double num = 0;
  for (int l = 0; l < 3; ++l)
    num += intrinsic_curvature(spec, u, base, plus, minus, step, i, j, j, l) *
           delta(l, i);
  double den = delta(i, i) * delta(j, j) - delta(i, j) * delta(i, j);
  return num / den;
}

double sectional_curvature_plane(const ImmersionSpec& spec, const SL2Point& u,
                                 const Vec3& a, const Vec3& b) {
  double step = 1e-4;
  PointData base = point_data(spec, u, nullptr);
  std::array<PointData, 3> plus = offset_data(spec, u, base, step);
  std::array<PointData, 3> minus = offset_data(spec, u, base, -step);
  Mat3 delta = delta_matrix(base.frame.delta);
  double riem[3][3][3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          riem[i][j][k][l] =
              intrinsic_curvature(spec, u, base, plus, minus, step, i, j, k, l);
  double num = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          for (int m = 0; m < 3; ++m)
            num += a(i) * b(j) * b(k) * riem[i][j][k][l] * delta(l, m) * a(m);
  double gaa = a.dot(delta * a), gbb = b.dot(delta * b), gab = a.dot(delta * b);
  double den = gaa * gbb - gab * gab;
  if (std::fabs(den) < 1e-10)
    throw std::invalid_argument("degenerate tangent plane");
  return num / den;
}

ImmersionSpec compose_isometry(const ImmersionSpec& spec, int which) {
  ImmersionSpec out;
  out.fd_step = spec.fd_step;
  auto f = spec.map;
  if (which == 1) {
    out.name = spec.name + "+swap";
    out.map = [f](const SL2Point& u) { return isometry_phi1(f(u)); };
    if (spec.lif_diff) {
      auto d = spec.lif_diff;
      out.lif_diff = [d](const Sl2Elem& v) {
        auto [alpha, beta] = d(v);
        return std::pair<Sl2Elem, Sl2Elem>(beta, alpha);
      };
    }
  } else if (which == 2) {
    out.name = spec.name + "+inv";
    out.map = [f](const SL2Point& u) { return isometry_phi2(f(u)); };
  } else {
    throw std::invalid_argument("isometry index must be 1 or 2");
  }
  return out;
}

// --- obstruction for the non-diagonalizable refined cases --------------------

Vec3 codazzi_obstruction(int case_id, const ParamMap& params) {
  Mat3 a = Mat3::Zero(), b = Mat3::Zero(), delta;
  switch (case_id) {
    case 2: {
      double t1 = params.at("two_theta_1");
      double c1 = std::cos(t1), s1 = std::sin(t1);
      if (std::fabs(s1) < 1e-9)
        throw std::invalid_argument("case 2 requires theta_1 != 0, pi/2");
      // refined constraint 2 theta_1 + theta_2 = 0 mod pi forces
      // cos 2theta_2 = cos 4theta_1 and sin 2theta_2 = -sin 4theta_1
      a << c1, 1, 0, 0, c1, 0, 0, 0, std::cos(2 * t1);
      b << s1, -c1 / s1, 0, 0, s1, 0, 0, 0, -std::sin(2 * t1);
      delta = delta_matrix(2);
      break;
    }
    case 3: {
      double sg = params.count("sign") ? params.at("sign") : 1.0;
      if (std::fabs(std::fabs(sg) - 1.0) > 1e-12)
        throw std::invalid_argument("case 3 sign must be +1 or -1");
      a << -0.5, 0, 1, 0, -0.5, 0, 0, 1, -0.5;
      b << std::sqrt(3.0) / 2, -4.0 / (3 * std::sqrt(3.0)), 1 / std::sqrt(3.0),
          0, std::sqrt(3.0) / 2, 0, 0, 1 / std::sqrt(3.0), std::sqrt(3.0) / 2;
      b *= sg;
      delta = delta_matrix(2);
      break;
    }
    case 4: {
      double t1 = params.at("two_theta_1");
      double t2 = params.at("two_theta_2");
      double lam = params.at("lambda");
      double th2 = 0.5 * t2;
      if (std::fabs(lam) < 1e-12)
        throw std::invalid_argument("case 4 requires lambda != 0");
      if (std::fabs(std::sin(t1 + th2)) > 1e-9)
        throw std::invalid_argument(
            "case 4 requires 2 theta_1 + theta_2 = 0 mod pi");
      double ch = std::cosh(lam), sh = std::sinh(lam);
      a << ch * std::cos(t1), sh * std::sin(th2), 0, -sh * std::sin(th2),
          ch * std::cos(t1), 0, 0, 0, std::cos(t2);
      b << ch * std::sin(t1), sh * std::cos(th2), 0, -sh * std::cos(th2),
          ch * std::sin(t1), 0, 0, 0, std::sin(t2);
      delta = delta_matrix(3);
      break;
    }
    default:
      throw std::invalid_argument("obstruction case must be 2, 3 or 4");
  }
  Mat3 da = delta * a, db = delta * b;
  // Codazzi RHS with X=E_1, Y=E_2, Z=E_2 and h = 0, over {JE_1,JE_2,JE_3}
  Vec3 r = (-2.0 / 3.0) * (da(1, 1) * b.col(0) - da(1, 0) * b.col(1) -
                           db(1, 1) * a.col(0) + db(1, 0) * a.col(1));
  return r;
}

AngleTriple isometry_angle_map(const AngleTriple& t, int which) {
  double shift;
  if (which == 1)
    shift = kTwoPi;  // theta -> pi - theta doubles to 2pi - 2theta
  else if (which == 2)
    shift = kTwoPi / 3.0;  // theta -> pi/3 - theta doubles to 2pi/3 - 2theta
  else
    throw std::invalid_argument("isometry index must be 1 or 2");
  return {wrap_2pi(shift - t.t1), wrap_2pi(shift - t.t2), wrap_2pi(shift - t.t3)};
}

// --- consistency checks ------------------------------------------------------

double normality_residual(const ImmersionSpec& spec, const SL2Point& u) {
  LagrangianFrame f = build_frame(spec, u);
  double r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      TangentPair g = tensor_G(f.e[i], f.e[j]);
      for (int k = 0; k < 3; ++k)
        r = std::max(r, std::fabs(metric_g(g, f.e[k])));
    }
  return r;
}

double h_symmetry_residual(const FrameDerivatives& d, const LagrangianFrame& f) {
  Mat3 delta = delta_matrix(f.delta);
  double r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double lhs = 0, rhs = 0;
        for (int p = 0; p < 3; ++p) {
          lhs += d.h[i][j][p] * delta(p, k);
          rhs += d.h[i][k][p] * delta(p, j);
        }
        r = std::max(r, std::fabs(lhs - rhs));
      }
  return r;
}

double angle_derivative_residual(const ImmersionSpec& spec, const SL2Point& u,
                                 double step) {
  PointData base = point_data(spec, u, nullptr, false);
  double r = 0;
  Mat3 delta = delta_matrix(base.frame.delta);
  FrameDerivatives d = frame_derivatives(spec, u, base.frame);
  for (int i = 0; i < 3; ++i) {
    Sl2Elem w = domain_direction(base.frame, i);
    PointData p = point_data(spec, moved_point(u, w, step), &base.frame, false);
    PointData m = point_data(spec, moved_point(u, w, -step), &base.frame, false);
    for (int j = 0; j < 3; ++j) {
      double dtheta = 0.5 * circ_diff(angle_component(p.angles, j),
                                      angle_component(m.angles, j)) /
                      (2.0 * step);
      // E_i(theta_j) = -delta_i delta_j h_jj^i
      double expect = -delta(i, i) * delta(j, j) * d.h[j][j][i];
      r = std::max(r, std::fabs(dtheta - expect));
    }
  }
  return r;
}

double sff_relation_residual(const ImmersionSpec& spec, const SL2Point& u) {
  PointData base = point_data(spec, u, nullptr);
  Mat3 delta = delta_matrix(base.frame.delta);
  double theta[3] = {0.5 * base.angles.t1, 0.5 * base.angles.t2,
                     0.5 * base.angles.t3};
  double r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        if (j == k) continue;
        double lhs = base.derivs.h[i][j][k] * std::cos(theta[j] - theta[k]);
        double rhs = (delta(k, k) * levi_civita(i, j, k) / std::sqrt(6.0) -
                      base.derivs.omega[i][j][k]) *
                     std::sin(theta[j] - theta[k]);
        r = std::max(r, std::fabs(lhs - rhs));
      }
  return r;
}

double angle_commutator_residual(const ImmersionSpec& spec, const SL2Point& u,
                                 double step) {
  PointData base = point_data(spec, u, nullptr);
  std::array<PointData, 3> plus = offset_data(spec, u, base, step);
  std::array<PointData, 3> minus = offset_data(spec, u, base, -step);
  Mat3 delta = delta_matrix(base.frame.delta);
  auto dh = [&](int dir, int a, int b, int c) {
    return (plus[dir].derivs.h[a][b][c] - minus[dir].derivs.h[a][b][c]) /
           (2.0 * step);
  };
  const auto& w = base.derivs.omega;
  const auto& h = base.derivs.h;
  double r = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double lhs = -delta(k, k) * dh(k, j, j, i) + delta(i, i) * dh(i, j, j, k);
        double rhs = 0;
        for (int l = 0; l < 3; ++l)
          rhs += delta(k, k) * delta(i, i) * delta(l, l) *
                 (w[i][k][l] - w[k][i][l]) * h[j][j][l];
        r = std::max(r, std::fabs(lhs - rhs));
      }
  return r;
}

double linear_dependence_residual(const LagrangianFrame& frame) {
  double r = 0;
  for (const TangentPair& e : frame.e) {
    double a[3] = {e.alpha.coeff_i(), e.alpha.coeff_j(), e.alpha.coeff_k()};
    double b[3] = {e.beta.coeff_i(), e.beta.coeff_j(), e.beta.coeff_k()};
    for (int p = 0; p < 3; ++p)
      for (int q = p + 1; q < 3; ++q)
        r = std::max(r, std::fabs(a[p] * b[q] - a[q] * b[p]));
  }
  return r;
}

}  // namespace nklab
