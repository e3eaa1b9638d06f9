#include "nklab/normal_forms.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

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

double circ_dist(double a, double b) {
  double d = std::fabs(wrap_2pi(a) - wrap_2pi(b));
  return std::min(d, kTwoPi - d);
}

double op_scale(const Mat3& a) {
  return std::max(1.0, a.cwiseAbs().maxCoeff());
}

int numeric_rank(const Mat3& m, double tol) {
  Eigen::JacobiSVD<Mat3> svd(m);
  int r = 0;
  for (int i = 0; i < 3; ++i)
    if (svd.singularValues()(i) > tol) ++r;
  return r;
}

}  // namespace

Mat3 delta_matrix(int tag) {
  Mat3 d = Mat3::Zero();
  switch (tag) {
    case 1:
      d.diagonal() << -1, 1, 1;
      break;
    case 2:
      d(0, 1) = d(1, 0) = 1;
      d(2, 2) = 1;
      break;
    case 3:
      d.diagonal() << 1, -1, 1;
      break;
    default:
      throw std::invalid_argument("delta tag must be 1, 2 or 3");
  }
  return d;
}

PairResiduals pair_residuals(const OperatorPair& pair) {
  Mat3 d = delta_matrix(pair.delta);
  PairResiduals r;
  Mat3 da = d * pair.A, db = d * pair.B;
  r.sym_a = (da - da.transpose()).cwiseAbs().maxCoeff();
  r.sym_b = (db - db.transpose()).cwiseAbs().maxCoeff();
  r.commute = (pair.A * pair.B - pair.B * pair.A).cwiseAbs().maxCoeff();
  r.unit = (pair.A * pair.A + pair.B * pair.B - Mat3::Identity())
               .cwiseAbs()
               .maxCoeff();
  return r;
}

void require_valid(const OperatorPair& pair, double tol_sym, double tol_unit) {
  PairResiduals r = pair_residuals(pair);
  if (r.sym_a > tol_sym || r.sym_b > tol_sym)
    throw ClassifyError("operator pair is not Delta-symmetric");
  if (r.commute > tol_sym) throw ClassifyError("operators do not commute");
  if (r.unit > tol_unit) throw ClassifyError("A^2 + B^2 != Id");
}

// --- printed forms -----------------------------------------------------------

namespace {

double get_param(const ParamMap& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end())
    throw std::invalid_argument("missing parameter: " + key);
  return it->second;
}

}  // namespace

void printed_form(int case_id, const ParamMap& p, Mat3& a, Mat3& b, int& delta) {
  a = Mat3::Zero();
  b = Mat3::Zero();
  switch (case_id) {
    case 1: {
      for (int i = 0; i < 3; ++i) {
        double t = get_param(p, "two_theta_" + std::to_string(i + 1));
        a(i, i) = std::cos(t);
        b(i, i) = std::sin(t);
      }
      delta = 1;
      break;
    }
    case 2: {
      double t1 = get_param(p, "two_theta_1");
      double t2 = get_param(p, "two_theta_2");
      double c = get_param(p, "c");
      double c1 = std::cos(t1), s1 = std::sin(t1);
      if (std::fabs(s1) < 1e-12)
        throw std::invalid_argument("case 2 requires theta_1 != 0, pi/2");
      if (std::fabs(c) > 1e-8 &&
          (std::fabs(std::cos(t2) - c1) > 1e-6 ||
           std::fabs(std::sin(t2) + s1) > 1e-6))
        throw std::invalid_argument(
            "case 2 with c != 0 requires cos 2θ2 = cos 2θ1, sin 2θ2 = -sin 2θ1");
      a << c1, 1, 0, 0, c1, 0, 0, 0, std::cos(t2);
      b << s1, -(c * c + 2.0 * c1) / (2.0 * s1), c, 0, s1, 0, 0, c, std::sin(t2);
      delta = 2;
      break;
    }
    case 3: {
      double t = get_param(p, "t");
      a << -1, 1, 0, 0, -1, 0, 0, 0, -1;
      b << 0, t, std::sqrt(2.0), 0, 0, 0, 0, std::sqrt(2.0), 0;
      delta = 2;
      break;
    }
    case 4: {
      double t = get_param(p, "two_theta");
      double c1 = std::cos(t), s1 = std::sin(t);
      if (std::fabs(s1) < 1e-12)
        throw std::invalid_argument("case 4 requires theta != 0, pi/2");
      // B(0,1) entry: the proof's value -csc(2θ)³/2, pinned by A²+B²=Id.
      a << c1, 0, 1, 0, c1, 0, 0, 1, c1;
      b << s1, -0.5 / (s1 * s1 * s1), -c1 / s1, 0, s1, 0, 0, -c1 / s1, s1;
      delta = 2;
      break;
    }
    case 5: {
      double t1 = get_param(p, "two_theta_1");
      double t2 = get_param(p, "two_theta_2");
      double x = get_param(p, "x");
      double y = get_param(p, "y");
      if (std::fabs(x) < 1e-12)
        throw std::invalid_argument("case 5 requires x != 0");
      if (std::fabs(y * std::sin(t1) + x * std::cos(t1)) > 1e-6)
        throw std::invalid_argument("case 5 requires y sin 2θ1 = -x cos 2θ1");
      double s = std::sqrt(1.0 + x * x + y * y);
      a << s * std::cos(t1), x, 0, -x, s * std::cos(t1), 0, 0, 0, std::cos(t2);
      b << s * std::sin(t1), y, 0, -y, s * std::sin(t1), 0, 0, 0, std::sin(t2);
      delta = 3;
      break;
    }
    default:
      throw std::invalid_argument("case_id must be 1..5");
  }
}

// --- generator ---------------------------------------------------------------

OperatorPair generate(int case_id, const ParamMap& params, std::uint64_t seed) {
  Mat3 a, b;
  int delta;
  printed_form(case_id, params, a, b, delta);
  Mat3 d = delta_matrix(delta);
  Rng rng(seed);
  Mat3 w;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) w(i, j) = rng.uniform(-0.8, 0.8);
  Mat3 skew = 0.5 * (w - w.transpose());
  Mat3 gen = d * skew;  // Δ-antisymmetric generator (Δ⁻¹ = Δ)
  Mat3 f = gen.exp();
  Mat3 finv = (-gen).exp();
  return {f * a * finv, f * b * finv, delta};
}

ParamMap sample_case_params(int case_id, Rng& rng) {
  ParamMap p;
  switch (case_id) {
    case 1: {
      // keep the A-eigenvalues (cos 2θ) well separated so the classifier's
      // multiplicity clustering is unambiguous
      double t[3];
      for (;;) {
        for (double& v : t) v = rng.uniform(0.0, kTwoPi);
        bool ok = true;
        for (int i = 0; i < 3 && ok; ++i)
          for (int j = i + 1; j < 3 && ok; ++j)
            if (std::fabs(std::cos(t[i]) - std::cos(t[j])) < 0.2) ok = false;
        if (ok) break;
      }
      p["two_theta_1"] = t[0];
      p["two_theta_2"] = t[1];
      p["two_theta_3"] = t[2];
      break;
    }
    case 2: {
      double t1;
      do {
        t1 = rng.uniform(0.0, kTwoPi);
      } while (std::fabs(std::sin(t1)) < 0.25);
      p["two_theta_1"] = t1;
      if (rng.uniform(0.0, 1.0) < 0.5) {
        // c != 0 branch forces 2θ2 = -2θ1
        double c = rng.uniform(0.3, 1.2) * (rng.uniform(0.0, 1.0) < 0.5 ? 1 : -1);
        p["c"] = c;
        p["two_theta_2"] = wrap_2pi(-t1);
      } else {
        p["c"] = 0.0;
        double t2;
        do {
          t2 = rng.uniform(0.0, kTwoPi);
        } while (std::fabs(std::cos(t2) - std::cos(t1)) < 0.2);
        p["two_theta_2"] = t2;
      }
      break;
    }
    case 3:
      p["t"] = rng.uniform(-1.5, 1.5);
      break;
    case 4: {
      double t;
      do {
        t = rng.uniform(0.0, kTwoPi);
      } while (std::fabs(std::sin(t)) < 0.4);
      p["two_theta"] = t;
      break;
    }
    case 5: {
      double t1;
      do {
        t1 = rng.uniform(0.0, kTwoPi);
      } while (std::fabs(std::sin(t1)) < 0.25);
      double x = rng.uniform(0.3, 1.2) * (rng.uniform(0.0, 1.0) < 0.5 ? 1 : -1);
      p["two_theta_1"] = t1;
      p["two_theta_2"] = rng.uniform(0.0, kTwoPi);
      p["x"] = x;
      p["y"] = -x * std::cos(t1) / std::sin(t1);
      break;
    }
    default:
      throw std::invalid_argument("case_id must be 1..5");
  }
  return p;
}

ParamMap canonical_params(int case_id, const ParamMap& params) {
  ParamMap p = params;
  switch (case_id) {
    case 1: {
      double a = wrap_2pi(get_param(p, "two_theta_2"));
      double b = wrap_2pi(get_param(p, "two_theta_3"));
      p["two_theta_1"] = wrap_2pi(get_param(p, "two_theta_1"));
      p["two_theta_2"] = std::min(a, b);
      p["two_theta_3"] = std::max(a, b);
      break;
    }
    case 2:
      p["c"] = 0.0;  // gauge parameter, reducible to 0 by a Δ₂-frame change
      p["two_theta_1"] = wrap_2pi(get_param(p, "two_theta_1"));
      p["two_theta_2"] = wrap_2pi(get_param(p, "two_theta_2"));
      break;
    case 3:
      p["t"] = 0.0;  // gauge parameter
      break;
    case 4:
      p["two_theta"] = wrap_2pi(get_param(p, "two_theta"));
      break;
    case 5:
      if (get_param(p, "x") < 0) {
        p["x"] = -p["x"];
        p["y"] = -p["y"];
      }
      p["two_theta_1"] = wrap_2pi(get_param(p, "two_theta_1"));
      p["two_theta_2"] = wrap_2pi(get_param(p, "two_theta_2"));
      break;
    default:
      throw std::invalid_argument("case_id must be 1..5");
  }
  return p;
}

// --- classifier --------------------------------------------------------------

namespace {

struct Workspace {
  Mat3 A, B, D;  // D = input Gram
  double scale;
};

double metric(const Workspace& w, const Vec3& x, const Vec3& y) {
  return x.dot(w.D * y);
}

Classification finish(const Workspace& w, int case_id, ParamMap params,
                      const Mat3& frame, int out_delta) {
  Mat3 ap, bp;
  int dp;
  Classification c;
  c.case_id = case_id;
  c.params = std::move(params);
  c.frame = frame;
  c.delta = out_delta;
  printed_form(case_id, c.params, ap, bp, dp);
  Mat3 finv = frame.inverse();
  double ra = (finv * w.A * frame - ap).cwiseAbs().maxCoeff();
  double rb = (finv * w.B * frame - bp).cwiseAbs().maxCoeff();
  double rg = (frame.transpose() * w.D * frame - delta_matrix(out_delta))
                  .cwiseAbs()
                  .maxCoeff();
  c.form_residual = std::max({ra, rb, rg});
  if (c.form_residual > 1e-6)
    throw ClassifyError("pair does not fit a printed normal form (residual " +
                        std::to_string(c.form_residual) + ")");
  return c;
}

// Metric-orthonormalize the span of `vecs` (nondegenerate); returns unit
// vectors, timelike (norm -1) first.
std::vector<Vec3> metric_orthonormalize(const Workspace& w,
                                        const std::vector<Vec3>& vecs) {
  int n = static_cast<int>(vecs.size());
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) gram(i, j) = metric(w, vecs[i], vecs[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  std::vector<Vec3> out;
  std::vector<Vec3> timelike;
  for (int k = 0; k < n; ++k) {
    double lam = es.eigenvalues()(k);
    if (std::fabs(lam) < 1e-7 * w.scale)
      throw ClassifyError("degenerate invariant subspace metric");
    Vec3 v = Vec3::Zero();
    for (int i = 0; i < n; ++i) v += es.eigenvectors()(i, k) * vecs[i];
    v /= std::sqrt(std::fabs(lam));
    (lam < 0 ? timelike : out).push_back(v);
  }
  out.insert(out.begin(), timelike.begin(), timelike.end());
  return out;
}

// Simultaneous diagonalization for the all-real diagonalizable case: split by
// A, then by B inside A's eigenspaces, then orthonormalize.
void split_subspace(const Workspace& w, const std::vector<Vec3>& space,
                    int level, std::vector<Vec3>& out) {
  int n = static_cast<int>(space.size());
  if (n == 1 || level >= 2) {
    for (const Vec3& v : metric_orthonormalize(w, space)) out.push_back(v);
    return;
  }
  const Mat3& op = (level == 0) ? w.A : w.B;
  Eigen::MatrixXd s(3, n);
  for (int i = 0; i < n; ++i) s.col(i) = space[i];
  // matrix of op restricted to the invariant subspace
  Eigen::MatrixXd m =
      (s.transpose() * s).ldlt().solve(s.transpose() * (op * s));
  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  if (es.eigenvalues().imag().cwiseAbs().maxCoeff() > 1e-6 * w.scale)
    throw ClassifyError("unexpected complex eigenvalues in diagonalizable route");
  std::vector<double> evs(n);
  for (int i = 0; i < n; ++i) evs[i] = es.eigenvalues()(i).real();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return evs[a] < evs[b]; });
  // cluster eigenvalues, build each cluster's eigenspace, recurse
  int start = 0;
  while (start < n) {
    int end = start + 1;
    while (end < n &&
           evs[order[end]] - evs[order[end - 1]] < 1e-5 * w.scale)
      ++end;
    double lam = 0;
    for (int i = start; i < end; ++i) lam += evs[order[i]];
    lam /= (end - start);
    int mult = end - start;
    // eigenspace of (op - lam) within the subspace via SVD of the restriction
    Eigen::MatrixXd shifted = m - lam * Eigen::MatrixXd::Identity(n, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(shifted, Eigen::ComputeFullV);
    for (int i = 0; i < n - mult; ++i)
      if (svd.singularValues()(i) < 1e-5 * w.scale)
        throw ClassifyError("eigenvalue multiplicity ambiguity (not guessed)");
    std::vector<Vec3> sub;
    for (int i = n - mult; i < n; ++i) {
      if (i < n && svd.singularValues().size() > i &&
          svd.singularValues()(i) > 1e-4 * w.scale)
        throw ClassifyError("operator restriction is not diagonalizable");
      Vec3 v = Vec3::Zero();
      for (int r = 0; r < n; ++r) v += svd.matrixV()(r, i) * space[r];
      sub.push_back(v);
    }
    split_subspace(w, sub, level + 1, out);
    start = end;
  }
}

Classification classify_case1(const Workspace& w) {
  std::vector<Vec3> space{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  std::vector<Vec3> basis;
  split_subspace(w, space, 0, basis);
  if (basis.size() != 3) throw ClassifyError("diagonalization failed");
  // order: timelike first, then spacelike sorted by angle
  std::vector<Vec3> tl, sl;
  for (const Vec3& v : basis)
    (metric(w, v, v) < 0 ? tl : sl).push_back(v);
  if (tl.size() != 1 || sl.size() != 2)
    throw ClassifyError("frame signature is not Lorentzian");
  auto angle_of = [&](const Vec3& v) {
    double n = metric(w, v, v);
    return wrap_2pi(std::atan2(metric(w, v, w.B * v) / n,
                               metric(w, v, w.A * v) / n));
  };
  if (angle_of(sl[0]) > angle_of(sl[1])) std::swap(sl[0], sl[1]);
  Mat3 f;
  f.col(0) = tl[0];
  f.col(1) = sl[0];
  f.col(2) = sl[1];
  ParamMap p{{"two_theta_1", angle_of(tl[0])},
             {"two_theta_2", angle_of(sl[0])},
             {"two_theta_3", angle_of(sl[1])}};
  return finish(w, 1, std::move(p), f, 1);
}

// Basis of the Δ-orthogonal complement of v (Euclidean complement of D·v).
std::array<Vec3, 2> metric_complement(const Workspace& w, const Vec3& v) {
  Vec3 n = w.D * v;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(n.transpose(), Eigen::ComputeFullV);
  return {Vec3(svd.matrixV().col(1)), Vec3(svd.matrixV().col(2))};
}

// Shared Δ₂ gauge move: e₂ → e₂ − (s²/2)e₁ + s·e₃, e₃ → e₃ − s·e₁. Preserves
// the Δ₂ Gram and the Jordan form of A when λ₂ = λ₁; shifts the B corner
// entries by −2sμ₁ (and the b entry consistently).
void apply_null_gauge(Mat3& f, double s) {
  Vec3 e1 = f.col(0), e2 = f.col(1), e3 = f.col(2);
  f.col(1) = e2 - 0.5 * s * s * e1 + s * e3;
  f.col(2) = e3 - s * e1;
}

Classification classify_case23(const Workspace& w, double lam1, double lam2,
                               bool triple) {
  Mat3 n = w.A - lam1 * Mat3::Identity();
  Vec3 e3;
  if (!triple) {
    Mat3 n2 = w.A - lam2 * Mat3::Identity();
    Eigen::JacobiSVD<Mat3> svd(n2, Eigen::ComputeFullV);
    e3 = svd.matrixV().col(2);
  } else {
    // ker N is 2-dim; pick the B-eigenvector in it with positive norm
    Eigen::JacobiSVD<Mat3> svd(n, Eigen::ComputeFullV);
    Vec3 k1 = svd.matrixV().col(1), k2 = svd.matrixV().col(2);
    // the null eigenvector v spans im(N) ∩ ker(N); w' completes the kernel
    Vec3 v0 = Vec3::Zero();
    for (int i = 0; i < 3; ++i)
      if ((n * Vec3::Unit(i)).norm() > (n * v0).norm() + 0.0)
        if ((n * Vec3::Unit(i)).norm() > 1e-8) v0 = Vec3::Unit(i);
    Vec3 vnull = n * v0;
    auto kernel_coords = [&](const Vec3& x) {
      Eigen::Matrix<double, 3, 2> kk;
      kk.col(0) = k1;
      kk.col(1) = k2;
      return Eigen::Vector2d(
          (kk.transpose() * kk).ldlt().solve(kk.transpose() * x));
    };
    Eigen::Vector2d vc = kernel_coords(vnull.normalized());
    // w' = kernel vector Euclid-orthogonal to v within ker N
    Eigen::Vector2d wc(-vc(1), vc(0));
    Vec3 wp = wc(0) * k1 + wc(1) * k2;
    // split by B inside ker N: B wp = κ·v + μ₂·wp (+ O(eps))
    Vec3 bw = w.B * wp;
    double mu2 = wp.dot(bw) / wp.squaredNorm();
    Vec3 vdir = vnull.normalized();
    double kap = vdir.dot(bw - mu2 * wp);
    Vec3 bv = w.B * vdir;
    double mu1 = vdir.dot(bv) / vdir.squaredNorm();
    if (std::fabs(mu2 - mu1) > 1e-6 * w.scale)
      e3 = wp + (kap / (mu2 - mu1)) * vdir;
    else
      e3 = wp;  // κ must vanish here (A²+B²=Id); residual check will confirm
  }
  double nrm = metric(w, e3, e3);
  if (nrm < 1e-7 * w.scale)
    throw ClassifyError("spacelike eigenvector degenerate or wrong causal type");
  e3 /= std::sqrt(nrm);

  // Jordan pair inside the Δ-complement of e₃
  std::array<Vec3, 2> wbasis = metric_complement(w, e3);
  Vec3 u0 = ((n * wbasis[0]).norm() > (n * wbasis[1]).norm()) ? wbasis[0]
                                                              : wbasis[1];
  Vec3 v = n * u0;
  if (v.norm() < 1e-7 * w.scale)
    throw ClassifyError("Jordan block structure lost to roundoff");
  if ((n * v).norm() > 1e-6 * w.scale * v.norm())
    throw ClassifyError("A - λ is not nilpotent of order 2 on the Jordan plane");
  double p = metric(w, v, u0);
  if (p < 1e-9 * w.scale)
    throw ClassifyError(p < -1e-9 * w.scale
                            ? "null-cone orientation not realizable in the "
                              "printed form"
                            : "degenerate null-pair scaling");
  // make u₀ null without touching N·u₀ = v or <v,u₀>
  u0 -= (metric(w, u0, u0) / (2.0 * p)) * v;
  double a = 1.0 / std::sqrt(p);
  Mat3 f;
  f.col(0) = a * v;
  f.col(1) = a * u0;
  f.col(2) = e3;

  auto reduced = [&](const Mat3& fr, const Mat3& op) {
    return Mat3(fr.inverse() * op * fr);
  };
  Mat3 bt = reduced(f, w.B);
  double mu1 = bt(0, 0);

  if (std::fabs(mu1) < 1e-7) {
    // case 3: λ = -1, B corner entries ±√2; normalize sign, gauge t to 0
    if (std::fabs(lam1 + 1.0) > 1e-6)
      throw ClassifyError("case-3 candidate with eigenvalue != -1");
    if (bt(0, 2) < 0) {
      f.col(0) = -f.col(0);
      f.col(1) = -f.col(1);
      bt = reduced(f, w.B);
    }
    apply_null_gauge(f, -bt(0, 1) / (2.0 * std::sqrt(2.0)));
    bt = reduced(f, w.B);
    return finish(w, 3, {{"t", bt(0, 1)}}, f, 2);
  }

  // case 2
  double two_t1 = wrap_2pi(std::atan2(mu1, lam1));
  double c = bt(0, 2);
  if (std::fabs(c) > 1e-9) {
    if (std::fabs(lam2 - lam1) > 1e-6)
      throw ClassifyError("case-2 corner entry without the repeated eigenvalue");
    apply_null_gauge(f, c / (2.0 * mu1));
    bt = reduced(f, w.B);
  }
  Mat3 at = reduced(f, w.A);
  double two_t2 = wrap_2pi(std::atan2(bt(2, 2), at(2, 2)));
  ParamMap params{{"two_theta_1", two_t1}, {"two_theta_2", two_t2},
                  {"c", bt(0, 2)}};
  return finish(w, 2, std::move(params), f, 2);
}

Classification classify_case4(const Workspace& w, double lam) {
  Mat3 n = w.A - lam * Mat3::Identity();
  Mat3 n2 = n * n;
  Vec3 z = Vec3::UnitX();
  for (int i = 1; i < 3; ++i)
    if ((n2 * Vec3::Unit(i)).norm() > (n2 * z).norm()) z = Vec3::Unit(i);
  double q = metric(w, n2 * z, z);
  if (q < 1e-9 * w.scale)
    throw ClassifyError(q < -1e-9 * w.scale
                            ? "size-3 Jordan orientation not realizable in the "
                              "printed form"
                            : "degenerate size-3 Jordan scaling");
  Vec3 e2 = z / std::sqrt(q);
  Vec3 e3 = n * e2;
  Vec3 e1 = n * e3;
  // Gram corrections inside the Jordan chain: <e1,e1>=<e1,e3>=0 holds
  // automatically; fix <e2,e3> and <e2,e2>.
  double b = -0.5 * metric(w, e2, e3);
  double a = -0.5 * (metric(w, e2, e2) + 2.0 * b * metric(w, e2, e3) + b * b);
  e2 = e2 + a * e1 + b * e3;
  e3 = n * e2;
  Mat3 f;
  f.col(0) = e1;
  f.col(1) = e2;
  f.col(2) = e3;
  Mat3 at = f.inverse() * w.A * f;
  Mat3 bt = f.inverse() * w.B * f;
  double two_t = wrap_2pi(std::atan2(bt(0, 0), at(0, 0)));
  return finish(w, 4, {{"two_theta", two_t}}, f, 2);
}

Classification classify_case5(const Workspace& w, const Mat3& primary) {
  // real eigenvector of the primary operator spans the spacelike axis e₃
  Eigen::EigenSolver<Mat3> es(primary);
  int ridx = 0;
  for (int i = 1; i < 3; ++i)
    if (std::fabs(es.eigenvalues()(i).imag()) <
        std::fabs(es.eigenvalues()(ridx).imag()))
      ridx = i;
  Vec3 e3 = es.eigenvectors().col(ridx).real();
  double nrm = metric(w, e3, e3);
  if (nrm < 1e-7 * w.scale)
    throw ClassifyError("complex-type real eigenvector is not spacelike");
  e3 /= std::sqrt(nrm);

  // orthonormalize the invariant Lorentzian plane: e₁ spacelike, e₂ timelike
  std::array<Vec3, 2> plane = metric_complement(w, e3);
  std::vector<Vec3> on = metric_orthonormalize(w, {plane[0], plane[1]});
  // metric_orthonormalize puts the timelike vector first; Δ₃ wants (+,−)
  Vec3 e2 = on[0], e1 = on[1];
  Mat3 f;
  f.col(0) = e1;
  f.col(1) = e2;
  f.col(2) = e3;

  auto block = [&](const Mat3& op) {
    Mat3 t = f.inverse() * op * f;
    return std::array<double, 3>{0.5 * (t(0, 0) + t(1, 1)),
                                 0.5 * (t(0, 1) - t(1, 0)),
                                 0.5 * (t(0, 0) - t(1, 1))};
  };
  // boost the plane basis to cancel the diag-asymmetric part of A
  // (x,d) → (cosh2φ·x + sinh2φ·d, cosh2φ·d + sinh2φ·x)
  std::array<double, 3> ab = block(w.A);
  std::array<double, 3> bb = block(w.B);
  double x0 = ab[1], d0 = ab[2];
  if (std::fabs(x0) < std::fabs(bb[1])) {
    x0 = bb[1];
    d0 = bb[2];
  }
  if (std::fabs(d0) >= std::fabs(x0) - 1e-12)
    throw ClassifyError("complex-type block is not boost-normalizable");
  double phi2 = std::atanh(-d0 / x0);  // 2φ
  double ch = std::cosh(0.5 * phi2), sh = std::sinh(0.5 * phi2);
  Vec3 ne1 = ch * e1 + sh * e2;
  Vec3 ne2 = sh * e1 + ch * e2;
  f.col(0) = ne1;
  f.col(1) = ne2;
  ab = block(w.A);
  bb = block(w.B);
  // reflection normalization: canonical representative has x > 0
  if (ab[1] < 0) {
    f.col(1) = -f.col(1);
    ab = block(w.A);
    bb = block(w.B);
  }
  Mat3 at = f.inverse() * w.A * f;
  Mat3 bt = f.inverse() * w.B * f;
  ParamMap p{{"two_theta_1", wrap_2pi(std::atan2(bb[0], ab[0]))},
             {"two_theta_2", wrap_2pi(std::atan2(bt(2, 2), at(2, 2)))},
             {"x", ab[1]},
             {"y", bb[1]}};
  return finish(w, 5, std::move(p), f, 3);
}

}  // namespace

Classification classify(const OperatorPair& pair) {
  require_valid(pair);
  Workspace w{pair.A, pair.B, delta_matrix(pair.delta), op_scale(pair.A)};

  // triple-eigenvalue test via nilpotency of A - tr(A)/3 (stable even though
  // the individual eigenvalues of a perturbed Jordan block are not: a size-3
  // block splits by roundoff^(1/3) ~ 1e-5, which can even look complex, so
  // this must run before the complex-pair dispatch)
  double lam_bar = pair.A.trace() / 3.0;
  Mat3 n = pair.A - lam_bar * Mat3::Identity();
  double s3 = std::pow(w.scale, 3);
  if ((n * n * n).cwiseAbs().maxCoeff() <= 1e-7 * s3) {
    int r = numeric_rank(n, 1e-5 * w.scale);
    if (r == 0) return classify_case1(w);
    if (r == 1) return classify_case23(w, lam_bar, lam_bar, true);
    return classify_case4(w, lam_bar);
  }

  Eigen::EigenSolver<Mat3> esa(pair.A);
  double imag_a = esa.eigenvalues().imag().cwiseAbs().maxCoeff();
  if (imag_a > 1e-6 * w.scale) return classify_case5(w, pair.A);
  Eigen::EigenSolver<Mat3> esb(pair.B);
  if (esb.eigenvalues().imag().cwiseAbs().maxCoeff() >
      1e-6 * op_scale(pair.B))
    return classify_case5(w, pair.B);

  // sorted real eigenvalues; look for a defective double eigenvalue
  std::array<double, 3> ev{esa.eigenvalues()(0).real(),
                           esa.eigenvalues()(1).real(),
                           esa.eigenvalues()(2).real()};
  std::sort(ev.begin(), ev.end());
  double g01 = ev[1] - ev[0], g12 = ev[2] - ev[1];
  double gap = std::min(g01, g12);
  if (gap < 1e-5 * w.scale) {
    double lam1 = (g01 < g12) ? 0.5 * (ev[0] + ev[1]) : 0.5 * (ev[1] + ev[2]);
    double lam2 = (g01 < g12) ? ev[2] : ev[0];
    Eigen::JacobiSVD<Mat3> svd(pair.A - lam1 * Mat3::Identity());
    double sv1 = svd.singularValues()(1);
    double sv2 = svd.singularValues()(2);
    if (sv1 > 1e-3 * w.scale && sv2 < 1e-5 * w.scale)
      return classify_case23(w, lam1, lam2, false);
    if (sv1 < 1e-5 * w.scale) return classify_case1(w);
    throw ClassifyError("eigenvalue multiplicity ambiguity (not guessed)");
  }
  return classify_case1(w);
}

// --- refinement --------------------------------------------------------------

RefinedForm refine(const Classification& c, double tol) {
  RefinedForm r;
  switch (c.case_id) {
    case 1: {
      double sum = get_param(c.params, "two_theta_1") +
                   get_param(c.params, "two_theta_2") +
                   get_param(c.params, "two_theta_3");
      if (std::fabs(std::sin(0.5 * sum)) > tol) {
        r.kind = RefinedForm::Rejected;
        r.reason = "theta_1 + theta_2 + theta_3 != 0 mod pi";
        return r;
      }
      r.kind = RefinedForm::Refined1;
      r.params = c.params;
      return r;
    }
    case 2: {
      double t1 = get_param(c.params, "two_theta_1");
      double t2 = get_param(c.params, "two_theta_2");
      if (std::fabs(get_param(c.params, "c")) > tol) {
        r.kind = RefinedForm::Rejected;
        r.reason = "c != 0";
        return r;
      }
      if (std::fabs(std::sin(t1 + 0.5 * t2)) > tol) {
        r.kind = RefinedForm::Rejected;
        r.reason = "2 theta_1 + theta_2 != 0 mod pi";
        return r;
      }
      r.kind = RefinedForm::Refined2;
      r.params = {{"two_theta_1", t1}, {"two_theta_2", t2}};
      return r;
    }
    case 3:
      r.kind = RefinedForm::Rejected;
      r.reason = "frame table contradiction: PE_1 = -E_1 but the JG table "
                 "forces PE_1 = E_1";
      return r;
    case 4: {
      double t = get_param(c.params, "two_theta");
      if (std::fabs(std::cos(t) + 0.5) > tol) {
        r.kind = RefinedForm::Rejected;
        r.reason = "cos 2theta != -1/2";
        return r;
      }
      r.kind = RefinedForm::Refined3;
      r.params = {{"sign", std::sin(t) > 0 ? 1.0 : -1.0}};
      return r;
    }
    case 5: {
      double t2 = 0.5 * wrap_2pi(get_param(c.params, "two_theta_2"));
      double x = get_param(c.params, "x");
      double y = get_param(c.params, "y");
      // reflection constraint: (x,y) parallel to (sin θ₂, cos θ₂)
      if (std::fabs(x * std::cos(t2) - y * std::sin(t2)) > tol) {
        r.kind = RefinedForm::Rejected;
        r.reason = "(x, y) is not fixed by the reflection";
        return r;
      }
      double sinh_l = x * std::sin(t2) + y * std::cos(t2);
      if (std::fabs(sinh_l) < tol || std::fabs(std::sin(t2)) < tol) {
        r.kind = RefinedForm::Rejected;
        r.reason = "lambda = 0 or theta_2 in {0, pi}";
        return r;
      }
      r.kind = RefinedForm::Refined4;
      r.params = {{"two_theta_1", get_param(c.params, "two_theta_1")},
                  {"two_theta_2", get_param(c.params, "two_theta_2")},
                  {"lambda", std::asinh(sinh_l)}};
      return r;
    }
    default:
      throw std::invalid_argument("refine: bad case id");
  }
}

// --- angle filter ------------------------------------------------------------

std::optional<AngleTriple> totally_geodesic_angle_filter(const AngleTriple& t) {
  const double tol = 1e-6;
  std::array<double, 3> a{wrap_2pi(t.t1), wrap_2pi(t.t2), wrap_2pi(t.t3)};
  for (double v : a)
    if (std::fabs(std::sin(3.0 * v)) > tol) return std::nullopt;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::fabs(std::sin(a[i] - a[j])) > tol) return std::nullopt;

  const std::array<std::array<double, 3>, 3> canon{{
      {4.0 * kPi / 3.0, 4.0 * kPi / 3.0, 4.0 * kPi / 3.0},
      {0.0, kPi, kPi},
      {kPi, kPi, 0.0},
  }};
  // orbit under the isometry angle maps 2θ ↦ ±2θ + 2kπ/3 and the E₂/E₃ swap
  for (int sgn = 0; sgn < 2; ++sgn)
    for (int k = 0; k < 3; ++k)
      for (int swap23 = 0; swap23 < 2; ++swap23) {
        std::array<double, 3> m;
        for (int i = 0; i < 3; ++i)
          m[i] = wrap_2pi((sgn ? -a[i] : a[i]) + 2.0 * kPi * k / 3.0);
        if (swap23) std::swap(m[1], m[2]);
        for (const auto& c : canon) {
          bool ok = true;
          for (int i = 0; i < 3; ++i)
            if (circ_dist(m[i], c[i]) > 1e-5) ok = false;
          if (ok) return AngleTriple{c[0], c[1], c[2]};
        }
      }
  return std::nullopt;
}

// --- JSON --------------------------------------------------------------------

namespace {

nlohmann::json mat3_json(const Mat3& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < 3; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Mat3 mat3_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 3)
    throw std::invalid_argument("expected a 3x3 matrix");
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_array() || j[i].size() != 3)
      throw std::invalid_argument("expected a 3x3 matrix");
    for (int jj = 0; jj < 3; ++jj) {
      if (!j[i][jj].is_number())
        throw std::invalid_argument("matrix entries must be numbers");
      m(i, jj) = j[i][jj].get<double>();
    }
  }
  return m;
}

}  // namespace

nlohmann::json to_json(const OperatorPair& pair) {
  return {{"delta", pair.delta},
          {"A", mat3_json(pair.A)},
          {"B", mat3_json(pair.B)}};
}

OperatorPair operator_pair_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("delta") || !j.contains("A") ||
      !j.contains("B"))
    throw std::invalid_argument("operator pair JSON needs delta, A, B");
  if (!j["delta"].is_number_integer())
    throw std::invalid_argument("delta must be an integer");
  int d = j["delta"].get<int>();
  if (d < 1 || d > 3) throw std::invalid_argument("delta must be 1, 2 or 3");
  return {mat3_from_json(j["A"]), mat3_from_json(j["B"]), d};
}

nlohmann::json classification_json(const Classification& c,
                                   const PairResiduals& r) {
  nlohmann::json params(c.params);
  return {{"case", std::to_string(c.case_id)},
          {"params", params},
          {"frame", mat3_json(c.frame)},
          {"delta", c.delta},
          {"residuals",
           {{"form", c.form_residual},
            {"sym_a", r.sym_a},
            {"sym_b", r.sym_b},
            {"commute", r.commute},
            {"unit", r.unit}}}};
}

}  // namespace nklab
