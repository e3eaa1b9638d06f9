#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nklab/berger.hpp"
#include "nklab/lagrangian.hpp"

using namespace nklab;

namespace {

constexpr double kPi = 3.14159265358979323846;

double circ_dist(double a, double b) {
  double d = std::fmod(std::fabs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

// the two spacelike frame legs are only determined up to a swap, so compare
// triples both ways
double triple_dist(const AngleTriple& a, const AngleTriple& b) {
  double direct = std::max({circ_dist(a.t1, b.t1), circ_dist(a.t2, b.t2),
                            circ_dist(a.t3, b.t3)});
  double swapped = std::max({circ_dist(a.t1, b.t1), circ_dist(a.t2, b.t3),
                             circ_dist(a.t3, b.t2)});
  return std::min(direct, swapped);
}

double max_h(const FrameDerivatives& d) {
  double worst = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        worst = std::max(worst, std::fabs(d.h[i][j][k]));
  return worst;
}

AngleTriple expected_triple(int which) {
  double c = 4.0 * kPi / 3.0;
  if (which == 1) return {c, c, c};
  if (which == 2) return {0, kPi, kPi};
  return {kPi, kPi, 0};
}

}  // namespace

TEST_CASE("the three built-in immersions are totally geodesic Lagrangians "
          "with the frozen angle triples") {
  for (int which = 1; which <= 3; ++which) {
    ImmersionSpec spec = builtin_immersion("example" + std::to_string(which));
    Rng rng(100 + which);
    for (int s = 0; s < 10; ++s) {
      SL2Point u = sample_point(rng);
      CHECK(lagrangian_residual(spec, u) < 1e-9);
      LagrangianFrame f = build_frame(spec, u);
      AngleTriple t = angle_functions(extract_AB(f));
      CHECK(triple_dist(t, expected_triple(which)) < 1e-8);
      CHECK(max_h(second_fundamental_form(spec, u)) < 1e-8);
    }
  }
}

TEST_CASE("the deliberately non-Lagrangian map is detected") {
  ImmersionSpec spec = builtin_immersion("nonlagrangian");
  Rng rng(104);
  double worst = 0;
  for (int s = 0; s < 10; ++s)
    worst = std::max(worst, lagrangian_residual(spec, sample_point(rng)));
  CHECK(worst > 0.1);
  CHECK_THROWS(builtin_immersion("no_such_map"));
}

TEST_CASE("frame is Delta-orthonormal and A,B satisfy the constraints") {
  for (int which = 1; which <= 3; ++which) {
    ImmersionSpec spec = builtin_immersion("example" + std::to_string(which));
    Rng rng(110 + which);
    SL2Point u = sample_point(rng);
    LagrangianFrame f = build_frame(spec, u);
    Mat3 delta = delta_matrix(f.delta);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::fabs(metric_g(f.e[i], f.e[j]) - delta(i, j)) < 1e-9);
    PairResiduals r = pair_residuals(extract_AB(f));
    CHECK(r.sym_a < 1e-9);
    CHECK(r.sym_b < 1e-9);
    CHECK(r.commute < 1e-9);
    CHECK(r.unit < 1e-9);
  }
}

TEST_CASE("first example has constant sectional curvature -3/2") {
  ImmersionSpec spec = builtin_immersion("example1");
  Rng rng(120);
  SL2Point u = sample_point(rng);
  CHECK(std::fabs(sectional_curvature(spec, u, 0, 1) + 1.5) < 1e-8);
  CHECK(std::fabs(sectional_curvature(spec, u, 1, 2) + 1.5) < 1e-8);
  for (int s = 0; s < 20; ++s) {
    Vec3 a, b;
    for (int i = 0; i < 3; ++i) {
      a(i) = rng.uniform(-1, 1);
      b(i) = rng.uniform(-1, 1);
    }
    CHECK(std::fabs(sectional_curvature_plane(spec, u, a, b) + 1.5) < 1e-8);
  }
}

TEST_CASE("gauss and codazzi equations hold on the built-ins") {
  for (int which = 1; which <= 3; ++which) {
    ImmersionSpec spec = builtin_immersion("example" + std::to_string(which));
    Rng rng(130 + which);
    for (int s = 0; s < 3; ++s) {
      SL2Point u = sample_point(rng);
      CHECK(gauss_residual(spec, u) < 1e-6);
      CHECK(codazzi_residual(spec, u) < 1e-6);
    }
  }
}

TEST_CASE("consistency residuals vanish on the built-ins") {
  for (int which = 1; which <= 3; ++which) {
    ImmersionSpec spec = builtin_immersion("example" + std::to_string(which));
    Rng rng(140 + which);
    SL2Point u = sample_point(rng);
    LagrangianFrame f = build_frame(spec, u);
    FrameDerivatives d = second_fundamental_form(spec, u);
    CHECK(normality_residual(spec, u) < 1e-9);
    CHECK(h_symmetry_residual(d, f) < 1e-8);
    CHECK(minimality_residual(d, f) < 1e-8);
    CHECK(angle_derivative_residual(spec, u) < 1e-6);
    CHECK(sff_relation_residual(spec, u) < 1e-6);
  }
}

TEST_CASE("codazzi obstruction: frozen values for the three surviving cases") {
  double s3 = std::sqrt(3.0);
  // null-pair case with a double angle: norm = (4/3)/|sin(2 theta_1)|
  Vec3 v2 = codazzi_obstruction(2, {{"two_theta_1", kPi / 2.0}});
  CHECK(std::fabs(v2.norm() - 4.0 / 3.0) < 1e-12);
  Vec3 v2b = codazzi_obstruction(2, {{"two_theta_1", kPi / 3.0}});
  CHECK(std::fabs(v2b.norm() - (4.0 / 3.0) / std::sin(kPi / 3.0)) < 1e-12);

  // triple-angle null case: first normal component is +-8/(9 sqrt 3)
  Vec3 v3p = codazzi_obstruction(3, {{"sign", 1.0}});
  Vec3 v3m = codazzi_obstruction(3, {{"sign", -1.0}});
  CHECK(std::fabs(std::fabs(v3p[0]) - 8.0 / (9.0 * s3)) < 1e-12);
  CHECK(std::fabs(std::fabs(v3m[0]) - 8.0 / (9.0 * s3)) < 1e-12);
  CHECK(v3p.norm() > 0.5);

  // complex-eigenvalue case: norm = (2/3)|sinh(2 lambda)| on the admissible set
  for (double lam : {0.3, 1.0, 1.7}) {
    double t1 = 1.1;
    double t2 = std::fmod(4.0 * kPi - 2.0 * t1, 2.0 * kPi);
    Vec3 v4 = codazzi_obstruction(
        4, {{"two_theta_1", t1}, {"two_theta_2", t2}, {"lambda", lam}});
    CHECK(std::fabs(v4.norm() - (2.0 / 3.0) * std::sinh(2.0 * lam)) < 1e-10);
  }
  // inadmissible parameters are refused
  CHECK_THROWS_AS(codazzi_obstruction(
                      4, {{"two_theta_1", 1.0}, {"two_theta_2", 1.0},
                          {"lambda", 0.5}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(codazzi_obstruction(2, {{"two_theta_1", 0.0}}),
                  std::invalid_argument);
}

TEST_CASE("isometry angle maps are realized geometrically") {
  for (int base = 1; base <= 3; ++base) {
    ImmersionSpec spec = builtin_immersion("example" + std::to_string(base));
    Rng rng(150 + base);
    SL2Point u = sample_point(rng);
    AngleTriple t0 = angle_functions(extract_AB(build_frame(spec, u)));
    for (int which = 1; which <= 2; ++which) {
      ImmersionSpec moved = compose_isometry(spec, which);
      AngleTriple t1 = angle_functions(extract_AB(build_frame(moved, u)));
      AngleTriple want = isometry_angle_map(t0, which);
      CHECK(triple_dist(t1, want) < 1e-6);
    }
  }
}

TEST_CASE("json immersions: conjugation maps reproduce the built-ins") {
  nlohmann::json j2 = {{"p", {{"u", 1.0}}}, {"q", {{"iui", 1.0}}}};
  ImmersionSpec spec = immersion_from_json(j2);
  Rng rng(160);
  SL2Point u = sample_point(rng);
  CHECK(lagrangian_residual(spec, u) < 1e-7);
  AngleTriple t = angle_functions(extract_AB(build_frame(spec, u)));
  CHECK(triple_dist(t, expected_triple(2)) < 1e-6);

  // the diagonal map is Lagrangian and congruent to the first example:
  // its zero angle triple canonicalizes to the (4 pi / 3) triple
  nlohmann::json jd = {{"p", {{"u", 1.0}}}, {"q", {{"u", 1.0}}}};
  ImmersionSpec diag = immersion_from_json(jd);
  CHECK(lagrangian_residual(diag, u) < 1e-7);
  AngleTriple td = angle_functions(extract_AB(build_frame(diag, u)));
  CHECK(triple_dist(td, {0, 0, 0}) < 1e-6);
  auto canon = totally_geodesic_angle_filter(td);
  REQUIRE(canon.has_value());
  CHECK(triple_dist(*canon, expected_triple(1)) < 1e-6);

  CHECK_THROWS_AS(immersion_from_json(nlohmann::json{{"p", {{"u", 1.0}}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      immersion_from_json(nlohmann::json{{"p", {{"u", 1.0}}},
                                         {"q", {{"bogus", 1.0}}}}),
      std::invalid_argument);
}

TEST_CASE("numeric differential agrees with the closed form") {
  ImmersionSpec exact = builtin_immersion("example3");
  ImmersionSpec numeric = exact;
  numeric.lif_diff = nullptr;  // force the finite-difference path
  Rng rng(170);
  for (int s = 0; s < 5; ++s) {
    SL2Point u = sample_point(rng);
    Sl2Elem v = sample_sl2_elem(rng);
    TangentPair a = differential(exact, u, v);
    TangentPair b = differential(numeric, u, v);
    CHECK(residual_norm(a - b) < 1e-7);
  }
}
