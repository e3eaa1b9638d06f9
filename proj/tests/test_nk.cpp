#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nklab/nk.hpp"

using namespace nklab;

namespace {

TangentPair rand_tp(const ProductPoint& p, Rng& rng) {
  return {p, sample_sl2_elem(rng), sample_sl2_elem(rng)};
}

}  // namespace

TEST_CASE("J is an anti-isometric almost complex structure") {
  Rng rng(10);
  for (int s = 0; s < 50; ++s) {
    ProductPoint p{sample_point(rng), sample_point(rng)};
    TangentPair x = rand_tp(p, rng), y = rand_tp(p, rng);
    CHECK(residual_norm(cx_J(cx_J(x)) + x) < 1e-14);
    CHECK(std::fabs(metric_g(cx_J(x), cx_J(y)) - metric_g(x, y)) < 1e-14);
    CHECK(std::fabs(metric_g(cx_J(x), y) + metric_g(x, cx_J(y))) < 1e-14);
  }
}

TEST_CASE("frozen metric values") {
  ProductPoint p{};
  TangentPair ii{p, sq_i(), sq_i()};
  CHECK(metric_g(ii, ii) == doctest::Approx(-2.0 / 3.0));
  TangentPair jj{p, sq_j(), sq_j()};
  CHECK(metric_g(jj, jj) == doctest::Approx(2.0 / 3.0));
  TangentPair i0{p, sq_i(), Sl2Elem{}};
  TangentPair zi{p, Sl2Elem{}, sq_i()};
  CHECK(metric_g(i0, i0) == doctest::Approx(-2.0 / 3.0));
  CHECK(metric_g(i0, zi) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("product metric equals 2g(X,Y) + g(X,PY)") {
  Rng rng(11);
  for (int s = 0; s < 50; ++s) {
    ProductPoint p{sample_point(rng), sample_point(rng)};
    TangentPair x = rand_tp(p, rng), y = rand_tp(p, rng);
    double lhs = product_metric(x, y);
    double rhs = 2.0 * metric_g(x, y) + metric_g(x, ps_P(y));
    CHECK(std::fabs(lhs - rhs) < 1e-13);
  }
}

TEST_CASE("P is a metric-symmetric involution anticommuting with J") {
  Rng rng(12);
  for (int s = 0; s < 50; ++s) {
    ProductPoint p{sample_point(rng), sample_point(rng)};
    TangentPair x = rand_tp(p, rng), y = rand_tp(p, rng);
    CHECK(residual_norm(ps_P(ps_P(x)) - x) < 1e-15);
    CHECK(std::fabs(metric_g(ps_P(x), y) - metric_g(x, ps_P(y))) < 1e-14);
    CHECK(residual_norm(ps_P(cx_J(x)) + cx_J(ps_P(x))) < 1e-14);
  }
}

TEST_CASE("G is antisymmetric, skew-adjoint, and anticommutes with J") {
  Rng rng(13);
  for (int s = 0; s < 50; ++s) {
    ProductPoint p{sample_point(rng), sample_point(rng)};
    TangentPair x = rand_tp(p, rng), y = rand_tp(p, rng), z = rand_tp(p, rng);
    CHECK(residual_norm(tensor_G(x, y) + tensor_G(y, x)) < 1e-14);
    CHECK(residual_norm(tensor_G(x, x)) < 1e-14);
    CHECK(std::fabs(metric_g(tensor_G(x, y), z) + metric_g(tensor_G(x, z), y)) <
          1e-13);
    CHECK(residual_norm(tensor_G(x, cx_J(y)) + cx_J(tensor_G(x, y))) < 1e-13);
    // normal pairing: g(G(X,Y),JZ) + g(G(X,Z),JY) = 0
    CHECK(std::fabs(metric_g(tensor_G(x, y), cx_J(z)) +
                    metric_g(tensor_G(x, z), cx_J(y))) < 1e-13);
  }
}

TEST_CASE("constant type identity with constant -2/3") {
  Rng rng(14);
  for (int s = 0; s < 100; ++s) {
    ProductPoint p{sample_point(rng), sample_point(rng)};
    CHECK(constant_type_residual(rand_tp(p, rng), rand_tp(p, rng)) < 1e-13);
  }
  // directly on a g-orthonormal J-orthogonal pair: ||G(X,Y)||^2 = -2/3
  ProductPoint p{};
  TangentPair x{p, std::sqrt(1.5) * sq_i(), Sl2Elem{}};  // g(x,x) = -1
  CHECK(metric_g(x, x) == doctest::Approx(-1));
  TangentPair y{p, std::sqrt(1.5) * sq_j(), Sl2Elem{}};  // g(y,y) = 1
  CHECK(metric_g(y, y) == doctest::Approx(1));
  CHECK(metric_g(x, y) == doctest::Approx(0));
  CHECK(metric_g(cx_J(x), y) == doctest::Approx(0));
  TangentPair g = tensor_G(x, y);
  // g(x,x) g(y,y) = -1, so ||G||^2 = -2/3 * (-1) * sign convention:
  // g(G,G) = -2/3 (g(x,x)g(y,y) - 0 - 0) = 2/3
  CHECK(metric_g(g, g) == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("ambient isometries preserve the metric") {
  Rng rng(15);
  for (int s = 0; s < 10; ++s) {
    ProductPoint p{sample_point(rng), sample_point(rng)};
    TangentPair x = rand_tp(p, rng), y = rand_tp(p, rng);
    for (int which = 1; which <= 2; ++which) {
      PointMap phi = which == 1 ? PointMap(isometry_phi1) : PointMap(isometry_phi2);
      TangentPair fx = pushforward(phi, x), fy = pushforward(phi, y);
      CHECK(std::fabs(metric_g(fx, fy) - metric_g(x, y)) < 1e-7);
    }
  }
}

TEST_CASE("tangent projection round trip") {
  Rng rng(16);
  for (int s = 0; s < 50; ++s) {
    ProductPoint p{sample_point(rng), sample_point(rng)};
    TangentPair x = rand_tp(p, rng);
    TangentPair back = project_tangent(p, ambient(x));
    CHECK(residual_norm(back - x) < 1e-13);
  }
}
