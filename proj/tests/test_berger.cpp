#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nklab/berger.hpp"

using namespace nklab;

TEST_CASE("metric evaluation: frozen values") {
  BergerMetric m{2.0, 0.7, 1};
  // E~_1 = (kappa / 4 tau) X_1 has squared length -1
  double c1 = m.kappa / (4.0 * m.tau);
  CHECK(berger_eval(m, c1 * sq_i(), c1 * sq_i()) == doctest::Approx(-1));

  BergerMetric m41{4.0, 1.0, 1};
  CHECK(berger_eval(m41, sq_j(), sq_j()) == doctest::Approx(1));

  // kappa = 4 tau^2 removes the stretch: g~ = (4/kappa) <,>
  BergerMetric round{4.0 * 0.81, 0.9, 1};
  Rng rng(200);
  for (int s = 0; s < 10; ++s) {
    Sl2Elem x = sample_sl2_elem(rng), y = sample_sl2_elem(rng);
    CHECK(std::fabs(berger_eval(round, x, y) -
                    (4.0 / round.kappa) * inner(x, y)) < 1e-13);
  }
}

TEST_CASE("scaled frame is orthonormal with Gram diag(-1,1,1)") {
  Rng rng(201);
  for (int s = 0; s < 20; ++s) {
    BergerMetric m{rng.uniform(0.5, 4.0),
                   (s % 2 ? 1.0 : -1.0) * rng.uniform(0.2, 1.5), s % 2 ? 1 : 3};
    CHECK(berger_gram_residual(m) < 1e-12);
  }
  CHECK_THROWS_AS(berger_frame_scales(BergerMetric{1.0, 0.0, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(berger_frame_scales(BergerMetric{1.0, 1.0, 2}),
                  std::invalid_argument);
}

TEST_CASE("closed-form table matches the Koszul oracle and is Levi-Civita") {
  Rng rng(202);
  for (int s = 0; s < 20; ++s) {
    BergerMetric m{rng.uniform(0.5, 4.0),
                   (s % 2 ? 1.0 : -1.0) * rng.uniform(0.2, 1.5), s % 2 ? 1 : 3};
    CHECK(table_distance(berger_connection_table(m), koszul_connection_table(m)) <
          1e-12);
    CHECK(berger_torsion_residual(m) < 1e-12);
    CHECK(berger_compatibility_residual(m) < 1e-12);
  }
}

TEST_CASE("frozen coefficients of the timelike table at kappa=2, tau=-1/sqrt6") {
  BergerMetric m{2.0, -1.0 / std::sqrt(6.0), 1};
  ConnectionTable t = berger_connection_table(m);
  double big = m.kappa / (2.0 * m.tau) - m.tau;  // -5/sqrt(6)
  CHECK(big == doctest::Approx(-5.0 / std::sqrt(6.0)));
  CHECK(t(0, 1, 2) == doctest::Approx(big));
  CHECK(t(0, 2, 1) == doctest::Approx(-big));
  CHECK(t(1, 0, 2) == doctest::Approx(-m.tau));
  CHECK(t(1, 2, 0) == doctest::Approx(-m.tau));
  CHECK(t(2, 0, 1) == doctest::Approx(m.tau));
  CHECK(t(2, 1, 0) == doctest::Approx(m.tau));
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) CHECK(t(i, i, k) == doctest::Approx(0));
}

TEST_CASE("identification frame of the second immersion") {
  CHECK(identification_gram_residual() < 1e-9);
  // product-metric coefficients reproduce the +-sqrt(3/2), +-1/sqrt(6) pattern
  CHECK(table_distance(product_connection_table_f(), reference_table_f()) < 1e-9);
  // induced-metric coefficients equal the timelike table
  BergerMetric m{2.0, -1.0 / std::sqrt(6.0), 1};
  CHECK(table_distance(nk_connection_table_f(), berger_connection_table(m)) <
        1e-8);
  CHECK(table_distance(nk_connection_table_f(), reference_induced_table_f()) <
        1e-8);
}

TEST_CASE("spacelike identification: fitted parameters close the loop") {
  ConnectionTable t = nk_connection_table_f_spacelike();
  BergerMetric fitted = fit_spacelike(t);
  CHECK(fitted.axis == 3);
  CHECK(table_distance(t, berger_connection_table(fitted)) < 1e-7);
  // the fit recovers the same stretched family as the timelike side
  CHECK(fitted.kappa == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::fabs(fitted.tau) == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-6));
}
