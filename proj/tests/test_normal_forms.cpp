#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nklab/normal_forms.hpp"

using namespace nklab;

namespace {

constexpr double kPi = 3.14159265358979323846;

double circ_dist(double a, double b) {
  double d = std::fmod(std::fabs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

double params_distance(const ParamMap& a, const ParamMap& b) {
  if (a.size() != b.size()) return 1e9;
  double worst = 0;
  for (const auto& [key, va] : a) {
    auto it = b.find(key);
    if (it == b.end()) return 1e9;
    bool circular = key.rfind("two_theta", 0) == 0;
    worst = std::max(worst,
                     circular ? circ_dist(va, it->second) : std::fabs(va - it->second));
  }
  return worst;
}

}  // namespace

TEST_CASE("the three Gram normal forms are Lorentzian involutions") {
  for (int tag = 1; tag <= 3; ++tag) {
    Mat3 d = delta_matrix(tag);
    CHECK((d * d - Mat3::Identity()).norm() < 1e-15);
    CHECK((d - d.transpose()).norm() < 1e-15);
    Eigen::SelfAdjointEigenSolver<Mat3> es(d);
    CHECK(es.eigenvalues()(0) == doctest::Approx(-1));
    CHECK(es.eigenvalues()(1) == doctest::Approx(1));
    CHECK(es.eigenvalues()(2) == doctest::Approx(1));
  }
}

TEST_CASE("trivial pair classifies as the diagonalizable case with zero angles") {
  OperatorPair pair{Mat3::Identity(), Mat3::Zero(), 1};
  Classification c = classify(pair);
  CHECK(c.case_id == 1);
  for (const auto& [k, v] : c.params) CHECK(circ_dist(v, 0) < 1e-12);
}

TEST_CASE("generated pairs satisfy the structural constraints") {
  Rng rng(30);
  for (int case_id = 1; case_id <= 5; ++case_id)
    for (int s = 0; s < 5; ++s) {
      OperatorPair pair = generate(case_id, sample_case_params(case_id, rng),
                                   1000 + 10 * case_id + s);
      PairResiduals r = pair_residuals(pair);
      CHECK(r.sym_a < 1e-10);
      CHECK(r.sym_b < 1e-10);
      CHECK(r.commute < 1e-10);
      CHECK(r.unit < 1e-10);
    }
}

TEST_CASE("classifier round trip: 100 seeded cycles per case") {
  for (int case_id = 1; case_id <= 5; ++case_id) {
    Rng rng(40 + case_id);
    int tag_hits = 0;
    double worst = 0;
    for (int trip = 0; trip < 100; ++trip) {
      ParamMap params = sample_case_params(case_id, rng);
      OperatorPair pair = generate(case_id, params, 5000 + 100 * case_id + trip);
      Classification c = classify(pair);
      if (c.case_id == case_id) ++tag_hits;
      worst = std::max(worst,
                       params_distance(c.params, canonical_params(case_id, params)));
      CHECK(c.form_residual < 1e-6);
    }
    CHECK(tag_hits == 100);
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("refinement: angle-sum condition gates the diagonalizable case, "
          "the null-plane case is always rejected") {
  Rng rng(50);
  // 2(theta_1 + theta_2 + theta_3) = 4 pi satisfies theta-sum = 0 mod pi
  double c = 4.0 * kPi / 3.0;
  ParamMap good{{"two_theta_1", c}, {"two_theta_2", c}, {"two_theta_3", c}};
  for (int s = 0; s < 20; ++s) {
    RefinedForm r1 = refine(classify(generate(1, good, 7000 + s)));
    CHECK(r1.kind == RefinedForm::Refined1);

    // a generic sampled triple violates the angle-sum relation
    RefinedForm rg = refine(classify(generate(1, sample_case_params(1, rng),
                                              7500 + s)));
    CHECK(rg.kind == RefinedForm::Rejected);

    OperatorPair p3 = generate(3, sample_case_params(3, rng), 8000 + s);
    RefinedForm r3 = refine(classify(p3));
    CHECK(r3.kind == RefinedForm::Rejected);
    CHECK_FALSE(r3.reason.empty());
  }
}

TEST_CASE("angle filter: canonical triples and the zero triple are accepted") {
  double c = 4.0 * kPi / 3.0;
  AngleTriple canon1{c, c, c};
  auto f1 = totally_geodesic_angle_filter(canon1);
  REQUIRE(f1.has_value());
  CHECK(circ_dist(f1->t1, c) < 1e-12);

  // the zero triple is congruent to the first canonical triple
  auto f0 = totally_geodesic_angle_filter({0, 0, 0});
  REQUIRE(f0.has_value());
  CHECK(circ_dist(f0->t1, c) < 1e-12);
  CHECK(circ_dist(f0->t2, c) < 1e-12);
  CHECK(circ_dist(f0->t3, c) < 1e-12);

  auto f2 = totally_geodesic_angle_filter({0, kPi, kPi});
  REQUIRE(f2.has_value());
  auto f3 = totally_geodesic_angle_filter({kPi, kPi, 0});
  REQUIRE(f3.has_value());

  // a generic triple is rejected
  CHECK_FALSE(totally_geodesic_angle_filter({0.4, 1.1, 2.7}).has_value());
  CHECK_FALSE(totally_geodesic_angle_filter({0.0, 0.0, 1.0}).has_value());
}

TEST_CASE("filter is idempotent on accepted triples") {
  Rng rng(60);
  for (int s = 0; s < 30; ++s) {
    AngleTriple t{rng.uniform(0, 2 * kPi), rng.uniform(0, 2 * kPi),
                  rng.uniform(0, 2 * kPi)};
    auto f = totally_geodesic_angle_filter(t);
    if (!f) continue;
    auto g = totally_geodesic_angle_filter(*f);
    REQUIRE(g.has_value());
    CHECK(circ_dist(f->t1, g->t1) < 1e-12);
    CHECK(circ_dist(f->t2, g->t2) < 1e-12);
    CHECK(circ_dist(f->t3, g->t3) < 1e-12);
  }
}

TEST_CASE("json round trip of operator pairs") {
  Rng rng(70);
  OperatorPair pair = generate(5, sample_case_params(5, rng), 9001);
  OperatorPair back = operator_pair_from_json(to_json(pair));
  CHECK((pair.A - back.A).norm() < 1e-15);
  CHECK((pair.B - back.B).norm() < 1e-15);
  CHECK(pair.delta == back.delta);

  CHECK_THROWS_AS(operator_pair_from_json(nlohmann::json{{"delta", 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      operator_pair_from_json(nlohmann::json{
          {"delta", 7}, {"A", {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}},
          {"B", {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}}}),
      std::invalid_argument);
}

TEST_CASE("classification json carries case, params, and residuals") {
  OperatorPair pair{Mat3::Identity(), Mat3::Zero(), 1};
  Classification c = classify(pair);
  nlohmann::json j = classification_json(c, pair_residuals(pair));
  CHECK(j.contains("case"));
  CHECK(j.contains("params"));
  CHECK(j.contains("frame"));
  CHECK(j.contains("residuals"));
  CHECK(j["case"].get<std::string>() == "1");
}
