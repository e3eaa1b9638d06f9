// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Runs the full verification suites at the default sample count and
// seed, then maps named checks onto the criteria.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "nklab/report.hpp"

namespace {

struct Criterion {
  std::string label;
  std::vector<std::string> checks;
};

}  // namespace

int main() {
  nklab::VerifyOptions opt;  // defaults: samples=200, seed=42
  nklab::VerificationReport report = nklab::run_suite("all", opt);

  std::map<std::string, nklab::CheckResult> by_name;
  for (const auto& c : report.checks) by_name[c.name] = c;

  const std::vector<Criterion> criteria = {
      {"1. defining identities of the structure tensor G "
       "(skew-adjointness, J-anticommutation, normal pairing) <= 1e-9",
       {"nk_g_skew_adjoint", "nk_g_anticommutes_j", "nk_g_normal_pairing"}},
      {"2. constant type identity with constant -2/3 <= 1e-9",
       {"constant_type_identity", "constant_type_value"}},
      {"3. closed-form curvature vs connection curvature on a fixed 6-field "
       "set <= 1e-8",
       {"curvature_two_path"}},
      {"4. covariant derivative identity for the product structure P <= 1e-9",
       {"nabla_p_identity"}},
      {"5. built-in immersions 1-3: Lagrangian, totally geodesic, frozen "
       "angle triples",
       {"example1_lagrangian", "example1_totally_geodesic", "example1_angles",
        "example2_lagrangian", "example2_totally_geodesic", "example2_angles",
        "example3_lagrangian", "example3_totally_geodesic", "example3_angles"}},
      {"6. first immersion: sectional curvature -3/2 on 20 random planes "
       "<= 1e-8",
       {"example1_sectional_curvature"}},
      {"7. classifier round trip: 100 cycles per case, parameters <= 1e-6; "
       "null-plane case refined to rejected",
       {"classify_round_trip_case1", "classify_round_trip_case2",
        "classify_round_trip_case3", "classify_round_trip_case4",
        "classify_round_trip_case5", "refine_case3_rejected"}},
      {"8. non-diagonalizable obstructions: case-2 scan min > 0.4, case-3 "
       "constant 8/(9*sqrt3), case-4 norms > 0",
       {"codazzi_obstruction_case2", "codazzi_obstruction_case3",
        "codazzi_obstruction_case4", "codazzi_obstruction_case4_magnitude"}},
      {"9. isometry angle laws verified geometrically <= 1e-7",
       {"isometry_angle_law_1", "isometry_angle_law_2"}},
      {"10. connection tables match the stretched left-invariant metrics "
       "(timelike exact, spacelike fitted)",
       {"identification_induced_table", "reference_induced_table",
        "example3_spacelike_fit"}},
  };

  bool all_pass = true;
  for (const auto& crit : criteria) {
    bool pass = true;
    std::string detail;
    for (const std::string& name : crit.checks) {
      auto it = by_name.find(name);
      if (it == by_name.end()) {
        pass = false;
        detail += " missing:" + name;
      } else if (!it->second.pass) {
        pass = false;
        char buf[128];
        std::snprintf(buf, sizeof(buf), " %s residual=%.3e tol=%.3e",
                      name.c_str(), it->second.residual, it->second.tolerance);
        detail += buf;
      }
    }
    std::printf("%s %s%s\n", pass ? "PASS" : "FAIL", crit.label.c_str(),
                detail.c_str());
    all_pass = all_pass && pass;
  }

  // 11. determinism: an independent rerun must serialize byte-identically
  std::string dump1 = nklab::canonical_dump(nklab::report_json(report));
  std::string dump2 =
      nklab::canonical_dump(nklab::report_json(nklab::run_suite("all", opt)));
  bool deterministic = dump1 == dump2;
  std::printf("%s 11. identical seed produces byte-identical reports\n",
              deterministic ? "PASS" : "FAIL");
  all_pass = all_pass && deterministic;

  std::printf("ACCEPTANCE %s (%zu checks aggregated)\n",
              all_pass ? "PASS" : "FAIL", report.checks.size());
  return all_pass ? 0 : 1;
}
