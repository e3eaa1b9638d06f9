#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace nklab {

struct CheckResult {
  std::string name;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;  // pass <=> residual <= tolerance
  int samples = 0;
  std::uint64_t seed = 0;
};

struct VerifyOptions {
  int samples = 200;
  std::uint64_t seed = 42;
  // > 0 overrides the per-category defaults below for every check
  double tol_override = 0;
};

struct VerificationReport {
  std::string version;
  std::string target;
  int samples = 200;
  std::uint64_t seed = 42;
  double tol_algebraic = 1e-9;   // exact identities, closed-form algebra
  double tol_two_path = 1e-7;    // closed form vs finite differences
  double tol_round_trip = 1e-6;  // generate -> classify -> parameters
  std::vector<CheckResult> checks;
  bool overall_pass = true;  // and of all checks
};

// target in {structure, examples, berger, all}; throws std::invalid_argument
// for anything else.
VerificationReport run_suite(const std::string& target, const VerifyOptions& opt);

nlohmann::json report_json(const VerificationReport& r);
std::string report_text(const VerificationReport& r);

// Canonical serialization: keys sorted, numbers with 17 significant digits,
// byte-stable across runs for identical content.
std::string canonical_dump(const nlohmann::json& j);

}  // namespace nklab
