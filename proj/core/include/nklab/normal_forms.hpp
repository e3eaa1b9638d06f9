#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "nklab/sl2.hpp"

namespace nklab {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

// The three Lorentzian Gram normal forms (all involutions, so Δ⁻¹ = Δ):
// Δ₁ = diag(-1,1,1), Δ₂ = null pair + spacelike, Δ₃ = diag(1,-1,1).
Mat3 delta_matrix(int tag);

// Commuting pair of Δ-symmetric operators with A²+B² = Id on Lorentzian R³.
struct OperatorPair {
  Mat3 A, B;
  int delta = 1;
};

struct PairResiduals {
  double sym_a = 0, sym_b = 0, commute = 0, unit = 0;
};

PairResiduals pair_residuals(const OperatorPair& pair);
void require_valid(const OperatorPair& pair, double tol_sym = 1e-8,
                   double tol_unit = 1e-7);

// Raised when a pair sits in a tolerance ambiguity band or outside the
// printed normal forms; carries a diagnostic, never a guess.
struct ClassifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using ParamMap = std::map<std::string, double>;

struct Classification {
  int case_id = 0;   // 1..5, raw normal-form numbering
  ParamMap params;   // keys per case: two_theta_1.., c, t, two_theta, x, y
  Mat3 frame;        // columns realize the printed form; Gram(frame) = Δ(delta)
  int delta = 1;     // Gram tag of the realized basis
  double form_residual = 0;
};

// Printed (A,B,Δ) for a raw case from its parameters; validates constraints.
void printed_form(int case_id, const ParamMap& params, Mat3& a, Mat3& b,
                  int& delta);

Classification classify(const OperatorPair& pair);

// Printed form conjugated by a seeded random Δ-orthogonal transformation.
OperatorPair generate(int case_id, const ParamMap& params, std::uint64_t seed);

// Admissible random parameters for round-trip tests (margins away from the
// classification strata boundaries).
ParamMap sample_case_params(int case_id, Rng& rng);

// Gauge-fixed parameters: what classify() is expected to return for a pair
// generated from `params` (case 2: c → 0; case 3: t → 0; case 1: spacelike
// angles sorted; case 5: reflection-normalized x > 0).
ParamMap canonical_params(int case_id, const ParamMap& params);

struct RefinedForm {
  enum Kind { Refined1, Refined2, Refined3, Refined4, Rejected } kind = Rejected;
  ParamMap params;
  std::string reason;  // violated relation, when Rejected
};

RefinedForm refine(const Classification& c, double tol = 1e-6);

// Doubled angle functions 2θᵢ ∈ [0, 2π).
struct AngleTriple {
  double t1 = 0, t2 = 0, t3 = 0;
};

// Maps a diagonalizable-type angle triple to its canonical representative
// (one of the three totally geodesic triples) through the ambient isometry
// angle maps and the allowed spacelike swap, or rejects it.
std::optional<AngleTriple> totally_geodesic_angle_filter(const AngleTriple& t);

// JSON interfaces: {"delta":1|2|3,"A":[[..]],"B":[[..]]} and
// {"case":...,"params":{...},"frame":[[..]],"residuals":{...}}.
nlohmann::json to_json(const OperatorPair& pair);
OperatorPair operator_pair_from_json(const nlohmann::json& j);
nlohmann::json classification_json(const Classification& c, const PairResiduals& r);

}  // namespace nklab
