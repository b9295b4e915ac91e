#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sphereiso/lamperti.hpp"

namespace sphereiso {

/// Black-box map between positive spheres. Every eval goes through a
/// contract check: the output must be a codomain sphere vector.
struct SphereMapOracle {
  FiniteMeasureSpace dom, cod;
  double p{1.0};
  std::function<LpVector(const SphereVector&)> fn;
  double contract_tol{1e-9};

  SphereVector eval(const SphereVector& f) const;
};

/// Oracle evaluating a fixed operator (a "planted" ground truth).
SphereMapOracle plant_oracle(const LampertiOperator& T);

/// Planted oracle with one image coordinate scaled by (1 + delta) and the
/// result renormalized. Indicator probes are fixed points of the
/// distortion; mixtures are not.
SphereMapOracle perturb_oracle(const LampertiOperator& T, int cod_atom,
                               double delta);

struct ProbeRecord {
  int atom;            // domain atom probed (indicator probe), -1 for samples
  Mask image_support;  // support of the oracle image
};

struct AgreementReport {
  double max_deviation{0.0};  // max ||oracle(f) - T f||_p over samples
  double max_dist_gap{0.0};   // max restricted-sphere distance discrepancy
  int samples_run{0};
};

struct ExtractionReport {
  enum class Verdict { extendable, rejected };
  Verdict verdict{Verdict::rejected};
  std::string witness;  // human-readable reason when rejected
  std::optional<LampertiOperator> recovered;
  std::vector<ProbeRecord> probe_log;
  AgreementReport agreement;
};

/// Recovers the set isomorphism from indicator-probe supports, builds the
/// canonical weight, and verifies agreement. Rejection (overlapping or
/// non-atomic image supports, non-exhaustive images, deviation beyond
/// tol) is a first-class outcome with a witness.
ExtractionReport extract(const SphereMapOracle& oracle, double tol = 1e-9,
                         int n_samples = 100, std::uint64_t seed = 1);

/// Compares oracle outputs with the operator on indicators, pair
/// mixtures and dense random sphere points, and cross-checks restricted
/// sphere distances of the two images over subsets of the codomain.
AgreementReport verify_agreement(const SphereMapOracle& oracle,
                                 const LampertiOperator& T, int n_samples,
                                 std::uint64_t seed = 1);

/// Linear extension to signed vectors via f = f+ - f-.
LpVector extend_linear(const LampertiOperator& T, const LpVector& f);

}  // namespace sphereiso
