#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sphereiso/lp_geometry.hpp"
#include "sphereiso/measure.hpp"

namespace sphereiso {

/// Weighted composition operator f -> hat(Lambda)(f) * h between
/// L^p(domain) and L^p(codomain).
struct LampertiOperator {
  RegularSetIso iso;
  std::vector<double> h;    // per codomain atom, 0 off the image
  std::vector<Rat> ratio;   // exact h^p per codomain atom (change-of-measure)
  double p{1.0};

  const FiniteMeasureSpace& domain() const { return iso.domain(); }
  const FiniteMeasureSpace& codomain() const { return iso.codomain(); }
};

/// The change-of-measure weight h(y) = (pushforward(y) / nu(y))^{1/p},
/// computed atomwise. With this weight the operator is an isometry.
LampertiOperator canonical_weight(const RegularSetIso& iso, double p);

/// Operator with an explicitly supplied weight (ratio kept as h^p
/// approximated rationally; used by tests that plant broken weights).
LampertiOperator with_weight(const RegularSetIso& iso, std::vector<double> h,
                             double p);

/// (Tf)(y) = f(preimage atom of y) * h(y), 0 off the image. Linear,
/// defined for signed f as well.
LpVector lamperti_apply(const LampertiOperator& T, const LpVector& f);

struct IsometryCertificate {
  bool pass{true};
  std::string detail;  // first failure found, if any
};

/// Certifies the atomwise identity h(y)^p nu(y) = pushforward mass,
/// strict positivity of h on the image, norm preservation on seeded
/// random signed samples, and order preservation on sampled pairs.
IsometryCertificate check_isometry(const LampertiOperator& T, int samples = 64,
                                   std::uint64_t seed = 1,
                                   double tol = 1e-9);

}  // namespace sphereiso
