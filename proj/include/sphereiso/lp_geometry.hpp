#pragma once

#include <cstdint>
#include <vector>

#include "sphereiso/measure.hpp"

namespace sphereiso {

/// p-integrable function on a finite atomic space, p in [1, inf).
struct LpVector {
  FiniteMeasureSpace space;
  std::vector<double> values;
  double p{2.0};

  LpVector() = default;
  LpVector(FiniteMeasureSpace sp, std::vector<double> v, double p_);
};

double lp_norm(const LpVector& f);

/// Null class of {x : f(x) != 0}; always a finite-weight class.
NullClass support_class(const LpVector& f, double eps = 0.0);

/// Nonnegative unit-norm vector (positive sphere member).
struct SphereVector {
  LpVector vec;
  static constexpr double kSphereTol = 1e-12;
  explicit SphereVector(LpVector f, double tol = kSphereTol);
  const FiniteMeasureSpace& space() const { return vec.space; }
  double p() const { return vec.p; }
  const std::vector<double>& values() const { return vec.values; }
};

/// Normalized restriction f|_F / ||f|_F||; attains the restricted-sphere
/// distance. Throws PreconditionError when ||f|_F|| = 0.
SphereVector nearest_restricted(const SphereVector& f, Mask F);

/// Closed-form distance from f to the restricted positive sphere
/// {g on the sphere : supp g <= F}: the p-th root of
/// 1 - ||f|_F||_p^p + (1 - ||f|_F||_p)^p, or 2^{1/p} when ||f|_F|| = 0.
double dist_restricted_sphere(const SphereVector& f, Mask F);

struct DescentBudget {
  int starts = 12;
  int max_iters = 500;
  std::uint64_t seed = 1;
  int grid_resolution = 64;  // dense sweep when the restricted dim <= 3
};

struct OracleDistance {
  double value{0.0};
  bool converged{true};
};

/// Independent optimization oracle: minimizes ||f - g||_p over the
/// restricted positive sphere by multi-start projected descent plus a
/// dense low-dimensional grid. Requires the restricted sphere to be
/// non-empty (some atom of F has weight in (0, inf)).
OracleDistance dist_oracle_bruteforce(const SphereVector& f, Mask F,
                                      const DescentBudget& budget = {});

}  // namespace sphereiso
