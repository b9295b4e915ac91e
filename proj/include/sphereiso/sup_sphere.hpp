#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sphereiso/measure.hpp"

namespace sphereiso {

/// [0,1]-valued function on a finite point set, sup norm. Sphere members
/// attain the value 1 somewhere.
struct SupVector {
  std::vector<std::string> points;
  std::vector<double> values;

  SupVector() = default;
  SupVector(std::vector<std::string> pts, std::vector<double> vals);

  int size() const { return (int)points.size(); }
  bool on_sphere(double tol = 1e-12) const;
};

struct SupFeatures {
  Mask peak{0};  // {x : f(x) = 1}
  Mask zero{0};  // {x : f(x) = 0}
  bool in_P{false};
};

/// Peak set, zero set and nowhere-zero flag. Exact comparisons against
/// grid values; threshold 1e-12 otherwise.
SupFeatures features(const SupVector& f, double tol = 1e-12);

/// Symbolic family F_F^E = {g on sphere : p(g) <= E, z(g) <= F}.
struct SharpFamily {
  Mask E{0}, F{0};
  bool empty{false};  // family with no members (E would be empty)
};

/// S^# of a finite set of sphere functions: intersect complements of
/// zero sets (E) and of peak sets (F). Empty S yields the full family.
SharpFamily sharp_of_set(const std::vector<SupVector>& S, int n_points);

/// Sharp of a symbolic family: (F_F^E)^# = F_{X-E}^{X-F} when E is
/// non-empty; the empty family sharps to the full one.
SharpFamily sharp_of_family(const SharpFamily& fam, int n_points);

/// (E,F)-form membership: p(f) <= E and z(f) <= F.
bool member_symbolic(const SupVector& f, const SharpFamily& fam);

/// Quantifier-form membership against explicit generators:
/// ||f - g|| < 1 for every g in S.
bool member_quantifier(const SupVector& f, const std::vector<SupVector>& S);

/// Distance from f to {g nowhere zero, g(x) = 1}: closed form 1 - f(x).
double dist_to_Px(const SupVector& f, int x);

/// Brute-force check of the same distance over m-level value grids with
/// refinement; agrees with the closed form within 1e-9.
double dist_to_Px_bruteforce(const SupVector& f, int x);

struct SupOracle {
  std::vector<std::string> X, Y;  // domain / codomain point sets
  std::function<SupVector(const SupVector&)> fn;

  SupVector eval(const SupVector& f) const;
};

/// Oracle evaluating f -> f o sigma for a fixed permutation
/// sigma: Y -> X (given as sigma[y] = index into X).
SupOracle plant_sup_oracle(std::vector<std::string> X, std::vector<int> sigma);

struct HomeoReport {
  bool accepted{false};
  std::vector<int> sigma;  // sigma[y] = x with Phi(f)(y) = f(sigma(y))
  double max_deviation{0.0};
  std::string witness;
};

/// Probes with functions peaking at a single point to read off the point
/// map, then verifies composition on grid and random samples.
HomeoReport extract_homeo(const SupOracle& oracle, double tol = 1e-9,
                          std::uint64_t seed = 1);

}  // namespace sphereiso
