#pragma once

#include <vector>

#include "sphereiso/rational.hpp"

namespace sphereiso {

struct LpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status{Status::optimal};
  std::vector<Rat> x;
  Rat objective{0};
};

/// Exact two-phase simplex (Bland's rule): minimize c.x subject to
/// A x = b, x >= 0. Dense, meant for the small systems of the
/// Radon-Nikodym feasibility oracle.
LpResult solve_lp(const std::vector<std::vector<Rat>>& A,
                  const std::vector<Rat>& b, const std::vector<Rat>& c);

}  // namespace sphereiso
