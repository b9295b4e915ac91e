#pragma once

#include <string>
#include <vector>

#include "sphereiso/tingley.hpp"

namespace sphereiso {

/// Line-oriented child-process oracle: each eval writes one JSON vector
/// line to the child's stdin and reads one JSON vector line back.
/// The child is spawned on first use and kept alive for the oracle's
/// lifetime.
SphereMapOracle subprocess_oracle(const FiniteMeasureSpace& dom,
                                  const FiniteMeasureSpace& cod, double p,
                                  std::vector<std::string> argv);

}  // namespace sphereiso
