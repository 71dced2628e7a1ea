#pragma once
#include <string>
#include <vector>

#include "magneto/ode.hpp"

namespace magneto {

// Deterministic SVG plot of a trajectory inside a disc domain: fixed canvas,
// fixed-precision coordinates, no timestamps, so output is byte-identical
// across runs of the same scenario.
std::string trajectory_svg(const std::vector<PhaseState>& samples,
                           double domain_radius = 1.0,
                           std::size_t max_points = 20000);

}  // namespace magneto
