#pragma once

#include "tacsim/scene/scene.hpp"

namespace tacsim {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0;   // worst observed error / statistic
    double tolerance = 0;  // threshold it was compared against
};

// Numerical property suites (finite-difference gradients, distance-kernel
// sampling oracles, CCD conservativeness) on the configured scene at reduced
// size. Deterministic for a fixed seed.
std::vector<CheckResult> run_checks(const Scene& scene, uint64_t seed);

}  // namespace tacsim
