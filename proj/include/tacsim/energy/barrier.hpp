#pragma once

#include "tacsim/energy/material.hpp"
#include "tacsim/geometry/broadphase.hpp"

namespace tacsim {

// Log-barrier composed with squared distance:
//   b(d2) = -(d2 - dhat2)^2 * ln(d2/dhat2)  for 0 < d2 < dhat2, else 0.
// C2 at d2 = dhat2. Returns value and first/second derivatives wrt d2.
struct BarrierDerivs {
    double b = 0, db = 0, d2b = 0;
};
BarrierDerivs barrier_value(double d2, double dhat);

// kappa * sum over candidates with d2 < dhat^2. Throws SolverError on an
// intersecting pair. Gradient/Hessian assembled through the distance kernels;
// per-pair 12x12 blocks eigen-projected when project is set.
double barrier_energy(const std::vector<Vec3>& x, const std::vector<CandidatePair>& candidates,
                      const ContactParams& params, std::vector<Vec3>* grad = nullptr,
                      std::vector<Eigen::Triplet<double>>* hess = nullptr, bool project = true);

// Minimum squared distance over the candidate set (+inf when empty).
double min_candidate_d2(const std::vector<Vec3>& x, const std::vector<CandidatePair>& candidates);

}  // namespace tacsim
