#pragma once

#include "tacsim/energy/material.hpp"
#include "tacsim/geometry/tet_mesh.hpp"

namespace tacsim {

// Stable Neo-Hookean energy density:
//   psi(F) = mu/2 (tr(F^T F) - 3) + lam/2 (det F - alpha)^2 - mu^2/(2 lam)
// with lam = lame_lambda + lame_mu and alpha = 1 + mu/lam, so psi(rest) = 0,
// grad(rest) = 0 and the Hessian at rest matches linear elasticity.
double stable_neo_hookean_psi(const Mat3& F, double mu, double lam);

// Total elastic energy over the mesh; accumulates gradient and Hessian
// triplets (per-tet 12x12 blocks, eigen-projected when project is set).
double elastic_energy(const TetMesh& mesh, const std::vector<Vec3>& x, const MaterialParams& mat,
                      std::vector<Vec3>* grad = nullptr,
                      std::vector<Eigen::Triplet<double>>* hess = nullptr, bool project = true,
                      double scale = 1.0);

}  // namespace tacsim
