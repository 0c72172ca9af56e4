#pragma once

#include "tacsim/common.hpp"

namespace tacsim {

// 1/2 (x - xhat)^T M (x - xhat); Hessian is the lumped mass diagonal.
double inertia_energy(const std::vector<Vec3>& x, const std::vector<Vec3>& xhat,
                      const std::vector<double>& masses, std::vector<Vec3>* grad = nullptr,
                      std::vector<Eigen::Triplet<double>>* hess = nullptr);

// xhat = x_t + h v_t + h^2 M^{-1} f_ext
std::vector<Vec3> compute_xhat(const std::vector<Vec3>& x_t, const std::vector<Vec3>& v_t, double h,
                               const std::vector<double>& masses, const std::vector<Vec3>& f_ext);

// Glue/kinematic constraints: sum_c [ -lambda_c . (x_c - target_c)
//                                     + penalty/2 |x_c - target_c|^2 ]
struct AlConstraints {
    std::vector<int> vertices;
    std::vector<Vec3> targets;
    std::vector<Vec3> multipliers;  // lambda_c
    double penalty = 1e8;

    double max_violation(const std::vector<Vec3>& x) const;
    // lambda <- lambda - penalty * (x - target)
    void update_multipliers(const std::vector<Vec3>& x);
};

double augmented_lagrangian_energy(const std::vector<Vec3>& x, const AlConstraints& al,
                                   std::vector<Vec3>* grad = nullptr,
                                   std::vector<Eigen::Triplet<double>>* hess = nullptr);

}  // namespace tacsim
