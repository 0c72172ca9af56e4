#pragma once

#include "tacsim/energy/material.hpp"
#include "tacsim/geometry/broadphase.hpp"

namespace tacsim {

// Smooth dynamic/static transition: f1 on [0, h*epsv) is the quadratic ramp,
// 1 beyond; f0 is its integral with f0(h*epsv) = h*epsv, so f0' == f1.
double friction_f1(double y, double h, double epsv);
double friction_f0(double y, double h, double epsv);

// One lagged friction contact: normal force magnitude and sliding frame are
// frozen from the state the lag was built at.
struct FrictionContact {
    CandidatePair::Kind kind;
    std::array<int, 4> idx;
    double lambda = 0;                    // kappa * |d barrier / d x|, N
    Eigen::Matrix<double, 3, 2> tangent;  // orthonormal columns spanning the contact plane
    Eigen::Vector4d weights;              // relative-displacement stencil over the 4 vertices
    std::array<Vec3, 4> anchor;           // x_t of the involved vertices
};

struct FrictionLag {
    std::vector<FrictionContact> contacts;
};

// Builds the lag from the current state: lambda from the barrier gradient
// magnitude, tangent frame from the closest-feature normal. Anchors default
// to x; pass `anchors` (e.g. step-start positions) to measure sliding against
// a different configuration than the one the forces are sampled at.
FrictionLag update_friction_lag(const std::vector<Vec3>& x,
                                const std::vector<CandidatePair>& candidates,
                                const ContactParams& params, double h,
                                const std::vector<Vec3>* anchors = nullptr);

// D(x) = sum_k mu * lambda_k * f0(|u_k|), u_k = T^T sum_i w_i (x_i - anchor_i).
double friction_energy(const std::vector<Vec3>& x, const FrictionLag& lag,
                       const ContactParams& params, double h, std::vector<Vec3>* grad = nullptr,
                       std::vector<Eigen::Triplet<double>>* hess = nullptr, bool project = true);

}  // namespace tacsim
