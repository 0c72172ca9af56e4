#pragma once

#include <iosfwd>
#include <optional>

#include "tacsim/energy/barrier.hpp"
#include "tacsim/energy/energies.hpp"
#include "tacsim/energy/friction.hpp"
#include "tacsim/energy/material.hpp"
#include "tacsim/geometry/tet_mesh.hpp"
#include "tacsim/geometry/tri_mesh.hpp"

namespace tacsim {

struct SolverConfig {
    double h = 0.01;                  // s
    double newton_tol = 1e-4;        // m/s, on |dx|_inf / h
    int max_newton_iters = 100;
    double line_search_shrink = 0.5;
    double al_penalty_init = 1e6;
    double al_penalty_growth = 2.0;
    double al_tol = 1e-6;  // m
    int al_max_iters = 10;
    int friction_lag_max_iters = 4;
    double friction_lag_tol = 1e-6;  // m
    double ccd_slack = 0.1;

    void validate() const;
};

// Positions/velocities cover gel vertices first, then indenter vertices.
struct SimState {
    std::vector<Vec3> x;
    std::vector<Vec3> v;
    Pose indenter_pose;
    double time = 0;
    // diagnostics of the last step
    int newton_iters = 0;
    double residual = 0;
    double min_distance = std::numeric_limits<double>::infinity();
    // accepted-iterate energies, one sequence per Newton solve within the step
    std::vector<std::vector<double>> energy_history;
};

// Everything needed to evaluate the total incremental energy
// E_inertia + h^2 Phi + B + D + AL at fixed step context.
struct EnergyContext {
    const TetMesh* gel = nullptr;  // null: no elastic term (point-mass tests)
    const std::vector<double>* masses = nullptr;
    const std::vector<Vec3>* xhat = nullptr;
    MaterialParams material;
    ContactParams contact;
    double h = 0.01;
    const AlConstraints* al = nullptr;
    const FrictionLag* friction = nullptr;
    const SurfacePatch* gel_patch = nullptr;
    const SurfacePatch* indenter_patch = nullptr;
    bool self_collision = true;

    std::vector<CandidatePair> candidates(const std::vector<Vec3>& x,
                                          const std::vector<Vec3>* dx) const;
    double energy(const std::vector<Vec3>& x, const std::vector<CandidatePair>& cands) const;
    // gradient always filled; Hessian triplets optional, SPD-projected per block
    void derivatives(const std::vector<Vec3>& x, const std::vector<CandidatePair>& cands,
                     std::vector<Vec3>& grad, std::vector<Eigen::Triplet<double>>* hess) const;
    bool inversion_free(const std::vector<Vec3>& x) const;
};

struct MinimizeResult {
    std::vector<Vec3> x;
    int iters = 0;
    double residual = 0;
    bool converged = false;
    std::vector<double> energies;  // value after each accepted line-search step
};

// Projected Newton with CCD-filtered backtracking line search.
MinimizeResult minimize(const EnergyContext& ctx, const std::vector<Vec3>& x0,
                        const SolverConfig& config);

// CCD-filtered backtracking from the TOI upper bound. Returns the accepted
// step size; throws SolverError when no decrease is found.
double filtered_line_search(const EnergyContext& ctx, const std::vector<Vec3>& x,
                            const std::vector<Vec3>& direction, double e0,
                            const std::vector<CandidatePair>& swept_cands, double shrink,
                            double ccd_slack);

// One implicit-Euler step with AL outer loop and friction lagging.
struct StepInputs {
    const TetMesh* gel = nullptr;
    std::vector<double> masses;  // all dofs
    MaterialParams material;
    ContactParams contact;
    SolverConfig config;
    Vec3 gravity = Vec3::Zero();
    std::vector<int> glued;                  // gel vertices pinned to rest positions
    std::vector<Vec3> glued_targets;
    std::vector<Vec3> indenter_rest;         // rest-frame indenter vertices
    Pose indenter_target;                    // scripted pose at t + h
    SurfacePatch gel_patch, indenter_patch;  // global vertex indices
    bool self_collision = true;
    std::ostream* log = nullptr;             // JSON-lines diagnostics
    int step_index = 0;
};

SimState step(const SimState& state, const StepInputs& in);

}  // namespace tacsim
