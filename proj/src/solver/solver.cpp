#include "tacsim/solver/solver.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <ostream>

#include "tacsim/distance/ccd.hpp"
#include "tacsim/energy/elastic.hpp"

namespace tacsim {

void SolverConfig::validate() const {
    if (!(h > 0)) throw ConfigError("solver: h must be positive");
    if (!(newton_tol > 0)) throw ConfigError("solver: newton_tol must be positive");
    if (max_newton_iters < 1) throw ConfigError("solver: max_newton_iters must be >= 1");
    if (!(line_search_shrink > 0 && line_search_shrink < 1))
        throw ConfigError("solver: line_search_shrink must be in (0, 1)");
    if (!(al_penalty_init > 0) || !(al_penalty_growth >= 1))
        throw ConfigError("solver: invalid augmented-Lagrangian settings");
    if (!(ccd_slack > 0 && ccd_slack < 1))
        throw ConfigError("solver: ccd_slack must be in (0, 1)");
}

std::vector<CandidatePair> EnergyContext::candidates(const std::vector<Vec3>& x,
                                                     const std::vector<Vec3>* dx) const {
    std::vector<CandidatePair> out;
    const double margin = contact.dhat;
    if (gel_patch && indenter_patch) {
        auto cross = broadphase_pairs(x, dx, *gel_patch, *indenter_patch, false, margin);
        out.insert(out.end(), cross.begin(), cross.end());
    }
    if (gel_patch && self_collision) {
        auto self = broadphase_pairs(x, dx, *gel_patch, *gel_patch, true, margin);
        out.insert(out.end(), self.begin(), self.end());
    }
    return out;
}

double EnergyContext::energy(const std::vector<Vec3>& x,
                             const std::vector<CandidatePair>& cands) const {
    double total = inertia_energy(x, *xhat, *masses);
    if (gel) total += h * h * elastic_energy(*gel, x, material);
    total += barrier_energy(x, cands, contact, nullptr, nullptr, false);
    if (friction) total += friction_energy(x, *friction, contact, h);
    if (al) total += augmented_lagrangian_energy(x, *al);
    return total;
}

void EnergyContext::derivatives(const std::vector<Vec3>& x,
                                const std::vector<CandidatePair>& cands, std::vector<Vec3>& grad,
                                std::vector<Eigen::Triplet<double>>* hess) const {
    grad.assign(x.size(), Vec3::Zero());
    if (hess) hess->clear();
    inertia_energy(x, *xhat, *masses, &grad, hess);
    if (gel) elastic_energy(*gel, x, material, &grad, hess, true, h * h);
    barrier_energy(x, cands, contact, &grad, hess, true);
    if (friction) friction_energy(x, *friction, contact, h, &grad, hess, true);
    if (al) augmented_lagrangian_energy(x, *al, &grad, hess);
}

bool EnergyContext::inversion_free(const std::vector<Vec3>& x) const {
    if (!gel) return true;
    for (const auto& t : gel->tets)
        if (tet_signed_volume(x[t[0]], x[t[1]], x[t[2]], x[t[3]]) <= 0) return false;
    return true;
}

double filtered_line_search(const EnergyContext& ctx, const std::vector<Vec3>& x,
                            const std::vector<Vec3>& direction, double e0,
                            const std::vector<CandidatePair>& swept_cands, double shrink,
                            double ccd_slack) {
    double alpha = std::min(1.0, ccd_toi(x, [&] {
                                std::vector<Vec3> xe(x.size());
                                for (size_t i = 0; i < x.size(); ++i) xe[i] = x[i] + direction[i];
                                return xe;
                            }(), swept_cands, ccd_slack));

    double dir_scale = 0, pos_scale = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        dir_scale = std::max(dir_scale, direction[i].norm());
        pos_scale = std::max(pos_scale, x[i].norm());
    }

    std::vector<Vec3> trial(x.size());
    for (int it = 0; it < 64; ++it) {
        for (size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + alpha * direction[i];
        if (ctx.inversion_free(trial) && ctx.energy(trial, swept_cands) < e0) return alpha;
        alpha *= shrink;
        if (alpha * dir_scale < 1e-16 * std::max(1.0, pos_scale)) break;
    }
    throw SolverError("line search failed to find a decreasing step");
}

MinimizeResult minimize(const EnergyContext& ctx, const std::vector<Vec3>& x0,
                        const SolverConfig& config) {
    config.validate();
    MinimizeResult res;
    res.x = x0;
    const int n = static_cast<int>(x0.size());

    std::vector<Vec3> grad, dx(n);
    std::vector<Eigen::Triplet<double>> trips;
    Eigen::SimplicialLDLT<SparseMat> ldlt;

    for (int iter = 0; iter < config.max_newton_iters; ++iter) {
        const auto cands = ctx.candidates(res.x, nullptr);
        ctx.derivatives(res.x, cands, grad, &trips);

        VecX g(3 * n);
        for (int i = 0; i < n; ++i) g.segment<3>(3 * i) = grad[i];

        SparseMat H(3 * n, 3 * n);
        H.setFromTriplets(trips.begin(), trips.end());

        // Newton direction; bump the diagonal if the projected system is
        // still numerically indefinite.
        VecX d;
        double reg = 0;
        const double diag_scale = std::max(1.0, H.diagonal().cwiseAbs().maxCoeff());
        for (int attempt = 0;; ++attempt) {
            SparseMat Hr = H;
            if (reg > 0) {
                SparseMat id(3 * n, 3 * n);
                id.setIdentity();
                Hr += reg * id;
            }
            ldlt.compute(Hr);
            if (ldlt.info() == Eigen::Success) {
                d = ldlt.solve(-g);
                if (ldlt.info() == Eigen::Success && d.allFinite() && g.dot(d) < 0) break;
            }
            if (attempt >= 8) {
                d = -g;  // steepest descent fallback
                break;
            }
            reg = (reg == 0) ? 1e-10 * diag_scale : reg * 10;
        }

        for (int i = 0; i < n; ++i) dx[i] = d.segment<3>(3 * i);
        double dx_inf = 0;
        for (int i = 0; i < n; ++i) dx_inf = std::max(dx_inf, dx[i].lpNorm<Eigen::Infinity>());
        res.residual = dx_inf / config.h;
        if (res.residual < config.newton_tol) {
            res.converged = true;
            return res;
        }

        const auto swept = ctx.candidates(res.x, &dx);
        const double e0 = ctx.energy(res.x, swept);
        const double alpha = filtered_line_search(ctx, res.x, dx, e0, swept,
                                                  config.line_search_shrink, config.ccd_slack);
        for (int i = 0; i < n; ++i) res.x[i] += alpha * dx[i];
        ++res.iters;
        res.energies.push_back(ctx.energy(res.x, swept));

        res.residual = alpha * dx_inf / config.h;
        if (res.residual < config.newton_tol) {
            res.converged = true;
            return res;
        }
    }
    return res;  // hit the iteration cap; caller decides how strict to be
}

SimState step(const SimState& state, const StepInputs& in) {
    in.config.validate();
    const double h = in.config.h;
    const int n = static_cast<int>(state.x.size());
    const int n_ind = static_cast<int>(in.indenter_rest.size());
    const int n_gel = n - n_ind;
    if (in.masses.size() != state.x.size() || state.v.size() != state.x.size())
        throw ConfigError("step: inconsistent state sizes");

    // gravity acts on the gel; indenter vertices are driven kinematically
    std::vector<Vec3> f_ext(n, Vec3::Zero());
    for (int i = 0; i < n_gel; ++i) f_ext[i] = in.masses[i] * in.gravity;
    const std::vector<Vec3> xhat = compute_xhat(state.x, state.v, h, in.masses, f_ext);

    AlConstraints al;
    for (size_t c = 0; c < in.glued.size(); ++c) {
        al.vertices.push_back(in.glued[c]);
        al.targets.push_back(in.glued_targets[c]);
    }
    for (int i = 0; i < n_ind; ++i) {
        al.vertices.push_back(n_gel + i);
        al.targets.push_back(in.indenter_target.apply(in.indenter_rest[i]));
    }
    al.multipliers.assign(al.vertices.size(), Vec3::Zero());

    EnergyContext ctx;
    ctx.gel = in.gel;
    ctx.masses = &in.masses;
    ctx.xhat = &xhat;
    ctx.material = in.material;
    ctx.contact = in.contact;
    ctx.h = h;
    ctx.al = al.vertices.empty() ? nullptr : &al;
    ctx.gel_patch = in.gel_patch.points.empty() ? nullptr : &in.gel_patch;
    ctx.indenter_patch = in.indenter_patch.points.empty() ? nullptr : &in.indenter_patch;
    ctx.self_collision = in.self_collision;

    FrictionLag lag;
    SimState next = state;
    next.energy_history.clear();
    MinimizeResult res;
    res.x = state.x;
    int newton_total = 0;

    const bool use_friction = in.contact.mu > 0 && ctx.gel_patch;
    const int lag_iters = use_friction ? in.config.friction_lag_max_iters : 1;
    for (int fiter = 0; fiter < lag_iters; ++fiter) {
        if (use_friction) {
            const auto cands = ctx.candidates(res.x, nullptr);
            lag = update_friction_lag(res.x, cands, in.contact, h, &state.x);
            ctx.friction = &lag;
        }
        al.penalty = in.config.al_penalty_init;
        al.multipliers.assign(al.vertices.size(), Vec3::Zero());

        const std::vector<Vec3> x_prev_lag = res.x;
        for (int aiter = 0; aiter < in.config.al_max_iters; ++aiter) {
            res = minimize(ctx, res.x, in.config);
            newton_total += res.iters;
            if (!res.energies.empty()) next.energy_history.push_back(res.energies);
            if (al.vertices.empty() || al.max_violation(res.x) < in.config.al_tol) break;
            al.update_multipliers(res.x);
            al.penalty *= in.config.al_penalty_growth;
        }

        if (fiter + 1 >= lag_iters) break;
        double change = 0;
        for (int i = 0; i < n; ++i)
            change = std::max(change, (res.x[i] - x_prev_lag[i]).lpNorm<Eigen::Infinity>());
        if (fiter > 0 && change < in.config.friction_lag_tol) break;
    }

    next.x = res.x;
    for (int i = 0; i < n; ++i) next.v[i] = (res.x[i] - state.x[i]) / h;
    next.indenter_pose = in.indenter_target;
    next.time = state.time + h;
    next.newton_iters = newton_total;
    next.residual = res.residual;
    {
        const auto cands = ctx.candidates(next.x, nullptr);
        const double d2 = min_candidate_d2(next.x, cands);
        next.min_distance = std::isfinite(d2) ? std::sqrt(d2) : d2;
    }
    if (!ctx.inversion_free(next.x)) throw SolverError("step produced an inverted element");

    if (in.log) {
        (*in.log) << "{\"step\":" << in.step_index << ",\"time\":" << next.time
                  << ",\"newton_iters\":" << newton_total << ",\"residual\":" << next.residual
                  << ",\"min_distance\":";
        if (std::isfinite(next.min_distance))
            (*in.log) << next.min_distance;
        else
            (*in.log) << "null";
        double last_energy = 0;
        if (!next.energy_history.empty() && !next.energy_history.back().empty())
            last_energy = next.energy_history.back().back();
        (*in.log) << ",\"energy\":" << last_energy << "}\n";
    }
    return next;
}

}  // namespace tacsim
