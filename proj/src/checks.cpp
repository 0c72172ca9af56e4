#include "tacsim/checks.hpp"

#include <cmath>
#include <random>

#include "tacsim/distance/ccd.hpp"
#include "tacsim/distance/distance.hpp"
#include "tacsim/energy/barrier.hpp"
#include "tacsim/energy/elastic.hpp"
#include "tacsim/energy/friction.hpp"
#include "tacsim/geometry/procedural.hpp"

namespace tacsim {

namespace {

using Rng = std::mt19937_64;

Vec3 rand_vec(Rng& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng), u(rng)};
}

// max relative error between an analytic gradient and central differences
template <typename EnergyFn>
double fd_gradient_error(const std::vector<Vec3>& x, const std::vector<Vec3>& grad,
                         EnergyFn&& energy, double step) {
    double num = 0, den = 0;
    std::vector<Vec3> probe = x;
    for (size_t i = 0; i < x.size(); ++i) {
        for (int k = 0; k < 3; ++k) {
            probe[i][k] = x[i][k] + step;
            const double ep = energy(probe);
            probe[i][k] = x[i][k] - step;
            const double em = energy(probe);
            probe[i][k] = x[i][k];
            const double fd = (ep - em) / (2 * step);
            num = std::max(num, std::abs(fd - grad[i][k]));
            den = std::max(den, std::abs(grad[i][k]));
        }
    }
    return num / std::max(den, 1e-12);
}

// Sampling oracle. Squared distance is jointly convex in the parameters, so
// every 1-D slice and every partial minimum is convex; nested ternary
// searches converge even through the flat valleys of near-parallel edges and
// boundary minimizers, where naive grid refinement stalls.
template <typename F>
double min_convex_1d(F&& f, double lo, double hi) {
    for (int it = 0; it < 48 && hi > lo; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (f(m1) <= f(m2))
            hi = m2;
        else
            lo = m1;
    }
    return f(0.5 * (lo + hi));
}

double sampled_pt_d2(const Vec3& p, const Vec3& t0, const Vec3& t1, const Vec3& t2) {
    auto slice = [&](double u) {
        auto g = [&](double v) {
            return (p - (t0 + u * (t1 - t0) + v * (t2 - t0))).squaredNorm();
        };
        return min_convex_1d(g, 0.0, 1.0 - u);
    };
    return min_convex_1d(slice, 0.0, 1.0);
}

double sampled_ee_d2(const Vec3& a0, const Vec3& a1, const Vec3& b0, const Vec3& b1) {
    auto slice = [&](double s) {
        auto g = [&](double t) {
            return ((a0 + s * (a1 - a0)) - (b0 + t * (b1 - b0))).squaredNorm();
        };
        return min_convex_1d(g, 0.0, 1.0);
    };
    return min_convex_1d(slice, 0.0, 1.0);
}

}  // namespace

std::vector<CheckResult> run_checks(const Scene& scene, uint64_t seed) {
    std::vector<CheckResult> results;
    Rng rng(seed);
    const MaterialParams& mat = scene.config.gel.material;
    ContactParams contact = scene.config.contact;
    const double h = scene.config.solver.h;

    Aabb box;
    for (const auto& v : scene.gel.vertices) box.expand(v);
    const double scale = (box.hi - box.lo).norm();

    {  // elastic gradient vs finite differences, scene material on a reduced mesh
        const TetMesh small = make_box_tet_mesh(box.lo, box.hi, 2, 2, 2);
        double worst = 0;
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<Vec3> x = small.vertices;
            for (auto& p : x) p += rand_vec(rng, 1e-3 * scale);
            std::vector<Vec3> grad(x.size(), Vec3::Zero());
            elastic_energy(small, x, mat, &grad);
            auto e = [&](const std::vector<Vec3>& q) { return elastic_energy(small, q, mat); };
            worst = std::max(worst, fd_gradient_error(x, grad, e, 1e-7 * scale));
        }
        results.push_back({"elastic_gradient_fd", worst < 1e-4, worst, 1e-4});
    }

    {  // inertia gradient
        std::vector<Vec3> x(8), xhat(8);
        std::vector<double> masses(8);
        std::uniform_real_distribution<double> um(0.1, 2.0);
        for (int i = 0; i < 8; ++i) {
            x[i] = rand_vec(rng, 1.0);
            xhat[i] = rand_vec(rng, 1.0);
            masses[i] = um(rng);
        }
        std::vector<Vec3> grad(8, Vec3::Zero());
        inertia_energy(x, xhat, masses, &grad);
        auto e = [&](const std::vector<Vec3>& q) { return inertia_energy(q, xhat, masses); };
        const double err = fd_gradient_error(x, grad, e, 1e-6);
        results.push_back({"inertia_gradient_fd", err < 1e-4, err, 1e-4});
    }

    {  // barrier gradient on near-contact pairs
        contact.dhat = 0.1;
        double worst = 0;
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Vec3> x = {Vec3(0.02, 0.03, 0.05 + 0.04 * trial / 20.0), Vec3(-1, -1, 0),
                                   Vec3(2, -1, 0), Vec3(0, 2, 0)};
            for (auto& p : x) p += rand_vec(rng, 1e-3);
            std::vector<CandidatePair> cands{{CandidatePair::PointTriangle, {0, 1, 2, 3}}};
            std::vector<Vec3> grad(4, Vec3::Zero());
            barrier_energy(x, cands, contact, &grad);
            auto e = [&](const std::vector<Vec3>& q) {
                return barrier_energy(q, cands, contact, nullptr, nullptr, false);
            };
            worst = std::max(worst, fd_gradient_error(x, grad, e, 1e-7));
        }
        results.push_back({"barrier_gradient_fd", worst < 1e-4, worst, 1e-4});
        contact = scene.config.contact;
    }

    {  // friction gradient in the sliding regime
        contact.dhat = 0.1;
        contact.mu = 0.5;
        double worst = 0;
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Vec3> x = {Vec3(0.01, -0.02, 0.03), Vec3(-1, -1, 0), Vec3(2, -1, 0),
                                   Vec3(0, 2, 0)};
            std::vector<CandidatePair> cands{{CandidatePair::PointTriangle, {0, 1, 2, 3}}};
            FrictionLag lag = update_friction_lag(x, cands, contact, h);
            std::vector<Vec3> moved = x;
            moved[0] += rand_vec(rng, 5e-3);  // slide well past epsv * h
            std::vector<Vec3> grad(4, Vec3::Zero());
            friction_energy(moved, lag, contact, h, &grad);
            auto e = [&](const std::vector<Vec3>& q) {
                return friction_energy(q, lag, contact, h);
            };
            worst = std::max(worst, fd_gradient_error(moved, grad, e, 1e-8));
        }
        results.push_back({"friction_gradient_fd", worst < 1e-4, worst, 1e-4});
        contact = scene.config.contact;
    }

    {  // augmented-Lagrangian gradient
        AlConstraints al;
        std::vector<Vec3> x(6);
        for (int i = 0; i < 6; ++i) {
            x[i] = rand_vec(rng, 1.0);
            al.vertices.push_back(i);
            al.targets.push_back(rand_vec(rng, 1.0));
            al.multipliers.push_back(rand_vec(rng, 1.0));
        }
        al.penalty = 37.0;
        std::vector<Vec3> grad(6, Vec3::Zero());
        augmented_lagrangian_energy(x, al, &grad);
        auto e = [&](const std::vector<Vec3>& q) { return augmented_lagrangian_energy(q, al); };
        const double err = fd_gradient_error(x, grad, e, 1e-6);
        results.push_back({"al_gradient_fd", err < 1e-4, err, 1e-4});
    }

    {  // distance kernels vs refined sampling oracles
        std::uniform_real_distribution<double> u(-1, 1);
        double worst = 0;
        for (int trial = 0; trial < 1000; ++trial) {
            const Vec3 p = rand_vec(rng, 1), t0 = rand_vec(rng, 1), t1 = rand_vec(rng, 1),
                       t2 = rand_vec(rng, 1);
            if ((t1 - t0).cross(t2 - t0).norm() < 1e-3) continue;
            const double exact = point_triangle_d2_value(p, t0, t1, t2);
            worst = std::max(worst, std::abs(exact - sampled_pt_d2(p, t0, t1, t2)));

            const Vec3 a0 = rand_vec(rng, 1), a1 = rand_vec(rng, 1), b0 = rand_vec(rng, 1),
                       b1 = rand_vec(rng, 1);
            if ((a1 - a0).norm() < 1e-3 || (b1 - b0).norm() < 1e-3) continue;
            const double ee = edge_edge_d2_value(a0, a1, b0, b1);
            worst = std::max(worst, std::abs(ee - sampled_ee_d2(a0, a1, b0, b1)));
        }
        results.push_back({"distance_vs_sampling_oracle", worst < 1e-6, worst, 1e-6});
    }

    {  // CCD conservativeness: no penetration anywhere in [0, toi]
        double min_d2 = std::numeric_limits<double>::infinity();
        int violations = 0;
        for (int trial = 0; trial < 300; ++trial) {
            std::array<Vec3, 4> s, e;
            for (int i = 0; i < 4; ++i) {
                s[i] = rand_vec(rng, 1);
                e[i] = s[i] + rand_vec(rng, 2);
            }
            const auto kind = (trial % 2 == 0) ? CandidatePair::PointTriangle
                                               : CandidatePair::EdgeEdge;
            const double d0 = (kind == CandidatePair::PointTriangle)
                                  ? point_triangle_d2_value(s[0], s[1], s[2], s[3])
                                  : edge_edge_d2_value(s[0], s[1], s[2], s[3]);
            if (d0 < 1e-8) continue;
            const double toi = ccd_toi_pair(kind, s, e, 0.1);
            for (int k = 0; k <= 32; ++k) {
                const double t = toi * k / 32;
                std::array<Vec3, 4> q;
                for (int i = 0; i < 4; ++i) q[i] = s[i] + t * (e[i] - s[i]);
                const double d2 = (kind == CandidatePair::PointTriangle)
                                      ? point_triangle_d2_value(q[0], q[1], q[2], q[3])
                                      : edge_edge_d2_value(q[0], q[1], q[2], q[3]);
                min_d2 = std::min(min_d2, d2);
                if (!(d2 > 0)) ++violations;
            }
        }
        results.push_back({"ccd_conservative", violations == 0 && min_d2 > 0,
                           double(violations), 0.0});
    }

    return results;
}

}  // namespace tacsim
