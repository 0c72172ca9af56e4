#include "tacsim/energy/friction.hpp"

#include <cmath>
#include "tacsim/distance/distance.hpp"
#include "tacsim/energy/barrier.hpp"
#include "tacsim/solver/spd.hpp"

namespace tacsim {

double friction_f1(double y, double h, double epsv) {
    const double eh = epsv * h;
    if (y >= eh) return 1.0;
    return -y * y / (eh * eh) + 2 * y / eh;
}

double friction_f0(double y, double h, double epsv) {
    const double eh = epsv * h;
    if (y >= eh) return y;
    return -y * y * y / (3 * eh * eh) + y * y / eh + eh / 3;
}

namespace {

Eigen::Matrix<double, 3, 2> tangent_basis(const Vec3& normal) {
    Eigen::Matrix<double, 3, 2> t;
    const Vec3 ref = (std::abs(normal.x()) < 0.9) ? Vec3::UnitX() : Vec3::UnitY();
    t.col(0) = normal.cross(ref).normalized();
    t.col(1) = normal.cross(t.col(0)).normalized();
    return t;
}

// f1'(y) on the ramp
double friction_f1_deriv(double y, double h, double epsv) {
    const double eh = epsv * h;
    if (y >= eh) return 0.0;
    return -2 * y / (eh * eh) + 2 / eh;
}

}  // namespace

FrictionLag update_friction_lag(const std::vector<Vec3>& x,
                                const std::vector<CandidatePair>& candidates,
                                const ContactParams& params, double /*h*/,
                                const std::vector<Vec3>* anchors) {
    FrictionLag lag;
    const std::vector<Vec3>& anchor_x = anchors ? *anchors : x;
    const double dhat2 = params.dhat * params.dhat;
    for (const auto& c : candidates) {
        const Vec3 &p0 = x[c.idx[0]], &p1 = x[c.idx[1]], &p2 = x[c.idx[2]], &p3 = x[c.idx[3]];
        double d2v;
        Vec3 normal;
        Eigen::Vector4d w;
        if (c.kind == CandidatePair::PointTriangle) {
            d2v = point_triangle_d2_value(p0, p1, p2, p3);
            if (d2v >= dhat2) continue;  // barrier gradient vanishes, lambda = 0
            Vec3 bary;
            point_triangle_closest(p0, p1, p2, p3, bary);
            const Vec3 q = bary[0] * p1 + bary[1] * p2 + bary[2] * p3;
            normal = p0 - q;
            w << 1, -bary[0], -bary[1], -bary[2];
        } else {
            d2v = edge_edge_d2_value(p0, p1, p2, p3);
            if (d2v >= dhat2) continue;
            double s, t;
            edge_edge_closest(p0, p1, p2, p3, s, t);
            const Vec3 pa = p0 + s * (p1 - p0);
            const Vec3 pb = p2 + t * (p3 - p2);
            normal = pa - pb;
            w << 1 - s, s, -(1 - t), -t;
        }
        if (normal.norm() == 0) throw SolverError("update_friction_lag: touching contact pair");
        normal.normalize();

        // lambda = kappa * |grad_x b(d(x))|
        Vec12 dgrad = (c.kind == CandidatePair::PointTriangle)
                          ? point_triangle_d2(p0, p1, p2, p3).grad
                          : edge_edge_d2(p0, p1, p2, p3).grad;
        const double db = barrier_value(d2v, params.dhat).db;
        FrictionContact fc;
        fc.kind = c.kind;
        fc.idx = c.idx;
        fc.lambda = params.kappa * std::abs(db) * dgrad.norm();
        fc.tangent = tangent_basis(normal);
        fc.weights = w;
        for (int i = 0; i < 4; ++i) fc.anchor[i] = anchor_x[c.idx[i]];
        lag.contacts.push_back(fc);
    }
    return lag;
}

double friction_energy(const std::vector<Vec3>& x, const FrictionLag& lag,
                       const ContactParams& params, double h, std::vector<Vec3>* grad,
                       std::vector<Eigen::Triplet<double>>* hess, bool project) {
    if (params.mu == 0) return 0;
    double total = 0;
    for (const auto& c : lag.contacts) {
        Vec3 rel = Vec3::Zero();
        for (int i = 0; i < 4; ++i) rel += c.weights[i] * (x[c.idx[i]] - c.anchor[i]);
        const Vec2 u = c.tangent.transpose() * rel;
        const double y = u.norm();
        const double scale = params.mu * c.lambda;
        total += scale * friction_f0(y, h, params.epsv);
        if (!grad && !hess) continue;

        const double eh = params.epsv * h;
        Vec2 dir;  // f1(y) * u / y, well defined at y -> 0
        if (y < 1e-14 * eh)
            dir = Vec2::Zero();
        else
            dir = (friction_f1(y, h, params.epsv) / y) * u;
        if (grad) {
            const Vec3 g3 = c.tangent * dir;
            for (int i = 0; i < 4; ++i) (*grad)[c.idx[i]] += scale * c.weights[i] * g3;
        }
        if (hess) {
            Eigen::Matrix2d M;
            if (y < 1e-14 * eh) {
                M = (2.0 / eh) * Eigen::Matrix2d::Identity();
            } else {
                const Vec2 uh = u / y;
                const double f1 = friction_f1(y, h, params.epsv);
                const double df1 = friction_f1_deriv(y, h, params.epsv);
                M = df1 * (uh * uh.transpose()) +
                    (f1 / y) * (Eigen::Matrix2d::Identity() - uh * uh.transpose());
            }
            const Mat3 B = c.tangent * M * c.tangent.transpose();
            Mat12 K;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    K.block<3, 3>(3 * i, 3 * j) = scale * c.weights[i] * c.weights[j] * B;
            if (project) K = spd_project(K);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    for (int a = 0; a < 3; ++a)
                        for (int b = 0; b < 3; ++b)
                            hess->emplace_back(3 * c.idx[i] + a, 3 * c.idx[j] + b,
                                               K(3 * i + a, 3 * j + b));
        }
    }
    return total;
}

}  // namespace tacsim
