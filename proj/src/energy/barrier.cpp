#include "tacsim/energy/barrier.hpp"

#include <cmath>
#include "tacsim/distance/distance.hpp"
#include "tacsim/solver/spd.hpp"

namespace tacsim {

BarrierDerivs barrier_value(double d2, double dhat) {
    if (d2 <= 0) throw SolverError("barrier_value: non-positive squared distance");
    const double dhat2 = dhat * dhat;
    if (d2 >= dhat2) return {};
    const double diff = d2 - dhat2;
    const double ratio = d2 / dhat2;
    const double ln = std::log(ratio);
    BarrierDerivs r;
    r.b = -diff * diff * ln;
    r.db = -2 * diff * ln - diff * diff / d2;
    r.d2b = -2 * ln - 4 * diff / d2 + diff * diff / (d2 * d2);
    return r;
}

double min_candidate_d2(const std::vector<Vec3>& x, const std::vector<CandidatePair>& candidates) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : candidates) {
        const double d2 =
            (c.kind == CandidatePair::PointTriangle)
                ? point_triangle_d2_value(x[c.idx[0]], x[c.idx[1]], x[c.idx[2]], x[c.idx[3]])
                : edge_edge_d2_value(x[c.idx[0]], x[c.idx[1]], x[c.idx[2]], x[c.idx[3]]);
        best = std::min(best, d2);
    }
    return best;
}

double barrier_energy(const std::vector<Vec3>& x, const std::vector<CandidatePair>& candidates,
                      const ContactParams& params, std::vector<Vec3>* grad,
                      std::vector<Eigen::Triplet<double>>* hess, bool project) {
    const double dhat2 = params.dhat * params.dhat;
    double total = 0;
    for (const auto& c : candidates) {
        const Vec3 &p0 = x[c.idx[0]], &p1 = x[c.idx[1]], &p2 = x[c.idx[2]], &p3 = x[c.idx[3]];
        const double d2v = (c.kind == CandidatePair::PointTriangle)
                               ? point_triangle_d2_value(p0, p1, p2, p3)
                               : edge_edge_d2_value(p0, p1, p2, p3);
        double scale2 = 0;  // touching within roundoff counts as intersecting
        for (const Vec3* q : {&p1, &p2, &p3}) scale2 = std::max(scale2, (*q - p0).squaredNorm());
        if (d2v <= 1e-24 * scale2) throw SolverError("barrier_energy: intersecting contact pair");
        if (d2v >= dhat2) continue;

        if (!grad && !hess) {
            total += barrier_value(d2v, params.dhat).b;
            continue;
        }
        Vec12 dgrad;
        Mat12 dhess;
        double d2;
        if (c.kind == CandidatePair::PointTriangle) {
            auto r = point_triangle_d2(p0, p1, p2, p3);
            d2 = r.d2;
            dgrad = r.grad;
            dhess = r.hess;
        } else {
            auto r = edge_edge_d2(p0, p1, p2, p3);
            d2 = r.d2;
            dgrad = r.grad;
            dhess = r.hess;
        }
        const BarrierDerivs b = barrier_value(d2, params.dhat);
        total += b.b;
        if (grad) {
            const Vec12 g = params.kappa * b.db * dgrad;
            for (int a = 0; a < 4; ++a) (*grad)[c.idx[a]] += g.segment<3>(3 * a);
        }
        if (hess) {
            Mat12 K = params.kappa * (b.d2b * dgrad * dgrad.transpose() + b.db * dhess);
            if (project) K = spd_project(K);
            for (int a = 0; a < 4; ++a)
                for (int bb = 0; bb < 4; ++bb)
                    for (int i = 0; i < 3; ++i)
                        for (int j = 0; j < 3; ++j)
                            hess->emplace_back(3 * c.idx[a] + i, 3 * c.idx[bb] + j,
                                               K(3 * a + i, 3 * bb + j));
        }
    }
    return params.kappa * total;
}

}  // namespace tacsim
