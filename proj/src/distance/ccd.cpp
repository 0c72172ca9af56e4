#include "tacsim/distance/ccd.hpp"

#include <cmath>
#include "tacsim/distance/distance.hpp"

namespace tacsim {
namespace {

double pair_distance(CandidatePair::Kind kind, const std::array<Vec3, 4>& p) {
    const double d2 = (kind == CandidatePair::PointTriangle)
                          ? point_triangle_d2_value(p[0], p[1], p[2], p[3])
                          : edge_edge_d2_value(p[0], p[1], p[2], p[3]);
    return std::sqrt(d2);
}

}  // namespace

double ccd_toi_pair(CandidatePair::Kind kind, const std::array<Vec3, 4>& start,
                    const std::array<Vec3, 4>& end, double slack) {
    std::array<Vec3, 4> u;
    for (int i = 0; i < 4; ++i) u[i] = end[i] - start[i];

    // Bound on the relative closest-point speed: max displacement of one
    // primitive plus max displacement of the other.
    double la, lb;
    if (kind == CandidatePair::PointTriangle) {
        la = u[0].norm();
        lb = std::max({u[1].norm(), u[2].norm(), u[3].norm()});
    } else {
        la = std::max(u[0].norm(), u[1].norm());
        lb = std::max(u[2].norm(), u[3].norm());
    }
    const double lp = la + lb;

    std::array<Vec3, 4> pos = start;
    double d = pair_distance(kind, pos);
    double scale = 0;
    for (const Vec3& p : start) scale = std::max(scale, (p - start[0]).norm());
    if (d <= 1e-12 * scale) throw SolverError("ccd_toi: start state already intersecting");
    if (lp == 0) return 1.0;
    const double gap = slack * d;

    double t = 0;
    double t_step = (1 - slack) * d / lp;
    for (int iter = 0; iter < 10000; ++iter) {
        if (t + t_step >= 1.0) return 1.0;  // remainder of the motion is safe
        t += t_step;
        for (int i = 0; i < 4; ++i) pos[i] = start[i] + t * u[i];
        d = pair_distance(kind, pos);
        if (d < gap) return t;
        t_step = 0.9 * d / lp;
    }
    return t;  // conservative: everything up to t verified safe
}

double ccd_toi(const std::vector<Vec3>& x_start, const std::vector<Vec3>& x_end,
               const std::vector<CandidatePair>& pairs, double slack) {
    double t_max = 1.0;
    for (const auto& pair : pairs) {
        std::array<Vec3, 4> s, e;
        for (int i = 0; i < 4; ++i) {
            s[i] = x_start[pair.idx[i]];
            e[i] = x_end[pair.idx[i]];
        }
        t_max = std::min(t_max, ccd_toi_pair(pair.kind, s, e, slack));
    }
    return t_max;
}

}  // namespace tacsim
