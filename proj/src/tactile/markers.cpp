#include "tacsim/tactile/markers.hpp"

#include <cmath>

namespace tacsim {

namespace {

// 2D barycentric coordinates of p in triangle (a, b, c); false when degenerate.
bool bary2d(const Vec2& p, const Vec2& a, const Vec2& b, const Vec2& c, Vec3& out) {
    const double det = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    if (std::abs(det) < 1e-30) return false;
    out[1] = ((p - a).x() * (c - a).y() - (p - a).y() * (c - a).x()) / det;
    out[2] = ((b - a).x() * (p - a).y() - (b - a).y() * (p - a).x()) / det;
    out[0] = 1 - out[1] - out[2];
    return true;
}

}  // namespace

MarkerSet embed_markers(const std::vector<Vec3>& rest_x,
                        const std::vector<std::array<int, 3>>& front_tris, int rows, int cols,
                        double spacing, const Vec2& center, double tol) {
    if (rows < 1 || cols < 1 || !(spacing > 0))
        throw ConfigError("embed_markers: invalid grid spec");
    MarkerSet set;
    set.rows = rows;
    set.cols = cols;
    set.spacing = spacing;

    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            const Vec2 p = center + Vec2((c - 0.5 * (cols - 1)) * spacing,
                                         (r - 0.5 * (rows - 1)) * spacing);
            // best covering triangle: topmost containing p, else nearest edge
            Marker best;
            double best_z = -std::numeric_limits<double>::infinity();
            double best_miss = std::numeric_limits<double>::infinity();
            for (size_t t = 0; t < front_tris.size(); ++t) {
                const auto& tr = front_tris[t];
                const Vec3 &a = rest_x[tr[0]], &b = rest_x[tr[1]], &cc = rest_x[tr[2]];
                Vec3 w;
                if (!bary2d(p, a.head<2>(), b.head<2>(), cc.head<2>(), w)) continue;
                const double miss = std::max({-w[0], -w[1], -w[2], 0.0});
                Vec3 wc = w.cwiseMax(0.0);
                wc /= wc.sum();
                const double z = wc[0] * a.z() + wc[1] * b.z() + wc[2] * cc.z();
                // prefer strictly covering triangles; among those take the topmost
                const bool better = (miss < best_miss - 1e-15) ||
                                    (std::abs(miss - best_miss) <= 1e-15 && z > best_z);
                if (better) {
                    best_miss = miss;
                    best_z = z;
                    best.tri = static_cast<int>(t);
                    best.bary = wc;
                    best.rest = wc[0] * a + wc[1] * b + wc[2] * cc;
                }
            }
            // miss is measured in barycentric units; scale by the longest edge
            double edge = 0;
            if (best.tri >= 0) {
                const auto& tr = front_tris[best.tri];
                edge = std::max({(rest_x[tr[0]] - rest_x[tr[1]]).head<2>().norm(),
                                 (rest_x[tr[1]] - rest_x[tr[2]]).head<2>().norm(),
                                 (rest_x[tr[2]] - rest_x[tr[0]]).head<2>().norm()});
            }
            if (best.tri < 0 || best_miss * edge > tol)
                throw ConfigError("embed_markers: grid point (" + std::to_string(p.x()) + ", " +
                                  std::to_string(p.y()) + ") is off the front surface");
            set.markers.push_back(best);
        }
    }
    return set;
}

std::vector<Vec3> marker_positions(const MarkerSet& set,
                                   const std::vector<std::array<int, 3>>& front_tris,
                                   const std::vector<Vec3>& x) {
    std::vector<Vec3> out;
    out.reserve(set.markers.size());
    for (const auto& m : set.markers) {
        const auto& tr = front_tris[m.tri];
        out.push_back(m.bary[0] * x[tr[0]] + m.bary[1] * x[tr[1]] + m.bary[2] * x[tr[2]]);
    }
    return out;
}

MarkerFrame marker_displacements(const MarkerSet& set,
                                 const std::vector<std::array<int, 3>>& front_tris,
                                 const std::vector<Vec3>& x) {
    MarkerFrame frame;
    const auto pos = marker_positions(set, front_tris, x);
    double sum = 0;
    for (size_t i = 0; i < pos.size(); ++i) {
        const Vec2 d = (pos[i] - set.markers[i].rest).head<2>();
        frame.displacement.push_back(d);
        sum += d.norm();
    }
    frame.mean_length = pos.empty() ? 0 : sum / double(pos.size());
    return frame;
}

}  // namespace tacsim
