#include "tacsim/tactile/heightmap.hpp"

#include <algorithm>
#include <cmath>

namespace tacsim {

HeightMap rasterize_heightmap(const std::vector<Vec3>& x,
                              const std::vector<std::array<int, 3>>& tris, const Vec2& origin,
                              double pixel_size, int width, int height) {
    if (width < 1 || height < 1 || !(pixel_size > 0))
        throw ConfigError("rasterize_heightmap: invalid raster parameters");
    HeightMap hm;
    hm.width = width;
    hm.height = height;
    hm.origin = origin;
    hm.pixel_size = pixel_size;
    hm.values.assign(size_t(width) * height, 0.0);
    hm.mask.assign(size_t(width) * height, 0);

    for (const auto& t : tris) {
        const Vec3 &a = x[t[0]], &b = x[t[1]], &c = x[t[2]];
        const Vec2 a2 = a.head<2>(), b2 = b.head<2>(), c2 = c.head<2>();
        const double det = (b2 - a2).x() * (c2 - a2).y() - (b2 - a2).y() * (c2 - a2).x();
        if (std::abs(det) < 1e-30) continue;  // edge-on triangle, no footprint

        const double lo_x = std::min({a2.x(), b2.x(), c2.x()});
        const double hi_x = std::max({a2.x(), b2.x(), c2.x()});
        const double lo_y = std::min({a2.y(), b2.y(), c2.y()});
        const double hi_y = std::max({a2.y(), b2.y(), c2.y()});
        const int px0 = std::max(0, int(std::floor((lo_x - origin.x()) / pixel_size - 0.5)));
        const int px1 = std::min(width - 1, int(std::ceil((hi_x - origin.x()) / pixel_size)));
        const int py0 = std::max(0, int(std::floor((lo_y - origin.y()) / pixel_size - 0.5)));
        const int py1 = std::min(height - 1, int(std::ceil((hi_y - origin.y()) / pixel_size)));

        for (int py = py0; py <= py1; ++py) {
            for (int px = px0; px <= px1; ++px) {
                const Vec2 p = origin + Vec2(px + 0.5, py + 0.5) * pixel_size;
                const double w1 =
                    ((p - a2).x() * (c2 - a2).y() - (p - a2).y() * (c2 - a2).x()) / det;
                const double w2 =
                    ((b2 - a2).x() * (p - a2).y() - (b2 - a2).y() * (p - a2).x()) / det;
                const double w0 = 1 - w1 - w2;
                const double eps = -1e-12;
                if (w0 < eps || w1 < eps || w2 < eps) continue;
                const double z = w0 * a.z() + w1 * b.z() + w2 * c.z();
                const size_t i = size_t(py) * width + px;
                if (!hm.mask[i] || z > hm.values[i]) {
                    hm.values[i] = z;
                    hm.mask[i] = 1;
                }
            }
        }
    }
    return hm;
}

}  // namespace tacsim
