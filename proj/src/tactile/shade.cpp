#include "tacsim/tactile/shade.hpp"

#include <cmath>

namespace tacsim {

std::vector<Light> default_ring_lights(double elevation_deg) {
    const double el = elevation_deg * M_PI / 180.0;
    std::vector<Light> lights;
    const Vec3 colors[3] = {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
    for (int k = 0; k < 3; ++k) {
        const double az = 2 * M_PI * k / 3;
        Light l;
        l.direction = Vec3(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
        l.rgb = colors[k];
        lights.push_back(l);
    }
    return lights;
}

ImageRgb shade_pseudo_image(const HeightMap& hm, const std::vector<Light>& lights,
                            const ShadeParams& params) {
    if (lights.empty()) throw ConfigError("shade_pseudo_image: at least one light required");
    ImageRgb img(hm.width, hm.height);
    const Vec3 view = Vec3::UnitZ();

    for (int y = 0; y < hm.height; ++y) {
        for (int x = 0; x < hm.width; ++x) {
            if (!hm.covered(x, y)) continue;
            // central differences, falling back to one-sided at mask borders
            auto sample = [&](int sx, int sy, double fallback) {
                if (sx < 0 || sy < 0 || sx >= hm.width || sy >= hm.height || !hm.covered(sx, sy))
                    return fallback;
                return hm.at(sx, sy);
            };
            const double z = hm.at(x, y);
            const double zxp = sample(x + 1, y, z), zxm = sample(x - 1, y, z);
            const double zyp = sample(x, y + 1, z), zym = sample(x, y - 1, z);
            const double dzdx = (zxp - zxm) / (2 * hm.pixel_size);
            const double dzdy = (zyp - zym) / (2 * hm.pixel_size);
            const Vec3 n = Vec3(-dzdx, -dzdy, 1).normalized();

            Vec3 color = Vec3::Constant(params.ambient);
            for (const auto& l : lights) {
                const double diff = std::max(0.0, n.dot(l.direction));
                const Vec3 half = (l.direction + view).normalized();
                const double spec =
                    params.specular * std::pow(std::max(0.0, n.dot(half)), params.shininess);
                color += l.rgb * diff + l.rgb * spec;
            }
            for (int c = 0; c < 3; ++c)
                img.at(x, y, c) =
                    static_cast<uint8_t>(std::lround(std::clamp(color[c], 0.0, 1.0) * 255.0));
        }
    }
    return img;
}

}  // namespace tacsim
