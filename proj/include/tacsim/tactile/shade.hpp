#pragma once

#include "tacsim/tactile/heightmap.hpp"
#include "tacsim/tactile/image.hpp"

namespace tacsim {

struct Light {
    Vec3 direction = Vec3::UnitZ();  // unit vector from the surface toward the light
    Vec3 rgb = Vec3::Ones();         // intensity per channel, [0, 1] scale
};

// Three pure-R/G/B directional lights, 120 degrees apart in azimuth at the
// given elevation — the usual ring-lit gel sensor look.
std::vector<Light> default_ring_lights(double elevation_deg = 30.0);

struct ShadeParams {
    double ambient = 0.15;
    double specular = 0.25;
    double shininess = 32;
};

// Lambertian + Blinn-Phong shading of the height-field normal map, viewed
// straight down. Unmasked pixels render black. Deterministic.
ImageRgb shade_pseudo_image(const HeightMap& hm, const std::vector<Light>& lights,
                            const ShadeParams& params = {});

}  // namespace tacsim
