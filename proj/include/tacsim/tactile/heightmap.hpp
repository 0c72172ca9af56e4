#pragma once

#include <array>

#include "tacsim/common.hpp"

namespace tacsim {

// Top-down raster of the deformed gel surface over the sensor base plane
// (z = 0). Pixel (px, py) samples the world point
// origin + (px + 0.5, py + 0.5) * pixel_size.
struct HeightMap {
    int width = 0, height = 0;
    Vec2 origin = Vec2::Zero();  // world xy of the raster's lower-left corner
    double pixel_size = 0;       // m/px
    std::vector<double> values;  // m above the base plane; 0 where unmasked
    std::vector<uint8_t> mask;   // 1 where covered by the gel footprint

    double& at(int x, int y) { return values[size_t(y) * width + x]; }
    double at(int x, int y) const { return values[size_t(y) * width + x]; }
    bool covered(int x, int y) const { return mask[size_t(y) * width + x] != 0; }
};

// Barycentric interpolation of the topmost triangle covering each pixel.
HeightMap rasterize_heightmap(const std::vector<Vec3>& x,
                              const std::vector<std::array<int, 3>>& tris, const Vec2& origin,
                              double pixel_size, int width, int height);

}  // namespace tacsim
