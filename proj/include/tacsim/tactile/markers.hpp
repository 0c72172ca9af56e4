#pragma once

#include <array>

#include "tacsim/common.hpp"

namespace tacsim {

// Dot printed on the gel front surface, tracked barycentrically so it rides
// the deformation.
struct Marker {
    int tri = -1;                  // index into the front-surface triangle list
    Vec3 bary = Vec3::Zero();      // coordinates within that triangle
    Vec3 rest = Vec3::Zero();      // rest-state world position
};

struct MarkerSet {
    std::vector<Marker> markers;
    int rows = 0, cols = 0;
    double spacing = 0;  // m
};

// Projects a rows x cols grid (spacing apart, centered at `center`) straight
// down onto the front surface. Throws ConfigError when a grid point misses
// the footprint by more than `tol` (in-plane).
MarkerSet embed_markers(const std::vector<Vec3>& rest_x,
                        const std::vector<std::array<int, 3>>& front_tris, int rows, int cols,
                        double spacing, const Vec2& center, double tol = 1e-9);

std::vector<Vec3> marker_positions(const MarkerSet& set,
                                   const std::vector<std::array<int, 3>>& front_tris,
                                   const std::vector<Vec3>& x);

// In-plane (xy) displacement of each marker from rest plus the frame mean.
struct MarkerFrame {
    std::vector<Vec2> displacement;
    double mean_length = 0;
};

MarkerFrame marker_displacements(const MarkerSet& set,
                                 const std::vector<std::array<int, 3>>& front_tris,
                                 const std::vector<Vec3>& x);

}  // namespace tacsim
