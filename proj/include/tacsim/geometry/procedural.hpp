#pragma once

#include "tacsim/geometry/tet_mesh.hpp"
#include "tacsim/geometry/tri_mesh.hpp"

namespace tacsim {

// Test-fixture meshers. Axis-aligned box spanning [min, max], nx*ny*nz cells,
// six tets per cell (Kuhn split).
TetMesh make_box_tet_mesh(const Vec3& min, const Vec3& max, int nx, int ny, int nz);

// Cylinder with axis +z, base at z=0. The disc is a mapped square grid of
// (2*radial_cells)^2 cells; axial_cells layers through the thickness.
TetMesh make_cylinder_tet_mesh(double radius, double thickness, int radial_cells, int axial_cells);

// Watertight icosphere, `subdivisions` rounds of 1:4 refinement.
TriMesh make_icosphere(const Vec3& center, double radius, int subdivisions);

TriMesh make_box_tri_mesh(const Vec3& min, const Vec3& max);

}  // namespace tacsim
