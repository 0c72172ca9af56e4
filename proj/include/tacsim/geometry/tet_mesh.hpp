#pragma once

#include <array>
#include "tacsim/common.hpp"

namespace tacsim {

// Tetrahedral FEM mesh with precomputed rest-state quantities.
// Immutable after finalize(); all accessors are const.
struct TetMesh {
    std::vector<Vec3> vertices;                 // rest positions (m)
    std::vector<std::array<int, 4>> tets;
    std::vector<double> rest_volumes;           // m^3, all > 0 after finalize
    std::vector<Mat3> inverse_rest_matrices;    // Dm^{-1} per tet
    std::vector<std::array<int, 3>> surface_tris;   // outward winding
    std::vector<std::array<int, 2>> surface_edges;  // unique, sorted pairs
    std::vector<double> vertex_masses;          // filled by lump_masses
    int repaired_tets = 0;                      // negative-volume tets fixed by index swap

    // Validates indices, repairs negative-volume tets (swap two indices),
    // computes rest volumes, Dm^{-1}, and extracts the boundary surface.
    // Throws ConfigError on zero-volume tets or out-of-range indices.
    void finalize();

    double total_volume() const;
    std::vector<int> surface_vertices() const;  // unique vertex ids on the boundary
};

// Signed volume of tet (a,b,c,d); positive when (b-a, c-a, d-a) is right-handed.
double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// Each tet contributes density*volume/4 to each of its vertices.
std::vector<double> lump_masses(const TetMesh& mesh, double density);

}  // namespace tacsim
