#pragma once

#include <array>
#include "tacsim/common.hpp"

namespace tacsim {

// Triangle surface mesh (indenters and extracted gel boundaries).
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 2>> edges;  // unique, sorted pairs

    // Validates indices, rejects degenerate triangles, builds the edge list.
    // require_watertight additionally demands every edge be shared by exactly
    // two triangles (indenter contract).
    void finalize(bool require_watertight = false);
};

}  // namespace tacsim
