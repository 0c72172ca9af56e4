#include "tacsim/geometry/tri_mesh.hpp"

#include <algorithm>
#include <map>

namespace tacsim {

void TriMesh::finalize(bool require_watertight) {
    const int nv = static_cast<int>(vertices.size());
    edges.clear();
    std::map<std::array<int, 2>, int> edge_count;
    for (size_t ti = 0; ti < triangles.size(); ++ti) {
        const auto& t = triangles[ti];
        for (int v : t) {
            if (v < 0 || v >= nv)
                throw ConfigError("triangle " + std::to_string(ti) + " references out-of-range vertex " +
                                  std::to_string(v));
        }
        const Vec3 n = (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]);
        if (n.norm() == 0.0)
            throw ConfigError("triangle " + std::to_string(ti) + " is degenerate (zero area)");
        for (int k = 0; k < 3; ++k) {
            int a = t[k], b = t[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            edge_count[{a, b}]++;
        }
    }
    for (const auto& [e, count] : edge_count) {
        if (require_watertight && count != 2)
            throw ConfigError("mesh is not watertight: edge (" + std::to_string(e[0]) + "," +
                              std::to_string(e[1]) + ") shared by " + std::to_string(count) +
                              " triangles");
        edges.push_back(e);
    }
}

}  // namespace tacsim
