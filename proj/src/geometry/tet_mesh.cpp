#include "tacsim/geometry/tet_mesh.hpp"

#include <algorithm>
#include <map>

namespace tacsim {

double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return (b - a).cross(c - a).dot(d - a) / 6.0;
}

void TetMesh::finalize() {
    const int nv = static_cast<int>(vertices.size());
    rest_volumes.clear();
    inverse_rest_matrices.clear();
    surface_tris.clear();
    surface_edges.clear();
    repaired_tets = 0;

    rest_volumes.reserve(tets.size());
    inverse_rest_matrices.reserve(tets.size());

    for (size_t ti = 0; ti < tets.size(); ++ti) {
        auto& t = tets[ti];
        for (int k = 0; k < 4; ++k) {
            if (t[k] < 0 || t[k] >= nv)
                throw ConfigError("tet " + std::to_string(ti) + " references out-of-range vertex " +
                                  std::to_string(t[k]));
        }
        double vol = tet_signed_volume(vertices[t[0]], vertices[t[1]], vertices[t[2]], vertices[t[3]]);
        if (vol < 0) {
            std::swap(t[2], t[3]);
            vol = -vol;
            ++repaired_tets;
        }
        if (vol == 0.0)
            throw ConfigError("tet " + std::to_string(ti) + " has zero volume");
        rest_volumes.push_back(vol);

        Mat3 dm;
        dm.col(0) = vertices[t[1]] - vertices[t[0]];
        dm.col(1) = vertices[t[2]] - vertices[t[0]];
        dm.col(2) = vertices[t[3]] - vertices[t[0]];
        inverse_rest_matrices.push_back(dm.inverse());
    }

    // Boundary faces appear exactly once across all tets. Keep the outward
    // winding of the owning tet (faces below are outward for positive volume).
    static const int face_ids[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
    std::map<std::array<int, 3>, std::pair<int, std::array<int, 3>>> face_count;
    for (const auto& t : tets) {
        for (const auto& f : face_ids) {
            std::array<int, 3> tri = {t[f[0]], t[f[1]], t[f[2]]};
            std::array<int, 3> key = tri;
            std::sort(key.begin(), key.end());
            auto it = face_count.find(key);
            if (it == face_count.end())
                face_count.emplace(key, std::make_pair(1, tri));
            else
                it->second.first++;
        }
    }
    std::map<std::array<int, 2>, int> edge_set;
    for (const auto& [key, entry] : face_count) {
        if (entry.first != 1) continue;
        surface_tris.push_back(entry.second);
        const auto& tri = entry.second;
        for (int k = 0; k < 3; ++k) {
            int a = tri[k], b = tri[(k + 1) % 3];
            if (a > b) std::swap(a, b);
            edge_set[{a, b}]++;
        }
    }
    for (const auto& [e, _] : edge_set) surface_edges.push_back(e);
}

double TetMesh::total_volume() const {
    double v = 0;
    for (double x : rest_volumes) v += x;
    return v;
}

std::vector<int> TetMesh::surface_vertices() const {
    std::vector<int> ids;
    for (const auto& t : surface_tris)
        for (int v : t) ids.push_back(v);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

std::vector<double> lump_masses(const TetMesh& mesh, double density) {
    if (density <= 0) throw ConfigError("density must be > 0");
    std::vector<double> m(mesh.vertices.size(), 0.0);
    for (size_t ti = 0; ti < mesh.tets.size(); ++ti) {
        const double share = density * mesh.rest_volumes[ti] / 4.0;
        for (int v : mesh.tets[ti]) m[v] += share;
    }
    return m;
}

}  // namespace tacsim
