#include "tacsim/geometry/procedural.hpp"

#include <cmath>
#include <map>

namespace tacsim {
namespace {

// Kuhn triangulation of a hex cell. corners indexed by bit code (x|y<<1|z<<2).
void append_kuhn_tets(TetMesh& mesh, const int corners[8]) {
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    static const bool odd[6] = {false, true, true, false, false, true};
    for (int pi = 0; pi < 6; ++pi) {
        const auto& p = perms[pi];
        int code = 0;
        std::array<int, 4> tet;
        tet[0] = corners[code];
        for (int k = 0; k < 3; ++k) {
            code |= 1 << p[k];
            tet[k + 1] = corners[code];
        }
        if (odd[pi]) std::swap(tet[2], tet[3]);  // keep positive orientation
        mesh.tets.push_back(tet);
    }
}

// 5-tet split of a hex cell: four corner tets on one parity class of corners
// plus the central tet on the other class. Adjacent cells must alternate the
// variant so shared-face diagonals agree; with an even cell count the
// checkerboard pattern is mapped onto itself by 90-degree rotations about the
// grid axis, which keeps the surface triangulation rotationally symmetric.
void append_five_tets(TetMesh& mesh, const int corners[8], bool odd_variant) {
    static const int even_c[4] = {0, 3, 5, 6};  // corner bit codes with parity 0
    static const int odd_c[4] = {1, 2, 4, 7};
    const int* host = odd_variant ? odd_c : even_c;
    const int* central = odd_variant ? even_c : odd_c;
    auto push_positive = [&](std::array<int, 4> t) {
        const Vec3& a = mesh.vertices[t[0]];
        const Vec3 d1 = mesh.vertices[t[1]] - a, d2 = mesh.vertices[t[2]] - a,
                   d3 = mesh.vertices[t[3]] - a;
        if (d1.cross(d2).dot(d3) < 0) std::swap(t[2], t[3]);
        mesh.tets.push_back(t);
    };
    for (int t = 0; t < 4; ++t) {
        const int c = host[t];
        push_positive({corners[c], corners[c ^ 1], corners[c ^ 2], corners[c ^ 4]});
    }
    push_positive({corners[central[0]], corners[central[1]], corners[central[2]],
                   corners[central[3]]});
}

}  // namespace

TetMesh make_box_tet_mesh(const Vec3& lo, const Vec3& hi, int nx, int ny, int nz) {
    TetMesh mesh;
    auto vid = [&](int i, int j, int k) { return (k * (ny + 1) + j) * (nx + 1) + i; };
    for (int k = 0; k <= nz; ++k)
        for (int j = 0; j <= ny; ++j)
            for (int i = 0; i <= nx; ++i)
                mesh.vertices.push_back({lo.x() + (hi.x() - lo.x()) * i / nx,
                                         lo.y() + (hi.y() - lo.y()) * j / ny,
                                         lo.z() + (hi.z() - lo.z()) * k / nz});
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                int corners[8];
                for (int c = 0; c < 8; ++c)
                    corners[c] = vid(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
                append_kuhn_tets(mesh, corners);
            }
    mesh.finalize();
    return mesh;
}

TetMesh make_cylinder_tet_mesh(double radius, double thickness, int radial_cells, int axial_cells) {
    TetMesh mesh;
    const int n = 2 * radial_cells;  // grid cells across the diameter
    auto vid = [&](int i, int j, int k) { return (k * (n + 1) + j) * (n + 1) + i; };
    for (int k = 0; k <= axial_cells; ++k)
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i <= n; ++i) {
                const double u = 2.0 * i / n - 1.0;
                const double v = 2.0 * j / n - 1.0;
                // square-to-disc map, equal-ish cell areas, no degenerate corners
                const double x = u * std::sqrt(1.0 - 0.5 * v * v);
                const double y = v * std::sqrt(1.0 - 0.5 * u * u);
                mesh.vertices.push_back(
                    {radius * x, radius * y, thickness * k / axial_cells});
            }
    for (int k = 0; k < axial_cells; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                int corners[8];
                for (int c = 0; c < 8; ++c)
                    corners[c] = vid(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1));
                append_five_tets(mesh, corners, (i + j + k) & 1);
            }
    mesh.finalize();
    return mesh;
}

TriMesh make_icosphere(const Vec3& center, double radius, int subdivisions) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriMesh mesh;
    mesh.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                     {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    mesh.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                      {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                      {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                      {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::array<int, 2>, int> midpoint;
        auto mid = [&](int a, int b) {
            std::array<int, 2> key = {std::min(a, b), std::max(a, b)};
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            int id = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]).normalized());
            midpoint.emplace(key, id);
            return id;
        };
        for (auto& v : mesh.vertices) v.normalize();
        std::vector<std::array<int, 3>> next;
        for (const auto& tri : mesh.triangles) {
            int ab = mid(tri[0], tri[1]), bc = mid(tri[1], tri[2]), ca = mid(tri[2], tri[0]);
            next.push_back({tri[0], ab, ca});
            next.push_back({tri[1], bc, ab});
            next.push_back({tri[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        mesh.triangles = std::move(next);
    }
    for (auto& v : mesh.vertices) v = center + radius * v.normalized();
    mesh.finalize(true);
    return mesh;
}

TriMesh make_box_tri_mesh(const Vec3& lo, const Vec3& hi) {
    TriMesh mesh;
    for (int c = 0; c < 8; ++c)
        mesh.vertices.push_back({(c & 1) ? hi.x() : lo.x(), (c & 2) ? hi.y() : lo.y(),
                                 (c & 4) ? hi.z() : lo.z()});
    mesh.triangles = {{0, 2, 1}, {1, 2, 3}, {4, 5, 6}, {5, 7, 6}, {0, 1, 4}, {1, 5, 4},
                      {2, 6, 3}, {3, 6, 7}, {0, 4, 2}, {2, 4, 6}, {1, 3, 5}, {3, 7, 5}};
    mesh.finalize(true);
    return mesh;
}

}  // namespace tacsim
