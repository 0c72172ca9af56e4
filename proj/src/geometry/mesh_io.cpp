#include "tacsim/geometry/mesh_io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tacsim {
namespace {

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    return in;
}

// Next non-empty line with comments (#) stripped.
bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
    }
    return false;
}

TetMesh load_tetgen(const std::string& node_path) {
    std::filesystem::path p(node_path);
    std::filesystem::path ele_path = p;
    ele_path.replace_extension(".ele");

    TetMesh mesh;
    {
        auto in = open_or_throw(node_path);
        std::string line;
        if (!next_data_line(in, line)) throw IoError("empty .node file: " + node_path);
        std::istringstream header(line);
        int n_points = 0, dim = 3;
        header >> n_points >> dim;
        if (n_points <= 0 || dim != 3)
            throw IoError(".node header invalid (expected '<n> 3 ...'): " + node_path);

        std::vector<long> ids;
        for (int i = 0; i < n_points; ++i) {
            if (!next_data_line(in, line)) throw IoError("truncated .node file: " + node_path);
            std::istringstream ls(line);
            long id;
            Vec3 v;
            if (!(ls >> id >> v.x() >> v.y() >> v.z()))
                throw IoError("cannot parse .node line: " + line);
            ids.push_back(id);
            mesh.vertices.push_back(v);
        }
        // 1-based files start numbering at 1.
        long base = *std::min_element(ids.begin(), ids.end());
        if (base != 0 && base != 1) throw IoError(".node indexing must start at 0 or 1");
    }
    {
        auto in = open_or_throw(ele_path.string());
        std::string line;
        if (!next_data_line(in, line)) throw IoError("empty .ele file: " + ele_path.string());
        std::istringstream header(line);
        int n_tets = 0, nodes_per_tet = 4;
        header >> n_tets >> nodes_per_tet;
        if (n_tets <= 0 || nodes_per_tet != 4)
            throw IoError(".ele header invalid (expected '<n> 4 ...'): " + ele_path.string());

        std::vector<std::array<long, 4>> raw;
        long min_idx = std::numeric_limits<long>::max();
        for (int i = 0; i < n_tets; ++i) {
            if (!next_data_line(in, line)) throw IoError("truncated .ele file");
            std::istringstream ls(line);
            long id;
            std::array<long, 4> t;
            if (!(ls >> id >> t[0] >> t[1] >> t[2] >> t[3]))
                throw IoError("cannot parse .ele line: " + line);
            for (long v : t) min_idx = std::min(min_idx, v);
            raw.push_back(t);
        }
        const long offset = (min_idx >= 1) ? 1 : 0;
        for (const auto& t : raw)
            mesh.tets.push_back({static_cast<int>(t[0] - offset), static_cast<int>(t[1] - offset),
                                 static_cast<int>(t[2] - offset), static_cast<int>(t[3] - offset)});
    }
    mesh.finalize();
    return mesh;
}

TetMesh load_vtk(const std::string& path) {
    auto in = open_or_throw(path);
    std::string token;
    TetMesh mesh;
    bool seen_unstructured = false;
    while (in >> token) {
        if (token == "DATASET") {
            in >> token;
            if (token != "UNSTRUCTURED_GRID")
                throw IoError("VTK dataset is not UNSTRUCTURED_GRID: " + path);
            seen_unstructured = true;
        } else if (token == "POINTS") {
            size_t n;
            std::string type;
            in >> n >> type;
            mesh.vertices.resize(n);
            for (size_t i = 0; i < n; ++i)
                if (!(in >> mesh.vertices[i].x() >> mesh.vertices[i].y() >> mesh.vertices[i].z()))
                    throw IoError("truncated POINTS section: " + path);
        } else if (token == "CELLS") {
            size_t n, total;
            in >> n >> total;
            mesh.tets.reserve(n);
            for (size_t i = 0; i < n; ++i) {
                int count;
                if (!(in >> count)) throw IoError("truncated CELLS section: " + path);
                if (count != 4) throw IoError("VTK cell " + std::to_string(i) + " is not a tetrahedron");
                std::array<int, 4> t;
                in >> t[0] >> t[1] >> t[2] >> t[3];
                mesh.tets.push_back(t);
            }
        } else if (token == "CELL_TYPES") {
            size_t n;
            in >> n;
            for (size_t i = 0; i < n; ++i) {
                int type;
                in >> type;
                if (type != 10)
                    throw IoError("VTK cell type " + std::to_string(type) + " unsupported (need 10)");
            }
        }
    }
    if (!seen_unstructured) throw IoError("not a legacy VTK unstructured grid: " + path);
    if (mesh.vertices.empty() || mesh.tets.empty()) throw IoError("VTK file has no tet data: " + path);
    mesh.finalize();
    return mesh;
}

}  // namespace

TetMesh load_tet_mesh(const std::string& path, TetFormat format) {
    switch (format) {
        case TetFormat::TetGen: return load_tetgen(path);
        case TetFormat::VtkLegacyAscii: return load_vtk(path);
    }
    throw ConfigError("unknown tet mesh format");
}

TetMesh load_tet_mesh(const std::string& path) {
    auto ext = std::filesystem::path(path).extension().string();
    if (ext == ".node" || ext == ".ele") return load_tetgen(path);
    if (ext == ".vtk") return load_vtk(path);
    throw ConfigError("cannot infer tet mesh format from extension: " + path);
}

TriMesh load_tri_mesh(const std::string& path, bool require_watertight) {
    auto in = open_or_throw(path);
    TriMesh mesh;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            Vec3 v;
            if (!(ls >> v.x() >> v.y() >> v.z()))
                throw IoError(path + ":" + std::to_string(line_no) + ": malformed vertex");
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string item;
            while (ls >> item) {
                // formats: i, i/j, i//k, i/j/k — vertex index is the first field
                idx.push_back(std::stoi(item.substr(0, item.find('/'))));
            }
            if (idx.size() != 3)
                throw IoError(path + ":" + std::to_string(line_no) + ": non-triangle face with " +
                              std::to_string(idx.size()) + " vertices");
            std::array<int, 3> t;
            for (int k = 0; k < 3; ++k) {
                // OBJ is 1-based; negative indices count from the end
                int i = idx[k];
                t[k] = (i > 0) ? i - 1 : static_cast<int>(mesh.vertices.size()) + i;
            }
            mesh.triangles.push_back(t);
        }
    }
    mesh.finalize(require_watertight);
    return mesh;
}

void save_tet_mesh_vtk(const TetMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path);
    out.precision(17);
    out << "# vtk DataFile Version 3.0\ntacsim tet mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    out << "POINTS " << mesh.vertices.size() << " double\n";
    for (const auto& v : mesh.vertices) out << v.x() << " " << v.y() << " " << v.z() << "\n";
    out << "CELLS " << mesh.tets.size() << " " << mesh.tets.size() * 5 << "\n";
    for (const auto& t : mesh.tets) out << "4 " << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
    out << "CELL_TYPES " << mesh.tets.size() << "\n";
    for (size_t i = 0; i < mesh.tets.size(); ++i) out << "10\n";
}

void save_tri_mesh_obj(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write file: " + path);
    out.precision(17);
    for (const auto& v : mesh.vertices) out << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& t : mesh.triangles)
        out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

}  // namespace tacsim
