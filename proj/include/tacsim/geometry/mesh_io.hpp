#pragma once

#include <string>
#include "tacsim/geometry/tet_mesh.hpp"
#include "tacsim/geometry/tri_mesh.hpp"

namespace tacsim {

enum class TetFormat { TetGen, VtkLegacyAscii };

// TetGen: path is the .node file; the sibling .ele file is derived by
// replacing the extension. 0- or 1-based indexing auto-detected.
// VTK: legacy ASCII DATASET UNSTRUCTURED_GRID, cell type 10.
TetMesh load_tet_mesh(const std::string& path, TetFormat format);
TetMesh load_tet_mesh(const std::string& path);  // format from extension

// Wavefront OBJ, v/f records only; faces must be triangles.
TriMesh load_tri_mesh(const std::string& path, bool require_watertight = false);

void save_tet_mesh_vtk(const TetMesh& mesh, const std::string& path);
void save_tri_mesh_obj(const TriMesh& mesh, const std::string& path);

}  // namespace tacsim
