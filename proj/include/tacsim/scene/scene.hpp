#pragma once

#include "tacsim/geometry/tet_mesh.hpp"
#include "tacsim/geometry/tri_mesh.hpp"
#include "tacsim/scene/script.hpp"
#include "tacsim/solver/solver.hpp"

namespace tacsim {

struct GelSpec {
    std::string mesh_path;  // empty: procedural cylinder below
    double cylinder_radius = 0.015;
    double cylinder_thickness = 0.002;
    int cylinder_radial_cells = 8;
    int cylinder_axial_cells = 2;
    MaterialParams material;
    // glued iff glue_normal . x_rest >= glue_offset (rest-position half-space)
    Vec3 glue_normal = -Vec3::UnitZ();
    double glue_offset = 0.0;
};

struct IndenterSpec {
    enum class Shape { Mesh, Sphere, Box };
    Shape shape = Shape::Sphere;
    std::string mesh_path;
    Vec3 center = Vec3::Zero();
    double radius = 0.003;
    int subdivisions = 3;
    Vec3 box_min = Vec3::Zero(), box_max = Vec3::Zero();
    Pose pose;               // base pose applied to the rest mesh
    double vertex_mass = 1e-4;  // kg, inertia of the kinematically driven dofs
};

struct OutputOptions {
    int heightmap_resolution = 128;  // square raster over the gel footprint
    int marker_rows = 5;
    int marker_cols = 4;
    double marker_spacing = 2e-3;  // m
    bool write_frames = true;
    bool write_heightmaps = false;
    bool write_images = false;
};

struct SceneConfig {
    int schema_version = 1;
    GelSpec gel;
    IndenterSpec indenter;
    ContactParams contact;        // dhat resolved from dhat_fraction at build time
    double dhat_fraction = 1e-3;  // of the scene bounding-box diagonal
    SolverConfig solver;
    MotionScript script;
    Vec3 gravity = Vec3::Zero();
    bool self_collision = true;
    double max_step_displacement = 0;  // 0: default to the gel thickness
    OutputOptions output;
};

// Parse a JSON document; `base_dir` resolves relative mesh paths. Throws
// ConfigError naming the offending key path.
SceneConfig parse_scene_config(const std::string& json_text, const std::string& base_dir);

class Scene {
public:
    SceneConfig config;  // contact.dhat in meters after build
    TetMesh gel;
    TriMesh indenter;
    std::vector<int> glued;
    Vec3 indenter_rest_center = Vec3::Zero();
    double gel_thickness = 0;

    SimState initial_state() const;
    Pose pose_at(double t) const;
    StepInputs step_inputs(const Pose& target) const;

private:
    friend Scene build_scene(const SceneConfig& cfg);
    std::vector<double> masses_;
    SurfacePatch gel_patch_, indenter_patch_;
    std::vector<Vec3> glued_targets_;
};

Scene build_scene(const SceneConfig& cfg);
Scene load_scene(const std::string& config_path);

struct RunResult {
    std::vector<SimState> trajectory;  // n_steps + 1 entries including t = 0
    int total_newton_iters = 0;
    double min_distance = std::numeric_limits<double>::infinity();
    bool aborted = false;
    std::string error;
};

// Sequential timestep loop; on solver failure keeps the partial trajectory.
RunResult run(const Scene& scene, int n_steps, std::ostream* log = nullptr);

}  // namespace tacsim
