#include "tacsim/scene/scene.hpp"

#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "tacsim/geometry/broadphase.hpp"
#include "tacsim/geometry/mesh_io.hpp"
#include "tacsim/geometry/procedural.hpp"

namespace tacsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("scene config: " + path + ": " + what);
}

const json& require(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) fail(path + "." + key, "missing required field");
    return *it;
}

double num(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double get_num(const json& j, const char* key, double def, const std::string& path) {
    auto it = j.find(key);
    return it == j.end() ? def : num(*it, path + "." + key);
}

int get_int(const json& j, const char* key, int def, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) return def;
    if (!it->is_number_integer()) fail(path + "." + key, "expected an integer");
    return it->get<int>();
}

bool get_bool(const json& j, const char* key, bool def, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) return def;
    if (!it->is_boolean()) fail(path + "." + key, "expected a boolean");
    return it->get<bool>();
}

Vec3 vec3(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) fail(path, "expected an array of 3 numbers");
    return {num(j[0], path), num(j[1], path), num(j[2], path)};
}

Vec3 get_vec3(const json& j, const char* key, const Vec3& def, const std::string& path) {
    auto it = j.find(key);
    return it == j.end() ? def : vec3(*it, path + "." + key);
}

std::string join_path(const std::string& base, const std::string& rel) {
    if (rel.empty() || rel.front() == '/' || base.empty()) return rel;
    return base + "/" + rel;
}

}  // namespace

SceneConfig parse_scene_config(const std::string& json_text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("scene config: invalid JSON: ") + e.what());
    }
    SceneConfig cfg;
    const int version = get_int(j, "schema_version", -1, "");
    if (version != 1) fail("schema_version", "unsupported (expected 1)");

    if (auto it = j.find("gel"); it != j.end()) {
        const json& g = *it;
        const std::string p = "gel";
        if (auto m = g.find("mesh"); m != g.end()) {
            if (!m->is_string()) fail(p + ".mesh", "expected a string path");
            cfg.gel.mesh_path = join_path(base_dir, m->get<std::string>());
        } else if (auto c = g.find("cylinder"); c != g.end()) {
            const std::string cp = p + ".cylinder";
            cfg.gel.cylinder_radius = get_num(*c, "radius", cfg.gel.cylinder_radius, cp);
            cfg.gel.cylinder_thickness = get_num(*c, "thickness", cfg.gel.cylinder_thickness, cp);
            cfg.gel.cylinder_radial_cells =
                get_int(*c, "radial_cells", cfg.gel.cylinder_radial_cells, cp);
            cfg.gel.cylinder_axial_cells =
                get_int(*c, "axial_cells", cfg.gel.cylinder_axial_cells, cp);
        }
        if (auto m = g.find("material"); m != g.end()) {
            const std::string mp = p + ".material";
            cfg.gel.material.youngs_modulus =
                get_num(*m, "youngs_modulus", cfg.gel.material.youngs_modulus, mp);
            cfg.gel.material.poisson_ratio =
                get_num(*m, "poisson_ratio", cfg.gel.material.poisson_ratio, mp);
            cfg.gel.material.density = get_num(*m, "density", cfg.gel.material.density, mp);
        }
        if (auto gl = g.find("glue"); gl != g.end()) {
            const std::string gp = p + ".glue";
            cfg.gel.glue_normal = get_vec3(*gl, "normal", cfg.gel.glue_normal, gp);
            cfg.gel.glue_offset = get_num(*gl, "offset", cfg.gel.glue_offset, gp);
        }
    }

    if (auto it = j.find("indenter"); it != j.end()) {
        const json& d = *it;
        const std::string p = "indenter";
        if (auto m = d.find("mesh"); m != d.end()) {
            if (!m->is_string()) fail(p + ".mesh", "expected a string path");
            cfg.indenter.shape = IndenterSpec::Shape::Mesh;
            cfg.indenter.mesh_path = join_path(base_dir, m->get<std::string>());
        } else if (auto s = d.find("sphere"); s != d.end()) {
            const std::string sp = p + ".sphere";
            cfg.indenter.shape = IndenterSpec::Shape::Sphere;
            cfg.indenter.center = get_vec3(*s, "center", cfg.indenter.center, sp);
            cfg.indenter.radius = get_num(*s, "radius", cfg.indenter.radius, sp);
            cfg.indenter.subdivisions = get_int(*s, "subdivisions", cfg.indenter.subdivisions, sp);
        } else if (auto b = d.find("box"); b != d.end()) {
            const std::string bp = p + ".box";
            cfg.indenter.shape = IndenterSpec::Shape::Box;
            cfg.indenter.box_min = vec3(require(*b, "min", bp), bp + ".min");
            cfg.indenter.box_max = vec3(require(*b, "max", bp), bp + ".max");
        } else {
            fail(p, "expected one of mesh/sphere/box");
        }
        if (auto ps = d.find("pose"); ps != d.end()) {
            const std::string pp = p + ".pose";
            cfg.indenter.pose.translation =
                get_vec3(*ps, "translation", Vec3::Zero(), pp);
            if (auto r = ps->find("rotation"); r != ps->end()) {
                if (!r->is_array() || r->size() != 9) fail(pp + ".rotation", "expected 9 numbers");
                for (int k = 0; k < 9; ++k)
                    cfg.indenter.pose.rotation(k / 3, k % 3) = num((*r)[k], pp + ".rotation");
            }
        }
        cfg.indenter.vertex_mass = get_num(d, "vertex_mass", cfg.indenter.vertex_mass, p);
    } else {
        fail("indenter", "missing required field");
    }

    if (auto it = j.find("contact"); it != j.end()) {
        const std::string p = "contact";
        cfg.dhat_fraction = get_num(*it, "dhat_fraction", cfg.dhat_fraction, p);
        cfg.contact.kappa = get_num(*it, "kappa", cfg.contact.kappa, p);
        cfg.contact.mu = get_num(*it, "mu", cfg.contact.mu, p);
        cfg.contact.epsv = get_num(*it, "epsv", cfg.contact.epsv, p);
    }

    if (auto it = j.find("solver"); it != j.end()) {
        const std::string p = "solver";
        auto& s = cfg.solver;
        s.h = get_num(*it, "h", s.h, p);
        s.newton_tol = get_num(*it, "newton_tol", s.newton_tol, p);
        s.max_newton_iters = get_int(*it, "max_newton_iters", s.max_newton_iters, p);
        s.line_search_shrink = get_num(*it, "line_search_shrink", s.line_search_shrink, p);
        s.al_penalty_init = get_num(*it, "al_penalty_init", s.al_penalty_init, p);
        s.al_penalty_growth = get_num(*it, "al_penalty_growth", s.al_penalty_growth, p);
        s.al_tol = get_num(*it, "al_tol", s.al_tol, p);
        s.al_max_iters = get_int(*it, "al_max_iters", s.al_max_iters, p);
        s.friction_lag_max_iters =
            get_int(*it, "friction_lag_max_iters", s.friction_lag_max_iters, p);
        s.friction_lag_tol = get_num(*it, "friction_lag_tol", s.friction_lag_tol, p);
        s.ccd_slack = get_num(*it, "ccd_slack", s.ccd_slack, p);
    }

    if (auto it = j.find("script"); it != j.end()) {
        const json& phases = require(*it, "phases", "script");
        if (!phases.is_array()) fail("script.phases", "expected an array");
        for (size_t i = 0; i < phases.size(); ++i) {
            const std::string pp = "script.phases[" + std::to_string(i) + "]";
            const json& ph = phases[i];
            MotionPhase mp;
            const std::string kind = require(ph, "kind", pp).get<std::string>();
            if (kind == "press")
                mp.kind = MotionPhase::Kind::Press;
            else if (kind == "hold")
                mp.kind = MotionPhase::Kind::Hold;
            else if (kind == "shear")
                mp.kind = MotionPhase::Kind::Shear;
            else if (kind == "rotate")
                mp.kind = MotionPhase::Kind::Rotate;
            else
                fail(pp + ".kind", "expected press/hold/shear/rotate");
            mp.duration = num(require(ph, "duration", pp), pp + ".duration");
            mp.magnitude = get_num(ph, "magnitude", 0.0, pp);
            mp.axis = get_vec3(ph, "axis", Vec3::UnitZ(), pp);
            cfg.script.phases.push_back(mp);
        }
    }

    cfg.gravity = get_vec3(j, "gravity", cfg.gravity, "");
    cfg.self_collision = get_bool(j, "self_collision", cfg.self_collision, "");
    cfg.max_step_displacement =
        get_num(j, "max_step_displacement", cfg.max_step_displacement, "");

    if (auto it = j.find("output"); it != j.end()) {
        const std::string p = "output";
        auto& o = cfg.output;
        o.heightmap_resolution = get_int(*it, "heightmap_resolution", o.heightmap_resolution, p);
        o.marker_rows = get_int(*it, "marker_rows", o.marker_rows, p);
        o.marker_cols = get_int(*it, "marker_cols", o.marker_cols, p);
        o.marker_spacing = get_num(*it, "marker_spacing", o.marker_spacing, p);
        o.write_frames = get_bool(*it, "write_frames", o.write_frames, p);
        o.write_heightmaps = get_bool(*it, "write_heightmaps", o.write_heightmaps, p);
        o.write_images = get_bool(*it, "write_images", o.write_images, p);
    }
    return cfg;
}

Scene build_scene(const SceneConfig& cfg) {
    cfg.gel.material.validate();
    cfg.solver.validate();

    Scene scene;
    scene.config = cfg;

    if (!cfg.gel.mesh_path.empty())
        scene.gel = load_tet_mesh(cfg.gel.mesh_path);
    else
        scene.gel = make_cylinder_tet_mesh(cfg.gel.cylinder_radius, cfg.gel.cylinder_thickness,
                                           cfg.gel.cylinder_radial_cells,
                                           cfg.gel.cylinder_axial_cells);
    scene.gel.vertex_masses = lump_masses(scene.gel, cfg.gel.material.density);

    switch (cfg.indenter.shape) {
        case IndenterSpec::Shape::Mesh:
            scene.indenter = load_tri_mesh(cfg.indenter.mesh_path, /*require_watertight=*/true);
            break;
        case IndenterSpec::Shape::Sphere:
            scene.indenter =
                make_icosphere(cfg.indenter.center, cfg.indenter.radius, cfg.indenter.subdivisions);
            break;
        case IndenterSpec::Shape::Box:
            scene.indenter = make_box_tri_mesh(cfg.indenter.box_min, cfg.indenter.box_max);
            break;
    }
    // bake the base pose into the rest mesh; scripts compose on top of identity
    for (auto& v : scene.indenter.vertices) v = cfg.indenter.pose.apply(v);

    Vec3 csum = Vec3::Zero();
    for (const auto& v : scene.indenter.vertices) csum += v;
    scene.indenter_rest_center = csum / double(scene.indenter.vertices.size());

    // scene-diagonal-relative barrier activation distance
    Aabb box;
    for (const auto& v : scene.gel.vertices) box.expand(v);
    double gel_zmin = box.lo.z(), gel_zmax = box.hi.z();
    for (const auto& v : scene.indenter.vertices) box.expand(v);
    scene.config.contact.dhat = cfg.dhat_fraction * (box.hi - box.lo).norm();
    scene.config.contact.validate();
    scene.gel_thickness = gel_zmax - gel_zmin;

    for (size_t i = 0; i < scene.gel.vertices.size(); ++i)
        if (cfg.gel.glue_normal.dot(scene.gel.vertices[i]) >= cfg.gel.glue_offset - 1e-12)
            scene.glued.push_back(static_cast<int>(i));
    if (!cfg.script.phases.empty() && scene.glued.empty())
        throw ConfigError("scene config: gel.glue selects no vertices but the script moves");
    scene.glued_targets_.reserve(scene.glued.size());
    for (int v : scene.glued) scene.glued_targets_.push_back(scene.gel.vertices[v]);

    cfg.script.validate(scene.gel_thickness);

    const int n_gel = static_cast<int>(scene.gel.vertices.size());
    scene.masses_ = scene.gel.vertex_masses;
    scene.masses_.insert(scene.masses_.end(), scene.indenter.vertices.size(),
                         cfg.indenter.vertex_mass);

    scene.gel_patch_.points = scene.gel.surface_vertices();
    scene.gel_patch_.edges = scene.gel.surface_edges;
    scene.gel_patch_.tris = scene.gel.surface_tris;
    for (size_t i = 0; i < scene.indenter.vertices.size(); ++i)
        scene.indenter_patch_.points.push_back(n_gel + static_cast<int>(i));
    for (auto e : scene.indenter.edges)
        scene.indenter_patch_.edges.push_back({n_gel + e[0], n_gel + e[1]});
    for (auto t : scene.indenter.triangles)
        scene.indenter_patch_.tris.push_back({n_gel + t[0], n_gel + t[1], n_gel + t[2]});

    // the swept-candidate margin assumes bounded per-step indenter motion
    const double bound =
        cfg.max_step_displacement > 0 ? cfg.max_step_displacement : scene.gel_thickness;
    const double h = cfg.solver.h;
    const int n_steps = static_cast<int>(std::ceil(cfg.script.total_duration() / h));
    Pose prev = scene.pose_at(0);
    for (int k = 1; k <= n_steps; ++k) {
        const Pose cur = scene.pose_at(k * h);
        double worst = 0;
        for (const auto& v : scene.indenter.vertices)
            worst = std::max(worst, (cur.apply(v) - prev.apply(v)).norm());
        if (worst >= bound)
            throw ConfigError("scene config: script moves the indenter " + std::to_string(worst) +
                              " m in one step, above the per-step bound " + std::to_string(bound));
        prev = cur;
    }
    return scene;
}

Scene load_scene(const std::string& config_path) {
    std::ifstream in(config_path);
    if (!in) throw IoError("cannot open scene config: " + config_path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string dir = ".";
    if (auto slash = config_path.find_last_of('/'); slash != std::string::npos)
        dir = config_path.substr(0, slash);
    return build_scene(parse_scene_config(ss.str(), dir));
}

SimState Scene::initial_state() const {
    SimState s;
    s.x = gel.vertices;
    s.x.insert(s.x.end(), indenter.vertices.begin(), indenter.vertices.end());
    s.v.assign(s.x.size(), Vec3::Zero());
    return s;
}

Pose Scene::pose_at(double t) const {
    // base pose already baked into the rest mesh
    return script_pose(config.script, Pose::identity(), indenter_rest_center, t);
}

StepInputs Scene::step_inputs(const Pose& target) const {
    StepInputs in;
    in.gel = &gel;
    in.masses = masses_;
    in.material = config.gel.material;
    in.contact = config.contact;
    in.config = config.solver;
    in.gravity = config.gravity;
    in.glued = glued;
    in.glued_targets = glued_targets_;
    in.indenter_rest = indenter.vertices;
    in.indenter_target = target;
    in.gel_patch = gel_patch_;
    in.indenter_patch = indenter_patch_;
    in.self_collision = config.self_collision;
    return in;
}

RunResult run(const Scene& scene, int n_steps, std::ostream* log) {
    RunResult res;
    SimState s = scene.initial_state();
    res.trajectory.push_back(s);
    const double h = scene.config.solver.h;
    for (int k = 1; k <= n_steps; ++k) {
        StepInputs in = scene.step_inputs(scene.pose_at(k * h));
        in.log = log;
        in.step_index = k;
        try {
            s = step(s, in);
        } catch (const SolverError& e) {
            res.aborted = true;
            res.error = e.what();
            return res;
        }
        res.total_newton_iters += s.newton_iters;
        res.min_distance = std::min(res.min_distance, s.min_distance);
        res.trajectory.push_back(s);
    }
    return res;
}

}  // namespace tacsim
