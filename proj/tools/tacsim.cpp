#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "tacsim/checks.hpp"
#include "tacsim/scene/scene.hpp"
#include "tacsim/scene/state_io.hpp"
#include "tacsim/tactile/heightmap.hpp"
#include "tacsim/tactile/markers.hpp"
#include "tacsim/tactile/metrics.hpp"
#include "tacsim/tactile/png_io.hpp"
#include "tacsim/tactile/shade.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tacsim;

namespace {

constexpr const char* kVersion = "1.0.0";

// exit codes: 0 ok, 1 config, 2 io, 3 solver, 4 check failure, 5 usage
enum ExitCode { kOk = 0, kConfig = 1, kIo = 2, kSolver = 3, kCheckFail = 4, kUsage = 5 };

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// `--override a.b.c=value`; value parsed as JSON when possible, string otherwise
void apply_override(json& doc, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like key.path=value: " + spec);
    const std::string path = spec.substr(0, eq);
    const std::string value = spec.substr(eq + 1);
    json* node = &doc;
    size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) throw ConfigError("bad override path: " + path);
        const bool numeric = key.find_first_not_of("0123456789") == std::string::npos;
        if (node->is_array()) {
            if (!numeric) throw ConfigError("override path indexes an array with '" + key +
                                            "': " + path);
            const size_t idx = std::stoul(key);
            if (idx >= node->size())
                throw ConfigError("override index out of range in: " + path);
            if (dot == std::string::npos) {
                try {
                    (*node)[idx] = json::parse(value);
                } catch (const json::parse_error&) {
                    (*node)[idx] = value;
                }
                return;
            }
            node = &(*node)[idx];
        } else {
            if (dot == std::string::npos) {
                try {
                    (*node)[key] = json::parse(value);
                } catch (const json::parse_error&) {
                    (*node)[key] = value;
                }
                return;
            }
            node = &(*node)[key];
        }
        start = dot + 1;
    }
}

std::string dir_of(const std::string& path) {
    const auto slash = path.find_last_of('/');
    return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

// make mesh paths absolute so the copied config works from any directory
void absolutize_paths(json& doc, const std::string& base_dir) {
    for (const char* section : {"gel", "indenter"}) {
        if (!doc.contains(section)) continue;
        json& s = doc[section];
        if (s.contains("mesh") && s["mesh"].is_string()) {
            const std::string p = s["mesh"].get<std::string>();
            if (!p.empty() && p.front() != '/')
                s["mesh"] = fs::absolute(fs::path(base_dir) / p).string();
        }
    }
}

struct LoadedConfig {
    json doc;
    std::string text;  // post-override serialization, hashed + copied
    SceneConfig cfg;
};

LoadedConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    LoadedConfig out;
    const std::string raw = read_file(path);
    try {
        out.doc = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("invalid config JSON: ") + e.what());
    }
    for (const auto& o : overrides) apply_override(out.doc, o);
    absolutize_paths(out.doc, dir_of(path));
    out.text = out.doc.dump(2) + "\n";
    out.cfg = parse_scene_config(out.text, dir_of(path));
    return out;
}

// front surface: upward-facing boundary triangles of the rest gel
std::vector<std::array<int, 3>> front_triangles(const TetMesh& gel) {
    std::vector<std::array<int, 3>> tris;
    for (const auto& t : gel.surface_tris) {
        const Vec3 n = (gel.vertices[t[1]] - gel.vertices[t[0]])
                           .cross(gel.vertices[t[2]] - gel.vertices[t[0]]);
        if (n.z() > 0) tris.push_back(t);
    }
    return tris;
}

struct RasterSpec {
    Vec2 origin;
    double pixel_size;
    int res;
};

RasterSpec raster_spec(const Scene& scene) {
    Aabb box;
    for (const auto& v : scene.gel.vertices) box.expand(v);
    RasterSpec spec;
    spec.res = scene.config.output.heightmap_resolution;
    const double extent = std::max(box.hi.x() - box.lo.x(), box.hi.y() - box.lo.y());
    spec.pixel_size = extent / spec.res;
    const Vec2 center((box.lo.x() + box.hi.x()) / 2, (box.lo.y() + box.hi.y()) / 2);
    spec.origin = center - Vec2::Constant(extent / 2);
    return spec;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir, int steps_override,
                 const std::vector<std::string>& overrides, bool json_out) {
    const auto t_start = std::chrono::steady_clock::now();
    LoadedConfig lc = load_config(config_path, overrides);
    Scene scene = build_scene(lc.cfg);

    fs::create_directories(out_dir);
    {
        std::ofstream cfg_copy(out_dir + "/config.json");
        cfg_copy << lc.text;
    }

    const double h = scene.config.solver.h;
    const int n_steps = steps_override >= 0
                            ? steps_override
                            : int(std::ceil(scene.config.script.total_duration() / h));

    RunResult res = run(scene, n_steps, &std::cerr);

    json manifest;
    manifest["schema_version"] = 1;
    manifest["tool_version"] = kVersion;
    manifest["config_hash"] = hex64(fnv1a(lc.text));
    manifest["config"] = "config.json";

    std::vector<std::string> frame_files, heightmap_files, image_files;
    const auto spec = raster_spec(scene);
    const auto front = front_triangles(scene.gel);
    const size_t n_gel = scene.gel.vertices.size();
    for (size_t f = 0; f < res.trajectory.size(); ++f) {
        char name[64];
        std::snprintf(name, sizeof(name), "frame_%04zu.bin", f);
        save_state_frame(out_dir + "/" + name, res.trajectory[f]);
        frame_files.emplace_back(name);

        if (scene.config.output.write_heightmaps || scene.config.output.write_images) {
            const std::vector<Vec3> gel_x(res.trajectory[f].x.begin(),
                                          res.trajectory[f].x.begin() + n_gel);
            const HeightMap hm = rasterize_heightmap(gel_x, front, spec.origin, spec.pixel_size,
                                                     spec.res, spec.res);
            if (scene.config.output.write_heightmaps) {
                std::snprintf(name, sizeof(name), "height_%04zu.png", f);
                save_heightmap_png(out_dir + "/" + name, hm);
                heightmap_files.emplace_back(name);
            }
            if (scene.config.output.write_images) {
                std::snprintf(name, sizeof(name), "image_%04zu.png", f);
                save_png_rgb(out_dir + "/" + name, shade_pseudo_image(hm, default_ring_lights()));
                image_files.emplace_back(name);
            }
        }
    }
    manifest["frames"] = frame_files;
    manifest["heightmaps"] = heightmap_files;
    manifest["images"] = image_files;

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    json summary;
    summary["steps"] = int(res.trajectory.size()) - 1;
    summary["total_newton_iters"] = res.total_newton_iters;
    summary["wall_time_s"] = wall;
    if (std::isfinite(res.min_distance)) summary["min_distance"] = res.min_distance;
    summary["aborted"] = res.aborted;
    if (res.aborted) summary["error"] = res.error;
    manifest["summary"] = summary;

    {
        std::ofstream mf(out_dir + "/manifest.json");
        mf << manifest.dump(2) << "\n";
    }
    if (json_out)
        std::cout << manifest.dump() << "\n";
    else
        std::cerr << "wrote " << frame_files.size() << " frames to " << out_dir
                  << (res.aborted ? " (solver aborted: " + res.error + ")" : "") << "\n";
    return res.aborted ? kSolver : kOk;
}

int cmd_markers(const std::string& traj_dir, int rows, int cols, double spacing,
                bool json_out) {
    json manifest;
    try {
        manifest = json::parse(read_file(traj_dir + "/manifest.json"));
    } catch (const json::parse_error& e) {
        throw IoError("bad manifest in " + traj_dir + ": " + e.what());
    }
    LoadedConfig lc = load_config(traj_dir + "/" +
                                      manifest.value("config", std::string("config.json")),
                                  {});
    Scene scene = build_scene(lc.cfg);
    const auto& out_opts = scene.config.output;
    if (rows <= 0) rows = out_opts.marker_rows;
    if (cols <= 0) cols = out_opts.marker_cols;
    if (spacing <= 0) spacing = out_opts.marker_spacing;

    const auto front = front_triangles(scene.gel);
    Aabb box;
    for (const auto& v : scene.gel.vertices) box.expand(v);
    const Vec2 center((box.lo.x() + box.hi.x()) / 2, (box.lo.y() + box.hi.y()) / 2);
    const MarkerSet set =
        embed_markers(scene.gel.vertices, front, rows, cols, spacing, center, 1e-6);

    std::ofstream csv(traj_dir + "/markers.csv");
    csv << "frame,marker_id,x,y,z,u,v\n";
    csv.precision(17);
    json curve = json::array();
    const auto& frames = manifest.at("frames");
    for (size_t f = 0; f < frames.size(); ++f) {
        const std::string frame_path = traj_dir + "/" + frames[f].get<std::string>();
        const SimState state = load_state_frame(frame_path);
        const auto pos = marker_positions(set, front, state.x);
        const auto disp = marker_displacements(set, front, state.x);
        for (size_t m = 0; m < pos.size(); ++m)
            csv << f << ',' << m << ',' << pos[m].x() << ',' << pos[m].y() << ',' << pos[m].z()
                << ',' << disp.displacement[m].x() << ',' << disp.displacement[m].y() << "\n";
        curve.push_back({{"frame", f}, {"time", state.time}, {"mean_displacement",
                                                              disp.mean_length}});
    }
    {
        std::ofstream cf(traj_dir + "/marker_curve.json");
        cf << curve.dump(2) << "\n";
    }
    if (json_out)
        std::cout << curve.dump() << "\n";
    else
        std::cerr << "wrote markers.csv and marker_curve.json (" << set.markers.size()
                  << " markers, " << frames.size() << " frames)\n";
    return kOk;
}

int cmd_metrics(const std::string& a_path, const std::string& b_path, const std::string& out_path,
                bool /*json_out*/) {
    const ImageRgb a = load_png_rgb(a_path);
    const ImageRgb b = load_png_rgb(b_path);
    const Metrics m = image_metrics(a, b);
    json doc{{"ssim", m.ssim}, {"mae", m.mae}, {"psnr", m.psnr}};
    std::cout << doc.dump() << "\n";
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw IoError("cannot write metrics file: " + out_path);
        out << doc.dump(2) << "\n";
    }
    return kOk;
}

int cmd_check(const std::string& config_path, uint64_t seed,
              const std::vector<std::string>& overrides, bool json_out) {
    LoadedConfig lc = load_config(config_path, overrides);
    Scene scene = build_scene(lc.cfg);
    const auto results = run_checks(scene, seed);

    bool all_pass = true;
    json doc = json::array();
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        doc.push_back({{"name", r.name},
                       {"pass", r.pass},
                       {"measured", r.measured},
                       {"tolerance", r.tolerance}});
        if (!json_out)
            std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << " (measured " << r.measured
                      << ", tolerance " << r.tolerance << ")\n";
    }
    if (json_out) std::cout << doc.dump() << "\n";
    return all_pass ? kOk : kCheckFail;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* t = std::getenv("TACSIM_THREADS")) {
        const int n = std::atoi(t);
        if (n > 0) Eigen::setNbThreads(n);
    } else {
        Eigen::setNbThreads(1);
    }

    CLI::App app{"physics-based tactile sensor gel simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path, out_dir, traj_dir, img_a, img_b, metrics_out;
    std::vector<std::string> overrides;
    int steps = -1, rows = 0, cols = 0;
    double spacing = 0;
    uint64_t seed = 0;
    bool json_out = false;

    auto* sim = app.add_subcommand("simulate", "run a scene and write the trajectory");
    sim->add_option("config", config_path, "scene config JSON")->required();
    sim->add_option("--out", out_dir, "output directory")->required();
    sim->add_option("--steps", steps, "override the step count");
    sim->add_option("--override", overrides, "dotted-path config override key=value");
    sim->add_flag("--json", json_out, "machine-readable stdout");

    auto* mk = app.add_subcommand("markers", "extract marker displacements from a trajectory");
    mk->add_option("trajectory", traj_dir, "trajectory directory")->required();
    mk->add_option("--rows", rows, "marker grid rows");
    mk->add_option("--cols", cols, "marker grid cols");
    mk->add_option("--spacing", spacing, "marker grid spacing (m)");
    mk->add_flag("--json", json_out, "machine-readable stdout");

    auto* mt = app.add_subcommand("metrics", "SSIM/MAE/PSNR between two PNGs");
    mt->add_option("a", img_a, "first image")->required();
    mt->add_option("b", img_b, "second image")->required();
    mt->add_option("--out", metrics_out, "also write the JSON report here");
    mt->add_flag("--json", json_out, "machine-readable stdout");

    auto* ck = app.add_subcommand("check", "numerical self-checks on a scene config");
    ck->add_option("config", config_path, "scene config JSON")->required();
    ck->add_option("--seed", seed, "rng seed");
    ck->add_option("--override", overrides, "dotted-path config override key=value");
    ck->add_flag("--json", json_out, "machine-readable stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(config_path, out_dir, steps, overrides, json_out);
        if (mk->parsed()) return cmd_markers(traj_dir, rows, cols, spacing, json_out);
        if (mt->parsed()) return cmd_metrics(img_a, img_b, metrics_out, json_out);
        if (ck->parsed()) return cmd_check(config_path, seed, overrides, json_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kSolver;
    }
    return kUsage;
}
