#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>

#include "tacsim/scene/scene.hpp"
#include "tacsim/scene/state_io.hpp"

using namespace tacsim;

TEST_CASE("script pose basics") {
    MotionScript script;
    script.phases.push_back({MotionPhase::Kind::Press, 0.05, 5e-4, Vec3::UnitZ()});
    script.phases.push_back({MotionPhase::Kind::Shear, 0.1, 1e-2, Vec3::UnitX()});
    script.validate(0.002);

    Pose base;
    base.translation = Vec3(0.1, 0.2, 0.3);
    const Vec3 center(0, 0, 0.3);

    SUBCASE("t = 0 returns the base pose") {
        const Pose p = script_pose(script, base, center, 0);
        CHECK((p.translation - base.translation).norm() == 0);
        CHECK((p.rotation - base.rotation).norm() == 0);
    }
    SUBCASE("press interpolates linearly") {
        const Pose p = script_pose(script, base, center, 0.025);
        CHECK(std::abs(p.translation.z() - (0.3 - 2.5e-4)) < 1e-15);
        CHECK(p.translation.x() == 0.1);
    }
    SUBCASE("later phases compose on the finished press") {
        const Pose p = script_pose(script, base, center, 0.05 + 0.05);
        CHECK(std::abs(p.translation.z() - (0.3 - 5e-4)) < 1e-15);
        CHECK(std::abs(p.translation.x() - (0.1 + 5e-4)) < 1e-15);
    }
    SUBCASE("clamps past the end") {
        const Pose p_end = script_pose(script, base, center, 0.15);
        const Pose p_far = script_pose(script, base, center, 10.0);
        CHECK((p_end.translation - p_far.translation).norm() == 0);
    }
    SUBCASE("continuous at phase boundaries") {
        for (double t0 : {0.05, 0.15}) {
            const Pose a = script_pose(script, base, center, t0 - 1e-9);
            const Pose b = script_pose(script, base, center, t0 + 1e-9);
            CHECK((a.translation - b.translation).norm() < 1e-10);
            CHECK((a.rotation - b.rotation).norm() < 1e-10);
        }
    }
}

TEST_CASE("rotation spins about the indenter center") {
    MotionScript script;
    script.phases.push_back({MotionPhase::Kind::Rotate, 1.0, M_PI / 2, Vec3::UnitZ()});
    Pose base;
    base.translation = Vec3(0.01, 0, 0.05);
    const Vec3 rest_center(0, 0, 0);  // world center = base * rest_center

    const Pose p = script_pose(script, base, rest_center, 1.0);
    // the center itself does not move
    const Vec3 center_world = base.apply(rest_center);
    CHECK((p.apply(rest_center) - center_world).norm() < 1e-12);
    // a point offset from the center sweeps a quarter turn
    const Vec3 q = p.apply(Vec3(0.002, 0, 0));
    CHECK((q - (center_world + Vec3(0, 0.002, 0))).norm() < 1e-12);
}

TEST_CASE("script validation rejects bad phases") {
    MotionScript s;
    s.phases.push_back({MotionPhase::Kind::Press, 0.0, 1e-4, Vec3::UnitZ()});
    CHECK_THROWS_AS(s.validate(0.002), ConfigError);
    s.phases[0].duration = 0.1;
    s.phases[0].axis = Vec3(0, 0, 2);
    CHECK_THROWS_AS(s.validate(0.002), ConfigError);
    s.phases[0].axis = Vec3::UnitZ();
    s.phases[0].magnitude = 0.002;  // as deep as the gel
    CHECK_THROWS_AS(s.validate(0.002), ConfigError);
    s.phases[0].magnitude = 5e-4;
    s.validate(0.002);
}

namespace {

const char* kSmallSceneJson = R"json({
  "schema_version": 1,
  "gel": {
    "cylinder": {"radius": 0.004, "thickness": 0.002, "radial_cells": 2, "axial_cells": 1},
    "material": {"youngs_modulus": 1.23e5, "poisson_ratio": 0.43, "density": 1010.0},
    "glue": {"normal": [0, 0, -1], "offset": 0.0}
  },
  "indenter": {
    "sphere": {"center": [0, 0, 0.00405], "radius": 0.002, "subdivisions": 1},
    "vertex_mass": 1e-4
  },
  "contact": {"dhat_fraction": 1e-3, "kappa": 1e6, "mu": 0.0, "epsv": 1e-3},
  "solver": {"h": 0.01, "newton_tol": 1e-5},
  "script": {"phases": [
    {"kind": "press", "duration": 0.03, "magnitude": 3e-4, "axis": [0, 0, 1]}
  ]},
  "gravity": [0, 0, 0],
  "self_collision": false
})json";

}  // namespace

TEST_CASE("config parsing resolves fields and reports offending keys") {
    SceneConfig cfg = parse_scene_config(kSmallSceneJson, ".");
    CHECK(cfg.gel.material.youngs_modulus == 1.23e5);
    CHECK(cfg.gel.material.poisson_ratio == 0.43);
    CHECK(cfg.gel.material.density == 1010.0);
    CHECK(cfg.script.phases.size() == 1);
    CHECK(cfg.script.phases[0].magnitude == 3e-4);
    CHECK(cfg.self_collision == false);

    CHECK_THROWS_AS(parse_scene_config("{not json", "."), ConfigError);
    CHECK_THROWS_AS(parse_scene_config("{\"schema_version\": 2}", "."), ConfigError);
    // missing indenter reported by key path
    try {
        parse_scene_config("{\"schema_version\": 1}", ".");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("indenter") != std::string::npos);
    }
    // wrong type names the full path
    try {
        parse_scene_config(
            R"({"schema_version":1,"indenter":{"sphere":{"radius":"big"}}})", ".");
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("indenter.sphere.radius") != std::string::npos);
    }
}

TEST_CASE("build_scene resolves dhat and the glued set") {
    SceneConfig cfg = parse_scene_config(kSmallSceneJson, ".");
    Scene scene = build_scene(cfg);

    CHECK(scene.gel_thickness == doctest::Approx(0.002).epsilon(1e-12));
    CHECK(!scene.glued.empty());
    for (int v : scene.glued) CHECK(scene.gel.vertices[v].z() == 0.0);

    // dhat = fraction * scene bounding-box diagonal
    Aabb box;
    for (const auto& v : scene.gel.vertices) box.expand(v);
    for (const auto& v : scene.indenter.vertices) box.expand(v);
    CHECK(scene.config.contact.dhat ==
          doctest::Approx(1e-3 * (box.hi - box.lo).norm()).epsilon(1e-12));

    SUBCASE("missing mesh file error names the path") {
        SceneConfig bad = cfg;
        bad.gel.mesh_path = "/nonexistent/gel.node";
        try {
            build_scene(bad);
            CHECK(false);
        } catch (const IoError& e) {
            CHECK(std::string(e.what()).find("/nonexistent/gel.node") != std::string::npos);
        }
    }
    SUBCASE("empty glued set with a moving script is rejected") {
        SceneConfig bad = cfg;
        bad.gel.glue_offset = 1.0;  // half-space misses every vertex
        CHECK_THROWS_AS(build_scene(bad), ConfigError);
    }
    SUBCASE("per-step displacement bound") {
        SceneConfig bad = cfg;
        bad.script.phases[0] = {MotionPhase::Kind::Shear, 0.02, 1.0, Vec3::UnitX()};  // 10 mm/step
        CHECK_THROWS_AS(build_scene(bad), ConfigError);
    }
}

TEST_CASE("state frames round-trip bit for bit") {
    SimState s;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 17; ++i) {
        s.x.emplace_back(u(rng), u(rng), u(rng));
        s.v.emplace_back(u(rng), u(rng), u(rng));
    }
    s.time = 0.1234567890123456789;
    s.indenter_pose.rotation = Eigen::AngleAxisd(0.3, Vec3(1, 2, 3).normalized()).toRotationMatrix();
    s.indenter_pose.translation = Vec3(u(rng), u(rng), u(rng));

    const std::string path = "/tmp/tacsim_test_frame.bin";
    save_state_frame(path, s);
    SimState r = load_state_frame(path);

    REQUIRE(r.x.size() == s.x.size());
    CHECK(std::memcmp(&r.time, &s.time, sizeof(double)) == 0);
    CHECK(std::memcmp(r.indenter_pose.rotation.data(), s.indenter_pose.rotation.data(),
                      9 * sizeof(double)) == 0);
    for (size_t i = 0; i < s.x.size(); ++i) {
        CHECK(std::memcmp(r.x[i].data(), s.x[i].data(), 3 * sizeof(double)) == 0);
        CHECK(std::memcmp(r.v[i].data(), s.v[i].data(), 3 * sizeof(double)) == 0);
    }
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_state_frame(path), IoError);
}

TEST_CASE("run produces the initial frame only for zero steps") {
    Scene scene = build_scene(parse_scene_config(kSmallSceneJson, "."));
    RunResult res = run(scene, 0);
    CHECK(res.trajectory.size() == 1);
    CHECK(!res.aborted);
}

TEST_CASE("hold script from rest is a fixed point of run") {
    SceneConfig cfg = parse_scene_config(kSmallSceneJson, ".");
    cfg.script.phases = {{MotionPhase::Kind::Hold, 0.05, 0, Vec3::UnitZ()}};
    Scene scene = build_scene(cfg);
    RunResult res = run(scene, 3);
    REQUIRE(res.trajectory.size() == 4);
    for (size_t f = 1; f < res.trajectory.size(); ++f)
        for (size_t i = 0; i < res.trajectory[0].x.size(); ++i)
            CHECK((res.trajectory[f].x[i] - res.trajectory[0].x[i]).norm() == 0);
}

TEST_CASE("short press run keeps the guarantees and indents") {
    Scene scene = build_scene(parse_scene_config(kSmallSceneJson, "."));
    RunResult res = run(scene, 3);
    REQUIRE(!res.aborted);
    REQUIRE(res.trajectory.size() == 4);
    CHECK(res.min_distance > 0);

    // gel top center moved down once the sphere engaged
    int top_center = -1;
    for (size_t i = 0; i < scene.gel.vertices.size(); ++i)
        if (scene.gel.vertices[i].head<2>().norm() < 1e-9 &&
            scene.gel.vertices[i].z() == scene.gel_thickness)
            top_center = static_cast<int>(i);
    REQUIRE(top_center >= 0);
    CHECK(res.trajectory.back().x[top_center].z() < scene.gel_thickness);
}
