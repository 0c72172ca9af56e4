#include "tacsim/scene/script.hpp"

#include <cmath>

namespace tacsim {

double MotionScript::total_duration() const {
    double total = 0;
    for (const auto& p : phases) total += p.duration;
    return total;
}

void MotionScript::validate(double gel_thickness) const {
    for (size_t i = 0; i < phases.size(); ++i) {
        const auto& p = phases[i];
        if (!(p.duration > 0))
            throw ConfigError("script: phase " + std::to_string(i) + " duration must be > 0");
        if (std::abs(p.axis.norm() - 1.0) > 1e-9)
            throw ConfigError("script: phase " + std::to_string(i) + " axis must be unit-norm");
        if (p.kind == MotionPhase::Kind::Press && !(p.magnitude < gel_thickness))
            throw ConfigError("script: phase " + std::to_string(i) +
                              " press depth must be below the gel thickness");
    }
}

Pose script_pose(const MotionScript& script, const Pose& base_pose, const Vec3& rest_center,
                 double t) {
    if (t < 0) throw ConfigError("script_pose: negative time");
    Pose accum = Pose::identity();  // motion relative to base_pose, world frame
    double elapsed = 0;
    for (const auto& p : script.phases) {
        const double local = std::clamp(t - elapsed, 0.0, p.duration);
        if (local <= 0) break;
        Pose delta = Pose::identity();
        switch (p.kind) {
            case MotionPhase::Kind::Hold:
                break;
            case MotionPhase::Kind::Press:
                delta.translation = -p.axis * (p.magnitude * local / p.duration);
                break;
            case MotionPhase::Kind::Shear:
                delta.translation = p.axis * (p.magnitude * local);
                break;
            case MotionPhase::Kind::Rotate: {
                const double angle = p.magnitude * local;
                delta.rotation = Eigen::AngleAxisd(angle, p.axis).toRotationMatrix();
                // spin about the axis through the current indenter center
                const Vec3 center = accum.apply(base_pose.apply(rest_center));
                delta.translation = center - delta.rotation * center;
                break;
            }
        }
        accum = delta * accum;
        elapsed += p.duration;
    }
    return accum * base_pose;
}

}  // namespace tacsim
