#pragma once

#include "tacsim/common.hpp"

namespace tacsim {

// Open-loop kinematic indenter motion, a sequence of phases.
struct MotionPhase {
    enum class Kind { Press, Hold, Shear, Rotate };
    Kind kind = Kind::Hold;
    double duration = 0;   // s
    double magnitude = 0;  // press depth (m) | shear velocity (m/s) | angular velocity (rad/s)
    Vec3 axis = Vec3::UnitZ();  // press normal / shear direction / rotation axis
};

struct MotionScript {
    std::vector<MotionPhase> phases;

    double total_duration() const;
    // durations > 0, axes unit-norm, press depths below the gel thickness
    void validate(double gel_thickness) const;
};

// Rigid pose at time t: base_pose composed with the accumulated phase motion.
// Press advances along -axis linearly to depth; shear translates at constant
// velocity; rotate spins about `axis` through the indenter center (the rest
// center carried along by the motion so far). Continuous in t; t past the end
// clamps to the final pose.
Pose script_pose(const MotionScript& script, const Pose& base_pose, const Vec3& rest_center,
                 double t);

}  // namespace tacsim
