#pragma once

#include "scalecal/calibration.hpp"
#include "scalecal/geometry.hpp"

#include <array>
#include <vector>

namespace scalecal {

/// One frame of world-coordinate human motion.
struct GlobalFrame {
    Vec3 root_orient_world = Vec3::Zero(); // axis-angle
    Vec3 root_trans_world = Vec3::Zero();
    std::array<Vec3, kJointCount> joints_world{};
    std::vector<double> pose_params;
    std::vector<double> shape_params;
    double timestamp = 0.0;
};

struct GlobalMotion {
    std::vector<GlobalFrame> frames;
    double scale_used = 1.0;

    void validate() const;
};

/// Multiplies every translation by s_bar and flips the status to Metric.
/// Requires an UnknownScale input and s_bar > 0.
Trajectory apply_scale(const Trajectory& trajectory, double s_bar);

/// Per-frame inverse extrinsics: root via camera_to_world_root, every joint
/// via camera_to_world_point, pose/shape payload copied through. The
/// trajectory must be Metric and timestamp-aligned with the motion.
GlobalMotion compose_global_motion(const MotionSequence& motion,
                                   const Trajectory& metric_trajectory,
                                   double s_bar);

} // namespace scalecal
