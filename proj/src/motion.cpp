#include "scalecal/motion.hpp"

#include "scalecal/parallel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scalecal {

void GlobalMotion::validate() const {
    double prev = -std::numeric_limits<double>::infinity();
    for (const GlobalFrame& f : frames) {
        if (!std::isfinite(f.timestamp) || !(f.timestamp > prev))
            throw std::invalid_argument("GlobalMotion: timestamps not strictly increasing");
        for (const Vec3& j : f.joints_world)
            if (!j.allFinite())
                throw std::invalid_argument("GlobalMotion: non-finite joint");
        prev = f.timestamp;
    }
}

Trajectory apply_scale(const Trajectory& trajectory, double s_bar) {
    trajectory.validate();
    if (trajectory.scale_status != ScaleStatus::UnknownScale)
        throw std::invalid_argument("apply_scale: trajectory is already metric");
    if (!(s_bar > 0.0) || !std::isfinite(s_bar))
        throw std::invalid_argument("apply_scale: scale must be positive and finite");

    Trajectory out;
    out.scale_status = ScaleStatus::Metric;
    out.poses.reserve(trajectory.poses.size());
    for (const CameraPose& pose : trajectory.poses)
        out.poses.push_back({pose.rotation, s_bar * pose.translation, pose.timestamp});
    return out;
}

GlobalMotion compose_global_motion(const MotionSequence& motion,
                                   const Trajectory& metric_trajectory,
                                   double s_bar) {
    motion.validate();
    metric_trajectory.validate();
    if (metric_trajectory.scale_status != ScaleStatus::Metric)
        throw std::invalid_argument("compose_global_motion: trajectory is not metric");
    const std::size_t n = motion.frames.size();
    if (n != metric_trajectory.poses.size())
        throw std::invalid_argument("compose_global_motion: frame/pose count mismatch");
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(motion.frames[i].timestamp - metric_trajectory.poses[i].timestamp) > 1e-9)
            throw std::invalid_argument("compose_global_motion: timestamps not aligned");

    GlobalMotion out;
    out.scale_used = s_bar;
    out.frames.resize(n);
    const bool fan_out = use_parallel(n, 256);
#pragma omp parallel for num_threads(max_threads()) schedule(static) if (fan_out)
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const HumanFrame& src = motion.frames[i];
        const CameraPose& pose = metric_trajectory.poses[i];
        GlobalFrame& dst = out.frames[i];
        const auto [phi, gamma] = camera_to_world_root(src.root_orient, src.root_trans, pose);
        dst.root_orient_world = phi;
        dst.root_trans_world = gamma;
        for (int j = 0; j < kJointCount; ++j)
            dst.joints_world[static_cast<std::size_t>(j)] =
                camera_to_world_point(src.joints[static_cast<std::size_t>(j)], pose);
        dst.pose_params = src.pose_params;
        dst.shape_params = src.shape_params;
        dst.timestamp = src.timestamp;
    }
    return out;
}

} // namespace scalecal
