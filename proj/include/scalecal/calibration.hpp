#pragma once

#include "scalecal/geometry.hpp"
#include "scalecal/ground_plane.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace scalecal {

inline constexpr int kJointCount = 24;

/// One frame of upstream human-mesh output: 24 camera-space joints plus the
/// root transform. pose_params/shape_params are opaque pass-through payload.
struct HumanFrame {
    std::array<Vec3, kJointCount> joints{};
    Vec3 root_orient = Vec3::Zero(); // axis-angle
    Vec3 root_trans = Vec3::Zero();
    std::vector<double> pose_params;
    std::vector<double> shape_params;
    double timestamp = 0.0;
};

struct MotionSequence {
    std::vector<HumanFrame> frames;

    /// Throws std::invalid_argument unless timestamps strictly increase.
    void validate() const;
};

/// The joint assumed to touch the scene: lowest along the camera's y-down axis.
struct ContactJoint {
    int joint_index = -1;
    Vec3 camera_position = Vec3::Zero();
    Vec3 world_position = Vec3::Zero();
    double absolute_depth = 0.0; // ||camera_position||
};

enum class ReferenceKind { CloudIntersection, PlaneIntersection };

/// Per-frame scale evidence: absolute contact depth over relative reference depth.
struct FrameScale {
    std::size_t frame_index = 0;
    double scale = 0.0;
    ReferenceKind reference_kind = ReferenceKind::CloudIntersection;
    Vec3 reference_point = Vec3::Zero();
    double relative_depth = 0.0;
    double absolute_depth = 0.0;
    ContactJoint contact;
};

enum class RejectReason {
    NoIntersection,
    ParallelRay,
    BehindCamera,
    TooClose,
    InvalidJoint,
};

std::string_view to_string(RejectReason reason);

struct FrameRejection {
    std::size_t frame_index = 0;
    RejectReason reason = RejectReason::NoIntersection;
};

/// Either an accepted FrameScale or the reason the frame was rejected.
struct FrameScaleOutcome {
    std::optional<FrameScale> scale;
    RejectReason reason = RejectReason::NoIntersection;

    bool accepted() const { return scale.has_value(); }
};

struct CalibrationConfig {
    double max_perp_distance = 0.25;  // meters; cloud-hit acceptance threshold
    double plane_bin_height = 0.10;   // meters
    double min_bin_fraction = 0.05;
    int ransac_iters = 1000;
    double ransac_tol = 0.05;         // meters
    NormalMode normal_mode = NormalMode::FromContacts;
    int min_valid_frames = 3;
    double min_contact_depth = 0.1;   // meters; closer contacts are TooClose
    bool plane_fallback = true;       // off reproduces the "no fitting" variant
    std::vector<int> reference_joints; // empty = all joints (contact argmax)
    std::uint64_t seed = 0;           // RANSAC seed for RansacLargest mode

    void validate() const;
};

struct CalibrationResult {
    double sequence_scale = 0.0;              // median of per-frame scales
    std::vector<FrameScale> per_frame;        // accepted frames, in frame order
    std::vector<FrameRejection> rejected_frames;
    std::optional<Plane> plane;               // present when the fallback ran
    std::optional<double> plane_contact_rms;  // contact residual against plane
    double scale_stddev = 0.0;
};

/// Joint with maximal camera-space y (ties to the lowest index). Throws
/// std::invalid_argument when the selected joint is non-finite.
ContactJoint select_contact_joint(const HumanFrame& frame, const CameraPose& pose);

/// Restricted variant used by the reference-joint ablations; `candidates`
/// empty means all 24 joints.
ContactJoint select_contact_joint(const HumanFrame& frame, const CameraPose& pose,
                                  std::span<const int> candidates);

/// Ray from the camera center toward the contact joint's world position.
Ray build_reference_ray(const ContactJoint& contact, const CameraPose& pose);

/// Contact -> ray -> nearest cloud point. Accepts when the perpendicular
/// residual is within cfg.max_perp_distance (interpreted in the cloud's units)
/// and the hit lies in front of the camera.
FrameScaleOutcome frame_scale_from_cloud(const HumanFrame& frame, const CameraPose& pose,
                                         const PointCloud& cloud,
                                         const CalibrationConfig& cfg,
                                         std::size_t frame_index = 0);

/// Contact -> ray -> ground-plane intersection.
FrameScaleOutcome frame_scale_from_plane(const HumanFrame& frame, const CameraPose& pose,
                                         const Plane& plane,
                                         const CalibrationConfig& cfg,
                                         std::size_t frame_index = 0);

/// Full sequence calibration: parallel per-frame cloud pass, sequential
/// running-median acceptance, ground-plane fallback for frames without a
/// usable cloud hit, median aggregation. Throws CalibrationFailed when fewer
/// than cfg.min_valid_frames frames survive.
CalibrationResult calibrate_sequence(const MotionSequence& motion,
                                     const Trajectory& trajectory,
                                     const PointCloud& cloud,
                                     const CalibrationConfig& cfg);

/// Median with the even-count mean-of-middle-pair rule. Throws on empty input.
double median(std::vector<double> values);

} // namespace scalecal
