#pragma once

#include "scalecal/calibration.hpp"
#include "scalecal/geometry.hpp"
#include "scalecal/metrics.hpp"
#include "scalecal/motion.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace scalecal::io {

/// TUM trajectory files: one "timestamp tx ty tz qx qy qz qw" line per pose,
/// '#' comments ignored. The stored pose is camera-to-world (t is the camera
/// position), converted to world-to-camera extrinsics in memory. Quaternions
/// outside norm [0.9, 1.1] are rejected, otherwise normalized.
Trajectory read_tum_trajectory(const std::filesystem::path& path, ScaleStatus status);
void write_tum_trajectory(const Trajectory& trajectory, const std::filesystem::path& path);

/// ASCII PLY with float x/y/z vertex properties; extra vertex properties are
/// ignored, binary files rejected with UnsupportedFormat.
PointCloud read_ply_cloud(const std::filesystem::path& path);
void write_ply_cloud(const PointCloud& cloud, const std::filesystem::path& path);

/// JSON-lines motion: one object per frame with keys t, joints (24x3),
/// root_orient (3), root_trans (3) and optional theta/beta payload arrays.
MotionSequence read_joints_jsonl(const std::filesystem::path& path);
void write_joints_jsonl(const MotionSequence& motion, const std::filesystem::path& path);

/// Same line schema with world-coordinate semantics.
GlobalMotion read_global_motion_jsonl(const std::filesystem::path& path);
void write_global_motion_jsonl(const GlobalMotion& motion, const std::filesystem::path& path);

/// Scenario bundle manifest. Paths are stored relative to the manifest file
/// and resolved on read; referenced files must exist.
struct Manifest {
    std::string format_version = "1";
    std::filesystem::path slam_trajectory;
    std::filesystem::path slam_cloud;
    std::filesystem::path hmr_joints;
    std::filesystem::path gt_trajectory; // empty when no ground truth
    std::filesystem::path gt_motion;     // empty when no ground truth
    double true_scale = 0.0;             // 0 when unknown
    std::uint64_t seed = 0;
    std::string preset;
    int n_frames = 0;
};

Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

struct ReportData {
    CalibrationResult calibration;
    std::optional<MetricReport> metrics;
};

/// Calibration report with optional metrics section; stable key order.
void write_report_json(const CalibrationResult& result,
                       const std::optional<MetricReport>& metrics,
                       const std::filesystem::path& path);
ReportData read_report_json(const std::filesystem::path& path);

} // namespace scalecal::io
