#pragma once

#include "scalecal/calibration.hpp"
#include "scalecal/geometry.hpp"
#include "scalecal/motion.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace scalecal::synth {

enum class Subject { Walker, Stationary, Skater, Handstand };
enum class CameraPath { Orbit, Follow, Static };

struct ScenarioConfig {
    std::uint64_t seed = 1;
    int n_frames = 240;
    double true_scale = 2.5; // reconstruction translations = metric / true_scale
    Subject subject = Subject::Walker;
    CameraPath camera_path = CameraPath::Orbit;
    double ground_tilt_deg = 0.0;
    int cloud_points_ground = 4000;
    int cloud_points_walls = 1200;
    bool crop_contacts = false;  // delete ground points near every contact
    double crop_radius = 2.0;    // meters
    double hmr_depth_bias = 1.0; // multiplicative on camera-space positions
    double hmr_jitter_sigma_m = 0.0;
    double slam_rotation_noise_rad = 0.0;
    double slam_translation_noise_m = 0.0;

    void validate() const;
};

/// A complete test scene: metric ground truth, the same trajectory and cloud
/// de-scaled into an arbitrary-gauge reconstruction, and camera-space human
/// frames with optional bias/jitter.
struct Scenario {
    GlobalMotion gt_motion;
    Trajectory gt_trajectory;   // Metric
    Trajectory slam_trajectory; // UnknownScale
    PointCloud slam_cloud;      // reconstruction gauge
    MotionSequence hmr_motion;  // camera-space joints
    Plane true_plane;           // ground plane in reconstruction gauge, camera side negative
    double true_scale = 1.0;
};

/// Deterministic for a fixed config. With zero noise and crop off, every
/// frame's contact joint lies exactly on a cloud point along its reference
/// ray, so the depth-ratio scale equals true_scale to rounding error.
Scenario generate_scenario(const ScenarioConfig& cfg);

/// Brute-force recomputation of one frame's depth-ratio scale from first
/// principles (fresh contact argmax, camera center, exhaustive cloud scan).
/// Independent of the calibration module.
double oracle_per_frame_scale(const Scenario& scenario, std::size_t frame);

enum class Preset { Walker, Skater, Stationary, Handstand, Egocentric };

Preset preset_from_string(const std::string& name);
std::string to_string(Preset preset);

ScenarioConfig preset_config(Preset preset, int n_frames, double true_scale,
                             std::uint64_t seed);

/// Writes the on-disk bundle (reconstruction inputs, ground truth, manifest)
/// into `dir`, creating it if needed.
void export_scenario(const Scenario& scenario, const ScenarioConfig& cfg,
                     const std::string& preset_name, const std::filesystem::path& dir);

} // namespace scalecal::synth
