#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace scalecal::cli {

struct CalibrateOptions {
    std::string traj;
    std::string cloud;
    std::string joints;
    std::string out;        // report JSON; trajectory/motion land next to it
    std::string out_traj;   // optional override
    std::string out_motion; // optional override
    std::string normal_mode = "contacts";
    double max_perp = 0.25;
    double bin_height = 0.10;
    int min_valid_frames = 3;
    bool no_plane_fallback = false;
    std::uint64_t seed = 0;
};

struct SynthOptions {
    std::string preset = "walker";
    int frames = 240;
    double scale = 2.5;
    std::uint64_t seed = 1;
    std::string out;
    double hmr_depth_bias = 1.0;
    double hmr_jitter = 0.0;
    double slam_rot_noise = 0.0;
    double slam_trans_noise = 0.0;
    double tilt_deg = 0.0;
    double crop_radius = 2.0;
    int ground_points = 4000;
    int wall_points = 1200;
};

struct EvalOptions {
    std::string pred_motion;
    std::string gt_motion;
    std::string pred_traj;
    std::string gt_traj;
    std::string out; // metrics JSON; per-frame CSV lands next to it
    std::string csv; // optional override
};

struct AblateOptions {
    std::string scenario; // directory containing manifest.json
    std::string out;      // CSV
    std::uint64_t seed = 0;
    std::vector<double> sweep_max_perp;
    std::vector<double> sweep_bin_height;
};

int run_calibrate(const CalibrateOptions& opt);
int run_synth(const SynthOptions& opt);
int run_eval(const EvalOptions& opt);
int run_ablate(const AblateOptions& opt);

} // namespace scalecal::cli
