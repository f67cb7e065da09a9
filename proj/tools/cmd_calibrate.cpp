#include "commands.hpp"

#include "scalecal/calibration.hpp"
#include "scalecal/errors.hpp"
#include "scalecal/io.hpp"
#include "scalecal/motion.hpp"

#include <filesystem>
#include <iostream>

namespace scalecal::cli {

namespace fs = std::filesystem;

namespace {

fs::path sibling(const fs::path& out, const char* suffix) {
    fs::path p = out;
    p.replace_filename(out.stem().string() + suffix);
    return p;
}

NormalMode normal_mode_from_string(const std::string& name) {
    if (name == "contacts") return NormalMode::FromContacts;
    if (name == "y-axis") return NormalMode::YAxis;
    if (name == "ransac") return NormalMode::RansacLargest;
    throw std::invalid_argument("unknown normal mode: " + name);
}

} // namespace

int run_calibrate(const CalibrateOptions& opt) {
    try {
        const Trajectory slam = io::read_tum_trajectory(opt.traj, ScaleStatus::UnknownScale);
        const PointCloud cloud = io::read_ply_cloud(opt.cloud);
        const MotionSequence motion = io::read_joints_jsonl(opt.joints);

        CalibrationConfig cfg;
        cfg.max_perp_distance = opt.max_perp;
        cfg.plane_bin_height = opt.bin_height;
        cfg.normal_mode = normal_mode_from_string(opt.normal_mode);
        cfg.min_valid_frames = opt.min_valid_frames;
        cfg.plane_fallback = !opt.no_plane_fallback;
        cfg.seed = opt.seed;

        const CalibrationResult result = calibrate_sequence(motion, slam, cloud, cfg);
        const Trajectory metric = apply_scale(slam, result.sequence_scale);
        const GlobalMotion global = compose_global_motion(motion, metric, result.sequence_scale);

        const fs::path out(opt.out);
        const fs::path traj_out = opt.out_traj.empty() ? sibling(out, "_trajectory.tum")
                                                       : fs::path(opt.out_traj);
        const fs::path motion_out = opt.out_motion.empty() ? sibling(out, "_motion.jsonl")
                                                           : fs::path(opt.out_motion);
        io::write_tum_trajectory(metric, traj_out);
        io::write_global_motion_jsonl(global, motion_out);
        io::write_report_json(result, std::nullopt, out);

        std::cout << "sequence_scale " << result.sequence_scale << " over "
                  << result.per_frame.size() << " frames ("
                  << result.rejected_frames.size() << " rejected)\n";
        return 0;
    } catch (const CalibrationFailed& e) {
        std::cerr << "calibration failed: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace scalecal::cli
