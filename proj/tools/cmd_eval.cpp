#include "commands.hpp"

#include "scalecal/io.hpp"
#include "scalecal/metrics.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace scalecal::cli {

namespace fs = std::filesystem;

int run_eval(const EvalOptions& opt) {
    GlobalMotion pred_motion, gt_motion;
    Trajectory pred_traj, gt_traj;
    try {
        pred_motion = io::read_global_motion_jsonl(opt.pred_motion);
        gt_motion = io::read_global_motion_jsonl(opt.gt_motion);
        pred_traj = io::read_tum_trajectory(opt.pred_traj, ScaleStatus::Metric);
        gt_traj = io::read_tum_trajectory(opt.gt_traj, ScaleStatus::Metric);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    if (pred_motion.frames.size() != gt_motion.frames.size() ||
        pred_traj.poses.size() != gt_traj.poses.size()) {
        std::cerr << "error: prediction and ground truth have mismatched lengths\n";
        return 2;
    }

    try {
        const MetricReport report = evaluate_all(pred_motion, gt_motion, pred_traj, gt_traj);

        CalibrationResult empty; // eval carries no calibration evidence
        empty.sequence_scale = pred_motion.scale_used;
        io::write_report_json(empty, report, opt.out);

        fs::path csv_path = opt.csv.empty()
                                ? fs::path(opt.out).replace_filename(
                                      fs::path(opt.out).stem().string() + "_root_errors.csv")
                                : fs::path(opt.csv);
        const std::vector<double> errors = per_frame_root_errors(pred_motion, gt_motion);
        std::ofstream csv(csv_path);
        if (!csv)
            throw std::runtime_error("cannot write CSV: " + csv_path.string());
        csv << "frame,t,root_error_m\n";
        char buf[96];
        for (std::size_t i = 0; i < errors.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%zu,%.9f,%.9g\n", i,
                          pred_motion.frames[i].timestamp, errors[i]);
            csv << buf;
        }

        std::cout << "W-MPJPE " << report.w_mpjpe_mm << " mm, WA-MPJPE " << report.wa_mpjpe_mm
                  << " mm, PA-MPJPE " << report.pa_mpjpe_mm << " mm, RTE "
                  << report.rte_percent << " %, ATE " << report.ate_m << " m, ATE-S "
                  << report.ate_s_m << " m\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace scalecal::cli
