#include "commands.hpp"

#include "scalecal/calibration.hpp"
#include "scalecal/errors.hpp"
#include "scalecal/io.hpp"
#include "scalecal/metrics.hpp"
#include "scalecal/motion.hpp"
#include "scalecal/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace scalecal::cli {

namespace {

constexpr int kHeadJoint = 15;
constexpr int kPelvisJoint = 0;

struct Variant {
    std::string name;
    std::string ref_label = "contact";
    std::vector<int> ref_joints;   // empty = contact argmax
    std::string normal_label = "contacts";
    NormalMode normal_mode = NormalMode::FromContacts;
    bool calibrated = true;
    bool plane_fallback = true;
    double max_perp = 0.25;
    double bin_height = 0.10;
};

struct VariantResult {
    std::string status = "ok";
    double s_bar = std::numeric_limits<double>::quiet_NaN();
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    MetricReport metrics;
    bool have_metrics = false;
};

std::vector<Variant> build_variants(const AblateOptions& opt) {
    std::vector<Variant> variants;

    Variant off;
    off.name = "no_calibration";
    off.calibrated = false;
    off.normal_label = "-";
    variants.push_back(off);

    const auto ref_variant = [](std::string name, std::string label, std::vector<int> joints) {
        Variant v;
        v.name = std::move(name);
        v.ref_label = std::move(label);
        v.ref_joints = std::move(joints);
        return v;
    };
    variants.push_back(ref_variant("head_fixed", "head", {kHeadJoint}));
    variants.push_back(ref_variant("pelvis_fixed", "pelvis", {kPelvisJoint}));
    variants.push_back(ref_variant("feet_fixed", "feet", {10, 11}));
    variants.push_back(ref_variant("contact_argmax", "contact", {}));

    Variant plane_none;
    plane_none.name = "plane_none";
    plane_none.plane_fallback = false;
    plane_none.normal_label = "none";
    variants.push_back(plane_none);

    Variant plane_ransac;
    plane_ransac.name = "plane_ransac_largest";
    plane_ransac.normal_mode = NormalMode::RansacLargest;
    plane_ransac.normal_label = "ransac";
    variants.push_back(plane_ransac);

    Variant plane_yaxis;
    plane_yaxis.name = "plane_yaxis";
    plane_yaxis.normal_mode = NormalMode::YAxis;
    plane_yaxis.normal_label = "y-axis";
    variants.push_back(plane_yaxis);

    Variant plane_contacts;
    plane_contacts.name = "plane_contacts";
    variants.push_back(plane_contacts);

    for (double v : opt.sweep_max_perp) {
        Variant sweep;
        std::ostringstream name;
        name << "maxperp_" << v;
        sweep.name = name.str();
        sweep.max_perp = v;
        variants.push_back(sweep);
    }
    for (double v : opt.sweep_bin_height) {
        Variant sweep;
        std::ostringstream name;
        name << "binheight_" << v;
        sweep.name = name.str();
        sweep.bin_height = v;
        variants.push_back(sweep);
    }
    return variants;
}

VariantResult run_variant(const Variant& variant, const MotionSequence& motion,
                          const Trajectory& slam, const PointCloud& cloud,
                          const GlobalMotion& gt_motion, const Trajectory& gt_traj,
                          std::uint64_t seed) {
    VariantResult out;
    double s_bar = 1.0;
    if (variant.calibrated) {
        CalibrationConfig cfg;
        cfg.max_perp_distance = variant.max_perp;
        cfg.plane_bin_height = variant.bin_height;
        cfg.normal_mode = variant.normal_mode;
        cfg.plane_fallback = variant.plane_fallback;
        cfg.reference_joints = variant.ref_joints;
        cfg.seed = seed;
        try {
            const CalibrationResult result = calibrate_sequence(motion, slam, cloud, cfg);
            s_bar = result.sequence_scale;
            out.accepted = result.per_frame.size();
            out.rejected = result.rejected_frames.size();
        } catch (const CalibrationFailed& e) {
            out.status = "failed";
            return out;
        }
    }
    out.s_bar = s_bar;

    const Trajectory metric = apply_scale(slam, s_bar);
    const GlobalMotion composed = compose_global_motion(motion, metric, s_bar);
    out.metrics = evaluate_all(composed, gt_motion, metric, gt_traj);
    out.have_metrics = true;
    return out;
}

std::string csv_number(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace

int run_ablate(const AblateOptions& opt) {
    io::Manifest manifest;
    MotionSequence motion;
    Trajectory slam, gt_traj;
    PointCloud cloud;
    GlobalMotion gt_motion;
    try {
        manifest = io::read_manifest(std::filesystem::path(opt.scenario) / "manifest.json");
        if (manifest.gt_trajectory.empty() || manifest.gt_motion.empty())
            throw std::runtime_error("ablation needs a scenario with ground truth");
        motion = io::read_joints_jsonl(manifest.hmr_joints);
        slam = io::read_tum_trajectory(manifest.slam_trajectory, ScaleStatus::UnknownScale);
        cloud = io::read_ply_cloud(manifest.slam_cloud);
        gt_traj = io::read_tum_trajectory(manifest.gt_trajectory, ScaleStatus::Metric);
        gt_motion = io::read_global_motion_jsonl(manifest.gt_motion);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    const std::vector<Variant> variants = build_variants(opt);
    std::vector<VariantResult> results(variants.size());

    // Variants are pure over the shared inputs; run them concurrently.
#pragma omp parallel for num_threads(max_threads()) schedule(dynamic, 1)
    for (long long i = 0; i < static_cast<long long>(variants.size()); ++i)
        results[static_cast<std::size_t>(i)] =
            run_variant(variants[static_cast<std::size_t>(i)], motion, slam, cloud,
                        gt_motion, gt_traj, opt.seed);

    try {
        std::ofstream csv(opt.out);
        if (!csv)
            throw std::runtime_error("cannot write CSV: " + opt.out);
        csv << "variant,ref_joint,normal_mode,calibrated,status,s_bar,accepted_frames,"
               "rejected_frames,w_mpjpe_mm,wa_mpjpe_mm,pa_mpjpe_mm,rte_percent,ate_m,ate_s_m\n";
        for (std::size_t i = 0; i < variants.size(); ++i) {
            const Variant& v = variants[i];
            const VariantResult& r = results[i];
            csv << v.name << ',' << v.ref_label << ',' << v.normal_label << ','
                << (v.calibrated ? 1 : 0) << ',' << r.status << ',' << csv_number(r.s_bar)
                << ',' << r.accepted << ',' << r.rejected << ',';
            if (r.have_metrics) {
                csv << csv_number(r.metrics.w_mpjpe_mm) << ',' << csv_number(r.metrics.wa_mpjpe_mm)
                    << ',' << csv_number(r.metrics.pa_mpjpe_mm) << ','
                    << csv_number(r.metrics.rte_percent) << ',' << csv_number(r.metrics.ate_m)
                    << ',' << csv_number(r.metrics.ate_s_m) << '\n';
            } else {
                csv << "nan,nan,nan,nan,nan,nan\n";
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    std::cout << "wrote " << variants.size() << " variants to " << opt.out << '\n';
    return 0;
}

} // namespace scalecal::cli
