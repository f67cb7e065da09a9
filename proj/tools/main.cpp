#include "commands.hpp"

#include <CLI11.hpp>

#include <cstdint>

int main(int argc, char** argv) {
    using namespace scalecal::cli;

    CLI::App app{"scalecal: metric scale calibration for up-to-scale camera "
                 "trajectories using per-frame human joint predictions"};
    app.require_subcommand(1);

    CalibrateOptions cal;
    CLI::App* calibrate = app.add_subcommand(
        "calibrate", "Estimate the sequence scale and write the metric trajectory, "
                     "world motion, and report");
    calibrate->add_option("--traj", cal.traj, "Input trajectory (TUM)")->required();
    calibrate->add_option("--cloud", cal.cloud, "Input point cloud (ASCII PLY)")->required();
    calibrate->add_option("--joints", cal.joints, "Input per-frame joints (JSONL)")->required();
    calibrate->add_option("--out", cal.out, "Output report JSON")->required();
    calibrate->add_option("--out-traj", cal.out_traj, "Calibrated trajectory output (TUM)");
    calibrate->add_option("--out-motion", cal.out_motion, "World motion output (JSONL)");
    calibrate->add_option("--normal-mode", cal.normal_mode,
                          "Ground normal source: contacts|y-axis|ransac")
        ->check(CLI::IsMember({"contacts", "y-axis", "ransac"}));
    calibrate->add_option("--max-perp", cal.max_perp, "Cloud-hit acceptance threshold, meters");
    calibrate->add_option("--bin-height", cal.bin_height, "Ground segment thickness, meters");
    calibrate->add_option("--min-valid-frames", cal.min_valid_frames,
                          "Minimum usable frames before giving up");
    calibrate->add_flag("--no-plane-fallback", cal.no_plane_fallback,
                        "Disable the ground-plane fallback");
    calibrate->add_option("--seed", cal.seed, "RANSAC seed (ransac normal mode)");

    SynthOptions syn;
    CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic scenario bundle");
    synth->add_option("--preset", syn.preset,
                      "walker|skater|stationary|handstand|egocentric")
        ->check(CLI::IsMember({"walker", "skater", "stationary", "handstand", "egocentric"}));
    synth->add_option("--frames", syn.frames, "Frame count");
    synth->add_option("--scale", syn.scale, "True scale factor");
    synth->add_option("--seed", syn.seed, "Generator seed");
    synth->add_option("--out", syn.out, "Output directory")->required();
    synth->add_option("--hmr-depth-bias", syn.hmr_depth_bias,
                      "Multiplicative depth bias on joint predictions");
    synth->add_option("--hmr-jitter", syn.hmr_jitter, "Joint jitter sigma, meters");
    synth->add_option("--slam-rot-noise", syn.slam_rot_noise, "Pose rotation noise, radians");
    synth->add_option("--slam-trans-noise", syn.slam_trans_noise, "Pose translation noise, meters");
    synth->add_option("--tilt", syn.tilt_deg, "Ground tilt vs the reconstruction y axis, degrees");
    synth->add_option("--crop-radius", syn.crop_radius, "Contact crop radius, meters");
    synth->add_option("--ground-points", syn.ground_points, "Ground cloud points");
    synth->add_option("--wall-points", syn.wall_points, "Wall cloud points");

    EvalOptions ev;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate motion and trajectory against ground truth");
    eval->add_option("--pred-motion", ev.pred_motion, "Predicted world motion (JSONL)")->required();
    eval->add_option("--gt-motion", ev.gt_motion, "Ground-truth world motion (JSONL)")->required();
    eval->add_option("--pred-traj", ev.pred_traj, "Predicted trajectory (TUM)")->required();
    eval->add_option("--gt-traj", ev.gt_traj, "Ground-truth trajectory (TUM)")->required();
    eval->add_option("--out", ev.out, "Metrics JSON output")->required();
    eval->add_option("--csv", ev.csv, "Per-frame root error CSV output");

    AblateOptions ab;
    CLI::App* ablate = app.add_subcommand(
        "ablate", "Run reference-joint and plane-fitting variants over a scenario");
    ablate->add_option("--scenario", ab.scenario, "Scenario directory (with manifest.json)")
        ->required();
    ablate->add_option("--out", ab.out, "Ablation CSV output")->required();
    ablate->add_option("--seed", ab.seed, "RANSAC seed");
    ablate->add_option("--sweep-max-perp", ab.sweep_max_perp,
                       "Extra rows sweeping the cloud-hit threshold");
    ablate->add_option("--sweep-bin-height", ab.sweep_bin_height,
                       "Extra rows sweeping the ground segment thickness");

    CLI11_PARSE(app, argc, argv);

    if (calibrate->parsed())
        return run_calibrate(cal);
    if (synth->parsed())
        return run_synth(syn);
    if (eval->parsed())
        return run_eval(ev);
    return run_ablate(ab);
}
