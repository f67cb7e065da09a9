#include "commands.hpp"

#include "scalecal/synth.hpp"

#include <iostream>

namespace scalecal::cli {

int run_synth(const SynthOptions& opt) {
    try {
        const synth::Preset preset = synth::preset_from_string(opt.preset);
        synth::ScenarioConfig cfg = synth::preset_config(preset, opt.frames, opt.scale, opt.seed);
        cfg.hmr_depth_bias = opt.hmr_depth_bias;
        cfg.hmr_jitter_sigma_m = opt.hmr_jitter;
        cfg.slam_rotation_noise_rad = opt.slam_rot_noise;
        cfg.slam_translation_noise_m = opt.slam_trans_noise;
        cfg.ground_tilt_deg = opt.tilt_deg;
        cfg.crop_radius = opt.crop_radius;
        cfg.cloud_points_ground = opt.ground_points;
        cfg.cloud_points_walls = opt.wall_points;

        const synth::Scenario scenario = synth::generate_scenario(cfg);
        synth::export_scenario(scenario, cfg, opt.preset, opt.out);
        std::cout << "wrote scenario '" << opt.preset << "' (" << cfg.n_frames
                  << " frames, scale " << cfg.true_scale << ") to " << opt.out << '\n';
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace scalecal::cli
