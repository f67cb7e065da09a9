#pragma once

#include "scalecal/geometry.hpp"
#include "scalecal/motion.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace scalecal {

enum class AlignMode { Sim3, Se3 };

/// RMS camera-position error after Umeyama alignment of the predicted
/// trajectory onto the ground truth; Sim3 aligns with scale, Se3 without.
double trajectory_ate(const Trajectory& pred, const Trajectory& gt, AlignMode mode);

/// Per-frame Procrustes (similarity) alignment of the 24 joints, mean joint
/// error in millimeters.
double mpjpe_pa(const GlobalMotion& pred, const GlobalMotion& gt);

/// Joint error in millimeters after aligning only the first two root positions
/// of each 100-frame segment (rigid).
double mpjpe_w(const GlobalMotion& pred, const GlobalMotion& gt);

/// Joint error in millimeters after rigidly aligning all root positions of
/// each 100-frame segment.
double mpjpe_wa(const GlobalMotion& pred, const GlobalMotion& gt);

enum class RteDenominator { PathLength, NetDisplacement };

/// Root translation error after full-sequence rigid alignment, as a percent of
/// the ground-truth displacement. Throws ZeroDisplacement when the denominator
/// is below 1e-6.
double rte(const GlobalMotion& pred, const GlobalMotion& gt,
           RteDenominator denominator = RteDenominator::PathLength);

/// [begin, end) spans of consecutive `segment_length`-frame segments; a final
/// partial segment is kept only when it has at least 2 frames.
std::vector<std::pair<std::size_t, std::size_t>> segment_spans(std::size_t n_frames,
                                                               std::size_t segment_length = 100);

struct SegmentMetrics {
    std::size_t begin = 0;
    std::size_t end = 0;
    double w_mpjpe_mm = 0.0;
    double wa_mpjpe_mm = 0.0;
};

struct MetricReport {
    double w_mpjpe_mm = 0.0;
    double wa_mpjpe_mm = 0.0;
    double pa_mpjpe_mm = 0.0;
    double rte_percent = 0.0;
    double ate_m = 0.0;
    double ate_s_m = 0.0;
    std::size_t segment_count = 0;
    std::vector<SegmentMetrics> per_segment;
};

/// All human metrics against the ground-truth motion plus both trajectory
/// errors; the single entry point used by the CLI.
MetricReport evaluate_all(const GlobalMotion& pred_motion, const GlobalMotion& gt_motion,
                          const Trajectory& pred_traj, const Trajectory& gt_traj);

/// Per-frame root position errors (meters) after full-sequence rigid
/// alignment; feeds the plot CSV.
std::vector<double> per_frame_root_errors(const GlobalMotion& pred, const GlobalMotion& gt);

} // namespace scalecal
