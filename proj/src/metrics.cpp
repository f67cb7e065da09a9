#include "scalecal/metrics.hpp"

#include "scalecal/errors.hpp"
#include "scalecal/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace scalecal {

namespace {

void require_aligned(std::size_t pred, std::size_t gt, std::size_t min_frames,
                     const char* who) {
    if (pred != gt)
        throw std::invalid_argument(std::string(who) + ": length mismatch");
    if (pred < min_frames)
        throw std::invalid_argument(std::string(who) + ": too few frames");
}

std::vector<Vec3> root_positions(const GlobalMotion& motion) {
    std::vector<Vec3> roots;
    roots.reserve(motion.frames.size());
    for (const GlobalFrame& f : motion.frames)
        roots.push_back(f.root_trans_world);
    return roots;
}

} // namespace

double trajectory_ate(const Trajectory& pred, const Trajectory& gt, AlignMode mode) {
    require_aligned(pred.poses.size(), gt.poses.size(), 3, "trajectory_ate");
    const std::size_t n = pred.poses.size();
    std::vector<Vec3> pred_pos(n), gt_pos(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(pred.poses[i].timestamp - gt.poses[i].timestamp) > 1e-9)
            throw std::invalid_argument("trajectory_ate: timestamps not aligned");
        pred_pos[i] = camera_center(pred.poses[i]);
        gt_pos[i] = camera_center(gt.poses[i]);
    }
    const SimilarityTransform fit =
        umeyama_align(pred_pos, gt_pos, mode == AlignMode::Sim3);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += (fit.apply(pred_pos[i]) - gt_pos[i]).squaredNorm();
    return std::sqrt(acc / static_cast<double>(n));
}

double mpjpe_pa(const GlobalMotion& pred, const GlobalMotion& gt) {
    require_aligned(pred.frames.size(), gt.frames.size(), 1, "mpjpe_pa");
    const std::size_t n = pred.frames.size();
    std::vector<double> frame_err(n, 0.0);
    const bool fan_out = use_parallel(n, 64);
#pragma omp parallel for num_threads(max_threads()) schedule(static) if (fan_out)
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const auto& pj = pred.frames[i].joints_world;
        const auto& gj = gt.frames[i].joints_world;
        const SimilarityTransform fit = umeyama_align(
            std::span<const Vec3>(pj.data(), pj.size()),
            std::span<const Vec3>(gj.data(), gj.size()), true);
        double acc = 0.0;
        for (int j = 0; j < kJointCount; ++j)
            acc += (fit.apply(pj[static_cast<std::size_t>(j)]) -
                    gj[static_cast<std::size_t>(j)]).norm();
        frame_err[i] = acc / kJointCount;
    }
    double total = 0.0;
    for (double e : frame_err)
        total += e;
    return 1000.0 * total / static_cast<double>(n);
}

std::vector<std::pair<std::size_t, std::size_t>> segment_spans(std::size_t n_frames,
                                                               std::size_t segment_length) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (std::size_t begin = 0; begin < n_frames; begin += segment_length) {
        const std::size_t end = std::min(begin + segment_length, n_frames);
        if (end - begin >= 2)
            spans.emplace_back(begin, end);
    }
    return spans;
}

namespace {

enum class SegmentAlign { FirstTwoRoots, AllRoots };

/// Shared engine for W-MPJPE and WA-MPJPE: rigid per-segment alignment on
/// root positions, joint error averaged over the segment's frames.
double segmented_mpjpe(const GlobalMotion& pred, const GlobalMotion& gt,
                       SegmentAlign align, std::vector<SegmentMetrics>* per_segment,
                       bool fill_w) {
    require_aligned(pred.frames.size(), gt.frames.size(), 2, "segmented mpjpe");
    const auto spans = segment_spans(pred.frames.size());
    if (spans.empty())
        throw std::invalid_argument("segmented mpjpe: no usable segment");

    double err_sum = 0.0;
    std::size_t frames_used = 0;
    for (std::size_t s = 0; s < spans.size(); ++s) {
        const auto [begin, end] = spans[s];
        std::vector<Vec3> src, tgt;
        const std::size_t fit_end = align == SegmentAlign::FirstTwoRoots ? begin + 2 : end;
        for (std::size_t i = begin; i < fit_end; ++i) {
            src.push_back(pred.frames[i].root_trans_world);
            tgt.push_back(gt.frames[i].root_trans_world);
        }
        const SimilarityTransform fit = umeyama_align(src, tgt, false);

        double seg_err = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            double frame_err = 0.0;
            for (int j = 0; j < kJointCount; ++j)
                frame_err += (fit.apply(pred.frames[i].joints_world[static_cast<std::size_t>(j)]) -
                              gt.frames[i].joints_world[static_cast<std::size_t>(j)]).norm();
            seg_err += frame_err / kJointCount;
        }
        err_sum += seg_err;
        frames_used += end - begin;

        if (per_segment) {
            if (s >= per_segment->size())
                per_segment->push_back({begin, end, 0.0, 0.0});
            auto& row = (*per_segment)[s];
            const double seg_mm = 1000.0 * seg_err / static_cast<double>(end - begin);
            (fill_w ? row.w_mpjpe_mm : row.wa_mpjpe_mm) = seg_mm;
        }
    }
    return 1000.0 * err_sum / static_cast<double>(frames_used);
}

} // namespace

double mpjpe_w(const GlobalMotion& pred, const GlobalMotion& gt) {
    return segmented_mpjpe(pred, gt, SegmentAlign::FirstTwoRoots, nullptr, true);
}

double mpjpe_wa(const GlobalMotion& pred, const GlobalMotion& gt) {
    return segmented_mpjpe(pred, gt, SegmentAlign::AllRoots, nullptr, false);
}

namespace {

double gt_displacement(const std::vector<Vec3>& roots, RteDenominator denominator) {
    if (denominator == RteDenominator::NetDisplacement)
        return (roots.back() - roots.front()).norm();
    double path = 0.0;
    for (std::size_t i = 1; i < roots.size(); ++i)
        path += (roots[i] - roots[i - 1]).norm();
    return path;
}

} // namespace

double rte(const GlobalMotion& pred, const GlobalMotion& gt, RteDenominator denominator) {
    require_aligned(pred.frames.size(), gt.frames.size(), 3, "rte");
    const std::vector<Vec3> pred_roots = root_positions(pred);
    const std::vector<Vec3> gt_roots = root_positions(gt);

    const double displacement = gt_displacement(gt_roots, denominator);
    if (displacement < 1e-6)
        throw ZeroDisplacement("rte: ground-truth displacement below 1e-6");

    const SimilarityTransform fit = umeyama_align(pred_roots, gt_roots, false);
    double err = 0.0;
    for (std::size_t i = 0; i < pred_roots.size(); ++i)
        err += (fit.apply(pred_roots[i]) - gt_roots[i]).norm();
    err /= static_cast<double>(pred_roots.size());
    return 100.0 * err / displacement;
}

MetricReport evaluate_all(const GlobalMotion& pred_motion, const GlobalMotion& gt_motion,
                          const Trajectory& pred_traj, const Trajectory& gt_traj) {
    MetricReport report;
    report.per_segment.clear();
    report.w_mpjpe_mm = segmented_mpjpe(pred_motion, gt_motion, SegmentAlign::FirstTwoRoots,
                                        &report.per_segment, true);
    report.wa_mpjpe_mm = segmented_mpjpe(pred_motion, gt_motion, SegmentAlign::AllRoots,
                                         &report.per_segment, false);
    report.pa_mpjpe_mm = mpjpe_pa(pred_motion, gt_motion);
    report.rte_percent = rte(pred_motion, gt_motion);
    report.ate_m = trajectory_ate(pred_traj, gt_traj, AlignMode::Sim3);
    report.ate_s_m = trajectory_ate(pred_traj, gt_traj, AlignMode::Se3);
    report.segment_count = report.per_segment.size();
    return report;
}

std::vector<double> per_frame_root_errors(const GlobalMotion& pred, const GlobalMotion& gt) {
    require_aligned(pred.frames.size(), gt.frames.size(), 2, "per_frame_root_errors");
    const std::vector<Vec3> pred_roots = root_positions(pred);
    const std::vector<Vec3> gt_roots = root_positions(gt);
    const SimilarityTransform fit = umeyama_align(pred_roots, gt_roots, false);
    std::vector<double> errors(pred_roots.size());
    for (std::size_t i = 0; i < pred_roots.size(); ++i)
        errors[i] = (fit.apply(pred_roots[i]) - gt_roots[i]).norm();
    return errors;
}

} // namespace scalecal
