#include "scalecal/calibration.hpp"

#include "scalecal/errors.hpp"
#include "scalecal/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scalecal {

void MotionSequence::validate() const {
    double prev = -std::numeric_limits<double>::infinity();
    for (const HumanFrame& f : frames) {
        if (!std::isfinite(f.timestamp) || !(f.timestamp > prev))
            throw std::invalid_argument("MotionSequence: timestamps not strictly increasing");
        if (!f.root_trans.allFinite())
            throw std::invalid_argument("MotionSequence: non-finite root translation");
        prev = f.timestamp;
    }
}

void CalibrationConfig::validate() const {
    if (!(max_perp_distance > 0.0))
        throw std::invalid_argument("CalibrationConfig: max_perp_distance must be > 0");
    if (!(plane_bin_height > 0.0))
        throw std::invalid_argument("CalibrationConfig: plane_bin_height must be > 0");
    if (!(min_bin_fraction > 0.0 && min_bin_fraction <= 1.0))
        throw std::invalid_argument("CalibrationConfig: min_bin_fraction must be in (0,1]");
    if (ransac_iters <= 0)
        throw std::invalid_argument("CalibrationConfig: ransac_iters must be > 0");
    if (!(ransac_tol > 0.0))
        throw std::invalid_argument("CalibrationConfig: ransac_tol must be > 0");
    if (min_valid_frames < 1)
        throw std::invalid_argument("CalibrationConfig: min_valid_frames must be >= 1");
    if (!(min_contact_depth > 0.0))
        throw std::invalid_argument("CalibrationConfig: min_contact_depth must be > 0");
    for (int j : reference_joints)
        if (j < 0 || j >= kJointCount)
            throw std::invalid_argument("CalibrationConfig: reference joint index out of range");
}

std::string_view to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::NoIntersection: return "no_intersection";
        case RejectReason::ParallelRay: return "parallel_ray";
        case RejectReason::BehindCamera: return "behind_camera";
        case RejectReason::TooClose: return "too_close";
        case RejectReason::InvalidJoint: return "invalid_joint";
    }
    return "unknown";
}

ContactJoint select_contact_joint(const HumanFrame& frame, const CameraPose& pose) {
    return select_contact_joint(frame, pose, {});
}

ContactJoint select_contact_joint(const HumanFrame& frame, const CameraPose& pose,
                                  std::span<const int> candidates) {
    int best = -1;
    double best_y = -std::numeric_limits<double>::infinity();
    const auto consider = [&](int j) {
        const double y = frame.joints[static_cast<std::size_t>(j)].y();
        if (y > best_y) { // NaN never beats; ties keep the lower index
            best_y = y;
            best = j;
        }
    };
    if (candidates.empty()) {
        for (int j = 0; j < kJointCount; ++j)
            consider(j);
    } else {
        for (int j : candidates)
            consider(j);
    }

    if (best < 0 || !frame.joints[static_cast<std::size_t>(best)].allFinite())
        throw std::invalid_argument("select_contact_joint: selected joint is non-finite");

    ContactJoint contact;
    contact.joint_index = best;
    contact.camera_position = frame.joints[static_cast<std::size_t>(best)];
    contact.world_position = camera_to_world_point(contact.camera_position, pose);
    contact.absolute_depth = contact.camera_position.norm();
    return contact;
}

Ray build_reference_ray(const ContactJoint& contact, const CameraPose& pose) {
    return make_ray(camera_center(pose), contact.world_position);
}

namespace {

struct ContactPrep {
    bool usable = false;
    RejectReason reason = RejectReason::InvalidJoint;
    ContactJoint contact;
    Ray ray;
};

ContactPrep prepare_contact(const HumanFrame& frame, const CameraPose& pose,
                            const CalibrationConfig& cfg) {
    ContactPrep prep;
    try {
        prep.contact = select_contact_joint(frame, pose, cfg.reference_joints);
    } catch (const std::invalid_argument&) {
        prep.reason = RejectReason::InvalidJoint;
        return prep;
    }
    if (prep.contact.absolute_depth <= cfg.min_contact_depth) {
        prep.reason = RejectReason::TooClose;
        return prep;
    }
    prep.ray = build_reference_ray(prep.contact, pose);
    prep.usable = true;
    return prep;
}

FrameScale make_frame_scale(std::size_t frame_index, const ContactJoint& contact,
                            ReferenceKind kind, const Vec3& reference_point,
                            double relative_depth) {
    FrameScale fs;
    fs.frame_index = frame_index;
    fs.scale = contact.absolute_depth / relative_depth;
    fs.reference_kind = kind;
    fs.reference_point = reference_point;
    fs.relative_depth = relative_depth;
    fs.absolute_depth = contact.absolute_depth;
    fs.contact = contact;
    return fs;
}

} // namespace

FrameScaleOutcome frame_scale_from_cloud(const HumanFrame& frame, const CameraPose& pose,
                                         const PointCloud& cloud,
                                         const CalibrationConfig& cfg,
                                         std::size_t frame_index) {
    const ContactPrep prep = prepare_contact(frame, pose, cfg);
    if (!prep.usable)
        return {std::nullopt, prep.reason};

    const auto hit = nearest_point_to_ray(cloud, prep.ray);
    if (!hit || hit->perp_distance > cfg.max_perp_distance)
        return {std::nullopt, RejectReason::NoIntersection};

    const Vec3& p = cloud.points[hit->index];
    const double d_slam = (p - prep.ray.origin).norm();
    return {make_frame_scale(frame_index, prep.contact, ReferenceKind::CloudIntersection,
                             p, d_slam),
            RejectReason::NoIntersection};
}

FrameScaleOutcome frame_scale_from_plane(const HumanFrame& frame, const CameraPose& pose,
                                         const Plane& plane,
                                         const CalibrationConfig& cfg,
                                         std::size_t frame_index) {
    const ContactPrep prep = prepare_contact(frame, pose, cfg);
    if (!prep.usable)
        return {std::nullopt, prep.reason};

    if (std::abs(plane.normal.dot(prep.ray.direction)) < 1e-9)
        return {std::nullopt, RejectReason::ParallelRay};
    const auto hit = ray_plane_intersection(prep.ray, plane);
    if (!hit)
        return {std::nullopt, RejectReason::BehindCamera};

    const double d_slam = (hit->point - prep.ray.origin).norm();
    return {make_frame_scale(frame_index, prep.contact, ReferenceKind::PlaneIntersection,
                             hit->point, d_slam),
            RejectReason::NoIntersection};
}

double median(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("median: empty input");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1)
        return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

namespace {

double median_of_sorted(const std::vector<double>& sorted) {
    const std::size_t n = sorted.size();
    if (n % 2 == 1)
        return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

struct FrameProbe {
    bool joint_ok = false;
    RejectReason prep_reason = RejectReason::InvalidJoint;
    ContactJoint contact;
    Ray ray;
    bool has_candidate = false;
    double perp = 0.0;
    Vec3 point = Vec3::Zero();
    double d_slam = 0.0;
};

} // namespace

CalibrationResult calibrate_sequence(const MotionSequence& motion,
                                     const Trajectory& trajectory,
                                     const PointCloud& cloud,
                                     const CalibrationConfig& cfg) {
    cfg.validate();
    motion.validate();
    trajectory.validate();
    if (trajectory.scale_status != ScaleStatus::UnknownScale)
        throw std::invalid_argument("calibrate_sequence: trajectory is already metric");
    const std::size_t n = motion.frames.size();
    if (n != trajectory.poses.size())
        throw std::invalid_argument("calibrate_sequence: frame/pose count mismatch");
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(motion.frames[i].timestamp - trajectory.poses[i].timestamp) > 1e-9)
            throw std::invalid_argument("calibrate_sequence: timestamps not aligned");

    // Per-frame probes are independent; scan the cloud for every frame in parallel.
    std::vector<FrameProbe> probes(n);
    const bool fan_out = use_parallel(n, 8) && cloud.size() > 0;
#pragma omp parallel for num_threads(max_threads()) schedule(dynamic, 16) if (fan_out)
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        FrameProbe& probe = probes[i];
        const ContactPrep prep = prepare_contact(motion.frames[i], trajectory.poses[i], cfg);
        if (!prep.usable) {
            probe.prep_reason = prep.reason;
            continue;
        }
        probe.joint_ok = true;
        probe.contact = prep.contact;
        probe.ray = prep.ray;
        if (const auto hit = nearest_point_to_ray(cloud, prep.ray)) {
            probe.has_candidate = true;
            probe.perp = hit->perp_distance;
            probe.point = cloud.points[hit->index];
            probe.d_slam = (probe.point - prep.ray.origin).norm();
        }
    }

    // Sequential acceptance pass. The perpendicular residual lives in cloud
    // units; the running median of accepted scales converts the metric
    // threshold into those units (initial guess: scale 1).
    CalibrationResult result;
    std::vector<double> sorted_scales;
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < n; ++i) {
        const FrameProbe& probe = probes[i];
        if (!probe.joint_ok) {
            result.rejected_frames.push_back({i, probe.prep_reason});
            continue;
        }
        if (!probe.has_candidate) {
            pending.push_back(i);
            continue;
        }
        const double running = sorted_scales.empty() ? 1.0 : median_of_sorted(sorted_scales);
        if (probe.perp * running > cfg.max_perp_distance) {
            pending.push_back(i);
            continue;
        }
        result.per_frame.push_back(make_frame_scale(
            i, probe.contact, ReferenceKind::CloudIntersection, probe.point, probe.d_slam));
        const double s = result.per_frame.back().scale;
        sorted_scales.insert(std::lower_bound(sorted_scales.begin(), sorted_scales.end(), s), s);
    }

    // Ground-plane fallback for frames without a usable cloud hit.
    std::vector<Vec3> contacts_world;
    if (!pending.empty() && cfg.plane_fallback) {
        for (const FrameProbe& probe : probes)
            if (probe.joint_ok)
                contacts_world.push_back(probe.contact.world_position);

        const double scale_guess = sorted_scales.empty() ? 1.0 : median_of_sorted(sorted_scales);
        PlaneFitConfig pf;
        pf.bin_height = cfg.plane_bin_height / scale_guess;
        pf.min_bin_fraction = cfg.min_bin_fraction;
        pf.ransac_iters = cfg.ransac_iters;
        pf.ransac_tol = cfg.ransac_tol / scale_guess;

        Vec3 mean_center = Vec3::Zero();
        for (const CameraPose& pose : trajectory.poses)
            mean_center += camera_center(pose);
        mean_center /= static_cast<double>(trajectory.poses.size());

        try {
            result.plane = fit_ground_plane(contacts_world, cloud, cfg.normal_mode, pf,
                                            mean_center, cfg.seed);
            result.plane_contact_rms = plane_rms_distance(*result.plane, contacts_world);
        } catch (const std::exception&) {
            result.plane.reset();
        }
    }

    if (result.plane) {
        std::vector<FrameScaleOutcome> retried(pending.size());
        const bool retry_par = use_parallel(pending.size(), 64);
#pragma omp parallel for num_threads(max_threads()) schedule(static) if (retry_par)
        for (long long k = 0; k < static_cast<long long>(pending.size()); ++k) {
            const std::size_t i = pending[static_cast<std::size_t>(k)];
            retried[static_cast<std::size_t>(k)] = frame_scale_from_plane(
                motion.frames[i], trajectory.poses[i], *result.plane, cfg, i);
        }
        for (std::size_t k = 0; k < retried.size(); ++k) {
            if (retried[k].accepted())
                result.per_frame.push_back(*retried[k].scale);
            else
                result.rejected_frames.push_back({pending[k], retried[k].reason});
        }
    } else {
        for (std::size_t i : pending)
            result.rejected_frames.push_back({i, RejectReason::NoIntersection});
    }

    std::sort(result.per_frame.begin(), result.per_frame.end(),
              [](const FrameScale& a, const FrameScale& b) { return a.frame_index < b.frame_index; });
    std::sort(result.rejected_frames.begin(), result.rejected_frames.end(),
              [](const FrameRejection& a, const FrameRejection& b) {
                  return a.frame_index < b.frame_index;
              });

    if (result.per_frame.size() < static_cast<std::size_t>(cfg.min_valid_frames))
        throw CalibrationFailed("calibrate_sequence: only " +
                                std::to_string(result.per_frame.size()) +
                                " usable frames, need " + std::to_string(cfg.min_valid_frames));

    std::vector<double> scales;
    scales.reserve(result.per_frame.size());
    for (const FrameScale& fs : result.per_frame)
        scales.push_back(fs.scale);
    result.sequence_scale = median(scales);

    double mean = 0.0;
    for (double s : scales)
        mean += s;
    mean /= static_cast<double>(scales.size());
    double var = 0.0;
    for (double s : scales)
        var += (s - mean) * (s - mean);
    result.scale_stddev = std::sqrt(var / static_cast<double>(scales.size()));

    return result;
}

} // namespace scalecal
