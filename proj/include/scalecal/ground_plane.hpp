#pragma once

#include "scalecal/geometry.hpp"

#include <cstdint>
#include <span>

namespace scalecal {

/// How the ground-plane normal is chosen before the offset is read from the cloud.
enum class NormalMode { FromContacts, YAxis, RansacLargest };

struct PlaneFitConfig {
    double bin_height = 0.10;      // segment thickness along the normal, cloud units
    double min_bin_fraction = 0.05; // bin qualifies as a surface at >= this fraction of N
    int ransac_iters = 1000;
    double ransac_tol = 0.05;      // inlier distance, cloud units

    void validate() const;
};

/// Unit normal of the least-squares plane through the contact points
/// (smallest eigenvector of the centered covariance). Sign is canonical
/// (largest-magnitude component positive); callers orient it against the
/// camera side. Throws DegenerateContacts when the two smallest eigenvalues
/// are both below 1e-12 (collinear or coincident contacts).
Vec3 normal_from_contacts(std::span<const Vec3> contacts_world);

/// The fixed fallback normal (0,1,0): assumes the reconstruction's y axis
/// is aligned with gravity.
Vec3 normal_y_axis();

/// Histogram the projections n.x over bins of `bin_height`; among bins holding
/// at least min_bin_fraction*N points, take the one at minimal n.x (the ground
/// side when n points from the ground toward the cameras) and return
/// b = -(mean projection of its points). Throws NoQualifiedBin when no bin
/// qualifies; std::invalid_argument for clouds under 10 points.
double offset_along_normal(const PointCloud& cloud, const Vec3& n, const PlaneFitConfig& cfg);

/// Classic 3-point RANSAC for the largest plane, refined by least squares on
/// the winning consensus set. Deterministic for a fixed seed. The returned
/// normal sign is canonical. Throws DegenerateCloud when no valid sample exists.
Plane ransac_largest_plane(const PointCloud& cloud, const PlaneFitConfig& cfg,
                           std::uint64_t seed);

/// Full ground-plane estimate. FromContacts and YAxis combine the chosen
/// normal with offset_along_normal; RansacLargest returns the RANSAC plane
/// directly. `mean_camera_center` orients the result so the camera side is
/// negative: n.c + b < 0.
Plane fit_ground_plane(std::span<const Vec3> contacts_world, const PointCloud& cloud,
                       NormalMode mode, const PlaneFitConfig& cfg,
                       const Vec3& mean_camera_center, std::uint64_t seed = 0);

/// RMS |n.x + b| over a point set; used to flag non-coplanar contact sets.
double plane_rms_distance(const Plane& plane, std::span<const Vec3> points);

} // namespace scalecal
