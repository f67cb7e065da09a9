#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace scalecal {

using Vec3 = Eigen::Vector3d;

/// Proper rotation (orthonormal, det +1). Construction through the checked
/// factories keeps the invariant; arithmetic stays closed over the type.
class Rotation {
public:
    Rotation() : mat_(Eigen::Matrix3d::Identity()) {}

    static Rotation identity() { return Rotation(); }

    /// Validates RtR = I and det(R) = +1 within 1e-9, throws std::invalid_argument otherwise.
    static Rotation from_matrix(const Eigen::Matrix3d& m);

    /// Axis-angle vector: direction is the axis, norm is the angle in radians.
    static Rotation from_axis_angle(const Vec3& axis_angle);

    static Rotation about_axis(const Vec3& axis, double angle_rad);

    /// Quaternion must have non-degenerate norm; it is normalized internally.
    static Rotation from_quaternion(const Eigen::Quaterniond& q);

    const Eigen::Matrix3d& matrix() const { return mat_; }
    Rotation transposed() const { return Rotation(mat_.transpose(), unchecked_tag{}); }
    Eigen::Quaterniond quaternion() const { return Eigen::Quaterniond(mat_); }

    /// Axis-angle with angle in [0, pi]; the zero rotation maps to the zero vector.
    Vec3 to_axis_angle() const;

    Vec3 operator*(const Vec3& v) const { return mat_ * v; }
    Rotation operator*(const Rotation& rhs) const {
        return Rotation(mat_ * rhs.mat_, unchecked_tag{});
    }

private:
    struct unchecked_tag {};
    Rotation(const Eigen::Matrix3d& m, unchecked_tag) : mat_(m) {}
    Eigen::Matrix3d mat_;
};

enum class ScaleStatus { Metric, UnknownScale };

/// World-to-camera extrinsics at one timestamp: x_cam = R x_world + T.
struct CameraPose {
    Rotation rotation;
    Vec3 translation = Vec3::Zero();
    double timestamp = 0.0;
};

struct Trajectory {
    std::vector<CameraPose> poses;
    ScaleStatus scale_status = ScaleStatus::UnknownScale;

    /// Throws std::invalid_argument unless non-empty with strictly increasing,
    /// finite timestamps and finite translations.
    void validate() const;
};

/// Unit-direction ray.
struct Ray {
    Vec3 origin = Vec3::Zero();
    Vec3 direction = Vec3::UnitZ();
};

/// Builds the ray from `origin` toward `target`, normalizing the direction.
/// Throws std::invalid_argument when the two points are closer than 1e-9.
Ray make_ray(const Vec3& origin, const Vec3& target);

/// Plane with unit normal n and offset b; x on plane iff n.x + b = 0.
struct Plane {
    Vec3 normal = Vec3::UnitY();
    double offset = 0.0;
};

inline double signed_distance(const Plane& plane, const Vec3& x) {
    return plane.normal.dot(x) + plane.offset;
}

struct PointCloud {
    std::vector<Vec3> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

/// x -> s R x + t, least-squares point-set alignment result.
struct SimilarityTransform {
    double scale = 1.0;
    Rotation rotation;
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& x) const { return scale * (rotation * x) + translation; }
};

/// Camera optical center in the trajectory's world frame: Rt(-T).
Vec3 camera_center(const CameraPose& pose);

/// World root (orientation phi as axis-angle, translation gamma) to camera root:
/// psi = aa(R Rot(phi)), tau = R gamma + T.
std::pair<Vec3, Vec3> world_to_camera_root(const Vec3& phi, const Vec3& gamma,
                                           const CameraPose& pose);

/// Inverse: phi = aa(Rt Rot(psi)), gamma = Rt (tau - T).
std::pair<Vec3, Vec3> camera_to_world_root(const Vec3& psi, const Vec3& tau,
                                           const CameraPose& pose);

/// Rt (x_cam - T).
Vec3 camera_to_world_point(const Vec3& x_cam, const CameraPose& pose);

struct RayPlaneHit {
    Vec3 point;
    double t_star = 0.0;
};

/// p = o + t* d with t* = -(b + n.o)/(n.d). Empty when |n.d| < 1e-9 (parallel)
/// or t* <= 0 (behind the origin).
std::optional<RayPlaneHit> ray_plane_intersection(const Ray& ray, const Plane& plane);

struct RayNeighbor {
    std::size_t index = 0;
    double perp_distance = 0.0;
    double along_distance = 0.0;
};

/// Point of the cloud minimizing perpendicular distance to the ray among points
/// strictly in front of the origin (along-distance > 0). Ties resolve to the
/// lowest index. Empty for an empty cloud or when every point is behind.
/// Dispatches to the OpenMP kernel for large clouds; results are identical.
std::optional<RayNeighbor> nearest_point_to_ray(const PointCloud& cloud, const Ray& ray);

/// Serial reference scan, kept as the comparison baseline for the OpenMP kernel.
std::optional<RayNeighbor> nearest_point_to_ray_serial(const PointCloud& cloud, const Ray& ray);

/// Least-squares fit of target_i ~ s R source_i + t (Umeyama). With
/// `with_scale` false the scale is pinned to 1. Rank-deficient configurations
/// (collinear or coincident point sets, including the 2-point case) resolve the
/// free rotation to the minimizer nearest the identity. Throws
/// std::invalid_argument on size mismatch or fewer than 2 points.
SimilarityTransform umeyama_align(std::span<const Vec3> source,
                                  std::span<const Vec3> target,
                                  bool with_scale);

} // namespace scalecal
