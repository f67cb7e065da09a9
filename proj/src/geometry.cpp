#include "scalecal/geometry.hpp"

#include "scalecal/parallel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scalecal {

namespace {

constexpr double kOrthonormalTol = 1e-9;
constexpr double kParallelTol = 1e-9;
constexpr double kDegenerateDirTol = 1e-9;

bool finite(const Vec3& v) {
    return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

} // namespace

Rotation Rotation::from_matrix(const Eigen::Matrix3d& m) {
    const double ortho_err = (m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
    if (!(ortho_err < kOrthonormalTol))
        throw std::invalid_argument("Rotation::from_matrix: matrix is not orthonormal");
    if (!(std::abs(m.determinant() - 1.0) < kOrthonormalTol))
        throw std::invalid_argument("Rotation::from_matrix: determinant is not +1");
    return Rotation(m, unchecked_tag{});
}

Rotation Rotation::from_axis_angle(const Vec3& axis_angle) {
    const double angle = axis_angle.norm();
    if (angle < std::numeric_limits<double>::epsilon())
        return identity();
    return Rotation(Eigen::AngleAxisd(angle, axis_angle / angle).toRotationMatrix(),
                    unchecked_tag{});
}

Rotation Rotation::about_axis(const Vec3& axis, double angle_rad) {
    const double n = axis.norm();
    if (n < kDegenerateDirTol)
        throw std::invalid_argument("Rotation::about_axis: zero axis");
    return Rotation(Eigen::AngleAxisd(angle_rad, axis / n).toRotationMatrix(), unchecked_tag{});
}

Rotation Rotation::from_quaternion(const Eigen::Quaterniond& q) {
    if (!(q.norm() > kDegenerateDirTol))
        throw std::invalid_argument("Rotation::from_quaternion: degenerate quaternion");
    return Rotation(q.normalized().toRotationMatrix(), unchecked_tag{});
}

Vec3 Rotation::to_axis_angle() const {
    const Eigen::AngleAxisd aa(mat_);
    return aa.angle() * aa.axis();
}

void Trajectory::validate() const {
    if (poses.empty())
        throw std::invalid_argument("Trajectory: empty");
    double prev = -std::numeric_limits<double>::infinity();
    for (const CameraPose& pose : poses) {
        if (!std::isfinite(pose.timestamp))
            throw std::invalid_argument("Trajectory: non-finite timestamp");
        if (!(pose.timestamp > prev))
            throw std::invalid_argument("Trajectory: timestamps not strictly increasing");
        if (!finite(pose.translation))
            throw std::invalid_argument("Trajectory: non-finite translation");
        prev = pose.timestamp;
    }
}

Ray make_ray(const Vec3& origin, const Vec3& target) {
    const Vec3 diff = target - origin;
    const double len = diff.norm();
    if (!(len >= kDegenerateDirTol))
        throw std::invalid_argument("make_ray: origin and target coincide");
    return Ray{origin, diff / len};
}

Vec3 camera_center(const CameraPose& pose) {
    return pose.rotation.transposed() * (-pose.translation);
}

std::pair<Vec3, Vec3> world_to_camera_root(const Vec3& phi, const Vec3& gamma,
                                           const CameraPose& pose) {
    const Vec3 psi = (pose.rotation * Rotation::from_axis_angle(phi)).to_axis_angle();
    const Vec3 tau = pose.rotation * gamma + pose.translation;
    return {psi, tau};
}

std::pair<Vec3, Vec3> camera_to_world_root(const Vec3& psi, const Vec3& tau,
                                           const CameraPose& pose) {
    const Rotation rt = pose.rotation.transposed();
    const Vec3 phi = (rt * Rotation::from_axis_angle(psi)).to_axis_angle();
    const Vec3 gamma = rt * (tau - pose.translation);
    return {phi, gamma};
}

Vec3 camera_to_world_point(const Vec3& x_cam, const CameraPose& pose) {
    return pose.rotation.transposed() * (x_cam - pose.translation);
}

std::optional<RayPlaneHit> ray_plane_intersection(const Ray& ray, const Plane& plane) {
    const double denom = plane.normal.dot(ray.direction);
    if (std::abs(denom) < kParallelTol)
        return std::nullopt;
    const double t_star = -(plane.offset + plane.normal.dot(ray.origin)) / denom;
    if (!(t_star > 0.0))
        return std::nullopt;
    return RayPlaneHit{ray.origin + t_star * ray.direction, t_star};
}

namespace {

struct ScanBest {
    double perp_sq = std::numeric_limits<double>::infinity();
    double along = 0.0;
    std::size_t index = std::numeric_limits<std::size_t>::max();

    void consider(double perp_sq_cand, double along_cand, std::size_t idx) {
        if (perp_sq_cand < perp_sq || (perp_sq_cand == perp_sq && idx < index)) {
            perp_sq = perp_sq_cand;
            along = along_cand;
            index = idx;
        }
    }

    void merge(const ScanBest& other) {
        if (other.index != std::numeric_limits<std::size_t>::max())
            consider(other.perp_sq, other.along, other.index);
    }
};

inline void scan_point(const Vec3& p, const Ray& ray, std::size_t idx, ScanBest& best) {
    const Vec3 w = p - ray.origin;
    const double along = w.dot(ray.direction);
    if (along <= 0.0)
        return;
    const double perp_sq = w.squaredNorm() - along * along;
    best.consider(perp_sq, along, idx);
}

std::optional<RayNeighbor> finish_scan(const ScanBest& best) {
    if (best.index == std::numeric_limits<std::size_t>::max())
        return std::nullopt;
    return RayNeighbor{best.index, std::sqrt(std::max(best.perp_sq, 0.0)), best.along};
}

} // namespace

std::optional<RayNeighbor> nearest_point_to_ray_serial(const PointCloud& cloud, const Ray& ray) {
    ScanBest best;
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
        scan_point(cloud.points[i], ray, i, best);
    return finish_scan(best);
}

std::optional<RayNeighbor> nearest_point_to_ray(const PointCloud& cloud, const Ray& ray) {
    const std::size_t n = cloud.points.size();
    if (!use_parallel(n, 8192))
        return nearest_point_to_ray_serial(cloud, ray);

    ScanBest best;
#pragma omp parallel num_threads(max_threads())
    {
        ScanBest local;
#pragma omp for nowait
        for (long long i = 0; i < static_cast<long long>(n); ++i)
            scan_point(cloud.points[static_cast<std::size_t>(i)], ray,
                       static_cast<std::size_t>(i), local);
#pragma omp critical
        best.merge(local);
    }
    return finish_scan(best);
}

namespace {

/// Smallest-angle rotation mapping unit vector `from` onto unit vector `to`.
Eigen::Matrix3d minimal_rotation(const Vec3& from, const Vec3& to) {
    const Vec3 axis = from.cross(to);
    const double sin_a = axis.norm();
    const double cos_a = from.dot(to);
    if (sin_a < 1e-15) {
        if (cos_a > 0.0)
            return Eigen::Matrix3d::Identity();
        // Antiparallel: half-turn about any axis perpendicular to `from`.
        Vec3 helper = std::abs(from.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
        const Vec3 perp = from.cross(helper).normalized();
        return Eigen::AngleAxisd(M_PI, perp).toRotationMatrix();
    }
    return Eigen::AngleAxisd(std::atan2(sin_a, cos_a), axis / sin_a).toRotationMatrix();
}

} // namespace

SimilarityTransform umeyama_align(std::span<const Vec3> source,
                                  std::span<const Vec3> target,
                                  bool with_scale) {
    if (source.size() != target.size())
        throw std::invalid_argument("umeyama_align: size mismatch");
    const std::size_t n = source.size();
    if (n < 2)
        throw std::invalid_argument("umeyama_align: need at least 2 points");

    Vec3 mu_src = Vec3::Zero();
    Vec3 mu_tgt = Vec3::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        mu_src += source[i];
        mu_tgt += target[i];
    }
    mu_src /= static_cast<double>(n);
    mu_tgt /= static_cast<double>(n);

    double var_src = 0.0;
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero(); // maps source deviations to target deviations
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 ds = source[i] - mu_src;
        const Vec3 dt = target[i] - mu_tgt;
        var_src += ds.squaredNorm();
        cov += dt * ds.transpose();
    }
    var_src /= static_cast<double>(n);
    cov /= static_cast<double>(n);

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Vec3 d = svd.singularValues();
    const double rank_tol = 1e-12 * std::max(1.0, d(0));

    Eigen::Matrix3d r;
    double corr_trace; // max over rotations of tr(R cov^T); feeds the scale
    if (d(1) <= rank_tol) {
        // Rank <= 1: collinear or coincident sets; the optimal rotation is only
        // constrained along the principal direction. Take the identity-closest one.
        if (d(0) <= rank_tol) {
            r = Eigen::Matrix3d::Identity();
            corr_trace = 0.0;
        } else {
            r = minimal_rotation(svd.matrixV().col(0), svd.matrixU().col(0));
            corr_trace = d(0);
        }
    } else {
        Vec3 sign_fix = Vec3::Ones();
        if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0)
            sign_fix(2) = -1.0;
        r = svd.matrixU() * sign_fix.asDiagonal() * svd.matrixV().transpose();
        corr_trace = d.dot(sign_fix);
    }

    double scale = 1.0;
    if (with_scale && var_src > rank_tol * rank_tol)
        scale = std::max(corr_trace / var_src, 1e-12);

    SimilarityTransform out;
    out.scale = scale;
    out.rotation = Rotation::from_matrix(r);
    out.translation = mu_tgt - scale * (r * mu_src);
    return out;
}

} // namespace scalecal
