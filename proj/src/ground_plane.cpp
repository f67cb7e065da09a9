#include "scalecal/ground_plane.hpp"

#include "scalecal/errors.hpp"
#include "scalecal/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace scalecal {

void PlaneFitConfig::validate() const {
    if (!(bin_height > 0.0))
        throw std::invalid_argument("PlaneFitConfig: bin_height must be > 0");
    if (!(min_bin_fraction > 0.0 && min_bin_fraction <= 1.0))
        throw std::invalid_argument("PlaneFitConfig: min_bin_fraction must be in (0,1]");
    if (ransac_iters <= 0)
        throw std::invalid_argument("PlaneFitConfig: ransac_iters must be > 0");
    if (!(ransac_tol > 0.0))
        throw std::invalid_argument("PlaneFitConfig: ransac_tol must be > 0");
}

namespace {

Vec3 canonical_sign(const Vec3& n) {
    int dominant = 0;
    n.cwiseAbs().maxCoeff(&dominant);
    return n(dominant) < 0.0 ? Vec3(-n) : n;
}

} // namespace

Vec3 normal_from_contacts(std::span<const Vec3> contacts_world) {
    if (contacts_world.size() < 3)
        throw std::invalid_argument("normal_from_contacts: need at least 3 contact points");

    Vec3 centroid = Vec3::Zero();
    for (const Vec3& c : contacts_world)
        centroid += c;
    centroid /= static_cast<double>(contacts_world.size());

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const Vec3& c : contacts_world) {
        const Vec3 d = c - centroid;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(contacts_world.size());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    const Vec3 evals = eig.eigenvalues(); // ascending
    if (evals(0) < 1e-12 && evals(1) < 1e-12)
        throw DegenerateContacts("normal_from_contacts: contact points are collinear");

    return canonical_sign(eig.eigenvectors().col(0).normalized());
}

Vec3 normal_y_axis() {
    return Vec3::UnitY();
}

double offset_along_normal(const PointCloud& cloud, const Vec3& n, const PlaneFitConfig& cfg) {
    cfg.validate();
    if (cloud.size() < 10)
        throw std::invalid_argument("offset_along_normal: need at least 10 cloud points");
    const Vec3 unit = n.normalized();

    const std::size_t count = cloud.size();
    std::vector<double> proj(count);
    double t_min = std::numeric_limits<double>::infinity();
    double t_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) {
        proj[i] = unit.dot(cloud.points[i]);
        t_min = std::min(t_min, proj[i]);
        t_max = std::max(t_max, proj[i]);
    }

    const auto bin_of = [&](double t) {
        return static_cast<std::size_t>((t - t_min) / cfg.bin_height);
    };
    const std::size_t n_bins = bin_of(t_max) + 1;
    std::vector<std::size_t> counts(n_bins, 0);
    std::vector<double> sums(n_bins, 0.0);
    for (double t : proj) {
        const std::size_t b = bin_of(t);
        counts[b] += 1;
        sums[b] += t;
    }

    const double required = cfg.min_bin_fraction * static_cast<double>(count);
    for (std::size_t b = 0; b < n_bins; ++b) {
        if (static_cast<double>(counts[b]) + 1e-9 >= required)
            return -(sums[b] / static_cast<double>(counts[b]));
    }
    throw NoQualifiedBin("offset_along_normal: no bin reaches min_bin_fraction");
}

namespace {

struct SampleTriple {
    std::uint32_t a, b, c;
};

struct Hypothesis {
    Vec3 normal = Vec3::Zero();
    double offset = 0.0;
    bool valid = false;
};

Hypothesis plane_from_sample(const PointCloud& cloud, const SampleTriple& s) {
    const Vec3& pa = cloud.points[s.a];
    const Vec3& pb = cloud.points[s.b];
    const Vec3& pc = cloud.points[s.c];
    const Vec3 cross = (pb - pa).cross(pc - pa);
    const double len = cross.norm();
    if (len < 1e-12)
        return {};
    Hypothesis h;
    h.normal = cross / len;
    h.offset = -h.normal.dot(pa);
    h.valid = true;
    return h;
}

std::size_t count_inliers(const PointCloud& cloud, const Hypothesis& h, double tol) {
    std::size_t inliers = 0;
    for (const Vec3& p : cloud.points)
        if (std::abs(h.normal.dot(p) + h.offset) <= tol)
            ++inliers;
    return inliers;
}

} // namespace

Plane ransac_largest_plane(const PointCloud& cloud, const PlaneFitConfig& cfg,
                           std::uint64_t seed) {
    cfg.validate();
    const std::size_t n = cloud.size();
    if (n < 3)
        throw std::invalid_argument("ransac_largest_plane: need at least 3 points");

    // Draw every sample up front from the seeded generator so hypothesis
    // evaluation can fan out without touching shared RNG state.
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
    std::vector<SampleTriple> samples(static_cast<std::size_t>(cfg.ransac_iters));
    for (SampleTriple& s : samples) {
        s.a = pick(rng);
        do { s.b = pick(rng); } while (s.b == s.a);
        do { s.c = pick(rng); } while (s.c == s.a || s.c == s.b);
    }

    const std::size_t iters = samples.size();
    std::vector<std::size_t> inlier_counts(iters, 0);
    std::vector<Hypothesis> hyps(iters);

    const bool fan_out = use_parallel(iters * n, 1u << 16);
#pragma omp parallel for num_threads(max_threads()) schedule(static) if (fan_out)
    for (long long i = 0; i < static_cast<long long>(iters); ++i) {
        const auto idx = static_cast<std::size_t>(i);
        hyps[idx] = plane_from_sample(cloud, samples[idx]);
        if (hyps[idx].valid)
            inlier_counts[idx] = count_inliers(cloud, hyps[idx], cfg.ransac_tol);
    }

    std::size_t best = iters;
    for (std::size_t i = 0; i < iters; ++i) {
        if (!hyps[i].valid)
            continue;
        if (best == iters || inlier_counts[i] > inlier_counts[best])
            best = i;
    }
    if (best == iters)
        throw DegenerateCloud("ransac_largest_plane: no non-collinear 3-point sample found");

    // Least-squares refit on the winning consensus set.
    std::vector<Vec3> inliers;
    inliers.reserve(inlier_counts[best]);
    for (const Vec3& p : cloud.points)
        if (std::abs(hyps[best].normal.dot(p) + hyps[best].offset) <= cfg.ransac_tol)
            inliers.push_back(p);

    Vec3 centroid = Vec3::Zero();
    for (const Vec3& p : inliers)
        centroid += p;
    centroid /= static_cast<double>(inliers.size());

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const Vec3& p : inliers) {
        const Vec3 d = p - centroid;
        cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    Vec3 normal = eig.eigenvectors().col(0).normalized();
    if (eig.eigenvalues()(1) < 1e-15) // refit degenerate, keep the sampled plane
        normal = hyps[best].normal;

    normal = canonical_sign(normal);
    return Plane{normal, -normal.dot(centroid)};
}

Plane fit_ground_plane(std::span<const Vec3> contacts_world, const PointCloud& cloud,
                       NormalMode mode, const PlaneFitConfig& cfg,
                       const Vec3& mean_camera_center, std::uint64_t seed) {
    if (mode == NormalMode::RansacLargest) {
        Plane plane = ransac_largest_plane(cloud, cfg, seed);
        if (signed_distance(plane, mean_camera_center) > 0.0) {
            plane.normal = -plane.normal;
            plane.offset = -plane.offset;
        }
        return plane;
    }

    if (contacts_world.empty())
        throw std::invalid_argument("fit_ground_plane: contact points required");

    Vec3 normal = mode == NormalMode::YAxis ? normal_y_axis()
                                             : normal_from_contacts(contacts_world);

    Vec3 contacts_centroid = Vec3::Zero();
    for (const Vec3& c : contacts_world)
        contacts_centroid += c;
    contacts_centroid /= static_cast<double>(contacts_world.size());

    // Cameras sit above the contact surface: point the working normal their way,
    // read the offset from the lowest qualified cloud segment, then flip so the
    // camera side ends up negative.
    const Vec3 toward_cameras = mean_camera_center - contacts_centroid;
    const Vec3 up = normal.dot(toward_cameras) >= 0.0 ? normal : Vec3(-normal);
    const double b_up = offset_along_normal(cloud, up, cfg);
    return Plane{-up, -b_up};
}

double plane_rms_distance(const Plane& plane, std::span<const Vec3> points) {
    if (points.empty())
        return 0.0;
    double acc = 0.0;
    for (const Vec3& p : points) {
        const double d = signed_distance(plane, p);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(points.size()));
}

} // namespace scalecal
