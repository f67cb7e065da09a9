#include "scalecal/synth.hpp"

#include "scalecal/io.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace scalecal::synth {

namespace {

// World frame is y-down (gravity along +y), matching the camera convention.
// The ground sits at y = kGroundY in the untilted frame; smaller y is higher.
constexpr double kGroundY = 1.6;
constexpr double kFps = 32.0; // frame time k/32 s is exactly representable
constexpr double kStepDuration = 0.5;
constexpr double kFootLift = 0.12;
constexpr int kLeftFoot = 10;
constexpr int kRightFoot = 11;
constexpr int kLeftAnkle = 7;
constexpr int kRightAnkle = 8;

/// Standing template, subject-local y-down frame: feet on y = 0, head up at
/// negative y. Indices follow the common 24-joint body convention (pelvis 0).
const std::array<Vec3, kJointCount>& standing_template() {
    static const std::array<Vec3, kJointCount> joints = {{
        {0.00, -0.95, 0.00},  // 0 pelvis
        {0.10, -0.90, 0.00},  // 1 left hip
        {-0.10, -0.90, 0.00}, // 2 right hip
        {0.00, -1.05, 0.00},  // 3 spine1
        {0.11, -0.50, 0.01},  // 4 left knee
        {-0.11, -0.50, 0.01}, // 5 right knee
        {0.00, -1.15, 0.00},  // 6 spine2
        {0.12, -0.08, -0.02}, // 7 left ankle
        {-0.12, -0.08, -0.02},// 8 right ankle
        {0.00, -1.25, 0.00},  // 9 spine3
        {0.12, 0.00, 0.08},   // 10 left foot
        {-0.12, 0.00, 0.08},  // 11 right foot
        {0.00, -1.45, 0.00},  // 12 neck
        {0.08, -1.40, 0.00},  // 13 left collar
        {-0.08, -1.40, 0.00}, // 14 right collar
        {0.00, -1.60, 0.00},  // 15 head
        {0.18, -1.38, 0.00},  // 16 left shoulder
        {-0.18, -1.38, 0.00}, // 17 right shoulder
        {0.22, -1.12, 0.02},  // 18 left elbow
        {-0.22, -1.12, 0.02}, // 19 right elbow
        {0.24, -0.88, 0.03},  // 20 left wrist
        {-0.24, -0.88, 0.03}, // 21 right wrist
        {0.25, -0.76, 0.04},  // 22 left hand
        {-0.25, -0.76, 0.04}, // 23 right hand
    }};
    return joints;
}

/// Inverted pose with the hands planted. Hands are the lowest joints by a
/// comfortable margin; feet end up highest.
const std::array<Vec3, kJointCount>& handstand_template() {
    static const std::array<Vec3, kJointCount> joints = {{
        {0.00, -1.05, 0.00},  // 0 pelvis
        {0.10, -1.10, 0.00},  // 1 left hip
        {-0.10, -1.10, 0.00}, // 2 right hip
        {0.00, -0.95, 0.00},  // 3 spine1
        {0.11, -1.45, 0.02},  // 4 left knee
        {-0.11, -1.45, 0.02}, // 5 right knee
        {0.00, -0.85, 0.00},  // 6 spine2
        {0.13, -1.82, 0.03},  // 7 left ankle
        {-0.13, -1.82, 0.03}, // 8 right ankle
        {0.00, -0.75, 0.00},  // 9 spine3
        {0.13, -1.90, 0.08},  // 10 left foot
        {-0.13, -1.90, 0.08}, // 11 right foot
        {0.00, -0.55, 0.00},  // 12 neck
        {0.08, -0.60, 0.00},  // 13 left collar
        {-0.08, -0.60, 0.00}, // 14 right collar
        {0.00, -0.42, 0.00},  // 15 head
        {0.18, -0.62, 0.00},  // 16 left shoulder
        {-0.18, -0.62, 0.00}, // 17 right shoulder
        {0.20, -0.38, 0.01},  // 18 left elbow
        {-0.20, -0.38, 0.01}, // 19 right elbow
        {0.22, -0.16, 0.02},  // 20 left wrist
        {-0.22, -0.16, 0.02}, // 21 right wrist
        {0.23, 0.00, 0.03},   // 22 left hand
        {-0.23, 0.00, 0.03},  // 23 right hand
    }};
    return joints;
}

struct PathPoint {
    Vec3 position = Vec3::Zero(); // on the ground (y = kGroundY)
    double heading = 0.0;         // rotation about world y
};

/// Smooth curved ground path (arc around the origin). Keeping it curved makes
/// the contact set non-collinear, which the plane fallback needs.
PathPoint path_at(const ScenarioConfig& cfg, double time) {
    PathPoint p;
    switch (cfg.subject) {
        case Subject::Walker: {
            const double radius = 3.5;
            const double speed = 1.2;
            const double angle = speed / radius * time;
            p.position = Vec3(radius * std::sin(angle), kGroundY, radius * std::cos(angle));
            p.heading = angle; // tangent of the arc
            break;
        }
        case Subject::Skater: {
            // Straight glide: large root displacement, frozen local pose.
            const double speed = 2.0;
            p.position = Vec3(-4.0 + speed * time, kGroundY, 1.0);
            p.heading = M_PI / 2.0;
            break;
        }
        case Subject::Stationary:
        case Subject::Handstand:
            p.position = Vec3(0.0, kGroundY, 2.0);
            p.heading = 0.0;
            break;
    }
    return p;
}

Eigen::Matrix3d heading_matrix(double heading) {
    return Eigen::AngleAxisd(heading, Vec3::UnitY()).toRotationMatrix();
}

/// Stance anchor of one foot for gait step k: the path point at the step's
/// midpoint plus the foot's lateral offset.
Vec3 foot_anchor(const ScenarioConfig& cfg, int foot, long long step) {
    const double t_mid = (static_cast<double>(step) + 0.5) * kStepDuration;
    const PathPoint base = path_at(cfg, t_mid);
    const Vec3& local = standing_template()[static_cast<std::size_t>(foot)];
    Vec3 anchor = base.position + heading_matrix(base.heading) * Vec3(local.x(), 0.0, local.z());
    anchor.y() = kGroundY;
    return anchor;
}

double smoothstep(double u) {
    return u * u * (3.0 - 2.0 * u);
}

struct SubjectFrame {
    std::array<Vec3, kJointCount> joints{}; // world, untilted frame
    Vec3 root_orient = Vec3::Zero();        // axis-angle, world
    Vec3 root_trans = Vec3::Zero();         // pelvis, world
};

SubjectFrame subject_at(const ScenarioConfig& cfg, double time) {
    const PathPoint base = path_at(cfg, time);
    const Eigen::Matrix3d rot = heading_matrix(base.heading);
    const auto& tmpl = cfg.subject == Subject::Handstand ? handstand_template()
                                                         : standing_template();

    SubjectFrame frame;
    for (int j = 0; j < kJointCount; ++j)
        frame.joints[static_cast<std::size_t>(j)] =
            base.position + rot * tmpl[static_cast<std::size_t>(j)];

    if (cfg.subject == Subject::Walker) {
        // Alternating gait: even steps plant the left foot, odd the right.
        const long long step = static_cast<long long>(std::floor(time / kStepDuration));
        const double u = time / kStepDuration - static_cast<double>(step);
        const bool left_stance = (step % 2 + 2) % 2 == 0;
        const int stance = left_stance ? kLeftFoot : kRightFoot;
        const int swing = left_stance ? kRightFoot : kLeftFoot;

        frame.joints[static_cast<std::size_t>(stance)] = foot_anchor(cfg, stance, step);
        const Vec3 from = foot_anchor(cfg, swing, step - 1);
        const Vec3 to = foot_anchor(cfg, swing, step + 1);
        Vec3 swing_pos = from + smoothstep(u) * (to - from);
        swing_pos.y() = kGroundY - kFootLift * std::sin(M_PI * u);
        frame.joints[static_cast<std::size_t>(swing)] = swing_pos;

        // Ankles ride on their feet.
        const auto follow = [&](int ankle, int foot) {
            const Vec3 offset = rot * (tmpl[static_cast<std::size_t>(ankle)] -
                                       tmpl[static_cast<std::size_t>(foot)]);
            frame.joints[static_cast<std::size_t>(ankle)] =
                frame.joints[static_cast<std::size_t>(foot)] + offset;
        };
        follow(kLeftAnkle, kLeftFoot);
        follow(kRightAnkle, kRightFoot);
    }

    frame.root_orient = Eigen::AngleAxisd(rot).angle() * Eigen::AngleAxisd(rot).axis();
    frame.root_trans = frame.joints[0];
    return frame;
}

struct CameraSpec {
    Vec3 eye = Vec3::Zero();
    Vec3 target = Vec3::Zero();
};

CameraSpec camera_at(const ScenarioConfig& cfg, double time) {
    const PathPoint base = path_at(cfg, time);
    CameraSpec cam;
    switch (cfg.camera_path) {
        case CameraPath::Orbit: {
            const double angle = 0.7 + 0.18 * time;
            cam.eye = Vec3(6.5 * std::sin(angle), kGroundY - 1.55, 6.5 * std::cos(angle));
            cam.target = base.position + Vec3(0.0, -0.85, 0.0);
            break;
        }
        case CameraPath::Follow: {
            const Vec3 forward = heading_matrix(base.heading) * Vec3::UnitZ();
            cam.eye = base.position - 3.2 * forward + Vec3(0.0, -(1.55), 0.0);
            cam.target = base.position + Vec3(0.0, -0.95, 0.0);
            break;
        }
        case CameraPath::Static: {
            cam.eye = Vec3(5.5, kGroundY - 1.6, 5.5);
            cam.target = Vec3(0.0, kGroundY - 0.9, 1.5);
            break;
        }
    }
    return cam;
}

/// World-to-camera rotation with the view axis on z and camera y near world
/// down (+y).
Rotation look_at_rotation(const Vec3& eye, const Vec3& target) {
    const Vec3 z = (target - eye).normalized();
    Vec3 down = Vec3::UnitY();
    if (std::abs(down.dot(z)) > 0.99)
        down = Vec3::UnitX();
    const Vec3 x = down.cross(z).normalized();
    const Vec3 y = z.cross(x);
    Eigen::Matrix3d world_to_cam;
    world_to_cam.row(0) = x.transpose();
    world_to_cam.row(1) = y.transpose();
    world_to_cam.row(2) = z.transpose();
    return Rotation::from_matrix(world_to_cam);
}

Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vec3 v;
    do {
        v = Vec3(gauss(rng), gauss(rng), gauss(rng));
    } while (v.norm() < 1e-6);
    return v.normalized();
}

} // namespace

void ScenarioConfig::validate() const {
    if (n_frames < 3)
        throw std::invalid_argument("ScenarioConfig: n_frames must be >= 3");
    if (!(true_scale > 0.0))
        throw std::invalid_argument("ScenarioConfig: true_scale must be > 0");
    if (cloud_points_ground < 0 || cloud_points_walls < 0)
        throw std::invalid_argument("ScenarioConfig: negative cloud point count");
    if (!(crop_radius > 0.0))
        throw std::invalid_argument("ScenarioConfig: crop_radius must be > 0");
    if (!(hmr_depth_bias > 0.0))
        throw std::invalid_argument("ScenarioConfig: hmr_depth_bias must be > 0");
    if (hmr_jitter_sigma_m < 0.0 || slam_rotation_noise_rad < 0.0 ||
        slam_translation_noise_m < 0.0)
        throw std::invalid_argument("ScenarioConfig: negative noise level");
}

Scenario generate_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const Eigen::Matrix3d tilt =
        Eigen::AngleAxisd(cfg.ground_tilt_deg * M_PI / 180.0, Vec3::UnitZ()).toRotationMatrix();
    const double inv_scale = 1.0 / cfg.true_scale;

    Scenario sc;
    sc.true_scale = cfg.true_scale;

    // Ground-truth subject and cameras (untilted frame first).
    std::vector<SubjectFrame> subjects(static_cast<std::size_t>(cfg.n_frames));
    std::vector<CameraSpec> cameras(static_cast<std::size_t>(cfg.n_frames));
    for (int k = 0; k < cfg.n_frames; ++k) {
        const double t = static_cast<double>(k) / kFps;
        subjects[static_cast<std::size_t>(k)] = subject_at(cfg, t);
        cameras[static_cast<std::size_t>(k)] = camera_at(cfg, t);
    }

    // Contacts: every joint resting exactly on the ground. These drive both
    // the cloud anchor points and the egocentric crop.
    std::vector<Vec3> contact_points;
    for (const SubjectFrame& s : subjects)
        for (const Vec3& j : s.joints)
            if (std::abs(j.y() - kGroundY) < 1e-12)
                contact_points.push_back(j);

    // Metric cloud: ground sheet, two walls, plus the contact anchors.
    std::vector<Vec3> metric_cloud;
    metric_cloud.reserve(static_cast<std::size_t>(cfg.cloud_points_ground + cfg.cloud_points_walls) +
                         contact_points.size());
    for (int i = 0; i < cfg.cloud_points_ground; ++i)
        metric_cloud.emplace_back(8.5 * uniform(rng), kGroundY, 8.5 * uniform(rng));
    for (int i = 0; i < cfg.cloud_points_walls; ++i) {
        const double along = 8.5 * uniform(rng);
        const double height = 0.5 + 1.05 * (uniform(rng) + 1.0); // 0.5 .. 2.6 m above ground
        if (i % 2 == 0)
            metric_cloud.emplace_back(-8.5, kGroundY - height, along);
        else
            metric_cloud.emplace_back(along, kGroundY - height, 8.5);
    }
    if (!cfg.crop_contacts)
        metric_cloud.insert(metric_cloud.end(), contact_points.begin(), contact_points.end());

    if (cfg.crop_contacts) {
        const double r2 = cfg.crop_radius * cfg.crop_radius;
        std::erase_if(metric_cloud, [&](const Vec3& p) {
            for (const Vec3& c : contact_points)
                if ((p - c).squaredNorm() <= r2)
                    return true;
            return false;
        });
    }

    // Trajectories: exact metric extrinsics, then the de-scaled noisy copy.
    sc.gt_trajectory.scale_status = ScaleStatus::Metric;
    sc.slam_trajectory.scale_status = ScaleStatus::UnknownScale;
    for (int k = 0; k < cfg.n_frames; ++k) {
        const double t = static_cast<double>(k) / kFps;
        const CameraSpec& cam = cameras[static_cast<std::size_t>(k)];
        const Vec3 eye = tilt * cam.eye;
        const Vec3 target = tilt * cam.target;
        const Rotation rot = look_at_rotation(eye, target);

        CameraPose gt_pose;
        gt_pose.timestamp = t;
        gt_pose.rotation = rot;
        gt_pose.translation = -(rot * eye);
        sc.gt_trajectory.poses.push_back(gt_pose);

        CameraPose slam_pose = gt_pose;
        if (cfg.slam_rotation_noise_rad > 0.0) {
            const Vec3 axis = random_unit(rng);
            const double angle = cfg.slam_rotation_noise_rad * gauss(rng);
            slam_pose.rotation = Rotation::about_axis(axis, angle) * gt_pose.rotation;
        }
        Vec3 trans = gt_pose.translation;
        if (cfg.slam_translation_noise_m > 0.0)
            trans += cfg.slam_translation_noise_m * Vec3(gauss(rng), gauss(rng), gauss(rng));
        slam_pose.translation = inv_scale * trans;
        sc.slam_trajectory.poses.push_back(slam_pose);
    }

    // Human streams: exact world ground truth, biased/jittered camera frames.
    sc.gt_motion.scale_used = 1.0;
    for (int k = 0; k < cfg.n_frames; ++k) {
        const double t = static_cast<double>(k) / kFps;
        const SubjectFrame& subject = subjects[static_cast<std::size_t>(k)];
        const CameraPose& gt_pose = sc.gt_trajectory.poses[static_cast<std::size_t>(k)];

        GlobalFrame gt_frame;
        gt_frame.timestamp = t;
        const Eigen::Matrix3d orient_world =
            tilt * Rotation::from_axis_angle(subject.root_orient).matrix();
        gt_frame.root_orient_world = Rotation::from_matrix(orient_world).to_axis_angle();
        gt_frame.root_trans_world = tilt * subject.root_trans;
        for (int j = 0; j < kJointCount; ++j)
            gt_frame.joints_world[static_cast<std::size_t>(j)] =
                tilt * subject.joints[static_cast<std::size_t>(j)];
        gt_frame.pose_params.resize(69);
        for (std::size_t i = 0; i < gt_frame.pose_params.size(); ++i)
            gt_frame.pose_params[i] = 0.01 * std::sin(0.1 * t + static_cast<double>(i));
        gt_frame.shape_params = {0.2, -0.1, 0.05, 0.0, 0.01, -0.02, 0.0, 0.03, 0.0, -0.01};

        HumanFrame hmr;
        hmr.timestamp = t;
        const auto [psi, tau] = world_to_camera_root(gt_frame.root_orient_world,
                                                     gt_frame.root_trans_world, gt_pose);
        hmr.root_orient = psi;
        hmr.root_trans = cfg.hmr_depth_bias * tau;
        for (int j = 0; j < kJointCount; ++j) {
            const Vec3 cam_joint = gt_pose.rotation * gt_frame.joints_world[static_cast<std::size_t>(j)] +
                                   gt_pose.translation;
            Vec3 measured = cfg.hmr_depth_bias * cam_joint;
            if (cfg.hmr_jitter_sigma_m > 0.0)
                measured += cfg.hmr_jitter_sigma_m * Vec3(gauss(rng), gauss(rng), gauss(rng));
            hmr.joints[static_cast<std::size_t>(j)] = measured;
        }
        hmr.pose_params = gt_frame.pose_params;
        hmr.shape_params = gt_frame.shape_params;

        sc.gt_motion.frames.push_back(std::move(gt_frame));
        sc.hmr_motion.frames.push_back(std::move(hmr));
    }

    sc.slam_cloud.points.reserve(metric_cloud.size());
    for (const Vec3& p : metric_cloud)
        sc.slam_cloud.points.push_back(inv_scale * (tilt * p));

    // Ground plane in gauge units, camera side negative (normal points from
    // the cameras through the ground).
    const Vec3 ground_normal_down = tilt * Vec3::UnitY();
    const Vec3 ground_point = inv_scale * (tilt * Vec3(0.0, kGroundY, 0.0));
    sc.true_plane.normal = ground_normal_down;
    sc.true_plane.offset = -ground_normal_down.dot(ground_point);

    return sc;
}

double oracle_per_frame_scale(const Scenario& scenario, std::size_t frame) {
    const HumanFrame& hf = scenario.hmr_motion.frames.at(frame);
    const CameraPose& pose = scenario.slam_trajectory.poses.at(frame);

    int contact = 0;
    for (int j = 1; j < kJointCount; ++j)
        if (hf.joints[static_cast<std::size_t>(j)].y() >
            hf.joints[static_cast<std::size_t>(contact)].y())
            contact = j;

    const Vec3 joint_cam = hf.joints[static_cast<std::size_t>(contact)];
    const double d_abs = joint_cam.norm();

    const Eigen::Matrix3d r = pose.rotation.matrix();
    const Vec3 origin = r.transpose() * (-pose.translation);
    const Vec3 joint_world = r.transpose() * (joint_cam - pose.translation);
    const Vec3 dir = (joint_world - origin).normalized();

    double best_perp = std::numeric_limits<double>::infinity();
    double best_depth = 0.0;
    for (const Vec3& p : scenario.slam_cloud.points) {
        const Vec3 w = p - origin;
        const double along = w.dot(dir);
        if (along <= 0.0)
            continue;
        const double perp = (w - along * dir).norm();
        if (perp < best_perp) {
            best_perp = perp;
            best_depth = w.norm();
        }
    }
    if (!std::isfinite(best_perp))
        throw std::runtime_error("oracle_per_frame_scale: no cloud point in front of camera");
    return d_abs / best_depth;
}

Preset preset_from_string(const std::string& name) {
    if (name == "walker") return Preset::Walker;
    if (name == "skater") return Preset::Skater;
    if (name == "stationary") return Preset::Stationary;
    if (name == "handstand") return Preset::Handstand;
    if (name == "egocentric") return Preset::Egocentric;
    throw std::invalid_argument("unknown preset: " + name);
}

std::string to_string(Preset preset) {
    switch (preset) {
        case Preset::Walker: return "walker";
        case Preset::Skater: return "skater";
        case Preset::Stationary: return "stationary";
        case Preset::Handstand: return "handstand";
        case Preset::Egocentric: return "egocentric";
    }
    return "walker";
}

ScenarioConfig preset_config(Preset preset, int n_frames, double true_scale,
                             std::uint64_t seed) {
    ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.n_frames = n_frames;
    cfg.true_scale = true_scale;
    switch (preset) {
        case Preset::Walker:
            cfg.subject = Subject::Walker;
            cfg.camera_path = CameraPath::Orbit;
            break;
        case Preset::Skater:
            cfg.subject = Subject::Skater;
            cfg.camera_path = CameraPath::Orbit;
            break;
        case Preset::Stationary:
            cfg.subject = Subject::Stationary;
            cfg.camera_path = CameraPath::Orbit;
            break;
        case Preset::Handstand:
            cfg.subject = Subject::Handstand;
            cfg.camera_path = CameraPath::Orbit;
            break;
        case Preset::Egocentric:
            cfg.subject = Subject::Walker;
            cfg.camera_path = CameraPath::Follow;
            cfg.crop_contacts = true;
            break;
    }
    return cfg;
}

void export_scenario(const Scenario& scenario, const ScenarioConfig& cfg,
                     const std::string& preset_name, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    io::write_tum_trajectory(scenario.slam_trajectory, dir / "slam_trajectory.tum");
    io::write_ply_cloud(scenario.slam_cloud, dir / "slam_cloud.ply");
    io::write_joints_jsonl(scenario.hmr_motion, dir / "hmr_joints.jsonl");
    io::write_tum_trajectory(scenario.gt_trajectory, dir / "gt_trajectory.tum");
    io::write_global_motion_jsonl(scenario.gt_motion, dir / "gt_motion.jsonl");

    io::Manifest manifest;
    manifest.slam_trajectory = dir / "slam_trajectory.tum";
    manifest.slam_cloud = dir / "slam_cloud.ply";
    manifest.hmr_joints = dir / "hmr_joints.jsonl";
    manifest.gt_trajectory = dir / "gt_trajectory.tum";
    manifest.gt_motion = dir / "gt_motion.jsonl";
    manifest.true_scale = scenario.true_scale;
    manifest.seed = cfg.seed;
    manifest.preset = preset_name;
    manifest.n_frames = cfg.n_frames;
    io::write_manifest(manifest, dir / "manifest.json");
}

} // namespace scalecal::synth
