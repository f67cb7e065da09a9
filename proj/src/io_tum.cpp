#include "scalecal/errors.hpp"
#include "scalecal/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace scalecal::io {

namespace {

std::string fmt_component(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_timestamp(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    return buf;
}

} // namespace

Trajectory read_tum_trajectory(const std::filesystem::path& path, ScaleStatus status) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open trajectory file: " + path.string());

    Trajectory trajectory;
    trajectory.scale_status = status;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;

        std::istringstream fields(line);
        double values[8];
        for (int i = 0; i < 8; ++i)
            if (!(fields >> values[i]))
                throw ParseError(path.string(), line_no,
                                 "expected 8 fields (timestamp tx ty tz qx qy qz qw)");
        std::string extra;
        if (fields >> extra)
            throw ParseError(path.string(), line_no, "trailing fields after qw");

        const Eigen::Quaterniond q(values[7], values[4], values[5], values[6]); // w,x,y,z
        const double norm = q.norm();
        if (norm < 0.9 || norm > 1.1)
            throw QuaternionNormError(path.string(), line_no,
                                      "quaternion norm " + std::to_string(norm) +
                                          " outside [0.9, 1.1]");

        // File stores camera-to-world; extrinsics are the inverse.
        const Eigen::Matrix3d cam_to_world = q.normalized().toRotationMatrix();
        CameraPose pose;
        pose.timestamp = values[0];
        pose.rotation = Rotation::from_matrix(cam_to_world.transpose());
        pose.translation = -(pose.rotation * Vec3(values[1], values[2], values[3]));
        trajectory.poses.push_back(pose);
    }
    trajectory.validate();
    return trajectory;
}

void write_tum_trajectory(const Trajectory& trajectory, const std::filesystem::path& path) {
    trajectory.validate();
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write trajectory file: " + path.string());
    out << "# timestamp tx ty tz qx qy qz qw (camera-to-world)\n";
    for (const CameraPose& pose : trajectory.poses) {
        const Vec3 center = camera_center(pose);
        const Eigen::Quaterniond q = pose.rotation.transposed().quaternion();
        out << fmt_timestamp(pose.timestamp) << ' ' << fmt_component(center.x()) << ' '
            << fmt_component(center.y()) << ' ' << fmt_component(center.z()) << ' '
            << fmt_component(q.x()) << ' ' << fmt_component(q.y()) << ' '
            << fmt_component(q.z()) << ' ' << fmt_component(q.w()) << '\n';
    }
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

} // namespace scalecal::io
