#include "scalecal/errors.hpp"
#include "scalecal/io.hpp"

#include <json.hpp>

#include <fstream>

namespace scalecal::io {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json vec3_to_json(const Vec3& v) {
    return ordered_json::array({v.x(), v.y(), v.z()});
}

Vec3 vec3_from_json(const ordered_json& j, const std::string& file, std::size_t line,
                    const char* key) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number())
        throw SchemaError(file, line, std::string(key) + " must be an array of 3 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

struct FrameFields {
    double t = 0.0;
    std::array<Vec3, kJointCount> joints{};
    Vec3 orient = Vec3::Zero();
    Vec3 trans = Vec3::Zero();
    std::vector<double> theta;
    std::vector<double> beta;
};

FrameFields parse_frame_line(const std::string& line, const std::string& file,
                             std::size_t line_no) {
    ordered_json j;
    try {
        j = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(file, line_no, e.what());
    }
    if (!j.is_object())
        throw SchemaError(file, line_no, "frame line is not a JSON object");

    FrameFields f;
    if (!j.contains("t") || !j["t"].is_number())
        throw SchemaError(file, line_no, "missing numeric 't'");
    f.t = j["t"].get<double>();

    if (!j.contains("joints") || !j["joints"].is_array())
        throw SchemaError(file, line_no, "missing 'joints' array");
    const auto& joints = j["joints"];
    if (joints.size() != kJointCount)
        throw SchemaError(file, line_no,
                          "expected " + std::to_string(kJointCount) + " joints, got " +
                              std::to_string(joints.size()));
    for (std::size_t i = 0; i < kJointCount; ++i)
        f.joints[i] = vec3_from_json(joints[i], file, line_no, "joint");

    if (!j.contains("root_orient") || !j.contains("root_trans"))
        throw SchemaError(file, line_no, "missing root_orient/root_trans");
    f.orient = vec3_from_json(j["root_orient"], file, line_no, "root_orient");
    f.trans = vec3_from_json(j["root_trans"], file, line_no, "root_trans");

    if (j.contains("theta")) {
        if (!j["theta"].is_array())
            throw SchemaError(file, line_no, "theta must be an array");
        f.theta = j["theta"].get<std::vector<double>>();
    }
    if (j.contains("beta")) {
        if (!j["beta"].is_array())
            throw SchemaError(file, line_no, "beta must be an array");
        f.beta = j["beta"].get<std::vector<double>>();
    }
    return f;
}

ordered_json frame_line_json(double t, const std::array<Vec3, kJointCount>& joints,
                             const Vec3& orient, const Vec3& trans,
                             const std::vector<double>& theta,
                             const std::vector<double>& beta) {
    ordered_json j;
    j["t"] = t;
    ordered_json joint_rows = ordered_json::array();
    for (const Vec3& v : joints)
        joint_rows.push_back(vec3_to_json(v));
    j["joints"] = std::move(joint_rows);
    j["root_orient"] = vec3_to_json(orient);
    j["root_trans"] = vec3_to_json(trans);
    if (!theta.empty())
        j["theta"] = theta;
    if (!beta.empty())
        j["beta"] = beta;
    return j;
}

template <typename PerLine>
void for_each_data_line(const std::filesystem::path& path, PerLine&& per_line) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open motion file: " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        per_line(line, line_no);
    }
}

} // namespace

MotionSequence read_joints_jsonl(const std::filesystem::path& path) {
    MotionSequence motion;
    for_each_data_line(path, [&](const std::string& line, std::size_t line_no) {
        const FrameFields f = parse_frame_line(line, path.string(), line_no);
        HumanFrame frame;
        frame.timestamp = f.t;
        frame.joints = f.joints;
        frame.root_orient = f.orient;
        frame.root_trans = f.trans;
        frame.pose_params = f.theta;
        frame.shape_params = f.beta;
        motion.frames.push_back(std::move(frame));
    });
    motion.validate();
    return motion;
}

void write_joints_jsonl(const MotionSequence& motion, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write motion file: " + path.string());
    for (const HumanFrame& f : motion.frames)
        out << frame_line_json(f.timestamp, f.joints, f.root_orient, f.root_trans,
                               f.pose_params, f.shape_params).dump()
            << '\n';
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

GlobalMotion read_global_motion_jsonl(const std::filesystem::path& path) {
    GlobalMotion motion;
    for_each_data_line(path, [&](const std::string& line, std::size_t line_no) {
        const FrameFields f = parse_frame_line(line, path.string(), line_no);
        GlobalFrame frame;
        frame.timestamp = f.t;
        frame.joints_world = f.joints;
        frame.root_orient_world = f.orient;
        frame.root_trans_world = f.trans;
        frame.pose_params = f.theta;
        frame.shape_params = f.beta;
        motion.frames.push_back(std::move(frame));
    });
    motion.validate();
    return motion;
}

void write_global_motion_jsonl(const GlobalMotion& motion, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write motion file: " + path.string());
    for (const GlobalFrame& f : motion.frames)
        out << frame_line_json(f.timestamp, f.joints_world, f.root_orient_world,
                               f.root_trans_world, f.pose_params, f.shape_params).dump()
            << '\n';
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

} // namespace scalecal::io
