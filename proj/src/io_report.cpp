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

Vec3 vec3_from_json(const ordered_json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

RejectReason reason_from_string(const std::string& s) {
    for (RejectReason r : {RejectReason::NoIntersection, RejectReason::ParallelRay,
                           RejectReason::BehindCamera, RejectReason::TooClose,
                           RejectReason::InvalidJoint})
        if (to_string(r) == s)
            return r;
    throw std::runtime_error("unknown rejection reason: " + s);
}

ordered_json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open JSON file: " + path.string());
    try {
        return ordered_json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string(), 0, e.what());
    }
}

void write_json_file(const ordered_json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write JSON file: " + path.string());
    out << j.dump(2) << '\n';
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

} // namespace

Manifest read_manifest(const std::filesystem::path& path) {
    const ordered_json j = read_json_file(path);
    const std::filesystem::path dir = path.parent_path();

    Manifest m;
    m.format_version = j.at("format_version").get<std::string>();
    const auto& files = j.at("files");
    const auto resolve = [&](const char* key) -> std::filesystem::path {
        if (!files.contains(key))
            return {};
        return dir / files.at(key).get<std::string>();
    };
    m.slam_trajectory = resolve("slam_trajectory");
    m.slam_cloud = resolve("slam_cloud");
    m.hmr_joints = resolve("hmr_joints");
    m.gt_trajectory = resolve("gt_trajectory");
    m.gt_motion = resolve("gt_motion");
    if (j.contains("true_scale"))
        m.true_scale = j["true_scale"].get<double>();
    if (j.contains("seed"))
        m.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("preset"))
        m.preset = j["preset"].get<std::string>();
    if (j.contains("n_frames"))
        m.n_frames = j["n_frames"].get<int>();

    for (const auto& file : {m.slam_trajectory, m.slam_cloud, m.hmr_joints,
                             m.gt_trajectory, m.gt_motion})
        if (!file.empty() && !std::filesystem::exists(file))
            throw std::runtime_error("manifest references missing file: " + file.string());
    return m;
}

void write_manifest(const Manifest& m, const std::filesystem::path& path) {
    ordered_json j;
    j["format_version"] = m.format_version;
    ordered_json files;
    const auto put = [&](const char* key, const std::filesystem::path& p) {
        if (!p.empty())
            files[key] = p.filename().string();
    };
    put("slam_trajectory", m.slam_trajectory);
    put("slam_cloud", m.slam_cloud);
    put("hmr_joints", m.hmr_joints);
    put("gt_trajectory", m.gt_trajectory);
    put("gt_motion", m.gt_motion);
    j["files"] = std::move(files);
    if (m.true_scale > 0.0)
        j["true_scale"] = m.true_scale;
    j["seed"] = m.seed;
    if (!m.preset.empty())
        j["preset"] = m.preset;
    if (m.n_frames > 0)
        j["n_frames"] = m.n_frames;
    write_json_file(j, path);
}

void write_report_json(const CalibrationResult& result,
                       const std::optional<MetricReport>& metrics,
                       const std::filesystem::path& path) {
    ordered_json j;
    j["sequence_scale"] = result.sequence_scale;
    j["scale_stddev"] = result.scale_stddev;
    j["accepted_frames"] = result.per_frame.size();

    ordered_json rejected = ordered_json::array();
    for (const FrameRejection& r : result.rejected_frames)
        rejected.push_back({{"frame", r.frame_index}, {"reason", std::string(to_string(r.reason))}});
    j["rejected_frames"] = std::move(rejected);

    if (result.plane) {
        j["plane"] = {{"normal", vec3_to_json(result.plane->normal)},
                      {"offset", result.plane->offset}};
        if (result.plane_contact_rms)
            j["plane_contact_rms"] = *result.plane_contact_rms;
    } else {
        j["plane"] = nullptr;
    }

    ordered_json per_frame = ordered_json::array();
    for (const FrameScale& fs : result.per_frame) {
        per_frame.push_back(
            {{"frame", fs.frame_index},
             {"scale", fs.scale},
             {"reference_kind",
              fs.reference_kind == ReferenceKind::CloudIntersection ? "cloud" : "plane"},
             {"reference_point", vec3_to_json(fs.reference_point)},
             {"relative_depth", fs.relative_depth},
             {"absolute_depth", fs.absolute_depth},
             {"contact_joint", fs.contact.joint_index}});
    }
    j["per_frame"] = std::move(per_frame);

    if (metrics) {
        ordered_json m;
        m["w_mpjpe_mm"] = metrics->w_mpjpe_mm;
        m["wa_mpjpe_mm"] = metrics->wa_mpjpe_mm;
        m["pa_mpjpe_mm"] = metrics->pa_mpjpe_mm;
        m["rte_percent"] = metrics->rte_percent;
        m["ate_m"] = metrics->ate_m;
        m["ate_s_m"] = metrics->ate_s_m;
        m["segment_count"] = metrics->segment_count;
        ordered_json segs = ordered_json::array();
        for (const SegmentMetrics& s : metrics->per_segment)
            segs.push_back({{"begin", s.begin},
                            {"end", s.end},
                            {"w_mpjpe_mm", s.w_mpjpe_mm},
                            {"wa_mpjpe_mm", s.wa_mpjpe_mm}});
        m["per_segment"] = std::move(segs);
        j["metrics"] = std::move(m);
    } else {
        j["metrics"] = nullptr;
    }
    write_json_file(j, path);
}

ReportData read_report_json(const std::filesystem::path& path) {
    const ordered_json j = read_json_file(path);
    ReportData data;
    CalibrationResult& r = data.calibration;
    r.sequence_scale = j.at("sequence_scale").get<double>();
    r.scale_stddev = j.at("scale_stddev").get<double>();
    for (const auto& row : j.at("rejected_frames"))
        r.rejected_frames.push_back({row.at("frame").get<std::size_t>(),
                                     reason_from_string(row.at("reason").get<std::string>())});
    if (!j.at("plane").is_null()) {
        Plane plane;
        plane.normal = vec3_from_json(j["plane"].at("normal"));
        plane.offset = j["plane"].at("offset").get<double>();
        r.plane = plane;
        if (j.contains("plane_contact_rms"))
            r.plane_contact_rms = j["plane_contact_rms"].get<double>();
    }
    for (const auto& row : j.at("per_frame")) {
        FrameScale fs;
        fs.frame_index = row.at("frame").get<std::size_t>();
        fs.scale = row.at("scale").get<double>();
        fs.reference_kind = row.at("reference_kind").get<std::string>() == "cloud"
                                ? ReferenceKind::CloudIntersection
                                : ReferenceKind::PlaneIntersection;
        fs.reference_point = vec3_from_json(row.at("reference_point"));
        fs.relative_depth = row.at("relative_depth").get<double>();
        fs.absolute_depth = row.at("absolute_depth").get<double>();
        fs.contact.joint_index = row.at("contact_joint").get<int>();
        r.per_frame.push_back(fs);
    }
    if (!j.at("metrics").is_null()) {
        const auto& m = j["metrics"];
        MetricReport report;
        report.w_mpjpe_mm = m.at("w_mpjpe_mm").get<double>();
        report.wa_mpjpe_mm = m.at("wa_mpjpe_mm").get<double>();
        report.pa_mpjpe_mm = m.at("pa_mpjpe_mm").get<double>();
        report.rte_percent = m.at("rte_percent").get<double>();
        report.ate_m = m.at("ate_m").get<double>();
        report.ate_s_m = m.at("ate_s_m").get<double>();
        report.segment_count = m.at("segment_count").get<std::size_t>();
        for (const auto& s : m.at("per_segment"))
            report.per_segment.push_back({s.at("begin").get<std::size_t>(),
                                          s.at("end").get<std::size_t>(),
                                          s.at("w_mpjpe_mm").get<double>(),
                                          s.at("wa_mpjpe_mm").get<double>()});
        data.metrics = std::move(report);
    }
    return data;
}

} // namespace scalecal::io
