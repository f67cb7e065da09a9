#include "scalecal/errors.hpp"
#include "scalecal/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace scalecal::io {

PointCloud read_ply_cloud(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open PLY file: " + path.string());

    std::string line;
    std::size_t line_no = 0;
    const auto next_line = [&]() -> bool {
        if (!std::getline(in, line))
            return false;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        return true;
    };

    if (!next_line() || line != "ply")
        throw ParseError(path.string(), line_no, "missing 'ply' magic");

    std::size_t vertex_count = 0;
    bool in_vertex_element = false;
    bool saw_format = false;
    int x_idx = -1, y_idx = -1, z_idx = -1;
    int property_idx = 0;

    while (true) {
        if (!next_line())
            throw ParseError(path.string(), line_no, "unexpected end of header");
        if (line == "end_header")
            break;
        std::istringstream fields(line);
        std::string keyword;
        fields >> keyword;
        if (keyword == "comment" || keyword == "obj_info" || keyword.empty())
            continue;
        if (keyword == "format") {
            std::string kind;
            fields >> kind;
            if (kind != "ascii")
                throw UnsupportedFormat("binary PLY is not supported: " + path.string());
            saw_format = true;
        } else if (keyword == "element") {
            std::string name;
            std::size_t count = 0;
            if (!(fields >> name >> count))
                throw ParseError(path.string(), line_no, "malformed element line");
            in_vertex_element = name == "vertex";
            if (in_vertex_element) {
                vertex_count = count;
                property_idx = 0;
            }
        } else if (keyword == "property" && in_vertex_element) {
            std::string type, name;
            if (!(fields >> type >> name))
                throw ParseError(path.string(), line_no, "malformed property line");
            if (type == "list")
                throw ParseError(path.string(), line_no,
                                 "list property not supported on vertex element");
            if (name == "x") x_idx = property_idx;
            if (name == "y") y_idx = property_idx;
            if (name == "z") z_idx = property_idx;
            ++property_idx;
        }
    }
    if (!saw_format)
        throw ParseError(path.string(), line_no, "missing format line");
    if (x_idx < 0 || y_idx < 0 || z_idx < 0)
        throw ParseError(path.string(), line_no, "vertex element lacks x/y/z properties");

    PointCloud cloud;
    cloud.points.reserve(vertex_count);
    for (std::size_t v = 0; v < vertex_count; ++v) {
        if (!next_line())
            throw ParseError(path.string(), line_no + 1, "fewer vertex lines than declared");
        std::istringstream fields(line);
        std::vector<double> values;
        double value = 0.0;
        while (fields >> value)
            values.push_back(value);
        const int needed = std::max({x_idx, y_idx, z_idx}) + 1;
        if (static_cast<int>(values.size()) < needed)
            throw ParseError(path.string(), line_no, "vertex line has too few values");
        cloud.points.emplace_back(values[static_cast<std::size_t>(x_idx)],
                                  values[static_cast<std::size_t>(y_idx)],
                                  values[static_cast<std::size_t>(z_idx)]);
        if (!cloud.points.back().allFinite())
            throw ParseError(path.string(), line_no, "non-finite vertex");
    }
    return cloud;
}

void write_ply_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write PLY file: " + path.string());
    out << "ply\nformat ascii 1.0\nelement vertex " << cloud.size()
        << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
    char buf[96];
    for (const Vec3& p : cloud.points) {
        std::snprintf(buf, sizeof(buf), "%.6f %.6f %.6f\n", p.x(), p.y(), p.z());
        out << buf;
    }
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

} // namespace scalecal::io
