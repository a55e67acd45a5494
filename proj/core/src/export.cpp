#include "archmark/export.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "archmark/error.hpp"

namespace archmark {

ExportFormat parse_export_format(std::string_view text)
{
    if (text == "ply")
        return ExportFormat::ply;
    if (text == "json")
        return ExportFormat::json;
    throw Error(ErrorKind::invalid_input, "unknown export format '" + std::string(text) + "'");
}

std::array<std::uint8_t, 3> label_color(std::string_view code)
{
    // Hue from a hash of the code, full saturation.
    std::uint32_t h = 2166136261u;
    for (char c : code) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 16777619u;
    }
    const double hue = static_cast<double>(h % 360u);
    const double x = 1.0 - std::abs(std::fmod(hue / 60.0, 2.0) - 1.0);
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(hue / 60.0)) {
    case 0: r = 1; g = x; break;
    case 1: r = x; g = 1; break;
    case 2: g = 1; b = x; break;
    case 3: g = x; b = 1; break;
    case 4: r = x; b = 1; break;
    default: r = 1; b = x; break;
    }
    auto byte = [](double v) { return static_cast<std::uint8_t>(40 + std::lround(v * 215.0)); };
    return {byte(r), byte(g), byte(b)};
}

namespace {

void put_f32(std::vector<std::uint8_t>& out, double v)
{
    const float f = static_cast<float>(v);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    for (int k = 0; k < 4; ++k)
        out.push_back(static_cast<std::uint8_t>(u >> (8 * k)));
}

void put_i32(std::vector<std::uint8_t>& out, std::int32_t v)
{
    const auto u = static_cast<std::uint32_t>(v);
    for (int k = 0; k < 4; ++k)
        out.push_back(static_cast<std::uint8_t>(u >> (8 * k)));
}

std::array<std::uint8_t, 3> landmark_color(LandmarkKind kind)
{
    switch (kind) {
    case LandmarkKind::incisor_midpoint: return {255, 255, 255};
    case LandmarkKind::canine_tip: return {255, 220, 0};
    case LandmarkKind::buccal_cusp: return {255, 0, 0};
    }
    return {255, 0, 0};
}

} // namespace

std::vector<std::uint8_t> export_ply(const IndexedMesh& mesh, const std::vector<LabeledTooth>& teeth,
                                     const LandmarkReport& report)
{
    std::vector<std::array<std::uint8_t, 3>> colors(mesh.vertex_count(), kUnlabeledColor);
    for (const auto& tooth : teeth) {
        const auto c = label_color(tooth.type.code);
        for (FaceIndex f : tooth.faces)
            for (VertexIndex v : mesh.faces()[static_cast<std::size_t>(f)])
                colors[static_cast<std::size_t>(v)] = c;
    }
    std::size_t landmark_count = 0;
    for (const auto& t : report.teeth)
        landmark_count += t.landmarks.size();

    const std::string header = "ply\nformat binary_little_endian 1.0\ncomment archmark annotated model\n"
                               "element vertex " +
                               std::to_string(mesh.vertex_count() + landmark_count) +
                               "\nproperty float x\nproperty float y\nproperty float z\n"
                               "property uchar red\nproperty uchar green\nproperty uchar blue\n"
                               "element face " +
                               std::to_string(mesh.face_count()) +
                               "\nproperty list uchar int vertex_indices\nend_header\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + (mesh.vertex_count() + landmark_count) * 15 + mesh.face_count() * 13);
    auto vertex = [&](const Vec3& p, const std::array<std::uint8_t, 3>& c) {
        put_f32(out, p.x());
        put_f32(out, p.y());
        put_f32(out, p.z());
        out.insert(out.end(), c.begin(), c.end());
    };
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
        vertex(mesh.vertices()[v], colors[v]);
    for (const auto& t : report.teeth)
        for (const auto& l : t.landmarks)
            vertex(l.position, landmark_color(l.kind));
    for (const auto& f : mesh.faces()) {
        out.push_back(3);
        for (VertexIndex v : f)
            put_i32(out, v);
    }
    return out;
}

std::vector<std::uint8_t> export_annotated(const IndexedMesh& mesh, const PipelineResult& result, ExportFormat format)
{
    if (format == ExportFormat::ply)
        return export_ply(mesh, result.teeth, result.report);
    const std::string text = to_json(result.report);
    return {text.begin(), text.end()};
}

} // namespace archmark
