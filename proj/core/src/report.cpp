#include "archmark/report.hpp"

#include <cstdio>

#include <json.hpp>

#include "archmark/error.hpp"

namespace archmark {

using nlohmann::json;

std::string fnv1a_hex(std::span<const std::uint8_t> bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (std::uint8_t b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string face_set_digest(std::span<const FaceIndex> faces)
{
    std::vector<std::uint8_t> bytes;
    bytes.reserve(faces.size() * 4);
    for (FaceIndex f : faces) {
        const auto u = static_cast<std::uint32_t>(f);
        for (int k = 0; k < 4; ++k)
            bytes.push_back(static_cast<std::uint8_t>(u >> (8 * k)));
    }
    return fnv1a_hex(bytes);
}

namespace {

std::array<double, 3> arr(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
Vec3 vec(const std::array<double, 3>& a) { return {a[0], a[1], a[2]}; }

template <class T>
json optional_json(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j, const char* key)
{
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    return j.at(key).get<T>();
}

json landmark_json(const Landmark& l)
{
    return {{"kind", to_string(l.kind)},
            {"position", arr(l.position)},
            {"vertex", l.vertex},
            {"cusp_index", l.cusp_index}};
}

} // namespace

FrameReport FrameReport::from(const Frame& frame)
{
    return {arr(frame.right), arr(frame.forwards), arr(frame.up), arr(frame.occlusal), arr(frame.origin)};
}

Frame FrameReport::to_frame() const
{
    Frame f;
    f.right = vec(right);
    f.forwards = vec(forwards);
    f.up = vec(up);
    f.occlusal = vec(occlusal);
    f.origin = vec(origin);
    return f;
}

std::string to_json(const LandmarkReport& report)
{
    json teeth = json::array();
    for (const auto& t : report.teeth) {
        json lms = json::array();
        for (const auto& l : t.landmarks)
            lms.push_back(landmark_json(l));
        teeth.push_back({{"code", t.code},
                         {"class", t.tooth_class},
                         {"face_count", t.face_count},
                         {"face_digest", t.face_digest},
                         {"blobs", t.blobs},
                         {"partial", t.partial},
                         {"anomalous", t.anomalous},
                         {"landmark_missing", t.landmark_missing},
                         {"characteristics", t.characteristics},
                         {"landmarks", lms}});
    }
    json blobs = json::array();
    for (const auto& b : report.blobs)
        blobs.push_back({{"index", b.index},
                         {"label", optional_json(b.label)},
                         {"face_count", b.face_count},
                         {"face_digest", b.face_digest},
                         {"span", {b.span_min, b.span_max}},
                         {"peaks", b.peaks},
                         {"characteristics", b.characteristics}});
    const auto& d = report.diagnostics;
    json dropped = json::array();
    for (const auto& g : d.dropped_groups)
        dropped.push_back({{"seeds", g.seeds}, {"reason", g.reason}});
    json candidates = json::array();
    for (const auto& c : d.candidates)
        candidates.push_back({{"t_max", c.t_max}, {"tooth_area", c.tooth_area}, {"blob_count", c.blob_count}});
    json frame = nullptr;
    if (report.frame)
        frame = {{"right", report.frame->right},
                 {"forwards", report.frame->forwards},
                 {"up", report.frame->up},
                 {"occlusal", report.frame->occlusal},
                 {"origin", report.frame->origin}};

    json doc = {{"schema_version", LandmarkReport::kSchemaVersion},
                {"model_id", report.model_id},
                {"input_digest", report.input_digest},
                {"jaw_kind", report.jaw_kind},
                {"frame", frame},
                {"teeth", teeth},
                {"blobs", blobs},
                {"unassigned_blobs", report.unassigned_blobs},
                {"missing_types", report.missing_types},
                {"diagnostics",
                 {{"t_max", optional_json(d.t_max)},
                  {"objective", optional_json(d.objective)},
                  {"stage_failure", optional_json(d.stage_failure)},
                  {"message", d.message},
                  {"warnings", d.warnings},
                  {"dropped_groups", dropped},
                  {"candidates", candidates},
                  {"arch", optional_json(d.arch)}}}};
    return doc.dump(2) + "\n";
}

LandmarkReport parse_report(const std::string& json_text)
{
    try {
        const json doc = json::parse(json_text);
        const int version = doc.at("schema_version").get<int>();
        if (version != LandmarkReport::kSchemaVersion)
            throw Error(ErrorKind::parse, "report: unsupported schema_version " + std::to_string(version));
        LandmarkReport r;
        r.model_id = doc.at("model_id").get<std::string>();
        r.input_digest = doc.at("input_digest").get<std::string>();
        r.jaw_kind = doc.at("jaw_kind").get<std::string>();
        if (!doc.at("frame").is_null()) {
            const auto& f = doc.at("frame");
            r.frame = FrameReport{f.at("right").get<std::array<double, 3>>(), f.at("forwards").get<std::array<double, 3>>(),
                                  f.at("up").get<std::array<double, 3>>(), f.at("occlusal").get<std::array<double, 3>>(),
                                  f.at("origin").get<std::array<double, 3>>()};
        }
        for (const auto& t : doc.at("teeth")) {
            ToothReport tr;
            tr.code = t.at("code").get<std::string>();
            tr.tooth_class = t.at("class").get<std::string>();
            tr.face_count = t.at("face_count").get<std::size_t>();
            tr.face_digest = t.at("face_digest").get<std::string>();
            tr.blobs = t.at("blobs").get<std::vector<std::size_t>>();
            tr.partial = t.at("partial").get<bool>();
            tr.anomalous = t.at("anomalous").get<bool>();
            tr.landmark_missing = t.at("landmark_missing").get<bool>();
            tr.characteristics = t.at("characteristics").get<Characteristics>();
            for (const auto& l : t.at("landmarks")) {
                Landmark lm;
                lm.tooth = tr.code;
                lm.kind = parse_landmark_kind(l.at("kind").get<std::string>());
                lm.position = vec(l.at("position").get<std::array<double, 3>>());
                lm.vertex = l.at("vertex").get<VertexIndex>();
                lm.cusp_index = l.at("cusp_index").get<int>();
                tr.landmarks.push_back(lm);
            }
            r.teeth.push_back(std::move(tr));
        }
        for (const auto& b : doc.at("blobs")) {
            BlobReport br;
            br.index = b.at("index").get<std::size_t>();
            br.label = optional_from<std::string>(b, "label");
            br.face_count = b.at("face_count").get<std::size_t>();
            br.face_digest = b.at("face_digest").get<std::string>();
            const auto span = b.at("span").get<std::array<double, 2>>();
            br.span_min = span[0];
            br.span_max = span[1];
            br.peaks = b.at("peaks").get<std::vector<VertexIndex>>();
            br.characteristics = b.at("characteristics").get<Characteristics>();
            r.blobs.push_back(std::move(br));
        }
        r.unassigned_blobs = doc.at("unassigned_blobs").get<std::vector<std::size_t>>();
        r.missing_types = doc.at("missing_types").get<std::vector<std::string>>();
        const auto& d = doc.at("diagnostics");
        r.diagnostics.t_max = optional_from<double>(d, "t_max");
        r.diagnostics.objective = optional_from<double>(d, "objective");
        r.diagnostics.stage_failure = optional_from<std::string>(d, "stage_failure");
        r.diagnostics.message = d.at("message").get<std::string>();
        r.diagnostics.warnings = d.at("warnings").get<std::vector<std::string>>();
        for (const auto& g : d.at("dropped_groups"))
            r.diagnostics.dropped_groups.push_back(
                {g.at("seeds").get<std::vector<VertexIndex>>(), g.at("reason").get<std::string>()});
        for (const auto& c : d.at("candidates"))
            r.diagnostics.candidates.push_back({c.at("t_max").get<double>(), c.at("tooth_area").get<double>(),
                                                c.at("blob_count").get<std::size_t>()});
        r.diagnostics.arch = optional_from<std::array<double, 3>>(d, "arch");
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse, std::string("report: ") + e.what());
    }
}

} // namespace archmark
