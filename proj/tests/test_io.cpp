#include <gtest/gtest.h>

#include <cstring>
#include <string>

#include "archmark/error.hpp"
#include "archmark/export.hpp"
#include "archmark/report.hpp"
#include "archmark/synthetic.hpp"
#include "archmark/training_db.hpp"
#include "support/fixtures.hpp"

using namespace archmark;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s)
{
    return {s.begin(), s.end()};
}

LandmarkReport sample_report()
{
    LandmarkReport r;
    r.model_id = "model \"7\"";
    r.input_digest = fnv1a_hex(bytes_of("abc"));
    r.jaw_kind = "adult_upper";
    Frame f;
    f.origin = Vec3(0.1, -2.5e-7, 1e300);
    r.frame = FrameReport::from(f);
    ToothReport t;
    t.code = "UR6";
    t.tooth_class = "molar";
    t.face_count = 3;
    t.face_digest = face_set_digest(std::vector<FaceIndex>{1, 5, 9});
    t.blobs = {2, 3};
    t.partial = true;
    t.characteristics = {{"surface_area", 81.25}, {"pointiness", 0.3333333333333333}};
    t.landmarks.push_back({"UR6", LandmarkKind::buccal_cusp, Vec3(1.0 / 3.0, 2, 3), 42, 0});
    r.teeth.push_back(t);
    BlobReport b;
    b.index = 2;
    b.label = "UR6.0";
    b.face_count = 2;
    b.span_min = -3.75;
    b.span_max = 1.0;
    b.peaks = {42, 43};
    r.blobs.push_back(b);
    b.index = 4;
    b.label.reset();
    r.blobs.push_back(b);
    r.unassigned_blobs = {4};
    r.missing_types = {"UL8"};
    r.diagnostics.t_max = 0.6768943;
    r.diagnostics.objective = 31.1;
    r.diagnostics.warnings = {"w1"};
    r.diagnostics.dropped_groups.push_back({{7, 8}, "touches_boundary"});
    r.diagnostics.candidates.push_back({0.05, 120.5, 9});
    r.diagnostics.arch = std::array<double, 3>{-0.04, 0.001, 25.0};
    return r;
}

} // namespace

TEST(Digest, KnownFnvVectors)
{
    EXPECT_EQ(fnv1a_hex({}), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex(bytes_of("a")), "af63dc4c8601ec8c");
    EXPECT_EQ(face_set_digest(std::vector<FaceIndex>{1, 2}), face_set_digest(std::vector<FaceIndex>{1, 2}));
    EXPECT_NE(face_set_digest(std::vector<FaceIndex>{1, 2}), face_set_digest(std::vector<FaceIndex>{1, 3}));
}

TEST(Report, JsonRoundTripIsExact)
{
    const auto report = sample_report();
    const std::string text = to_json(report);
    const auto back = parse_report(text);
    EXPECT_EQ(back, report);
    EXPECT_EQ(to_json(back), text);
    EXPECT_NE(text.find("\"schema_version\""), std::string::npos);
}

TEST(Report, FailedStageReportRoundTrips)
{
    LandmarkReport r;
    r.model_id = "broken";
    r.jaw_kind = "deciduous_lower";
    r.diagnostics.stage_failure = "orientation";
    r.diagnostics.message = "point set is coplanar";
    EXPECT_EQ(parse_report(to_json(r)), r);
}

TEST(Report, RejectsBadDocuments)
{
    for (const char* bad : {"", "{", "[]", "{\"schema_version\": 99}"}) {
        try {
            parse_report(bad);
            ADD_FAILURE() << "accepted: " << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::parse);
        }
    }
}

TEST(TrainingDb, JsonRoundTripAndValidation)
{
    const auto db = fixtures::shipped_db(parse_jaw_kind("deciduous_lower"));
    EXPECT_NO_THROW(db.validate());
    const auto back = parse_training_db(to_json(db));
    EXPECT_EQ(back, db);
    EXPECT_EQ(to_json(back), to_json(db));

    auto bad = db;
    bad.types.begin()->second.prior = 1.5;
    EXPECT_THROW(bad.validate(), Error);
    bad = db;
    bad.types.begin()->second.characteristics.begin()->second = {1.0};
    EXPECT_THROW(bad.validate(), Error);
    EXPECT_THROW(parse_training_db("{\"schema_version\": 2}"), Error);
}

TEST(TrainingDb, ShippedDatabasesCoverEveryType)
{
    for (const char* k : {"adult_upper", "adult_lower", "deciduous_upper", "deciduous_lower"}) {
        const JawKind kind = parse_jaw_kind(k);
        const auto db = fixtures::shipped_db(kind);
        EXPECT_EQ(db.jaw_kind, kind);
        for (const auto& t : tooth_types(kind)) {
            const auto* ref = db.find(t);
            ASSERT_NE(ref, nullptr) << t.code;
            EXPECT_GE(ref->prior, 0.0);
            EXPECT_LE(ref->prior, 1.0);
        }
    }
}

TEST(TrainingDb, BuildFromSamples)
{
    const JawKind kind = parse_jaw_kind("deciduous_upper");
    std::vector<LabelledSample> samples;
    std::vector<SideObservation> sides(4);
    for (const auto& t : tooth_types(kind)) {
        if (t.is_half())
            continue;
        samples.push_back({t.code, {{"surface_area", 10.0 + t.ordinal}}});
        samples.push_back({t.code, {{"surface_area", 12.0 + t.ordinal}}});
    }
    for (const char* h : {"URE.0", "URE.1", "ULE.0", "ULE.1"}) {
        samples.push_back({h, {{"surface_area", 5.0}}});
        samples.push_back({h, {{"surface_area", 6.0}}});
    }
    sides[0].present_codes = {"URA", "URB", "URC", "URD", "URE"};
    sides[1].present_codes = {"ULA", "ULB", "ULC", "ULD", "ULE.0", "ULE.1"};
    sides[2].present_codes = {"URA", "URB", "URC", "URD"};
    sides[3].present_codes = {"ULA", "ULB", "ULC", "ULD", "ULE"};
    const auto db = build_training_db(kind, samples, sides);
    EXPECT_NO_THROW(db.validate());
    EXPECT_DOUBLE_EQ(db.types.at("URA").prior, 1.0);
    EXPECT_DOUBLE_EQ(db.types.at("URE").prior, 0.5);
    EXPECT_DOUBLE_EQ(db.types.at("URE.0").prior, 0.25);
    EXPECT_EQ(db.types.at("URA").characteristics.at("surface_area").size(), 4u);
}

TEST(SyntheticSpec, JsonRoundTrip)
{
    auto spec = default_synthetic_spec(parse_jaw_kind("adult_lower"), true);
    find_tooth(spec, "LL7")->split = true;
    find_tooth(spec, "LR2")->present = false;
    spec.cheek = CheekFragment{};
    spec.seed = 99;
    const auto back = parse_synthetic_spec(to_json(spec));
    EXPECT_EQ(to_json(back), to_json(spec));
    EXPECT_TRUE(find_tooth(const_cast<SyntheticSpec&>(back), "LL7")->split);
}

TEST(SyntheticSpec, ShorthandLists)
{
    const auto spec = parse_synthetic_spec(
        R"({"jaw_kind": "adult_upper", "missing": ["UL2"], "split": ["UR6"], "partial": ["UL7"]})");
    auto copy = spec;
    EXPECT_FALSE(find_tooth(copy, "UL2")->present);
    EXPECT_TRUE(find_tooth(copy, "UR6")->split);
    EXPECT_TRUE(find_tooth(copy, "UL7")->partial);
    EXPECT_EQ(find_tooth(copy, "UR8"), nullptr);
}

TEST(SyntheticJaw, DeterministicAndLabelled)
{
    auto spec = default_synthetic_spec(parse_jaw_kind("deciduous_lower"));
    spec.size_jitter = 0.05;
    spec.seed = 4;
    const auto a = generate_synthetic_jaw(spec);
    const auto b = generate_synthetic_jaw(spec);
    EXPECT_EQ(a.mesh.vertices(), b.mesh.vertices());
    EXPECT_EQ(a.mesh.faces(), b.mesh.faces());
    EXPECT_EQ(a.teeth.size(), 10u);
    for (const auto& t : a.teeth) {
        EXPECT_FALSE(t.faces.empty());
        EXPECT_EQ(ground_truth_label(a, spec.kind, t.faces), t.code);
        EXPECT_FALSE(t.landmarks.empty());
    }
    for (std::size_t i = 1; i < a.teeth.size(); ++i)
        EXPECT_LT(a.mesh.face_centroids()[a.teeth[i - 1].faces[0]].x(),
                  a.mesh.face_centroids()[a.teeth[i].faces[0]].x());
}

TEST(SyntheticJaw, OverlappingTeethAreRejected)
{
    auto spec = default_synthetic_spec(parse_jaw_kind("adult_upper"));
    spec.gap = -1.0;
    EXPECT_THROW(generate_synthetic_jaw(spec), Error);
}

TEST(Export, PlyLayout)
{
    const auto mesh = fixtures::icosphere(2.0, 1);
    LabeledTooth tooth;
    tooth.type = parse_tooth_code("UL3");
    tooth.faces = {0, 1};
    LandmarkReport report;
    ToothReport tr;
    tr.code = "UL3";
    tr.landmarks.push_back({"UL3", LandmarkKind::canine_tip, Vec3(1, 2, 3), 0, 0});
    report.teeth.push_back(tr);

    const auto ply = export_ply(mesh, {tooth}, report);
    const std::string text(ply.begin(), ply.end());
    const auto end = text.find("end_header\n");
    ASSERT_NE(end, std::string::npos);
    const std::string header = text.substr(0, end);
    EXPECT_EQ(header.rfind("ply\nformat binary_little_endian 1.0\n", 0), 0u);
    EXPECT_NE(header.find("element vertex " + std::to_string(mesh.vertex_count() + 1)), std::string::npos);
    EXPECT_NE(header.find("element face " + std::to_string(mesh.face_count())), std::string::npos);
    const std::size_t body = end + std::strlen("end_header\n");
    EXPECT_EQ(ply.size() - body, (mesh.vertex_count() + 1) * 15 + mesh.face_count() * 13);

    // First vertex of face 0 carries the tooth colour; the landmark point is last.
    const auto v0 = static_cast<std::size_t>(mesh.faces()[0][0]);
    const auto colour = label_color("UL3");
    EXPECT_EQ(0, std::memcmp(&ply[body + v0 * 15 + 12], colour.data(), 3));
    float x;
    std::memcpy(&x, &ply[body + mesh.vertex_count() * 15], 4);
    EXPECT_EQ(x, 1.0f);
    EXPECT_EQ(ply, export_ply(mesh, {tooth}, report));
}

TEST(Export, LabelColours)
{
    EXPECT_EQ(label_color("UR1"), label_color("UR1"));
    EXPECT_NE(label_color("UR1"), label_color("UL1"));
    EXPECT_EQ(parse_export_format("ply"), ExportFormat::ply);
    EXPECT_EQ(parse_export_format("json"), ExportFormat::json);
    EXPECT_THROW(parse_export_format("obj"), Error);
}
