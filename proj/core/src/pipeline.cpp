#include "archmark/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>

#include "archmark/curvature.hpp"
#include "archmark/error.hpp"
#include "archmark/peaks.hpp"
#include "archmark/stl.hpp"

namespace archmark {

void PipelineConfig::validate() const
{
    if (!(height_threshold_mm > 0.0) || !(spill_radius_mm > 0.0))
        throw Error(ErrorKind::invalid_input, "pipeline lengths must be positive");
    if (!(fussiness >= 0.0))
        throw Error(ErrorKind::invalid_input, "fussiness must be non-negative");
    if (thresholds.empty())
        throw Error(ErrorKind::invalid_input, "threshold ladder is empty");
    for (double t : thresholds)
        if (!(t > 0.0))
            throw Error(ErrorKind::invalid_input, "threshold ladder values must be positive");
    if (!(landmarks.incisal_band_mm > 0.0) || !(landmarks.cusp_merge_mm > 0.0))
        throw Error(ErrorKind::invalid_input, "landmark lengths must be positive");
}

SegmentationStage run_segmentation_stage(const IndexedMesh& mesh, const PipelineConfig& config, Diagnostics* diag)
{
    SegmentationStage stage;
    stage.frame = refine_vertical(mesh, orient(mesh), {}, diag);
    const auto all_peaks = find_peaks(mesh, stage.frame);
    stage.peaks = filter_by_height(all_peaks, config.height_threshold_mm);
    if (stage.peaks.empty())
        throw Error(ErrorKind::segmentation, "no peaks survive the height filter");

    const auto costs = crease_costs(mesh, diag);
    SegmentationOptions options;
    options.spill_radius_mm = config.spill_radius_mm;
    options.thresholds = config.thresholds;
    options.area_tie_tolerance = config.area_tie_tolerance;
    options.threads = config.threads;
    stage.segmentation = adaptive_threshold(mesh, costs, stage.peaks, stage.frame, options, diag);

    for (const auto& blob : stage.segmentation.blobs)
        stage.characteristics.push_back(
            measure_characteristics(blob.faces, mesh, stage.frame, stage.segmentation.arch, diag));
    return stage;
}

namespace {

BlobReport blob_report(std::size_t index, const Blob& blob, const Characteristics& chars)
{
    BlobReport r;
    r.index = index;
    r.face_count = blob.faces.size();
    r.face_digest = face_set_digest(blob.faces);
    r.span_min = blob.span_min;
    r.span_max = blob.span_max;
    for (const auto& p : blob.peaks)
        r.peaks.push_back(p.vertex);
    r.characteristics = chars;
    return r;
}

void record_failure(PipelineResult& result, const Error& e)
{
    ErrorKind kind = e.kind();
    std::string stage;
    switch (kind) {
    case ErrorKind::orientation: stage = "orientation"; break;
    case ErrorKind::segmentation:
    case ErrorKind::arch_fit: stage = "segmentation"; break;
    case ErrorKind::assignment: stage = "assignment"; break;
    default: throw e;
    }
    result.failure = kind;
    result.report.diagnostics.stage_failure = stage;
    result.report.diagnostics.message = e.what();
}

} // namespace

PipelineResult run_pipeline(const IndexedMesh& mesh, const TrainingDatabase& db, const PipelineConfig& config,
                            const std::string& model_id, const std::string& input_digest)
{
    config.validate();
    if (db.jaw_kind != config.jaw_kind)
        throw Error(ErrorKind::invalid_input, "training database is for " + to_string(db.jaw_kind) +
                                                  ", model is " + to_string(config.jaw_kind));

    PipelineResult result;
    LandmarkReport& report = result.report;
    report.model_id = model_id;
    report.input_digest = input_digest;
    report.jaw_kind = to_string(config.jaw_kind);
    Diagnostics diag;

    try {
        result.stage = run_segmentation_stage(mesh, config, &diag);
    } catch (const Error& e) {
        record_failure(result, e);
    }

    if (result.stage) {
        const SegmentationStage& stage = *result.stage;
        const SegmentationResult& seg = stage.segmentation;
        result.frame = stage.frame;
        report.frame = FrameReport::from(stage.frame);
        report.diagnostics.t_max = seg.t_max;
        report.diagnostics.arch = std::array<double, 3>{seg.arch.a, seg.arch.b, seg.arch.c};
        for (const auto& c : seg.candidates)
            report.diagnostics.candidates.push_back({c.t_max, c.tooth_area, c.blob_count});
        for (const auto& g : seg.dropped) {
            DroppedReport dr;
            for (std::size_t r : g.regions)
                dr.seeds.push_back(seg.regions[r].seed.vertex);
            dr.reason = to_string(g.reason);
            report.diagnostics.dropped_groups.push_back(std::move(dr));
        }
        for (std::size_t i = 0; i < seg.blobs.size(); ++i)
            report.blobs.push_back(blob_report(i, seg.blobs[i], stage.characteristics[i]));

        const auto types = tooth_types(config.jaw_kind);
        try {
            db.validate();
            result.costs = build_cost_table(stage.characteristics, db, types, &diag, config.threads);
            std::vector<double> priors;
            for (const auto& t : types)
                priors.push_back(db.find(t)->prior);
            const auto groups = molar_groups(types);
            result.assignment = solve_assignment(result.costs, priors, groups, config.fussiness);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::invalid_input)
                record_failure(result, Error(ErrorKind::assignment, e.what()));
            else
                record_failure(result, e);
        }

        if (result.assignment) {
            const Assignment& asg = *result.assignment;
            report.diagnostics.objective = asg.objective;
            for (std::size_t i = 0; i < seg.blobs.size(); ++i) {
                if (asg.NT(i))
                    report.unassigned_blobs.push_back(i);
                else
                    report.blobs[i].label = types[static_cast<std::size_t>(asg.type_of_blob[i])].code;
            }
            result.teeth = merge_half_molars(asg, seg.blobs, types);

            std::set<std::string> labelled;
            for (const auto& t : result.teeth)
                labelled.insert(t.type.whole_code());
            for (const auto& t : types)
                if (!t.is_half() && !labelled.contains(t.code))
                    report.missing_types.push_back(t.code);

            for (const auto& tooth : result.teeth) {
                ToothReport tr;
                tr.code = tooth.type.code;
                tr.tooth_class = to_string(tooth.type.tooth_class);
                tr.face_count = tooth.faces.size();
                tr.face_digest = face_set_digest(tooth.faces);
                tr.blobs = tooth.blobs;
                tr.partial = tooth.partial;
                tr.anomalous = tooth.anomalous;
                if (tooth.blobs.size() == 1)
                    tr.characteristics = stage.characteristics[tooth.blobs.front()];
                else
                    tr.characteristics = measure_characteristics(tooth.faces, mesh, stage.frame, seg.arch, &diag);
                if (config.run_landmarks) {
                    ToothLandmarks lm = extract_landmarks(tooth, mesh, stage.frame, seg.arch, config.landmarks);
                    tr.landmarks = lm.landmarks;
                    tr.landmark_missing = lm.missing;
                    if (lm.missing)
                        diag.warn("landmark missing for " + tooth.type.code);
                    result.landmarks.push_back(std::move(lm));
                }
                report.teeth.push_back(std::move(tr));
            }
        }
    }
    report.diagnostics.warnings = diag.warnings;
    return result;
}

PipelineResult run_pipeline(std::span<const std::uint8_t> stl_bytes, const TrainingDatabase& db,
                            const PipelineConfig& config, const std::string& model_id)
{
    const TriangleSoup soup = parse_stl(stl_bytes);
    IndexedMesh mesh;
    try {
        mesh = index_mesh(soup, config.index);
    } catch (const Error& e) {
        throw Error(ErrorKind::parse, e.what());
    }
    return run_pipeline(mesh, db, config, model_id, fnv1a_hex(stl_bytes));
}

PipelineResult run_pipeline(const std::filesystem::path& stl_path, const TrainingDatabase& db,
                            const PipelineConfig& config)
{
    std::ifstream in(stl_path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::parse, "cannot open " + stl_path.string());
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return run_pipeline(std::span<const std::uint8_t>(bytes), db, config, stl_path.stem().string());
}

} // namespace archmark
