#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "archmark/error.hpp"
#include "archmark/export.hpp"
#include "archmark/pipeline.hpp"
#include "archmark/stl.hpp"
#include "archmark/synthetic.hpp"
#include "archmark/training.hpp"

namespace fs = std::filesystem;
using namespace archmark;

namespace {

std::string read_text(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::parse, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::invalid_input, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

void write_text(const fs::path& path, const std::string& text)
{
    write_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

struct RunArgs {
    std::string stl;
    std::string jaw;
    std::string db;
    std::string out;
    std::string ply;
    double height_threshold = 6.0;
    double spill_radius = 12.0;
    double fussiness = 8.0;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool no_landmarks = false;
};

int run(const RunArgs& a)
{
    PipelineConfig config;
    config.jaw_kind = parse_jaw_kind(a.jaw);
    config.height_threshold_mm = a.height_threshold;
    config.spill_radius_mm = a.spill_radius;
    config.fussiness = a.fussiness;
    config.threads = a.threads;
    config.run_landmarks = !a.no_landmarks;

    const TrainingDatabase db = load_training_db(a.db);
    const std::string text = read_text(a.stl);
    const std::vector<std::uint8_t> bytes(text.begin(), text.end());
    const TriangleSoup soup = parse_stl(bytes);
    IndexedMesh mesh;
    try {
        mesh = index_mesh(soup, config.index);
    } catch (const Error& e) {
        throw Error(ErrorKind::parse, e.what());
    }
    const PipelineResult result = run_pipeline(mesh, db, config, fs::path(a.stl).stem().string(), fnv1a_hex(bytes));

    const std::string json = to_json(result.report);
    if (a.out.empty())
        std::cout << json;
    else
        write_text(a.out, json);
    if (!a.ply.empty())
        write_bytes(a.ply, export_annotated(mesh, result, ExportFormat::ply));
    for (const auto& w : result.report.diagnostics.warnings)
        std::cerr << "warning: " << w << "\n";
    if (result.failure) {
        std::cerr << "error: " << to_string(*result.failure) << ": " << result.report.diagnostics.message << "\n";
        return exit_code(*result.failure);
    }
    return 0;
}

int synth(const std::string& spec_path, const std::string& out, const std::string& truth, std::optional<std::uint64_t> seed)
{
    SyntheticSpec spec = parse_synthetic_spec(read_text(spec_path));
    if (seed)
        spec.seed = *seed;
    const SyntheticJaw jaw = generate_synthetic_jaw(spec);
    const fs::path stl = out.empty() ? fs::path(spec_path).replace_extension(".stl") : fs::path(out);
    write_bytes(stl, write_binary_stl(jaw.mesh.to_soup(), "archmark synthetic jaw"));
    if (!truth.empty()) {
        nlohmann::json teeth = nlohmann::json::array();
        for (const auto& t : jaw.teeth) {
            nlohmann::json lms = nlohmann::json::array();
            for (const auto& l : t.landmarks)
                lms.push_back({{"kind", to_string(l.kind)},
                               {"position", {l.position.x(), l.position.y(), l.position.z()}}});
            teeth.push_back({{"code", t.code},
                             {"face_count", t.faces.size()},
                             {"split", t.split},
                             {"partial", t.partial},
                             {"landmarks", lms}});
        }
        const nlohmann::json doc = {{"jaw_kind", to_string(spec.kind)},
                                    {"faces", jaw.mesh.face_count()},
                                    {"teeth", teeth},
                                    {"cheek_faces", jaw.cheek_faces.size()}};
        write_text(truth, doc.dump(2) + "\n");
    }
    std::cerr << "wrote " << stl.string() << " (" << jaw.mesh.face_count() << " faces)\n";
    return 0;
}

int train(const std::vector<std::string>& reports, const std::string& out)
{
    std::vector<LandmarkReport> parsed;
    for (const auto& path : reports)
        parsed.push_back(parse_report(read_text(path)));
    save_training_db(training_db_from_reports(parsed), out);
    return 0;
}

int train_synthetic(const std::string& jaw, std::size_t models, std::uint64_t seed, unsigned threads,
                    const std::string& out)
{
    SyntheticTrainingOptions options;
    options.models = models;
    options.seed = seed;
    options.threads = threads;
    save_training_db(build_synthetic_training_db(parse_jaw_kind(jaw), options), out);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"archmark: automatic dental landmarks from STL jaw models"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run_cmd = app.add_subcommand("run", "Segment, label and landmark one STL model");
    run_cmd->add_option("stl", run_args.stl, "Input STL (binary or ASCII)")->required();
    run_cmd->add_option("--jaw", run_args.jaw, "adult_upper | adult_lower | deciduous_upper | deciduous_lower")
        ->required();
    run_cmd->add_option("--db", run_args.db, "Training database JSON")->required();
    run_cmd->add_option("--out", run_args.out, "Report JSON path (default: stdout)");
    run_cmd->add_option("--ply", run_args.ply, "Annotated PLY output path");
    run_cmd->add_option("--height-threshold", run_args.height_threshold, "Peak height filter (mm)");
    run_cmd->add_option("--spill-radius", run_args.spill_radius, "Region spill radius (mm)");
    run_cmd->add_option("--fussiness", run_args.fussiness, "Missing-tooth penalty multiplier");
    run_cmd->add_option("--seed", run_args.seed, "Accepted for symmetry with synth; unused by run");
    run_cmd->add_option("--threads", run_args.threads, "Worker threads for flood fills and costs");
    run_cmd->add_flag("--no-landmarks", run_args.no_landmarks, "Stop after assignment");

    std::string spec_path, synth_out, synth_truth;
    std::optional<std::uint64_t> synth_seed;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic jaw STL from a spec");
    synth_cmd->add_option("spec", spec_path, "Spec JSON")->required();
    synth_cmd->add_option("--out", synth_out, "Output STL (default: spec path with .stl)");
    synth_cmd->add_option("--truth", synth_truth, "Ground-truth JSON output");
    synth_cmd->add_option("--seed", synth_seed, "Override the spec seed");

    std::vector<std::string> train_reports;
    std::string train_out;
    auto* train_cmd = app.add_subcommand("train", "Build a training database from labelled reports");
    train_cmd->add_option("reports", train_reports, "Report JSON files with corrected blob labels")->required();
    train_cmd->add_option("--out", train_out, "Database JSON")->required();

    std::string ts_jaw, ts_out;
    std::size_t ts_models = 40;
    std::uint64_t ts_seed = 1;
    unsigned ts_threads = 1;
    auto* ts_cmd = app.add_subcommand("train-synthetic", "Build a training database from generated jaws");
    ts_cmd->add_option("--jaw", ts_jaw, "Jaw kind")->required();
    ts_cmd->add_option("--models", ts_models, "Number of generated models");
    ts_cmd->add_option("--seed", ts_seed, "Generator seed");
    ts_cmd->add_option("--threads", ts_threads, "Models processed concurrently");
    ts_cmd->add_option("--out", ts_out, "Database JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd)
            return run(run_args);
        if (*synth_cmd)
            return synth(spec_path, synth_out, synth_truth, synth_seed);
        if (*train_cmd)
            return train(train_reports, train_out);
        if (*ts_cmd)
            return train_synthetic(ts_jaw, ts_models, ts_seed, ts_threads, ts_out);
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
