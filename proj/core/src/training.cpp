#include "archmark/training.hpp"

#include <algorithm>
#include <atomic>
#include <random>
#include <thread>

#include "archmark/error.hpp"
#include "archmark/pipeline.hpp"
#include "archmark/synthetic.hpp"

namespace archmark {

namespace {

void add_sides(std::vector<SideObservation>& sides, const std::vector<std::string>& codes)
{
    SideObservation right;
    SideObservation left;
    for (const auto& c : codes)
        (parse_tooth_code(c).side == Side::right ? right : left).present_codes.push_back(c);
    sides.push_back(std::move(right));
    sides.push_back(std::move(left));
}

struct ModelSamples {
    std::vector<LabelledSample> samples;
    std::vector<std::string> present;
};

ModelSamples sample_model(JawKind kind, const SyntheticTrainingOptions& options, std::size_t index)
{
    std::mt19937_64 rng(options.seed * 1000003ull + index);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    SyntheticSpec spec = default_synthetic_spec(kind, kind.dentition == Dentition::adult);
    spec.seed = rng();
    spec.size_jitter = options.size_jitter;
    spec.height_jitter = options.height_jitter;
    spec.shape_jitter = options.shape_jitter;
    std::normal_distribution<double> normal(0.0, 1.0);
    for (auto& t : spec.teeth) {
        t.crowding_offset = std::clamp(options.crowding * normal(rng), -2.0 * options.crowding, 2.0 * options.crowding);
        const ToothType type = parse_tooth_code(t.code);
        if (kind.dentition == Dentition::adult && type.ordinal == 8)
            t.present = uniform(rng) < options.third_molar_probability;
        if (type.role == MolarRole::whole) {
            const double u = uniform(rng);
            if (u < options.partial_probability)
                t.partial = true;
            else if (u < options.partial_probability + options.split_probability)
                t.split = true;
        }
    }
    const SyntheticJaw jaw = generate_synthetic_jaw(spec);

    PipelineConfig config;
    config.jaw_kind = kind;
    const SegmentationStage stage = run_segmentation_stage(jaw.mesh, config);

    ModelSamples out;
    for (std::size_t b = 0; b < stage.segmentation.blobs.size(); ++b) {
        const auto label = ground_truth_label(jaw, kind, stage.segmentation.blobs[b].faces);
        if (!label)
            continue;
        out.samples.push_back({*label, stage.characteristics[b]});
        out.present.push_back(*label);
    }
    return out;
}

} // namespace

TrainingDatabase training_db_from_reports(const std::vector<LandmarkReport>& reports)
{
    if (reports.empty())
        throw Error(ErrorKind::invalid_input, "no reports to train from");
    const JawKind kind = parse_jaw_kind(reports.front().jaw_kind);
    std::vector<LabelledSample> samples;
    std::vector<SideObservation> sides;
    for (const auto& r : reports) {
        if (parse_jaw_kind(r.jaw_kind) != kind)
            throw Error(ErrorKind::invalid_input, "reports mix jaw kinds");
        std::vector<std::string> present;
        for (const auto& b : r.blobs) {
            if (!b.label)
                continue;
            samples.push_back({*b.label, b.characteristics});
            present.push_back(*b.label);
        }
        add_sides(sides, present);
    }
    return build_training_db(kind, samples, sides);
}

TrainingDatabase build_synthetic_training_db(JawKind kind, const SyntheticTrainingOptions& options)
{
    std::vector<ModelSamples> results(options.models);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < options.models; i = next++)
            results[i] = sample_model(kind, options, i);
    };
    const unsigned threads = std::max(1u, options.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
    }

    std::vector<LabelledSample> samples;
    std::vector<SideObservation> sides;
    for (auto& r : results) {
        samples.insert(samples.end(), r.samples.begin(), r.samples.end());
        add_sides(sides, r.present);
    }
    return build_training_db(kind, samples, sides);
}

} // namespace archmark
