#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "archmark/assignment.hpp"
#include "archmark/error.hpp"
#include "archmark/landmarks.hpp"
#include "archmark/mesh.hpp"
#include "archmark/orientation.hpp"
#include "archmark/report.hpp"
#include "archmark/segmentation.hpp"
#include "archmark/training_db.hpp"

namespace archmark {

struct PipelineConfig {
    JawKind jaw_kind;
    double height_threshold_mm = 6.0;
    double spill_radius_mm = 12.0;
    double fussiness = 8.0;
    std::vector<double> thresholds = SegmentationOptions::default_thresholds();
    double area_tie_tolerance = 0.02;
    IndexOptions index;
    LandmarkOptions landmarks;
    bool run_landmarks = true;
    unsigned threads = 1;

    /// Throws Error(invalid_input) unless lengths are positive and fussiness >= 0.
    void validate() const;
};

/// Orientation through characteristics: everything that needs no training data.
struct SegmentationStage {
    Frame frame;
    std::vector<Peak> peaks;          ///< height-filtered
    SegmentationResult segmentation;
    std::vector<Characteristics> characteristics; ///< one per blob
};

/// Throws Error(orientation | segmentation | arch_fit) on stage failure.
SegmentationStage run_segmentation_stage(const IndexedMesh& mesh, const PipelineConfig& config,
                                         Diagnostics* diag = nullptr);

struct PipelineResult {
    LandmarkReport report;
    std::optional<Frame> frame;
    std::optional<SegmentationStage> stage;
    CostTable costs;
    std::optional<Assignment> assignment;
    std::vector<LabeledTooth> teeth;
    std::vector<ToothLandmarks> landmarks; ///< parallel to teeth
    std::optional<ErrorKind> failure;
};

/**
 * Runs every stage in order. Orientation, segmentation and assignment
 * failures are recorded in the report (and in failure) instead of thrown.
 */
PipelineResult run_pipeline(const IndexedMesh& mesh, const TrainingDatabase& db, const PipelineConfig& config,
                            const std::string& model_id = "model", const std::string& input_digest = "");

/// Parses STL bytes first; parse errors are thrown.
PipelineResult run_pipeline(std::span<const std::uint8_t> stl_bytes, const TrainingDatabase& db,
                            const PipelineConfig& config, const std::string& model_id = "model");

PipelineResult run_pipeline(const std::filesystem::path& stl_path, const TrainingDatabase& db,
                            const PipelineConfig& config);

} // namespace archmark
