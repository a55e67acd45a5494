#pragma once

#include <cstdint>
#include <vector>

#include "archmark/report.hpp"
#include "archmark/training_db.hpp"

namespace archmark {

/// Samples and side observations from reports whose blob labels are trusted.
TrainingDatabase training_db_from_reports(const std::vector<LandmarkReport>& reports);

struct SyntheticTrainingOptions {
    std::size_t models = 40;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double size_jitter = 0.04;
    double height_jitter = 0.15;
    double shape_jitter = 0.12;
    double crowding = 0.3; ///< s.d. (mm) of buccolingual tooth displacement
    double split_probability = 0.3;
    double partial_probability = 0.1;
    double third_molar_probability = 0.3;
};

/**
 * Generates jaws, segments them and labels every blob from ground truth.
 * Models run concurrently; results are merged in model order.
 */
TrainingDatabase build_synthetic_training_db(JawKind kind, const SyntheticTrainingOptions& options = {});

} // namespace archmark
