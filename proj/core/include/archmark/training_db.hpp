#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "archmark/tooth_types.hpp"

namespace archmark {

/// Reference values and presence prior for one tooth type (right-side code).
struct TypeReference {
    std::map<std::string, std::vector<double>> characteristics;
    double prior = 0.0;

    bool operator==(const TypeReference&) const = default;
};

/**
 * Hand- or generator-labelled reference data. Keys are right-side codes;
 * left types look up their mirror (see ToothType::reference_code).
 */
struct TrainingDatabase {
    static constexpr int kSchemaVersion = 1;

    JawKind jaw_kind;
    std::map<std::string, TypeReference> types;

    const TypeReference* find(const ToothType& type) const;
    /// Throws Error(invalid_input) if a prior is outside [0,1] or a type of
    /// the jaw kind has a characteristic with fewer than two values.
    void validate() const;

    bool operator==(const TrainingDatabase&) const = default;
};

std::string to_json(const TrainingDatabase& db);
TrainingDatabase parse_training_db(const std::string& json_text);
TrainingDatabase load_training_db(const std::filesystem::path& path);
void save_training_db(const TrainingDatabase& db, const std::filesystem::path& path);

/// One labelled example: a tooth code and its measured characteristics.
struct LabelledSample {
    std::string code;
    std::map<std::string, double> characteristics;
};

/// Jaw-side presence record for prior estimation: which whole and half types
/// were present on one side of one model.
struct SideObservation {
    std::vector<std::string> present_codes;
};

/**
 * Builds a database from labelled samples. prior[j] is the fraction of
 * observed jaw sides containing type j (left/right merged).
 */
TrainingDatabase build_training_db(JawKind kind, const std::vector<LabelledSample>& samples,
                                   const std::vector<SideObservation>& sides);

} // namespace archmark
