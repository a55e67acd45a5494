#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "archmark/arch.hpp"
#include "archmark/diagnostics.hpp"
#include "archmark/mesh.hpp"
#include "archmark/orientation.hpp"
#include "archmark/segmentation.hpp"
#include "archmark/tooth_types.hpp"
#include "archmark/training_db.hpp"

namespace archmark {

namespace characteristic {
inline constexpr const char* surface_area = "surface_area";
inline constexpr const char* mesiodistal_width = "mesiodistal_width";
inline constexpr const char* buccolingual_width = "buccolingual_width";
inline constexpr const char* pointiness = "pointiness";
} // namespace characteristic

using Characteristics = std::map<std::string, double>;

/// Area, mesiodistal and buccolingual extent, and pointiness of a face set.
Characteristics measure_characteristics(std::span<const FaceIndex> faces, const IndexedMesh& mesh, const Frame& frame,
                                        const ArchCurve& arch, Diagnostics* diag = nullptr);

/// Shift and scale of the normalised mismatch for one reference vector.
struct ReferenceStats {
    double mean = 0.0;
    double c_min = 0.0; ///< population variance, the minimum of MSE over t
    double c_ref = 0.0; ///< mean of MSE(r_i, r) - c_min
};

/// nullopt when r has fewer than two values or all values are equal.
std::optional<ReferenceStats> reference_stats(std::span<const double> r);

double mean_square_error(double t, std::span<const double> r);

/// (MSE(t, r) - c_min) / c_ref, clamped at 0. nullopt where undefined.
std::optional<double> cost_metric(double t, std::span<const double> r);
double cost_metric(double t, std::span<const double> r, const ReferenceStats& stats);

/// Blobs x types, row-major.
struct CostTable {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
};

/**
 * C[i,j] = unweighted mean of the per-characteristic costs of blob i against
 * type j. Characteristics with undefined costs are skipped with a warning;
 * a type left with none throws ErrorKind::assignment.
 */
CostTable build_cost_table(std::span<const Characteristics> blobs, const TrainingDatabase& db,
                           std::span<const ToothType> types, Diagnostics* diag = nullptr, unsigned threads = 1);

struct Assignment {
    std::vector<int> type_of_blob; ///< -1 for non-tooth
    std::vector<int> blob_of_type; ///< -1 for missing
    double objective = 0.0;

    bool D(std::size_t i, std::size_t j) const { return type_of_blob[i] == static_cast<int>(j); }
    bool NT(std::size_t i) const { return type_of_blob[i] < 0; }
    bool MI(std::size_t j) const { return blob_of_type[j] < 0; }
};

/**
 * Objective of a complete assignment, summed in a fixed order: C[i,j] over
 * assigned pairs in row-major order, then fussiness * P[j] over missing types
 * in type order.
 */
double assignment_objective(const CostTable& costs, std::span<const double> priors, double fussiness,
                            std::span<const int> type_of_blob);

/**
 * Optimal ordered assignment of blobs (left to right) to types (left to
 * right). Every blob is one type or non-tooth, every type is one blob or
 * missing, assigned pairs increase in both indices, and a whole molar is
 * missing unless both of its halves are. Minimises the sum of assigned costs
 * plus fussiness * P[j] per missing type; among optima, returns the
 * row-major lexicographically smallest D.
 *
 * Group members must be contiguous in type order.
 */
Assignment solve_assignment(const CostTable& costs, std::span<const double> priors,
                            std::span<const MolarGroup> groups, double fussiness = 8.0);

struct LabeledTooth {
    ToothType type;
    std::vector<std::size_t> blobs;
    std::vector<FaceIndex> faces; ///< sorted, unique
    std::vector<Peak> peaks;
    bool partial = false;   ///< a lone mesial half stood in for the molar
    bool anomalous = false; ///< a distal half without its mesial half
};

/// Labelled teeth in type order, with matching half molars merged.
std::vector<LabeledTooth> merge_half_molars(const Assignment& assignment, std::span<const Blob> blobs,
                                            std::span<const ToothType> types);

} // namespace archmark
