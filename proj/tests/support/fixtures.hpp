#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "archmark/assignment.hpp"
#include "archmark/curvature.hpp"
#include "archmark/mesh.hpp"
#include "archmark/segmentation.hpp"
#include "archmark/synthetic.hpp"
#include "archmark/training_db.hpp"

namespace archmark::fixtures {

/// Regular grid over [0, nx*spacing] x [0, ny*spacing] with z = height(x, y).
IndexedMesh heightfield(int nx, int ny, double spacing, const std::function<double(double, double)>& height);

/// Same grid with each interior vertex displaced in the plane and every
/// other cell split along the opposite diagonal.
IndexedMesh jittered_heightfield(int nx, int ny, double spacing, double jitter, std::mt19937_64& rng,
                                 const std::function<double(double, double)>& height);

IndexedMesh icosphere(double radius, int subdivisions);

/// Uniformly distributed rotation with a translation of up to max_shift per axis.
RigidMotion random_motion(std::mt19937_64& rng, double max_shift = 50.0);

/// Rotation by angle (radians) about a unit axis.
Mat3 rotation_about(const Vec3& axis, double angle);

/// Replaces every crease cost with a random non-negative value, equal on
/// both sides of an edge. Some costs are exactly zero.
void randomise_costs(EdgeCurvatureMap& map, const IndexedMesh& mesh, std::mt19937_64& rng, double max_cost);

/// Textbook Dijkstra over the face graph rebuilt from shared vertex pairs,
/// with a decrease-key ordered set as the queue. Returns min(distance, cap).
std::vector<double> shortest_path_oracle(const IndexedMesh& mesh, const EdgeCurvatureMap& costs,
                                         VertexIndex seed_vertex, double cap);

struct EnumeratedOptimum {
    double objective = 0.0;
    std::vector<int> type_of_blob; ///< row-major lexicographically smallest D among exact optima
    std::size_t feasible = 0;
};

/// Every feasible D/NT/MI of the ordered assignment model, scored with
/// assignment_objective.
EnumeratedOptimum enumerate_assignments(const CostTable& costs, std::span<const double> priors,
                                        std::span<const MolarGroup> groups, double fussiness);

/// Checks the ordered assignment constraints; returns an explanation on failure.
std::optional<std::string> assignment_violation(const Assignment& a, std::size_t rows, std::size_t cols,
                                                std::span<const MolarGroup> groups);

/// Cone-shaped tooth (apex 12 mm) next to a small gum bump whose apex sits
/// ratio * 5 mm lower at 5 mm horizontal distance. Returns the clean_regions
/// verdict for the bump, or nullopt if its group was kept; the tooth group
/// must always be kept.
struct GumBumpOutcome {
    bool tooth_kept = false;
    std::optional<DropReason> bump;
};
GumBumpOutcome gum_bump_fixture(double ratio);

std::filesystem::path data_dir();
TrainingDatabase shipped_db(JawKind kind);

/// Named end-to-end fixtures.
struct NamedSpec {
    std::string name;
    SyntheticSpec spec;
    bool clean = true; ///< every present tooth expected with its own label
};
std::vector<NamedSpec> end_to_end_specs();

} // namespace archmark::fixtures
