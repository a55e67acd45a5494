#pragma once

#include <array>
#include <vector>

#include "archmark/diagnostics.hpp"
#include "archmark/mesh.hpp"

namespace archmark {

/**
 * Per-edge curvature between adjacent faces, stored per directed face pair:
 * slot k of face f describes the edge shared with mesh.neighbors()[f][k].
 * Boundary slots hold 0 and are never read. Units are 1/mm.
 */
struct EdgeCurvatureMap {
    std::vector<std::array<double, 3>> signed_curvature;
    std::vector<std::array<double, 3>> cost;

    std::size_t face_count() const { return signed_curvature.size(); }
};

/// Signed curvature |n0 x n1| / |dx|, negative across creases (inside
/// corners) and positive across ridges. Cost fields are left at zero.
EdgeCurvatureMap edge_curvatures(const IndexedMesh& mesh, Diagnostics* diag = nullptr);

/// Fills cost = max(-signed curvature, 0).
EdgeCurvatureMap cost_map(EdgeCurvatureMap curv);

/// Convenience: curvatures with the crease cost populated.
EdgeCurvatureMap crease_costs(const IndexedMesh& mesh, Diagnostics* diag = nullptr);

/// Per-face minimum signed curvature over its edges (for colour export).
std::vector<double> min_face_curvature(const IndexedMesh& mesh, const EdgeCurvatureMap& curv);

} // namespace archmark
