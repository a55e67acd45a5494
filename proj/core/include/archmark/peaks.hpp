#pragma once

#include <vector>

#include "archmark/mesh.hpp"
#include "archmark/orientation.hpp"

namespace archmark {

/// A vertex strictly higher (occlusally) than every 1-ring neighbour.
struct Peak {
    VertexIndex vertex = 0;
    Vec3 position = Vec3::Zero();
    double height = 0.0; ///< frame.height(position), mm

    bool operator==(const Peak&) const = default;
};

/// All strict local maxima in the occlusal direction, in vertex order.
/// Plateau vertices (any neighbour of equal height) are never peaks.
std::vector<Peak> find_peaks(const IndexedMesh& mesh, const Frame& frame);

/// Keeps peaks less than threshold_mm below the highest one.
std::vector<Peak> filter_by_height(const std::vector<Peak>& peaks, double threshold_mm = 6.0);

} // namespace archmark
