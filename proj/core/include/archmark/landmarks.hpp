#pragma once

#include <string>
#include <vector>

#include "archmark/arch.hpp"
#include "archmark/assignment.hpp"
#include "archmark/mesh.hpp"
#include "archmark/orientation.hpp"

namespace archmark {

enum class LandmarkKind { incisor_midpoint, canine_tip, buccal_cusp };

const char* to_string(LandmarkKind kind) noexcept;
LandmarkKind parse_landmark_kind(const std::string& text);
LandmarkKind landmark_kind_for(ToothClass cls) noexcept;

struct Landmark {
    std::string tooth;
    LandmarkKind kind = LandmarkKind::buccal_cusp;
    Vec3 position = Vec3::Zero();
    VertexIndex vertex = -1;
    int cusp_index = 0;

    bool operator==(const Landmark&) const = default;
};

struct LandmarkOptions {
    double incisal_band_mm = 1.0;
    double cusp_merge_mm = 1.5;
};

struct ToothLandmarks {
    std::vector<Landmark> landmarks;
    bool missing = false; ///< no surviving peak: needs human review
};

/**
 * Incisors: among member vertices within incisal_band_mm of the tooth's
 * top, the one horizontally nearest their mean (higher wins ties).
 * Canines: the highest member peak. Premolars and molars: buccal-side
 * member peaks, one per cluster of peaks horizontally
 * within cusp_merge_mm (highest kept), ordered mesial to distal.
 */
ToothLandmarks extract_landmarks(const LabeledTooth& tooth, const IndexedMesh& mesh, const Frame& frame,
                                 const ArchCurve& arch, const LandmarkOptions& options = {});

} // namespace archmark
