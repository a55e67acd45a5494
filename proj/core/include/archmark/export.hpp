#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include "archmark/pipeline.hpp"

namespace archmark {

enum class ExportFormat { ply, json };

ExportFormat parse_export_format(std::string_view text);

/// Label colour for a tooth code; stable across runs.
std::array<std::uint8_t, 3> label_color(std::string_view code);
inline constexpr std::array<std::uint8_t, 3> kUnlabeledColor{160, 160, 160};

/**
 * Binary little-endian PLY: every mesh vertex coloured by the tooth owning
 * it (grey when unlabelled) followed by one point per landmark, and the
 * mesh faces.
 */
std::vector<std::uint8_t> export_ply(const IndexedMesh& mesh, const std::vector<LabeledTooth>& teeth,
                                     const LandmarkReport& report);

std::vector<std::uint8_t> export_annotated(const IndexedMesh& mesh, const PipelineResult& result, ExportFormat format);

} // namespace archmark
