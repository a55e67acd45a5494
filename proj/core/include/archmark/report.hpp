#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "archmark/assignment.hpp"
#include "archmark/landmarks.hpp"
#include "archmark/orientation.hpp"

namespace archmark {

/// 64-bit FNV-1a over bytes, as 16 lowercase hex digits.
std::string fnv1a_hex(std::span<const std::uint8_t> bytes);
/// Digest of a sorted face-index set (little-endian int32 values).
std::string face_set_digest(std::span<const FaceIndex> faces);

struct ToothReport {
    std::string code;
    std::string tooth_class;
    std::size_t face_count = 0;
    std::string face_digest;
    std::vector<std::size_t> blobs;
    bool partial = false;
    bool anomalous = false;
    bool landmark_missing = false;
    Characteristics characteristics;
    std::vector<Landmark> landmarks;

    bool operator==(const ToothReport&) const = default;
};

struct BlobReport {
    std::size_t index = 0;
    std::optional<std::string> label;
    std::size_t face_count = 0;
    std::string face_digest;
    double span_min = 0.0;
    double span_max = 0.0;
    std::vector<VertexIndex> peaks;
    Characteristics characteristics;

    bool operator==(const BlobReport&) const = default;
};

struct DroppedReport {
    std::vector<VertexIndex> seeds;
    std::string reason;

    bool operator==(const DroppedReport&) const = default;
};

struct CandidateReport {
    double t_max = 0.0;
    double tooth_area = 0.0;
    std::size_t blob_count = 0;

    bool operator==(const CandidateReport&) const = default;
};

struct ReportDiagnostics {
    std::optional<double> t_max;
    std::optional<double> objective;
    std::optional<std::string> stage_failure; ///< "orientation", "segmentation", "assignment"
    std::string message;
    std::vector<std::string> warnings;
    std::vector<DroppedReport> dropped_groups;
    std::vector<CandidateReport> candidates;
    std::optional<std::array<double, 3>> arch; ///< a, b, c

    bool operator==(const ReportDiagnostics&) const = default;
};

struct FrameReport {
    std::array<double, 3> right{};
    std::array<double, 3> forwards{};
    std::array<double, 3> up{};
    std::array<double, 3> occlusal{};
    std::array<double, 3> origin{};

    static FrameReport from(const Frame& frame);
    Frame to_frame() const;
    bool operator==(const FrameReport&) const = default;
};

struct LandmarkReport {
    static constexpr int kSchemaVersion = 1;

    std::string model_id;
    std::string input_digest;
    std::string jaw_kind;
    std::optional<FrameReport> frame;
    std::vector<ToothReport> teeth;
    std::vector<BlobReport> blobs;
    std::vector<std::size_t> unassigned_blobs;
    std::vector<std::string> missing_types;
    ReportDiagnostics diagnostics;

    bool operator==(const LandmarkReport&) const = default;
};

/// Deterministic JSON (sorted keys, shortest round-trip doubles).
std::string to_json(const LandmarkReport& report);
LandmarkReport parse_report(const std::string& json_text);

} // namespace archmark
