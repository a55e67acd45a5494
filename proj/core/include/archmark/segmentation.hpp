#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "archmark/arch.hpp"
#include "archmark/curvature.hpp"
#include "archmark/diagnostics.hpp"
#include "archmark/mesh.hpp"
#include "archmark/orientation.hpp"
#include "archmark/peaks.hpp"

namespace archmark {

/**
 * Faces reached from a peak by the cheapest accumulated crease cost.
 *
 * faces/costs are parallel and sorted by ascending cost (the order a
 * priority-queue fill settles them); every face not listed has T = t_max.
 */
struct Region {
    Peak seed;
    double t_max = 0.0;
    std::vector<FaceIndex> faces;
    std::vector<double> costs;
    bool spilled = false;
    bool touches_boundary = false;

    /// T for any face (t_max if unreached).
    double cost_at(FaceIndex f) const;
    /// Member faces sorted by index.
    std::vector<FaceIndex> sorted_faces() const;
};

struct FloodOptions {
    double t_max = 1.0;
    /// Horizontal distance from the seed beyond which faces are reached but
    /// never expanded. Infinity disables the stop rule.
    double spill_radius = std::numeric_limits<double>::infinity();
};

/// Priority-queue flood fill: T[i] = min(t_max, min_j T[j] + E[i,j]) with
/// T = 0 on faces touching the seed vertex.
Region flood_fill(const IndexedMesh& mesh, const EdgeCurvatureMap& costs, const Peak& seed, const Frame& frame,
                  const FloodOptions& options);

/// Restricts a region to a smaller threshold. Exact: a fill run directly at
/// t_max yields the same members, costs and flags.
Region truncate_region(const Region& region, double t_max, const IndexedMesh& mesh, const Frame& frame,
                       double spill_radius);

/// Connected components of the region overlap graph, as sorted index lists.
std::vector<std::vector<std::size_t>> group_overlapping(std::span<const Region> regions);

enum class DropReason { spilled, steep_neighbor, one_sided_normals, touches_boundary };
const char* to_string(DropReason reason) noexcept;

struct CleanOptions {
    double steep_ratio = 1.5;
    double bilateral_min_fraction = 0.05;
    double bilateral_min_variance = 0.15;
};

struct DroppedGroup {
    std::vector<std::size_t> regions;
    DropReason reason;
};

struct CleanResult {
    std::vector<std::vector<std::size_t>> kept;
    std::vector<DroppedGroup> dropped;
};

/// Removes groups that are not teeth. all_peaks is the height-filtered peak
/// set used for the steep-neighbour test; arch supplies the local buccal
/// axis for the normal-spread test.
CleanResult clean_regions(const std::vector<std::vector<std::size_t>>& groups, std::span<const Region> regions,
                          std::span<const Peak> all_peaks, const Frame& frame, const IndexedMesh& mesh,
                          const ArchCurve& arch, const CleanOptions& options = {});

/// True when the face normals project onto the buccal axis with both signs
/// (each at least min_fraction of faces) or with variance >= min_variance.
bool has_bilateral_normals(const IndexedMesh& mesh, std::span<const FaceIndex> faces, const Vec3& buccal,
                           double min_fraction, double min_variance);

/// A candidate tooth: inline groups merged along the arch.
struct Blob {
    std::vector<std::size_t> regions;
    std::vector<FaceIndex> faces; ///< sorted, unique
    std::vector<Peak> peaks;
    double span_min = 0.0;
    double span_max = 0.0;
};

/// Arc-parameter span [min, max] of the face centroids.
std::pair<double, double> arch_span(const IndexedMesh& mesh, std::span<const FaceIndex> faces, const ArchCurve& arch);

/// Merges groups whose spans overlap by at least overlap_fraction of the
/// shorter span (transitively). Blobs are returned left to right.
std::vector<Blob> group_inline(const std::vector<std::vector<std::size_t>>& groups, std::span<const Region> regions,
                               const IndexedMesh& mesh, const ArchCurve& arch, double overlap_fraction = 0.4);

struct SegmentationOptions {
    double spill_radius_mm = 12.0;
    std::vector<double> thresholds = default_thresholds();
    double overlap_fraction = 0.4;
    CleanOptions clean;
    /// Candidates whose tooth area is within this fraction of the best are
    /// tied; the smallest threshold among them wins.
    double area_tie_tolerance = 0.02;
    unsigned threads = 1;

    static std::vector<double> default_thresholds();
};

struct CandidateOutcome {
    double t_max = 0.0;
    double tooth_area = 0.0;
    std::size_t blob_count = 0;
};

struct SegmentationResult {
    double t_max = 0.0;
    std::vector<Region> regions;  ///< at the chosen threshold, one per peak
    std::vector<Blob> blobs;
    std::vector<DroppedGroup> dropped;
    ArchCurve arch;               ///< fitted to the surviving peaks
    std::vector<CandidateOutcome> candidates;
};

/// Full flood/group/clean/inline pass at one threshold.
SegmentationResult segment_at(const IndexedMesh& mesh, const EdgeCurvatureMap& costs, std::span<const Peak> peaks,
                              const Frame& frame, double t_max, const SegmentationOptions& options = {},
                              Diagnostics* diag = nullptr);

/// Runs every candidate threshold and keeps the one maximising total blob
/// area. Throws ErrorKind::segmentation when no candidate keeps any tooth.
SegmentationResult adaptive_threshold(const IndexedMesh& mesh, const EdgeCurvatureMap& costs,
                                      std::span<const Peak> peaks, const Frame& frame,
                                      const SegmentationOptions& options = {}, Diagnostics* diag = nullptr);

} // namespace archmark
