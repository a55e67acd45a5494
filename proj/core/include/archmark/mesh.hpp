#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "archmark/geometry.hpp"
#include "archmark/stl.hpp"

namespace archmark {

using FaceIndex = std::int32_t;
using VertexIndex = std::int32_t;

constexpr FaceIndex kNoNeighbor = -1;

struct IndexOptions {
    /// Vertices closer than this (per coordinate, grid snapped) are merged.
    /// 0 means exact bitwise equality.
    double snap_tolerance = 0.0;
};

/// Bookkeeping from index_mesh about input defects that were tolerated.
struct IndexStats {
    std::size_t degenerate_dropped = 0;
    std::size_t non_manifold_incidences = 0;
    std::size_t normal_mismatches = 0;
};

/**
 * Deduplicated, adjacency-aware triangle mesh with per-face geometry.
 *
 * Face f's edge k runs from faces()[f][k] to faces()[f][(k+1)%3] and
 * neighbors()[f][k] is the face across that edge, or kNoNeighbor.
 * Immutable after construction.
 */
class IndexedMesh {
public:
    IndexedMesh() = default;
    IndexedMesh(std::vector<Vec3> vertices, std::vector<std::array<VertexIndex, 3>> faces,
                IndexStats stats = {});

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t face_count() const { return faces_.size(); }

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<std::array<VertexIndex, 3>>& faces() const { return faces_; }
    const std::vector<Vec3>& face_normals() const { return normals_; }
    const std::vector<Vec3>& face_centroids() const { return centroids_; }
    const std::vector<double>& face_areas() const { return areas_; }
    const std::vector<std::array<FaceIndex, 3>>& neighbors() const { return neighbors_; }
    /// (face, edge slot) pairs with no opposite face.
    const std::vector<std::pair<FaceIndex, int>>& boundary_edges() const { return boundary_edges_; }
    const IndexStats& stats() const { return stats_; }

    bool is_boundary_face(FaceIndex f) const;

    /// 1-ring vertex neighbours of v.
    std::span<const VertexIndex> vertex_neighbors(VertexIndex v) const;
    /// Faces incident to v.
    std::span<const FaceIndex> vertex_faces(VertexIndex v) const;

    /// Area-weighted vertex normal (unit, or zero for isolated vertices).
    Vec3 vertex_normal(VertexIndex v) const;

    /// Copy with every vertex moved by the rigid motion.
    IndexedMesh transformed(const RigidMotion& motion) const;

    TriangleSoup to_soup() const;

private:
    void build();

    std::vector<Vec3> vertices_;
    std::vector<std::array<VertexIndex, 3>> faces_;
    std::vector<Vec3> normals_;
    std::vector<Vec3> centroids_;
    std::vector<double> areas_;
    std::vector<std::array<FaceIndex, 3>> neighbors_;
    std::vector<std::pair<FaceIndex, int>> boundary_edges_;
    std::vector<std::uint32_t> vn_offsets_;
    std::vector<VertexIndex> vn_items_;
    std::vector<std::uint32_t> vf_offsets_;
    std::vector<FaceIndex> vf_items_;
    IndexStats stats_;
};

/// Deduplicates vertices and builds adjacency. Throws on an empty soup.
IndexedMesh index_mesh(const TriangleSoup& soup, const IndexOptions& options = {});

/// Sum of face areas over the subset (mm^2).
double surface_area(const IndexedMesh& mesh, std::span<const FaceIndex> subset);
double surface_area(const IndexedMesh& mesh);

} // namespace archmark
