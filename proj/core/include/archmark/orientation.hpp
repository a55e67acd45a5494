#pragma once

#include <array>
#include <span>

#include "archmark/diagnostics.hpp"
#include "archmark/geometry.hpp"
#include "archmark/mesh.hpp"

namespace archmark {

/**
 * Model orientation. right/forwards/up form a right-handed orthonormal basis;
 * left, backwards and down are their negations. Every height or horizontal
 * measurement in the pipeline goes through these vectors instead of raw
 * scanner axes.
 */
struct Frame {
    Vec3 right = Vec3::UnitX();
    Vec3 forwards = Vec3::UnitY();
    Vec3 up = Vec3::UnitZ();
    Vec3 occlusal = Vec3::UnitZ();
    Vec3 origin = Vec3::Zero();

    Vec3 left() const { return -right; }
    Vec3 backwards() const { return -forwards; }
    Vec3 down() const { return -up; }

    /// Horizontal (right, forwards) coordinates of p relative to origin.
    Vec2 horizontal(const Vec3& p) const
    {
        const Vec3 d = p - origin;
        return {d.dot(right), d.dot(forwards)};
    }
    double height(const Vec3& p) const { return (p - origin).dot(occlusal); }
    /// Lift a horizontal direction (x right, y forwards) to 3D.
    Vec3 lift_direction(const Vec2& d) const { return d.x() * right + d.y() * forwards; }

    double determinant() const;
    Frame transformed(const RigidMotion& motion) const;
};

struct PcaResult {
    std::array<Vec3, 3> axes;       ///< orthonormal, descending eigenvalue
    std::array<double, 3> eigenvalues;
    Vec3 centroid = Vec3::Zero();
};

/// Principal axes of a point set. Throws ErrorKind::orientation when the
/// points are fewer than 3, collinear or coplanar.
PcaResult pca_axes(std::span<const Vec3> points);

struct OrientOptions {
    std::size_t min_faces = 100;
    /// |occlusal . mean normal| below this is treated as ambiguous.
    double ambiguity_tolerance = 1e-3;
};

/// PCA frame with eigenvector signs fixed by the occlusal, arch-shape and
/// non-mirroring checks.
Frame orient(const IndexedMesh& mesh, const OrientOptions& options = {});

/// Leading coefficient of the quadratic fitted to horizontal vertex
/// positions weighted by max(0, 1 - n.occlusal). Negative means the arch
/// opens backwards.
double arch_shape_coefficient(const IndexedMesh& mesh, const Frame& frame);

struct RefineOptions {
    int bins = 64;
    int max_iterations = 4;
};

/// Levels the frame by fitting a weighted line through the top-most side-view
/// outline and pitching up/forwards about the right axis.
Frame refine_vertical(const IndexedMesh& mesh, const Frame& frame, const RefineOptions& options = {},
                      Diagnostics* diag = nullptr);

} // namespace archmark
