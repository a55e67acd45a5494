#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "archmark/geometry.hpp"
#include "archmark/orientation.hpp"

namespace archmark {

/**
 * Least-squares jaw curve y = a x^2 + b x + c in the frame's horizontal
 * plane (x along right, y along forwards, both relative to frame.origin).
 */
struct ArchCurve {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    Frame frame;

    double eval(double x) const { return (a * x + b) * x + c; }
    double slope(double x) const { return 2.0 * a * x + b; }
};

/// Weighted least-squares quadratic. weights may be empty (all ones).
/// Throws ErrorKind::arch_fit when fewer than three distinct x carry weight.
ArchCurve fit_quadratic(std::span<const Vec2> points, std::span<const double> weights = {});

/// Fits to the horizontal components of 3D points under frame.
ArchCurve fit_arch(std::span<const Vec3> points, const Frame& frame);

struct ArchProjection {
    double s = 0.0;      ///< arc parameter: x of the nearest curve point
    Vec2 nearest = Vec2::Zero();
    double distance = 0.0;
};

/// Nearest point on the curve (global minimum over all real critical points).
ArchProjection project_onto(const ArchCurve& curve, const Vec2& point);

/// Stable left-to-right order of points by arc parameter.
std::vector<std::size_t> order_by_arch(const ArchCurve& curve, std::span<const Vec2> points);

enum class ArchDirection { mesial, distal, buccal, lingual };

/// Horizontal unit direction at the projection of point onto the curve.
Vec2 direction_at_2d(const ArchCurve& curve, const Vec2& point, ArchDirection which);

/// The same direction lifted to 3D with the curve's frame.
Vec3 direction_at(const ArchCurve& curve, const Vec2& point, ArchDirection which);
Vec3 direction_at(const ArchCurve& curve, const Vec3& point, ArchDirection which);

/// Signed horizontal offset of point from the curve, positive on the buccal side.
double buccal_offset(const ArchCurve& curve, const Vec2& point);

} // namespace archmark
