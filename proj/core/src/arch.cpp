#include "archmark/arch.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "archmark/error.hpp"

namespace archmark {

ArchCurve fit_quadratic(std::span<const Vec2> points, std::span<const double> weights)
{
    if (!weights.empty() && weights.size() != points.size())
        throw Error(ErrorKind::invalid_input, "weights and points differ in length");

    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < points.size(); ++i)
        if (weights.empty() || weights[i] > 0)
            used.push_back(i);

    std::vector<double> xs;
    for (auto i : used)
        xs.push_back(points[i].x());
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if (xs.size() < 3)
        throw Error(ErrorKind::arch_fit, "quadratic fit needs three distinct x values, got " +
                                             std::to_string(xs.size()));

    // Centre and scale x so the design matrix is well conditioned.
    double mean = 0;
    for (auto i : used)
        mean += points[i].x();
    mean /= static_cast<double>(used.size());
    double scale = 0;
    for (auto i : used)
        scale = std::max(scale, std::abs(points[i].x() - mean));
    if (!(scale > 0))
        scale = 1;

    Eigen::MatrixXd design(used.size(), 3);
    Eigen::VectorXd rhs(used.size());
    for (std::size_t r = 0; r < used.size(); ++r) {
        const auto i = used[r];
        const double w = weights.empty() ? 1.0 : std::sqrt(weights[i]);
        const double u = (points[i].x() - mean) / scale;
        design(r, 0) = w * u * u;
        design(r, 1) = w * u;
        design(r, 2) = w;
        rhs(r) = w * points[i].y();
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() < 3)
        throw Error(ErrorKind::arch_fit, "quadratic fit design matrix is rank deficient");
    const Eigen::Vector3d k = qr.solve(rhs);

    // y = k0 u^2 + k1 u + k2 with u = (x - mean) / scale.
    ArchCurve curve;
    const double s2 = scale * scale;
    curve.a = k[0] / s2;
    curve.b = k[1] / scale - 2.0 * k[0] * mean / s2;
    curve.c = k[0] * mean * mean / s2 - k[1] * mean / scale + k[2];
    if (!std::isfinite(curve.a) || !std::isfinite(curve.b) || !std::isfinite(curve.c))
        throw Error(ErrorKind::arch_fit, "quadratic fit produced non-finite coefficients");
    return curve;
}

ArchCurve fit_arch(std::span<const Vec3> points, const Frame& frame)
{
    std::vector<Vec2> flat;
    flat.reserve(points.size());
    for (const auto& p : points)
        flat.push_back(frame.horizontal(p));
    ArchCurve curve = fit_quadratic(flat);
    curve.frame = frame;
    return curve;
}

namespace {

/// Real roots of c3 x^3 + c2 x^2 + c1 x + c0.
std::vector<double> real_cubic_roots(double c3, double c2, double c1, double c0)
{
    std::vector<double> roots;
    const double mag = std::max({std::abs(c3), std::abs(c2), std::abs(c1)});
    if (std::abs(c3) <= 1e-14 * mag) {
        if (std::abs(c2) <= 1e-14 * mag) {
            if (c1 != 0)
                roots.push_back(-c0 / c1);
            return roots;
        }
        const double disc = c1 * c1 - 4 * c2 * c0;
        if (disc >= 0) {
            const double q = -0.5 * (c1 + std::copysign(std::sqrt(disc), c1));
            roots.push_back(q / c2);
            if (q != 0)
                roots.push_back(c0 / q);
        }
        return roots;
    }
    const double a = c2 / c3, b = c1 / c3, c = c0 / c3;
    const double q = (a * a - 3 * b) / 9;
    const double r = (2 * a * a * a - 9 * a * b + 27 * c) / 54;
    const double r2 = r * r, q3 = q * q * q;
    if (r2 < q3) {
        const double theta = std::acos(std::clamp(r / std::sqrt(q3), -1.0, 1.0));
        const double sq = -2 * std::sqrt(q);
        roots.push_back(sq * std::cos(theta / 3) - a / 3);
        roots.push_back(sq * std::cos((theta + 2 * std::numbers::pi) / 3) - a / 3);
        roots.push_back(sq * std::cos((theta - 2 * std::numbers::pi) / 3) - a / 3);
    } else {
        const double big_a = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r2 - q3)), r);
        const double big_b = big_a != 0 ? q / big_a : 0;
        roots.push_back(big_a + big_b - a / 3);
    }
    // Newton polish.
    for (double& x : roots) {
        for (int it = 0; it < 4; ++it) {
            const double f = ((c3 * x + c2) * x + c1) * x + c0;
            const double df = (3 * c3 * x + 2 * c2) * x + c1;
            if (df == 0)
                break;
            const double step = f / df;
            x -= step;
            if (std::abs(step) <= 1e-15 * (1 + std::abs(x)))
                break;
        }
    }
    return roots;
}

} // namespace

ArchProjection project_onto(const ArchCurve& curve, const Vec2& point)
{
    const double a = curve.a, b = curve.b, px = point.x(), py = point.y();
    const double e = curve.c - py;
    // d/dx of squared distance / 2 = (x - px) + (a x^2 + b x + e)(2 a x + b)
    auto roots = real_cubic_roots(2 * a * a, 3 * a * b, b * b + 2 * a * e + 1, b * e - px);
    ArchProjection best;
    best.distance = std::numeric_limits<double>::infinity();
    for (double x : roots) {
        if (!std::isfinite(x))
            continue;
        const Vec2 q(x, curve.eval(x));
        const double d = (q - point).norm();
        if (d < best.distance || (d == best.distance && x < best.s)) {
            best.distance = d;
            best.s = x;
            best.nearest = q;
        }
    }
    if (!std::isfinite(best.distance)) {
        best.s = px;
        best.nearest = Vec2(px, curve.eval(px));
        best.distance = (best.nearest - point).norm();
    }
    return best;
}

std::vector<std::size_t> order_by_arch(const ArchCurve& curve, std::span<const Vec2> points)
{
    std::vector<double> s(points.size());
    for (std::size_t i = 0; i < points.size(); ++i)
        s[i] = project_onto(curve, points[i]).s;
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return s[i] < s[j]; });
    return order;
}

Vec2 direction_at_2d(const ArchCurve& curve, const Vec2& point, ArchDirection which)
{
    const double x = project_onto(curve, point).s;
    const double dydx = curve.slope(x);
    Vec2 distal = dydx >= 0 ? Vec2(-1.0, -dydx) : Vec2(1.0, dydx);
    distal.normalize();
    const Vec2 buccal = Vec2(-dydx, 1.0).normalized();
    switch (which) {
    case ArchDirection::distal: return distal;
    case ArchDirection::mesial: return -distal;
    case ArchDirection::buccal: return buccal;
    case ArchDirection::lingual: return -buccal;
    }
    return distal;
}

Vec3 direction_at(const ArchCurve& curve, const Vec2& point, ArchDirection which)
{
    return curve.frame.lift_direction(direction_at_2d(curve, point, which)).normalized();
}

Vec3 direction_at(const ArchCurve& curve, const Vec3& point, ArchDirection which)
{
    return direction_at(curve, curve.frame.horizontal(point), which);
}

double buccal_offset(const ArchCurve& curve, const Vec2& point)
{
    const auto proj = project_onto(curve, point);
    const Vec2 buccal = Vec2(-curve.slope(proj.s), 1.0).normalized();
    return (point - proj.nearest).dot(buccal);
}

} // namespace archmark
