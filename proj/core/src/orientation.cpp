#include "archmark/orientation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <numbers>
#include <vector>

#include "archmark/arch.hpp"
#include "archmark/error.hpp"

namespace archmark {

double Frame::determinant() const
{
    Mat3 m;
    m.col(0) = right;
    m.col(1) = forwards;
    m.col(2) = up;
    return m.determinant();
}

Frame Frame::transformed(const RigidMotion& motion) const
{
    Frame f;
    f.right = motion.apply_direction(right);
    f.forwards = motion.apply_direction(forwards);
    f.up = motion.apply_direction(up);
    f.occlusal = motion.apply_direction(occlusal);
    f.origin = motion.apply(origin);
    return f;
}

PcaResult pca_axes(std::span<const Vec3> points)
{
    if (points.size() < 3)
        throw Error(ErrorKind::orientation, "PCA needs at least 3 points");

    Vec3 centroid = Vec3::Zero();
    for (const auto& p : points)
        centroid += p;
    centroid /= static_cast<double>(points.size());

    Mat3 m = Mat3::Zero();
    for (const auto& p : points) {
        const Vec3 d = p - centroid;
        m.noalias() += d * d.transpose();
    }

    Eigen::SelfAdjointEigenSolver<Mat3> solver(m);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorKind::orientation, "eigen decomposition of the covariance matrix failed");

    // Eigen returns ascending eigenvalues.
    PcaResult out;
    out.centroid = centroid;
    for (int k = 0; k < 3; ++k) {
        out.eigenvalues[k] = std::max(0.0, solver.eigenvalues()[2 - k]);
        out.axes[k] = solver.eigenvectors().col(2 - k).normalized();
    }
    const double scale = out.eigenvalues[0];
    if (!(scale > 0) || out.eigenvalues[1] <= 1e-12 * scale)
        throw Error(ErrorKind::orientation, "point set is collinear");
    if (out.eigenvalues[2] <= 1e-12 * scale)
        throw Error(ErrorKind::orientation, "point set is coplanar");
    return out;
}

double arch_shape_coefficient(const IndexedMesh& mesh, const Frame& frame)
{
    std::vector<Vec2> pts;
    std::vector<double> weights;
    pts.reserve(mesh.vertex_count());
    weights.reserve(mesh.vertex_count());
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
        const Vec3 n = mesh.vertex_normal(static_cast<VertexIndex>(v));
        pts.push_back(frame.horizontal(mesh.vertices()[v]));
        weights.push_back(std::max(0.0, 1.0 - n.dot(frame.occlusal)));
    }
    return fit_quadratic(pts, weights).a;
}

Frame orient(const IndexedMesh& mesh, const OrientOptions& options)
{
    if (mesh.face_count() < options.min_faces)
        throw Error(ErrorKind::orientation, "mesh has " + std::to_string(mesh.face_count()) +
                                                " faces; orientation needs at least " +
                                                std::to_string(options.min_faces));

    const PcaResult pca = pca_axes(mesh.vertices());
    Frame frame;
    frame.origin = pca.centroid;
    frame.right = pca.axes[0];
    frame.forwards = pca.axes[1];
    frame.up = pca.axes[2];

    // 1. Occlusal surfaces are the most densely triangulated, so the mean
    //    face normal leans occlusally.
    Vec3 mean_normal = Vec3::Zero();
    for (const auto& n : mesh.face_normals())
        mean_normal += n;
    mean_normal /= static_cast<double>(mesh.face_count());
    const double agreement = mean_normal.dot(frame.up);
    if (std::abs(agreement) < options.ambiguity_tolerance)
        throw Error(ErrorKind::orientation, "occlusal direction is ambiguous (mean normal . up = " +
                                                std::to_string(agreement) + ")");
    if (agreement < 0)
        frame.up = -frame.up;
    frame.occlusal = frame.up;

    // 2. The arch must be cap shaped when viewed with forwards as +y.
    if (arch_shape_coefficient(mesh, frame) > 0)
        frame.forwards = -frame.forwards;

    // 3. Non-mirroring.
    if (frame.determinant() < 0)
        frame.right = -frame.right;
    return frame;
}

namespace {

/// Slope of the weighted line through the highest point of each forwards bin,
/// or nullopt if fewer than three bins are populated.
std::optional<double> outline_slope(const IndexedMesh& mesh, const Frame& frame, int bins)
{
    const auto& verts = mesh.vertices();
    double fmin = std::numeric_limits<double>::infinity();
    double fmax = -fmin;
    for (const auto& p : verts) {
        const double f = (p - frame.origin).dot(frame.forwards);
        fmin = std::min(fmin, f);
        fmax = std::max(fmax, f);
    }
    if (!(fmax > fmin))
        return std::nullopt;

    std::vector<double> top(bins, -std::numeric_limits<double>::infinity());
    std::vector<double> top_f(bins, 0.0);
    const double width = (fmax - fmin) / bins;
    for (const auto& p : verts) {
        const Vec3 d = p - frame.origin;
        const double f = d.dot(frame.forwards);
        const double h = d.dot(frame.up);
        const int b = std::clamp(static_cast<int>((f - fmin) / width), 0, bins - 1);
        if (h > top[b]) {
            top[b] = h;
            top_f[b] = f;
        }
    }

    std::vector<double> fs, hs;
    for (int b = 0; b < bins; ++b) {
        if (std::isfinite(top[b])) {
            fs.push_back(top_f[b]);
            hs.push_back(top[b]);
        }
    }
    if (fs.size() < 3)
        return std::nullopt;

    const auto [hlo, hhi] = std::minmax_element(hs.begin(), hs.end());
    const double hrange = *hhi - *hlo;
    std::vector<double> sorted_f = fs;
    std::nth_element(sorted_f.begin(), sorted_f.begin() + sorted_f.size() / 2, sorted_f.end());
    const double median = sorted_f[sorted_f.size() / 2];
    double max_offset = 0.0;
    for (double f : fs)
        max_offset = std::max(max_offset, std::abs(f - median));

    double sw = 0, swf = 0, swh = 0, swff = 0, swfh = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const double nh = hrange > 0 ? (hs[i] - *hlo) / hrange : 1.0;
        const double no = max_offset > 0 ? std::abs(fs[i] - median) / max_offset : 0.0;
        const double w = nh * nh * (1.0 - no) * (1.0 - no);
        sw += w;
        swf += w * fs[i];
        swh += w * hs[i];
        swff += w * fs[i] * fs[i];
        swfh += w * fs[i] * hs[i];
    }
    const double det = sw * swff - swf * swf;
    if (!(sw > 0) || !(std::abs(det) > 1e-12 * sw * swff))
        return std::nullopt;
    return (sw * swfh - swf * swh) / det;
}

} // namespace

Frame refine_vertical(const IndexedMesh& mesh, const Frame& frame, const RefineOptions& options, Diagnostics* diag)
{
    Frame out = frame;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        const auto slope = outline_slope(mesh, out, options.bins);
        if (!slope) {
            if (iter == 0)
                warn(diag, "vertical refinement skipped: fewer than 3 populated outline bins");
            break;
        }
        const double m = *slope;
        const double norm = std::sqrt(1.0 + m * m);
        const Vec3 forwards = ((out.forwards + m * out.up) / norm).normalized();
        const Vec3 up = ((out.up - m * out.forwards) / norm).normalized();
        out.forwards = forwards;
        out.up = up;
        // Re-orthogonalise against numerical drift.
        out.right = out.forwards.cross(out.up).normalized();
        out.forwards = out.up.cross(out.right).normalized();
        out.occlusal = out.up;
        if (std::abs(std::atan(m)) < 1e-6)
            break;
    }
    return out;
}

} // namespace archmark
