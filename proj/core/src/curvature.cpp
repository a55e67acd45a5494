#include "archmark/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace archmark {

EdgeCurvatureMap edge_curvatures(const IndexedMesh& mesh, Diagnostics* diag)
{
    const std::size_t nf = mesh.face_count();
    EdgeCurvatureMap out;
    out.signed_curvature.assign(nf, {0.0, 0.0, 0.0});
    out.cost.assign(nf, {0.0, 0.0, 0.0});

    const auto& normals = mesh.face_normals();
    const auto& centroids = mesh.face_centroids();
    const auto& nbrs = mesh.neighbors();
    std::size_t coincident = 0;

    for (std::size_t f = 0; f < nf; ++f) {
        for (int k = 0; k < 3; ++k) {
            const FaceIndex g = nbrs[f][k];
            if (g == kNoNeighbor || g < static_cast<FaceIndex>(f))
                continue;
            const Vec3 dx = centroids[g] - centroids[f];
            const double dist = dx.norm();
            double value = 0.0;
            if (dist < 1e-9) {
                ++coincident;
            } else {
                const double magnitude = normals[f].cross(normals[g]).norm() / dist;
                const double side = normals[f].dot(dx);
                value = side > 0 ? -magnitude : (side < 0 ? magnitude : 0.0);
            }
            out.signed_curvature[f][k] = value;
            // Write the same value into g's slot facing f.
            for (int kk = 0; kk < 3; ++kk)
                if (nbrs[g][kk] == static_cast<FaceIndex>(f))
                    out.signed_curvature[g][kk] = value;
        }
    }
    if (coincident > 0)
        warn(diag, std::to_string(coincident) + " edges join faces with coincident centroids; curvature set to 0");
    return out;
}

EdgeCurvatureMap cost_map(EdgeCurvatureMap curv)
{
    for (std::size_t f = 0; f < curv.face_count(); ++f)
        for (int k = 0; k < 3; ++k)
            curv.cost[f][k] = std::max(-curv.signed_curvature[f][k], 0.0);
    return curv;
}

EdgeCurvatureMap crease_costs(const IndexedMesh& mesh, Diagnostics* diag)
{
    return cost_map(edge_curvatures(mesh, diag));
}

std::vector<double> min_face_curvature(const IndexedMesh& mesh, const EdgeCurvatureMap& curv)
{
    std::vector<double> out(mesh.face_count(), 0.0);
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
        double lo = std::numeric_limits<double>::infinity();
        for (int k = 0; k < 3; ++k)
            if (mesh.neighbors()[f][k] != kNoNeighbor)
                lo = std::min(lo, curv.signed_curvature[f][k]);
        out[f] = std::isfinite(lo) ? lo : 0.0;
    }
    return out;
}

} // namespace archmark
