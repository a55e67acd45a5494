#include "archmark/peaks.hpp"

#include <algorithm>

namespace archmark {

std::vector<Peak> find_peaks(const IndexedMesh& mesh, const Frame& frame)
{
    const auto& verts = mesh.vertices();
    std::vector<double> height(verts.size());
    for (std::size_t v = 0; v < verts.size(); ++v)
        height[v] = frame.height(verts[v]);

    std::vector<Peak> peaks;
    for (std::size_t v = 0; v < verts.size(); ++v) {
        const auto ring = mesh.vertex_neighbors(static_cast<VertexIndex>(v));
        if (ring.empty())
            continue;
        const bool strict = std::all_of(ring.begin(), ring.end(), [&](VertexIndex u) { return height[u] < height[v]; });
        if (strict)
            peaks.push_back({static_cast<VertexIndex>(v), verts[v], height[v]});
    }
    return peaks;
}

std::vector<Peak> filter_by_height(const std::vector<Peak>& peaks, double threshold_mm)
{
    if (peaks.empty())
        return {};
    const double top = std::max_element(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
                           return a.height < b.height;
                       })->height;
    std::vector<Peak> kept;
    for (const auto& p : peaks)
        if (top - p.height < threshold_mm)
            kept.push_back(p);
    return kept;
}

} // namespace archmark
