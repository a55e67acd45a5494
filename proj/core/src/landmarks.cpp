#include "archmark/landmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "archmark/error.hpp"

namespace archmark {

const char* to_string(LandmarkKind kind) noexcept
{
    switch (kind) {
    case LandmarkKind::incisor_midpoint: return "incisor_midpoint";
    case LandmarkKind::canine_tip: return "canine_tip";
    case LandmarkKind::buccal_cusp: return "buccal_cusp";
    }
    return "unknown";
}

LandmarkKind parse_landmark_kind(const std::string& text)
{
    if (text == "incisor_midpoint")
        return LandmarkKind::incisor_midpoint;
    if (text == "canine_tip")
        return LandmarkKind::canine_tip;
    if (text == "buccal_cusp")
        return LandmarkKind::buccal_cusp;
    throw Error(ErrorKind::parse, "unknown landmark kind '" + text + "'");
}

LandmarkKind landmark_kind_for(ToothClass cls) noexcept
{
    switch (cls) {
    case ToothClass::incisor: return LandmarkKind::incisor_midpoint;
    case ToothClass::canine: return LandmarkKind::canine_tip;
    default: return LandmarkKind::buccal_cusp;
    }
}

namespace {

// Higher first; ties broken by vertex index.
bool higher(const Peak& a, const Peak& b)
{
    if (a.height != b.height)
        return a.height > b.height;
    return a.vertex < b.vertex;
}

Landmark at_peak(const LabeledTooth& tooth, LandmarkKind kind, const Peak& p, int cusp)
{
    return {tooth.type.code, kind, p.position, p.vertex, cusp};
}

} // namespace

ToothLandmarks extract_landmarks(const LabeledTooth& tooth, const IndexedMesh& mesh, const Frame& frame,
                                 const ArchCurve& arch, const LandmarkOptions& options)
{
    ToothLandmarks out;
    if (tooth.peaks.empty()) {
        out.missing = true;
        return out;
    }
    const LandmarkKind kind = landmark_kind_for(tooth.type.tooth_class);

    if (kind == LandmarkKind::incisor_midpoint) {
        std::vector<VertexIndex> verts;
        for (FaceIndex f : tooth.faces)
            for (VertexIndex v : mesh.faces()[static_cast<std::size_t>(f)])
                verts.push_back(v);
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());

        double top = -std::numeric_limits<double>::infinity();
        for (VertexIndex v : verts)
            top = std::max(top, frame.height(mesh.vertices()[static_cast<std::size_t>(v)]));
        Vec3 mean = Vec3::Zero();
        std::size_t count = 0;
        for (VertexIndex v : verts) {
            const Vec3& p = mesh.vertices()[static_cast<std::size_t>(v)];
            if (frame.height(p) >= top - options.incisal_band_mm) {
                mean += p;
                ++count;
            }
        }
        mean /= static_cast<double>(count);
        const Vec2 centre = frame.horizontal(mean);
        VertexIndex best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        double best_h = -std::numeric_limits<double>::infinity();
        for (VertexIndex v : verts) {
            const Vec3& p = mesh.vertices()[static_cast<std::size_t>(v)];
            const double h = frame.height(p);
            if (h < top - options.incisal_band_mm)
                continue;
            const double d = (frame.horizontal(p) - centre).squaredNorm();
            if (d < best_d || (d == best_d && h > best_h)) {
                best_d = d;
                best_h = h;
                best = v;
            }
        }
        out.landmarks.push_back(
            {tooth.type.code, kind, mesh.vertices()[static_cast<std::size_t>(best)], best, 0});
        return out;
    }

    std::vector<Peak> peaks = tooth.peaks;
    std::sort(peaks.begin(), peaks.end(), higher);

    if (kind == LandmarkKind::canine_tip) {
        out.landmarks.push_back(at_peak(tooth, kind, peaks.front(), 0));
        return out;
    }

    std::vector<Peak> buccal;
    for (const auto& p : peaks)
        if (buccal_offset(arch, frame.horizontal(p.position)) > 0.0)
            buccal.push_back(p);

    std::vector<Peak> cusps;
    const double merge2 = options.cusp_merge_mm * options.cusp_merge_mm;
    for (const auto& p : buccal) {
        const bool absorbed = std::any_of(cusps.begin(), cusps.end(), [&](const Peak& c) {
            return (frame.horizontal(c.position) - frame.horizontal(p.position)).squaredNorm() <= merge2;
        });
        if (!absorbed)
            cusps.push_back(p);
    }
    if (cusps.empty()) {
        out.missing = true;
        return out;
    }

    // Mesial to distal: increasing distance from the midline along the arch.
    const double midline = arch.a != 0.0 ? -arch.b / (2.0 * arch.a) : 0.0;
    std::vector<std::pair<double, Peak>> ordered;
    for (const auto& c : cusps)
        ordered.emplace_back(std::abs(project_onto(arch, frame.horizontal(c.position)).s - midline), c);
    std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    int index = 0;
    for (const auto& [s, c] : ordered)
        out.landmarks.push_back(at_peak(tooth, kind, c, index++));
    return out;
}

} // namespace archmark
