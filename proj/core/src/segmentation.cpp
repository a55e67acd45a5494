#include "archmark/segmentation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <queue>
#include <thread>

#include "archmark/error.hpp"

namespace archmark {

double Region::cost_at(FaceIndex f) const
{
    for (std::size_t i = 0; i < faces.size(); ++i)
        if (faces[i] == f)
            return costs[i];
    return t_max;
}

std::vector<FaceIndex> Region::sorted_faces() const
{
    std::vector<FaceIndex> out = faces;
    std::sort(out.begin(), out.end());
    return out;
}

const char* to_string(DropReason reason) noexcept
{
    switch (reason) {
    case DropReason::spilled: return "spilled";
    case DropReason::steep_neighbor: return "steep_neighbor";
    case DropReason::one_sided_normals: return "one_sided_normals";
    case DropReason::touches_boundary: return "touches_boundary";
    }
    return "unknown";
}

Region flood_fill(const IndexedMesh& mesh, const EdgeCurvatureMap& costs, const Peak& seed, const Frame& frame,
                  const FloodOptions& options)
{
    if (!(options.t_max > 0))
        throw Error(ErrorKind::invalid_input, "flood fill threshold must be positive");
    if (seed.vertex < 0 || static_cast<std::size_t>(seed.vertex) >= mesh.vertex_count())
        throw Error(ErrorKind::invalid_input, "seed vertex " + std::to_string(seed.vertex) + " is not in the mesh");

    Region region;
    region.seed = seed;
    region.t_max = options.t_max;

    const auto& nbrs = mesh.neighbors();
    const auto& centroids = mesh.face_centroids();
    const Vec2 origin = frame.horizontal(seed.position);
    const double radius = options.spill_radius;

    std::vector<double> dist(mesh.face_count(), std::numeric_limits<double>::infinity());
    std::vector<char> settled(mesh.face_count(), 0);
    using Item = std::pair<double, FaceIndex>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (FaceIndex f : mesh.vertex_faces(seed.vertex)) {
        dist[f] = 0.0;
        queue.emplace(0.0, f);
    }

    while (!queue.empty()) {
        const auto [t, f] = queue.top();
        queue.pop();
        if (settled[f] || t > dist[f])
            continue;
        settled[f] = 1;
        region.faces.push_back(f);
        region.costs.push_back(t);
        if (mesh.is_boundary_face(f))
            region.touches_boundary = true;
        if (std::isfinite(radius) && (frame.horizontal(centroids[f]) - origin).norm() > radius) {
            region.spilled = true;
            continue; // reached, but the fill stops here
        }
        for (int k = 0; k < 3; ++k) {
            const FaceIndex g = nbrs[f][k];
            if (g == kNoNeighbor || settled[g])
                continue;
            const double nt = t + costs.cost[f][k];
            if (nt < options.t_max && nt < dist[g]) {
                dist[g] = nt;
                queue.emplace(nt, g);
            }
        }
    }
    return region;
}

Region truncate_region(const Region& region, double t_max, const IndexedMesh& mesh, const Frame& frame,
                       double spill_radius)
{
    Region out;
    out.seed = region.seed;
    out.t_max = t_max;
    const Vec2 origin = frame.horizontal(region.seed.position);
    for (std::size_t i = 0; i < region.faces.size() && region.costs[i] < t_max; ++i) {
        const FaceIndex f = region.faces[i];
        out.faces.push_back(f);
        out.costs.push_back(region.costs[i]);
        if (mesh.is_boundary_face(f))
            out.touches_boundary = true;
        if (std::isfinite(spill_radius) && (frame.horizontal(mesh.face_centroids()[f]) - origin).norm() > spill_radius)
            out.spilled = true;
    }
    return out;
}

namespace {

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
};

std::vector<std::vector<std::size_t>> components(DisjointSets& sets, std::size_t n)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> slot(n, SIZE_MAX);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = sets.find(i);
        if (slot[root] == SIZE_MAX) {
            slot[root] = out.size();
            out.emplace_back();
        }
        out[slot[root]].push_back(i);
    }
    return out;
}

std::vector<FaceIndex> union_faces(const std::vector<std::size_t>& group, std::span<const Region> regions)
{
    std::vector<FaceIndex> faces;
    for (auto r : group)
        faces.insert(faces.end(), regions[r].faces.begin(), regions[r].faces.end());
    std::sort(faces.begin(), faces.end());
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    return faces;
}

} // namespace

std::vector<std::vector<std::size_t>> group_overlapping(std::span<const Region> regions)
{
    DisjointSets sets(regions.size());
    std::vector<std::pair<FaceIndex, std::size_t>> owners;
    for (std::size_t r = 0; r < regions.size(); ++r)
        for (FaceIndex f : regions[r].faces)
            owners.emplace_back(f, r);
    std::sort(owners.begin(), owners.end());
    for (std::size_t i = 1; i < owners.size(); ++i)
        if (owners[i].first == owners[i - 1].first)
            sets.unite(owners[i].second, owners[i - 1].second);
    return components(sets, regions.size());
}

bool has_bilateral_normals(const IndexedMesh& mesh, std::span<const FaceIndex> faces, const Vec3& buccal,
                           double min_fraction, double min_variance)
{
    if (faces.empty())
        return false;
    std::size_t pos = 0, neg = 0;
    double sum = 0, sum_sq = 0;
    for (FaceIndex f : faces) {
        const double p = mesh.face_normals()[f].dot(buccal);
        pos += p > 0;
        neg += p < 0;
        sum += p;
        sum_sq += p * p;
    }
    const double n = static_cast<double>(faces.size());
    if (pos >= min_fraction * n && neg >= min_fraction * n)
        return true;
    const double mean = sum / n;
    return sum_sq / n - mean * mean >= min_variance;
}

CleanResult clean_regions(const std::vector<std::vector<std::size_t>>& groups, std::span<const Region> regions,
                          std::span<const Peak> all_peaks, const Frame& frame, const IndexedMesh& mesh,
                          const ArchCurve& arch, const CleanOptions& options)
{
    auto steep = [&](const Peak& p) {
        const Vec2 hp = frame.horizontal(p.position);
        for (const auto& q : all_peaks) {
            if (q.vertex == p.vertex)
                continue;
            const double dv = q.height - p.height;
            if (dv <= 0)
                continue;
            const double dh = (frame.horizontal(q.position) - hp).norm();
            if (dv > options.steep_ratio * dh)
                return true;
        }
        return false;
    };

    CleanResult out;
    for (const auto& group : groups) {
        // Peak-level rules first, then group-level rules.
        if (std::any_of(group.begin(), group.end(), [&](std::size_t r) { return regions[r].spilled; })) {
            out.dropped.push_back({group, DropReason::spilled});
            continue;
        }
        if (std::any_of(group.begin(), group.end(), [&](std::size_t r) { return steep(regions[r].seed); })) {
            out.dropped.push_back({group, DropReason::steep_neighbor});
            continue;
        }
        const auto faces = union_faces(group, regions);
        Vec3 centroid = Vec3::Zero();
        double area = 0;
        for (FaceIndex f : faces) {
            centroid += mesh.face_areas()[f] * mesh.face_centroids()[f];
            area += mesh.face_areas()[f];
        }
        if (area > 0)
            centroid /= area;
        const Vec3 buccal = direction_at(arch, centroid, ArchDirection::buccal);
        if (!has_bilateral_normals(mesh, faces, buccal, options.bilateral_min_fraction,
                                   options.bilateral_min_variance)) {
            out.dropped.push_back({group, DropReason::one_sided_normals});
            continue;
        }
        if (std::any_of(group.begin(), group.end(), [&](std::size_t r) { return regions[r].touches_boundary; })) {
            out.dropped.push_back({group, DropReason::touches_boundary});
            continue;
        }
        out.kept.push_back(group);
    }
    return out;
}

std::pair<double, double> arch_span(const IndexedMesh& mesh, std::span<const FaceIndex> faces, const ArchCurve& arch)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (FaceIndex f : faces) {
        const double s = project_onto(arch, arch.frame.horizontal(mesh.face_centroids()[f])).s;
        lo = std::min(lo, s);
        hi = std::max(hi, s);
    }
    return {lo, hi};
}

std::vector<Blob> group_inline(const std::vector<std::vector<std::size_t>>& groups, std::span<const Region> regions,
                               const IndexedMesh& mesh, const ArchCurve& arch, double overlap_fraction)
{
    const std::size_t n = groups.size();
    std::vector<std::vector<FaceIndex>> faces(n);
    std::vector<std::pair<double, double>> spans(n);
    for (std::size_t g = 0; g < n; ++g) {
        faces[g] = union_faces(groups[g], regions);
        spans[g] = arch_span(mesh, faces[g], arch);
    }

    DisjointSets sets(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double overlap = std::min(spans[i].second, spans[j].second) - std::max(spans[i].first, spans[j].first);
            const double shorter = std::min(spans[i].second - spans[i].first, spans[j].second - spans[j].first);
            if (overlap > 0 && overlap >= overlap_fraction * shorter)
                sets.unite(i, j);
        }
    }

    std::vector<Blob> blobs;
    for (const auto& members : components(sets, n)) {
        Blob blob;
        blob.span_min = std::numeric_limits<double>::infinity();
        blob.span_max = -blob.span_min;
        for (auto g : members) {
            blob.regions.insert(blob.regions.end(), groups[g].begin(), groups[g].end());
            blob.faces.insert(blob.faces.end(), faces[g].begin(), faces[g].end());
            blob.span_min = std::min(blob.span_min, spans[g].first);
            blob.span_max = std::max(blob.span_max, spans[g].second);
        }
        std::sort(blob.regions.begin(), blob.regions.end());
        std::sort(blob.faces.begin(), blob.faces.end());
        blob.faces.erase(std::unique(blob.faces.begin(), blob.faces.end()), blob.faces.end());
        for (auto r : blob.regions)
            blob.peaks.push_back(regions[r].seed);
        blobs.push_back(std::move(blob));
    }
    std::stable_sort(blobs.begin(), blobs.end(), [](const Blob& a, const Blob& b) {
        return 0.5 * (a.span_min + a.span_max) < 0.5 * (b.span_min + b.span_max);
    });
    return blobs;
}

std::vector<double> SegmentationOptions::default_thresholds()
{
    constexpr int kCount = 12;
    constexpr double kLo = 0.05, kHi = 3.0;
    std::vector<double> out(kCount);
    for (int i = 0; i < kCount; ++i)
        out[i] = kLo * std::pow(kHi / kLo, static_cast<double>(i) / (kCount - 1));
    out.back() = kHi;
    return out;
}

namespace {

std::optional<ArchCurve> try_fit_arch(std::span<const Peak> peaks, const Frame& frame)
{
    std::vector<Vec3> pts;
    for (const auto& p : peaks)
        pts.push_back(p.position);
    try {
        return fit_arch(pts, frame);
    } catch (const Error&) {
        return std::nullopt;
    }
}

ArchCurve preliminary_arch(std::span<const Peak> peaks, const Frame& frame)
{
    if (auto arch = try_fit_arch(peaks, frame))
        return *arch;
    ArchCurve flat;
    flat.frame = frame;
    return flat; // buccal == forwards everywhere
}

std::vector<Region> fill_all(const IndexedMesh& mesh, const EdgeCurvatureMap& costs, std::span<const Peak> peaks,
                             const Frame& frame, const FloodOptions& flood, unsigned threads)
{
    std::vector<Region> regions(peaks.size());
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(peaks.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < peaks.size(); ++i)
            regions[i] = flood_fill(mesh, costs, peaks[i], frame, flood);
        return regions;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < peaks.size(); i = next++)
                regions[i] = flood_fill(mesh, costs, peaks[i], frame, flood);
        });
    }
    for (auto& t : pool)
        t.join();
    return regions;
}

SegmentationResult segment_regions(std::vector<Region> regions, const IndexedMesh& mesh, std::span<const Peak> peaks,
                                   const Frame& frame, const ArchCurve& prelim, double t_max,
                                   const SegmentationOptions& options)
{
    SegmentationResult result;
    result.t_max = t_max;
    const auto groups = group_overlapping(regions);
    auto cleaned = clean_regions(groups, regions, peaks, frame, mesh, prelim, options.clean);

    std::vector<Peak> surviving;
    for (const auto& g : cleaned.kept)
        for (auto r : g)
            surviving.push_back(regions[r].seed);
    result.arch = try_fit_arch(surviving, frame).value_or(prelim);

    result.blobs = group_inline(cleaned.kept, regions, mesh, result.arch, options.overlap_fraction);
    result.dropped = std::move(cleaned.dropped);
    result.regions = std::move(regions);
    return result;
}

double blob_area(const IndexedMesh& mesh, const std::vector<Blob>& blobs)
{
    double total = 0;
    for (const auto& b : blobs)
        total += surface_area(mesh, b.faces);
    return total;
}

} // namespace

SegmentationResult segment_at(const IndexedMesh& mesh, const EdgeCurvatureMap& costs, std::span<const Peak> peaks,
                              const Frame& frame, double t_max, const SegmentationOptions& options, Diagnostics*)
{
    const FloodOptions flood{t_max, options.spill_radius_mm};
    auto regions = fill_all(mesh, costs, peaks, frame, flood, options.threads);
    auto result = segment_regions(std::move(regions), mesh, peaks, frame, preliminary_arch(peaks, frame), t_max, options);
    result.candidates.push_back({t_max, blob_area(mesh, result.blobs), result.blobs.size()});
    return result;
}

SegmentationResult adaptive_threshold(const IndexedMesh& mesh, const EdgeCurvatureMap& costs,
                                      std::span<const Peak> peaks, const Frame& frame,
                                      const SegmentationOptions& options, Diagnostics* diag)
{
    if (options.thresholds.empty())
        throw Error(ErrorKind::invalid_input, "no candidate thresholds");
    std::vector<double> ladder = options.thresholds;
    std::sort(ladder.begin(), ladder.end());
    ladder.erase(std::unique(ladder.begin(), ladder.end()), ladder.end());

    // One fill per peak at the largest threshold; smaller thresholds are
    // exact prefixes of it.
    const FloodOptions flood{ladder.back(), options.spill_radius_mm};
    const auto full = fill_all(mesh, costs, peaks, frame, flood, options.threads);
    const ArchCurve prelim = preliminary_arch(peaks, frame);

    std::vector<SegmentationResult> outcomes;
    std::vector<CandidateOutcome> summary;
    for (double t : ladder) {
        std::vector<Region> regions;
        regions.reserve(full.size());
        for (const auto& r : full)
            regions.push_back(truncate_region(r, t, mesh, frame, options.spill_radius_mm));
        auto outcome = segment_regions(std::move(regions), mesh, peaks, frame, prelim, t, options);
        summary.push_back({t, blob_area(mesh, outcome.blobs), outcome.blobs.size()});
        outcomes.push_back(std::move(outcome));
    }

    double best_area = 0;
    for (const auto& c : summary)
        best_area = std::max(best_area, c.tooth_area);
    if (!(best_area > 0))
        throw Error(ErrorKind::segmentation, "no candidate threshold kept any tooth area");

    std::size_t chosen = 0;
    for (std::size_t i = 0; i < summary.size(); ++i) {
        if (summary[i].tooth_area >= (1.0 - options.area_tie_tolerance) * best_area) {
            chosen = i;
            break;
        }
    }
    if (ladder.size() > 1 && chosen + 1 == ladder.size())
        warn(diag, "largest candidate threshold chosen; the ladder may be too short");

    SegmentationResult result = std::move(outcomes[chosen]);
    result.candidates = std::move(summary);
    return result;
}

} // namespace archmark
