#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <utility>

#include "archmark/assignment.hpp"
#include "archmark/peaks.hpp"

#ifndef ARCHMARK_TEST_DATA_DIR
#error "ARCHMARK_TEST_DATA_DIR must point at the shipped data directory"
#endif

namespace archmark::fixtures {

namespace {

IndexedMesh grid(int nx, int ny, const std::function<Vec3(int, int)>& vertex, const std::function<bool(int, int)>& flip)
{
    std::vector<Vec3> verts;
    verts.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            verts.push_back(vertex(i, j));
    auto id = [nx](int i, int j) { return static_cast<VertexIndex>(j * (nx + 1) + i); };
    std::vector<std::array<VertexIndex, 3>> faces;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const VertexIndex a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            if (flip(i, j)) {
                faces.push_back({a, b, d});
                faces.push_back({b, c, d});
            } else {
                faces.push_back({a, b, c});
                faces.push_back({a, c, d});
            }
        }
    }
    return IndexedMesh(std::move(verts), std::move(faces));
}

} // namespace

IndexedMesh heightfield(int nx, int ny, double spacing, const std::function<double(double, double)>& height)
{
    return grid(
        nx, ny,
        [&](int i, int j) {
            const double x = i * spacing, y = j * spacing;
            return Vec3(x, y, height(x, y));
        },
        [](int, int) { return false; });
}

IndexedMesh jittered_heightfield(int nx, int ny, double spacing, double jitter, std::mt19937_64& rng,
                                 const std::function<double(double, double)>& height)
{
    std::uniform_real_distribution<double> u(-jitter, jitter);
    return grid(
        nx, ny,
        [&](int i, int j) {
            double x = i * spacing, y = j * spacing;
            if (i > 0 && j > 0 && i < nx && j < ny) {
                x += u(rng) * spacing;
                y += u(rng) * spacing;
            }
            return Vec3(x, y, height(x, y));
        },
        [](int i, int j) { return (i + j) % 2 == 1; });
}

IndexedMesh icosphere(double radius, int subdivisions)
{
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                               {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& v : verts)
        v.normalize();
    std::vector<std::array<VertexIndex, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<VertexIndex, VertexIndex>, VertexIndex> midpoints;
        auto midpoint = [&](VertexIndex a, VertexIndex b) {
            const auto key = std::minmax(a, b);
            auto it = midpoints.find(key);
            if (it != midpoints.end())
                return it->second;
            verts.push_back((verts[a] + verts[b]).normalized());
            const auto idx = static_cast<VertexIndex>(verts.size() - 1);
            midpoints.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<VertexIndex, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const VertexIndex ab = midpoint(f[0], f[1]), bc = midpoint(f[1], f[2]), ca = midpoint(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    for (auto& v : verts)
        v *= radius;
    return IndexedMesh(std::move(verts), std::move(faces));
}

Mat3 rotation_about(const Vec3& axis, double angle)
{
    return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

RigidMotion random_motion(std::mt19937_64& rng, double max_shift)
{
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(-max_shift, max_shift);
    Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
    q.normalize();
    RigidMotion m;
    m.rotation = q.toRotationMatrix();
    m.translation = Vec3(u(rng), u(rng), u(rng));
    return m;
}

void randomise_costs(EdgeCurvatureMap& map, const IndexedMesh& mesh, std::mt19937_64& rng, double max_cost)
{
    std::uniform_real_distribution<double> u(0.0, max_cost);
    std::bernoulli_distribution zero(0.1);
    const auto& nbrs = mesh.neighbors();
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
        for (int k = 0; k < 3; ++k) {
            const FaceIndex g = nbrs[f][k];
            if (g == kNoNeighbor || g < static_cast<FaceIndex>(f))
                continue;
            const double c = zero(rng) ? 0.0 : u(rng);
            map.cost[f][k] = c;
            for (int kk = 0; kk < 3; ++kk)
                if (nbrs[g][kk] == static_cast<FaceIndex>(f))
                    map.cost[g][kk] = c;
        }
    }
}

std::vector<double> shortest_path_oracle(const IndexedMesh& mesh, const EdgeCurvatureMap& costs,
                                         VertexIndex seed_vertex, double cap)
{
    const std::size_t n = mesh.face_count();
    // Rebuild adjacency from the face lists: faces sharing an undirected edge.
    std::map<std::pair<VertexIndex, VertexIndex>, std::vector<std::pair<FaceIndex, int>>> by_edge;
    for (std::size_t f = 0; f < n; ++f) {
        const auto& tri = mesh.faces()[f];
        for (int k = 0; k < 3; ++k)
            by_edge[std::minmax(tri[k], tri[(k + 1) % 3])].emplace_back(static_cast<FaceIndex>(f), k);
    }
    std::vector<std::vector<std::pair<FaceIndex, double>>> adj(n);
    for (const auto& [edge, users] : by_edge) {
        if (users.size() != 2)
            continue;
        const auto [f, kf] = users[0];
        const auto [g, kg] = users[1];
        adj[f].emplace_back(g, costs.cost[f][kf]);
        adj[g].emplace_back(f, costs.cost[g][kg]);
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    std::set<std::pair<double, FaceIndex>> open;
    for (std::size_t f = 0; f < n; ++f) {
        const auto& tri = mesh.faces()[f];
        if (tri[0] == seed_vertex || tri[1] == seed_vertex || tri[2] == seed_vertex) {
            dist[f] = 0.0;
            open.emplace(0.0, static_cast<FaceIndex>(f));
        }
    }
    while (!open.empty()) {
        const auto [d, f] = *open.begin();
        open.erase(open.begin());
        for (const auto& [g, w] : adj[f]) {
            if (d + w < dist[g]) {
                if (std::isfinite(dist[g]))
                    open.erase({dist[g], g});
                dist[g] = d + w;
                open.emplace(dist[g], g);
            }
        }
    }
    for (auto& d : dist)
        d = std::min(d, cap);
    return dist;
}

namespace {

std::vector<char> flatten(const std::vector<int>& type_of_blob, std::size_t cols)
{
    std::vector<char> out(type_of_blob.size() * cols, 0);
    for (std::size_t i = 0; i < type_of_blob.size(); ++i)
        if (type_of_blob[i] >= 0)
            out[i * cols + static_cast<std::size_t>(type_of_blob[i])] = 1;
    return out;
}

} // namespace

EnumeratedOptimum enumerate_assignments(const CostTable& costs, std::span<const double> priors,
                                        std::span<const MolarGroup> groups, double fussiness)
{
    EnumeratedOptimum best;
    best.objective = std::numeric_limits<double>::infinity();
    std::vector<int> current(costs.rows, -1);
    std::vector<char> used(costs.cols, 0);

    std::function<void(std::size_t, int)> recurse = [&](std::size_t i, int last) {
        if (i == costs.rows) {
            for (const auto& g : groups)
                if (used[g.whole] && (used[g.mesial] || used[g.distal]))
                    return;
            ++best.feasible;
            const double obj = assignment_objective(costs, priors, fussiness, current);
            if (obj < best.objective ||
                (obj == best.objective && flatten(current, costs.cols) < flatten(best.type_of_blob, costs.cols))) {
                best.objective = obj;
                best.type_of_blob = current;
            }
            return;
        }
        current[i] = -1;
        recurse(i + 1, last);
        for (int j = last + 1; j < static_cast<int>(costs.cols); ++j) {
            current[i] = j;
            used[j] = 1;
            recurse(i + 1, j);
            used[j] = 0;
        }
        current[i] = -1;
    };
    recurse(0, -1);
    return best;
}

std::optional<std::string> assignment_violation(const Assignment& a, std::size_t rows, std::size_t cols,
                                                std::span<const MolarGroup> groups)
{
    if (a.type_of_blob.size() != rows || a.blob_of_type.size() != cols)
        return "wrong dimensions";
    for (std::size_t i = 0; i < rows; ++i) {
        int assigned = a.NT(i) ? 1 : 0;
        for (std::size_t j = 0; j < cols; ++j)
            assigned += a.D(i, j);
        if (assigned != 1)
            return "blob " + std::to_string(i) + " row sum " + std::to_string(assigned);
    }
    for (std::size_t j = 0; j < cols; ++j) {
        int assigned = a.MI(j) ? 1 : 0;
        for (std::size_t i = 0; i < rows; ++i)
            assigned += a.D(i, j);
        if (assigned != 1)
            return "type " + std::to_string(j) + " column sum " + std::to_string(assigned);
    }
    int last = -1;
    for (std::size_t i = 0; i < rows; ++i) {
        if (a.type_of_blob[i] < 0)
            continue;
        if (a.type_of_blob[i] <= last)
            return "ordering broken at blob " + std::to_string(i);
        last = a.type_of_blob[i];
    }
    for (const auto& g : groups)
        if (!a.MI(g.whole) && (!a.MI(g.mesial) || !a.MI(g.distal)))
            return "whole molar " + std::to_string(g.whole) + " assigned alongside a half";
    return std::nullopt;
}

GumBumpOutcome gum_bump_fixture(double ratio)
{
    const Vec2 tooth(10.0, 10.0), bump(15.0, 10.0);
    const double top = 12.0;
    const double bump_top = top - ratio * (bump - tooth).norm();
    const auto mesh = heightfield(125, 100, 0.2, [&](double x, double y) {
        const Vec2 p(x, y);
        const double t = top * (1.0 - (p - tooth).norm() / 3.0);
        const double b = bump_top * (1.0 - (p - bump).norm() / 1.0);
        return std::max({0.0, t, b});
    });
    const Frame frame;
    const auto costs = crease_costs(mesh);
    const auto peaks = find_peaks(mesh, frame);
    std::vector<Region> regions;
    for (const auto& p : peaks)
        regions.push_back(flood_fill(mesh, costs, p, frame, {.t_max = 0.5, .spill_radius = 12.0}));
    ArchCurve arch;
    arch.a = -0.02;
    arch.c = 10.0;
    arch.frame = frame;
    const auto groups = group_overlapping(regions);
    const auto result = clean_regions(groups, regions, peaks, frame, mesh, arch);

    auto group_has = [&](const std::vector<std::size_t>& g, const Vec2& apex) {
        for (auto r : g)
            if ((frame.horizontal(regions[r].seed.position) - apex).norm() < 1e-6)
                return true;
        return false;
    };
    GumBumpOutcome out;
    for (const auto& g : result.kept)
        out.tooth_kept = out.tooth_kept || group_has(g, tooth);
    for (const auto& d : result.dropped)
        if (group_has(d.regions, bump))
            out.bump = d.reason;
    return out;
}

std::filesystem::path data_dir()
{
    return ARCHMARK_TEST_DATA_DIR;
}

TrainingDatabase shipped_db(JawKind kind)
{
    return load_training_db(data_dir() / ("synthetic_db_" + to_string(kind) + ".json"));
}

std::vector<NamedSpec> end_to_end_specs()
{
    std::vector<NamedSpec> out;
    for (const char* k : {"adult_upper", "adult_lower", "deciduous_upper", "deciduous_lower"})
        out.push_back({k, default_synthetic_spec(parse_jaw_kind(k))});

    auto spec = default_synthetic_spec(parse_jaw_kind("adult_upper"));
    find_tooth(spec, "UL2")->present = false;
    find_tooth(spec, "UR5")->present = false;
    out.push_back({"two_missing", spec});

    spec = default_synthetic_spec(parse_jaw_kind("adult_lower"));
    find_tooth(spec, "LR6")->split = true;
    out.push_back({"two_half_molar", spec});

    spec = default_synthetic_spec(parse_jaw_kind("adult_upper"));
    find_tooth(spec, "UL7")->partial = true;
    out.push_back({"partial_molar", spec, false});

    spec = default_synthetic_spec(parse_jaw_kind("adult_upper"));
    const double offsets[] = {0.6, -0.6, 0.5, -0.5};
    std::size_t i = 0;
    for (auto& t : spec.teeth)
        t.crowding_offset = offsets[i++ % 4];
    spec.gap = 0.3;
    out.push_back({"mild_crowding", spec});

    spec = default_synthetic_spec(parse_jaw_kind("adult_upper"));
    spec.cheek = CheekFragment{};
    spec.cheek->arc_position = 24.0;
    out.push_back({"cheek_fragment", spec});
    return out;
}

} // namespace archmark::fixtures
