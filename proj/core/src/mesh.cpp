#include "archmark/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <unordered_map>

#include "archmark/error.hpp"

namespace archmark {

double angle_deg(const Vec3& a, const Vec3& b)
{
    const double c = a.normalized().dot(b.normalized());
    const double s = a.normalized().cross(b.normalized()).norm();
    return std::atan2(s, c) * 180.0 / std::numbers::pi;
}

namespace {

struct VertexKey {
    std::array<std::uint64_t, 3> bits;
    bool operator==(const VertexKey&) const = default;
};

struct VertexKeyHash {
    std::size_t operator()(const VertexKey& k) const noexcept
    {
        std::uint64_t h = 1469598103934665603ull;
        for (auto b : k.bits) {
            h ^= b;
            h *= 1099511628211ull;
            h ^= h >> 29;
        }
        return static_cast<std::size_t>(h);
    }
};

VertexKey make_key(const Vec3& p, double snap)
{
    VertexKey key{};
    for (int k = 0; k < 3; ++k) {
        if (snap > 0) {
            key.bits[k] = static_cast<std::uint64_t>(std::llround(p[k] / snap));
        } else {
            double c = p[k] == 0.0 ? 0.0 : p[k]; // fold -0 into +0
            std::memcpy(&key.bits[k], &c, sizeof c);
        }
    }
    return key;
}

} // namespace

IndexedMesh::IndexedMesh(std::vector<Vec3> vertices, std::vector<std::array<VertexIndex, 3>> faces, IndexStats stats)
    : vertices_(std::move(vertices)), faces_(std::move(faces)), stats_(stats)
{
    const auto nv = static_cast<VertexIndex>(vertices_.size());
    for (const auto& f : faces_)
        for (VertexIndex v : f)
            if (v < 0 || v >= nv)
                throw Error(ErrorKind::invalid_input, "face references vertex " + std::to_string(v) + " of " +
                                                          std::to_string(nv));
    build();
}

void IndexedMesh::build()
{
    const std::size_t nf = faces_.size();
    normals_.resize(nf);
    centroids_.resize(nf);
    areas_.resize(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        const Vec3& a = vertices_[faces_[f][0]];
        const Vec3& b = vertices_[faces_[f][1]];
        const Vec3& c = vertices_[faces_[f][2]];
        const Vec3 n = (b - a).cross(c - a);
        const double len = n.norm();
        areas_[f] = 0.5 * len;
        normals_[f] = len > 0 ? Vec3(n / len) : Vec3::Zero();
        centroids_[f] = (a + b + c) / 3.0;
    }

    // Edge incidences sorted by undirected key; the first two per key pair up.
    struct Incidence {
        std::uint64_t key;
        FaceIndex face;
        int slot;
    };
    std::vector<Incidence> inc;
    inc.reserve(3 * nf);
    for (std::size_t f = 0; f < nf; ++f) {
        for (int k = 0; k < 3; ++k) {
            auto u = static_cast<std::uint32_t>(faces_[f][k]);
            auto v = static_cast<std::uint32_t>(faces_[f][(k + 1) % 3]);
            if (u > v)
                std::swap(u, v);
            inc.push_back({(std::uint64_t(u) << 32) | v, static_cast<FaceIndex>(f), k});
        }
    }
    std::sort(inc.begin(), inc.end(), [](const Incidence& x, const Incidence& y) {
        return x.key != y.key ? x.key < y.key : (x.face != y.face ? x.face < y.face : x.slot < y.slot);
    });

    neighbors_.assign(nf, {kNoNeighbor, kNoNeighbor, kNoNeighbor});
    boundary_edges_.clear();
    for (std::size_t i = 0; i < inc.size();) {
        std::size_t j = i;
        while (j < inc.size() && inc[j].key == inc[i].key)
            ++j;
        const std::size_t n = j - i;
        if (n == 1) {
            boundary_edges_.emplace_back(inc[i].face, inc[i].slot);
        } else {
            neighbors_[inc[i].face][inc[i].slot] = inc[i + 1].face;
            neighbors_[inc[i + 1].face][inc[i + 1].slot] = inc[i].face;
            stats_.non_manifold_incidences += n - 2;
        }
        i = j;
    }
    std::sort(boundary_edges_.begin(), boundary_edges_.end());

    // Vertex -> faces and vertex -> vertices in CSR form.
    const std::size_t nv = vertices_.size();
    vf_offsets_.assign(nv + 1, 0);
    for (const auto& f : faces_)
        for (VertexIndex v : f)
            ++vf_offsets_[v + 1];
    for (std::size_t v = 0; v < nv; ++v)
        vf_offsets_[v + 1] += vf_offsets_[v];
    vf_items_.resize(vf_offsets_[nv]);
    {
        std::vector<std::uint32_t> fill(vf_offsets_.begin(), vf_offsets_.end() - 1);
        for (std::size_t f = 0; f < nf; ++f)
            for (VertexIndex v : faces_[f])
                vf_items_[fill[v]++] = static_cast<FaceIndex>(f);
    }

    std::vector<std::vector<VertexIndex>> ring(nv);
    for (const auto& f : faces_) {
        for (int k = 0; k < 3; ++k) {
            ring[f[k]].push_back(f[(k + 1) % 3]);
            ring[f[k]].push_back(f[(k + 2) % 3]);
        }
    }
    vn_offsets_.assign(nv + 1, 0);
    vn_items_.clear();
    for (std::size_t v = 0; v < nv; ++v) {
        auto& r = ring[v];
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        vn_items_.insert(vn_items_.end(), r.begin(), r.end());
        vn_offsets_[v + 1] = static_cast<std::uint32_t>(vn_items_.size());
    }
}

bool IndexedMesh::is_boundary_face(FaceIndex f) const
{
    const auto& n = neighbors_[f];
    return n[0] == kNoNeighbor || n[1] == kNoNeighbor || n[2] == kNoNeighbor;
}

std::span<const VertexIndex> IndexedMesh::vertex_neighbors(VertexIndex v) const
{
    return {vn_items_.data() + vn_offsets_[v], vn_items_.data() + vn_offsets_[v + 1]};
}

std::span<const FaceIndex> IndexedMesh::vertex_faces(VertexIndex v) const
{
    return {vf_items_.data() + vf_offsets_[v], vf_items_.data() + vf_offsets_[v + 1]};
}

Vec3 IndexedMesh::vertex_normal(VertexIndex v) const
{
    Vec3 n = Vec3::Zero();
    for (FaceIndex f : vertex_faces(v))
        n += areas_[f] * normals_[f];
    const double len = n.norm();
    return len > 0 ? Vec3(n / len) : Vec3::Zero();
}

IndexedMesh IndexedMesh::transformed(const RigidMotion& motion) const
{
    std::vector<Vec3> moved;
    moved.reserve(vertices_.size());
    for (const auto& p : vertices_)
        moved.push_back(motion.apply(p));
    return IndexedMesh(std::move(moved), faces_, stats_);
}

TriangleSoup IndexedMesh::to_soup() const
{
    TriangleSoup soup;
    soup.triangles.reserve(faces_.size());
    for (const auto& f : faces_)
        soup.triangles.push_back({vertices_[f[0]], vertices_[f[1]], vertices_[f[2]]});
    return soup;
}

IndexedMesh index_mesh(const TriangleSoup& soup, const IndexOptions& options)
{
    if (soup.empty())
        throw Error(ErrorKind::invalid_input, "cannot index an empty triangle soup");

    IndexStats stats;
    std::vector<Vec3> vertices;
    std::vector<std::array<VertexIndex, 3>> faces;
    std::unordered_map<VertexKey, VertexIndex, VertexKeyHash> lookup;
    lookup.reserve(soup.size() * 2);
    vertices.reserve(soup.size() / 2 + 3);
    faces.reserve(soup.size());

    const bool have_normals = soup.stored_normals.size() == soup.size();
    for (std::size_t t = 0; t < soup.size(); ++t) {
        std::array<VertexIndex, 3> f{};
        for (int k = 0; k < 3; ++k) {
            const Vec3& p = soup.triangles[t][k];
            auto [it, inserted] = lookup.try_emplace(make_key(p, options.snap_tolerance),
                                                     static_cast<VertexIndex>(vertices.size()));
            if (inserted)
                vertices.push_back(p);
            f[k] = it->second;
        }
        const Vec3 n = (vertices[f[1]] - vertices[f[0]]).cross(vertices[f[2]] - vertices[f[0]]);
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2] || !(n.norm() > 0)) {
            ++stats.degenerate_dropped;
            continue;
        }
        if (have_normals) {
            const Vec3& stored = soup.stored_normals[t];
            if (!(stored.norm() > 0) || stored.normalized().dot(n.normalized()) < 0.98)
                ++stats.normal_mismatches;
        }
        faces.push_back(f);
    }
    if (faces.empty())
        throw Error(ErrorKind::invalid_input, "every triangle in the soup is degenerate");
    return IndexedMesh(std::move(vertices), std::move(faces), stats);
}

double surface_area(const IndexedMesh& mesh, std::span<const FaceIndex> subset)
{
    double total = 0.0;
    for (FaceIndex f : subset)
        total += mesh.face_areas()[f];
    return total;
}

double surface_area(const IndexedMesh& mesh)
{
    double total = 0.0;
    for (double a : mesh.face_areas())
        total += a;
    return total;
}

} // namespace archmark
