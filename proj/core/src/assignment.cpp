#include "archmark/assignment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "archmark/error.hpp"

namespace archmark {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<VertexIndex> member_vertices(std::span<const FaceIndex> faces, const IndexedMesh& mesh)
{
    std::vector<VertexIndex> verts;
    verts.reserve(faces.size() * 3);
    for (FaceIndex f : faces)
        for (VertexIndex v : mesh.faces()[static_cast<std::size_t>(f)])
            verts.push_back(v);
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    return verts;
}

double extent(const IndexedMesh& mesh, std::span<const VertexIndex> verts, const Vec3& axis)
{
    double lo = kInf;
    double hi = -kInf;
    for (VertexIndex v : verts) {
        const double d = mesh.vertices()[static_cast<std::size_t>(v)].dot(axis);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return verts.empty() ? 0.0 : hi - lo;
}

} // namespace

Characteristics measure_characteristics(std::span<const FaceIndex> faces, const IndexedMesh& mesh, const Frame& frame,
                                        const ArchCurve& arch, Diagnostics* diag)
{
    if (faces.empty())
        throw Error(ErrorKind::invalid_input, "cannot measure an empty blob");

    Vec3 centroid = Vec3::Zero();
    double area = 0.0;
    for (FaceIndex f : faces) {
        const auto fi = static_cast<std::size_t>(f);
        centroid += mesh.face_areas()[fi] * mesh.face_centroids()[fi];
        area += mesh.face_areas()[fi];
    }
    centroid /= area > 0.0 ? area : 1.0;

    const Vec3 distal = direction_at(arch, centroid, ArchDirection::distal);
    const Vec3 buccal = direction_at(arch, centroid, ArchDirection::buccal);
    const auto verts = member_vertices(faces, mesh);

    const double md = extent(mesh, verts, distal);
    const double bl = extent(mesh, verts, buccal);

    double top = -kInf;
    double bottom = kInf;
    for (VertexIndex v : verts) {
        const double h = frame.height(mesh.vertices()[static_cast<std::size_t>(v)]);
        top = std::max(top, h);
        bottom = std::min(bottom, h);
    }
    double pointiness = 1.0;
    if (top - bottom < 1.0) {
        warn(diag, "blob shorter than 1 mm occlusally; pointiness set to 1");
    } else if (md > 0.0) {
        std::vector<VertexIndex> near_top;
        for (VertexIndex v : verts)
            if (frame.height(mesh.vertices()[static_cast<std::size_t>(v)]) >= top - 1.0)
                near_top.push_back(v);
        pointiness = std::clamp(extent(mesh, near_top, distal) / md, 0.0, 1.0);
    }

    return {{characteristic::surface_area, surface_area(mesh, faces)},
            {characteristic::mesiodistal_width, md},
            {characteristic::buccolingual_width, bl},
            {characteristic::pointiness, pointiness}};
}

double mean_square_error(double t, std::span<const double> r)
{
    double sum = 0.0;
    for (double x : r)
        sum += (t - x) * (t - x);
    return sum / static_cast<double>(r.size());
}

std::optional<ReferenceStats> reference_stats(std::span<const double> r)
{
    if (r.size() < 2)
        return std::nullopt;
    ReferenceStats s;
    double sum = 0.0;
    for (double x : r)
        sum += x;
    s.mean = sum / static_cast<double>(r.size());
    s.c_min = mean_square_error(s.mean, r);
    // MSE(t, r) - c_min == (t - mean)^2, so c_ref is the mean squared
    // deviation; this form avoids cancellation near the mean.
    double shifted = 0.0;
    for (double x : r)
        shifted += (x - s.mean) * (x - s.mean);
    s.c_ref = shifted / static_cast<double>(r.size());
    if (!(s.c_ref > 0.0))
        return std::nullopt;
    return s;
}

double cost_metric(double t, std::span<const double>, const ReferenceStats& stats)
{
    const double d = t - stats.mean;
    return std::max(0.0, d * d / stats.c_ref);
}

std::optional<double> cost_metric(double t, std::span<const double> r)
{
    const auto stats = reference_stats(r);
    if (!stats)
        return std::nullopt;
    return cost_metric(t, r, *stats);
}

CostTable build_cost_table(std::span<const Characteristics> blobs, const TrainingDatabase& db,
                           std::span<const ToothType> types, Diagnostics* diag, unsigned threads)
{
    struct Usable {
        std::string name;
        const std::vector<double>* refs;
        ReferenceStats stats;
    };
    std::vector<std::vector<Usable>> usable(types.size());
    for (std::size_t j = 0; j < types.size(); ++j) {
        const auto* ref = db.find(types[j]);
        if (ref == nullptr)
            throw Error(ErrorKind::assignment, "training database has no entry for " + types[j].code);
        for (const auto& [name, values] : ref->characteristics) {
            const auto stats = reference_stats(values);
            if (!stats) {
                warn(diag, "characteristic " + name + " skipped for " + types[j].code +
                               ": reference values are constant or too few");
                continue;
            }
            usable[j].push_back({name, &values, *stats});
        }
        if (usable[j].empty())
            throw Error(ErrorKind::assignment, "no usable characteristic for " + types[j].code);
    }

    CostTable table;
    table.rows = blobs.size();
    table.cols = types.size();
    table.values.assign(table.rows * table.cols, 0.0);

    auto cell = [&](std::size_t i, std::size_t j) {
        double sum = 0.0;
        std::size_t count = 0;
        for (const auto& u : usable[j]) {
            const auto it = blobs[i].find(u.name);
            if (it == blobs[i].end())
                continue;
            sum += cost_metric(it->second, *u.refs, u.stats);
            ++count;
        }
        return count == 0 ? 0.0 : sum / static_cast<double>(count);
    };

    const std::size_t total = table.values.size();
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
    if (workers <= 1) {
        for (std::size_t k = 0; k < total; ++k)
            table.values[k] = cell(k / table.cols, k % table.cols);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < total; k = next++)
                    table.values[k] = cell(k / table.cols, k % table.cols);
            });
    }
    return table;
}

double assignment_objective(const CostTable& costs, std::span<const double> priors, double fussiness,
                            std::span<const int> type_of_blob)
{
    std::vector<bool> used(costs.cols, false);
    double total = 0.0;
    for (std::size_t i = 0; i < costs.rows; ++i) {
        for (std::size_t j = 0; j < costs.cols; ++j) {
            if (type_of_blob[i] == static_cast<int>(j)) {
                total += costs(i, j);
                used[j] = true;
            }
        }
    }
    for (std::size_t j = 0; j < costs.cols; ++j)
        if (!used[j])
            total += fussiness * priors[j];
    return total;
}

namespace {

/// Sequence-alignment DP over the ordered model with optional forced entries.
class OrderedSolver {
public:
    OrderedSolver(const CostTable& costs, std::span<const double> priors, std::span<const MolarGroup> groups,
                  double fussiness)
        : costs_(costs), m_(costs.rows), n_(costs.cols), penalty_(n_), group_at_(n_, -1),
          forced_(m_ * n_, kFree), row_one_(m_, -1), col_one_(n_, -1)
    {
        for (std::size_t j = 0; j < n_; ++j)
            penalty_[j] = fussiness * priors[j];
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const auto& grp = groups[g];
            const std::size_t lo = std::min({grp.whole, grp.mesial, grp.distal});
            const std::size_t hi = std::max({grp.whole, grp.mesial, grp.distal});
            if (hi - lo != 2 || hi >= n_)
                throw Error(ErrorKind::internal, "molar group members are not contiguous types");
            for (std::size_t j = lo; j <= hi; ++j)
                if (group_at_[j] >= 0)
                    throw Error(ErrorKind::internal, "overlapping molar groups");
            group_at_[lo] = static_cast<int>(g);
            group_at_[lo + 1] = static_cast<int>(g);
            group_at_[lo + 2] = static_cast<int>(g);
            starts_.push_back({lo, grp.whole});
        }
    }

    double optimum() const
    {
        std::vector<double> f(m_ + 1, kInf);
        f[0] = 0.0;
        close(f);
        std::size_t j = 0;
        while (j < n_) {
            if (group_at_[j] >= 0) {
                const std::size_t whole = whole_of(j);
                std::vector<double> a = f;
                std::vector<double> b = f;
                for (std::size_t k = j; k < j + 3; ++k) {
                    a = step(a, k, k != whole);
                    b = step(b, k, k == whole);
                }
                for (std::size_t i = 0; i <= m_; ++i)
                    f[i] = std::min(a[i], b[i]);
                j += 3;
            } else {
                f = step(f, j, false);
                ++j;
            }
        }
        return f[m_];
    }

    Assignment solve()
    {
        const double best = optimum();
        if (!std::isfinite(best))
            throw Error(ErrorKind::internal, "assignment model is infeasible");
        const double eps = 1e-9 * (1.0 + std::abs(best));
        for (std::size_t i = 0; i < m_; ++i) {
            for (std::size_t j = 0; j < n_; ++j) {
                forced_[i * n_ + j] = kZero;
                if (row_one_[i] >= 0 || col_one_[j] >= 0)
                    continue;
                if (optimum() <= best + eps)
                    continue;
                forced_[i * n_ + j] = kOne;
                row_one_[i] = static_cast<int>(j);
                col_one_[j] = static_cast<int>(i);
            }
        }
        Assignment out;
        out.type_of_blob = row_one_;
        out.blob_of_type = col_one_;
        return out;
    }

private:
    static constexpr signed char kFree = -1;
    static constexpr signed char kZero = 0;
    static constexpr signed char kOne = 1;

    std::size_t whole_of(std::size_t start) const
    {
        for (const auto& [lo, whole] : starts_)
            if (lo == start)
                return whole;
        return start;
    }

    bool may_assign(std::size_t i, std::size_t j) const
    {
        return forced_[i * n_ + j] != kZero && (col_one_[j] < 0 || col_one_[j] == static_cast<int>(i)) &&
               (row_one_[i] < 0 || row_one_[i] == static_cast<int>(j));
    }

    // Blobs settled so far may be skipped as non-tooth unless forced onto a type.
    void close(std::vector<double>& f) const
    {
        for (std::size_t i = 0; i < m_; ++i)
            if (row_one_[i] < 0)
                f[i + 1] = std::min(f[i + 1], f[i]);
    }

    std::vector<double> step(const std::vector<double>& f, std::size_t j, bool must_miss) const
    {
        std::vector<double> g(m_ + 1, kInf);
        for (std::size_t i = 0; i <= m_; ++i) {
            if (!std::isfinite(f[i]))
                continue;
            if (col_one_[j] < 0)
                g[i] = std::min(g[i], f[i] + penalty_[j]);
            if (!must_miss && i < m_ && may_assign(i, j))
                g[i + 1] = std::min(g[i + 1], f[i] + costs_(i, j));
        }
        close(g);
        return g;
    }

    const CostTable& costs_;
    std::size_t m_;
    std::size_t n_;
    std::vector<double> penalty_;
    std::vector<int> group_at_;
    std::vector<std::pair<std::size_t, std::size_t>> starts_;
    std::vector<signed char> forced_;
    std::vector<int> row_one_;
    std::vector<int> col_one_;
};

} // namespace

Assignment solve_assignment(const CostTable& costs, std::span<const double> priors, std::span<const MolarGroup> groups,
                            double fussiness)
{
    if (priors.size() != costs.cols)
        throw Error(ErrorKind::invalid_input, "prior count does not match the cost table");
    if (!(fussiness >= 0.0))
        throw Error(ErrorKind::invalid_input, "fussiness must be non-negative");
    for (double c : costs.values)
        if (!std::isfinite(c) || c < 0.0)
            throw Error(ErrorKind::invalid_input, "cost table entries must be finite and non-negative");

    OrderedSolver solver(costs, priors, groups, fussiness);
    Assignment out = solver.solve();
    out.objective = assignment_objective(costs, priors, fussiness, out.type_of_blob);
    return out;
}

std::vector<LabeledTooth> merge_half_molars(const Assignment& assignment, std::span<const Blob> blobs,
                                            std::span<const ToothType> types)
{
    auto make = [&](std::size_t blob, const ToothType& type) {
        LabeledTooth t;
        t.type = type;
        t.blobs = {blob};
        t.faces = blobs[blob].faces;
        t.peaks = blobs[blob].peaks;
        return t;
    };
    auto find_type = [&](const std::string& code) -> std::optional<std::size_t> {
        for (std::size_t j = 0; j < types.size(); ++j)
            if (types[j].code == code)
                return j;
        return std::nullopt;
    };

    std::vector<std::pair<std::size_t, LabeledTooth>> keyed;
    std::set<std::size_t> consumed;
    for (std::size_t j = 0; j < types.size(); ++j) {
        const int blob = assignment.blob_of_type[j];
        if (blob < 0 || consumed.contains(j))
            continue;
        const ToothType& type = types[j];
        const auto b = static_cast<std::size_t>(blob);
        if (!type.is_half()) {
            keyed.emplace_back(j, make(b, type));
            continue;
        }
        const std::string whole = type.whole_code();
        const auto whole_index = find_type(whole).value_or(j);
        const auto mesial = find_type(whole + ".0");
        const auto distal = find_type(whole + ".1");
        const int mesial_blob = mesial ? assignment.blob_of_type[*mesial] : -1;
        const int distal_blob = distal ? assignment.blob_of_type[*distal] : -1;
        if (mesial)
            consumed.insert(*mesial);
        if (distal)
            consumed.insert(*distal);

        ToothType merged = parse_tooth_code(whole);
        if (mesial_blob >= 0 && distal_blob >= 0) {
            LabeledTooth t = make(static_cast<std::size_t>(mesial_blob), merged);
            const auto& other = blobs[static_cast<std::size_t>(distal_blob)];
            t.blobs.push_back(static_cast<std::size_t>(distal_blob));
            std::vector<FaceIndex> faces;
            std::set_union(t.faces.begin(), t.faces.end(), other.faces.begin(), other.faces.end(),
                           std::back_inserter(faces));
            t.faces = std::move(faces);
            t.peaks.insert(t.peaks.end(), other.peaks.begin(), other.peaks.end());
            keyed.emplace_back(whole_index, std::move(t));
        } else if (mesial_blob >= 0) {
            LabeledTooth t = make(static_cast<std::size_t>(mesial_blob), merged);
            t.partial = true;
            keyed.emplace_back(whole_index, std::move(t));
        } else {
            LabeledTooth t = make(static_cast<std::size_t>(distal_blob), type);
            t.anomalous = true;
            keyed.emplace_back(j, std::move(t));
        }
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<LabeledTooth> out;
    out.reserve(keyed.size());
    for (auto& [k, t] : keyed)
        out.push_back(std::move(t));
    return out;
}

} // namespace archmark
