#include "archmark/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <json.hpp>

#include "archmark/arch.hpp"
#include "archmark/error.hpp"

namespace archmark {

namespace {

struct Dims {
    double md;
    double bl;
};

// Typical crown sizes (mesiodistal, buccolingual) by position from the midline.
const std::map<std::string, std::vector<Dims>>& size_table()
{
    static const std::map<std::string, std::vector<Dims>> table = {
        {"adult_upper", {{8.5, 7.0}, {6.5, 6.0}, {7.5, 8.0}, {7.2, 9.2}, {6.5, 8.6}, {10.0, 11.0}, {9.0, 10.5}, {8.5, 10.0}}},
        {"adult_lower", {{5.0, 6.0}, {5.6, 6.3}, {6.8, 7.6}, {7.0, 7.4}, {7.5, 8.3}, {11.0, 10.5}, {10.2, 10.0}, {9.8, 9.5}}},
        {"deciduous_upper", {{6.5, 5.2}, {5.2, 4.6}, {7.0, 7.0}, {7.3, 8.8}, {9.0, 9.8}}},
        {"deciduous_lower", {{4.2, 4.0}, {4.8, 4.4}, {5.9, 5.8}, {7.8, 7.6}, {9.9, 9.0}}},
    };
    return table;
}

SyntheticShape shape_of(ToothClass cls)
{
    switch (cls) {
    case ToothClass::incisor: return SyntheticShape::incisor;
    case ToothClass::canine: return SyntheticShape::canine;
    case ToothClass::premolar: return SyntheticShape::premolar;
    case ToothClass::molar: return SyntheticShape::molar;
    }
    return SyntheticShape::molar;
}

const char* to_string(SyntheticShape s)
{
    switch (s) {
    case SyntheticShape::incisor: return "incisor";
    case SyntheticShape::canine: return "canine";
    case SyntheticShape::premolar: return "premolar";
    case SyntheticShape::molar: return "molar";
    }
    return "molar";
}

SyntheticShape parse_shape(const std::string& s)
{
    if (s == "incisor")
        return SyntheticShape::incisor;
    if (s == "canine")
        return SyntheticShape::canine;
    if (s == "premolar")
        return SyntheticShape::premolar;
    if (s == "molar")
        return SyntheticShape::molar;
    throw Error(ErrorKind::parse, "unknown synthetic shape '" + s + "'");
}

/// The jaw curve y = apex - k x^2 with arc-length parametrisation.
struct Parabola {
    double k;
    double apex;

    double arc(double x) const
    {
        const double q = 2.0 * k * x;
        return 0.5 * x * std::sqrt(1.0 + q * q) + std::asinh(q) / (4.0 * k);
    }
    double x_at_arc(double s) const
    {
        double x = s;
        for (int i = 0; i < 60; ++i) {
            const double step = (arc(x) - s) / std::sqrt(1.0 + 4.0 * k * k * x * x);
            x -= step;
            if (std::abs(step) < 1e-13)
                break;
        }
        return x;
    }
    Vec2 point(double x) const { return {x, apex - k * x * x}; }
    Vec2 buccal(double x) const { return Vec2(2.0 * k * x, 1.0).normalized(); }
    Vec2 at(double s, double d) const
    {
        const double x = x_at_arc(s);
        return point(x) + d * buccal(x);
    }
};

struct Cusp {
    double u;
    double v;
    double amplitude;
    bool buccal;
};

/// One raised body on the gum: a whole tooth, a molar half or the cheek fragment.
struct Body {
    int tooth = -1;   ///< index into the ground-truth list, -1 for the cheek
    int half = 0;     ///< 0 whole, 1 mesial, 2 distal
    SyntheticShape shape = SyntheticShape::molar;
    double s = 0.0;
    double d = 0.0;
    double a = 1.0;
    double b = 1.0;
    double power = 3.0;
    double wall = 6.0;
    double top = 10.0;
    double plateau = 8.0;
    double sigma = 1.0;
    std::vector<Cusp> cusps;
    bool cheek = false;
    double gum_crest = 2.5;
    double gum_falloff = 0.05;
    double skirt_depth = 1.0;

    double crown(double u, double v) const
    {
        switch (shape) {
        case SyntheticShape::incisor: return top - 0.03 * (u * u + v * v);
        case SyntheticShape::canine: return top - 1.1 * std::sqrt(u * u + v * v + 0.01);
        default: break;
        }
        double z = plateau;
        for (const auto& c : cusps) {
            const double du = u - c.u;
            const double dv = v - c.v;
            z += c.amplitude * std::exp(-(du * du + dv * dv) / (2.0 * sigma * sigma));
        }
        return z;
    }

    /// Height at local (u, v), or nullopt outside the footprint. The skirt
    /// ends below the local gum so the jaw surface stays continuous.
    std::optional<double> height(double u, double v) const
    {
        const double dd = d + v;
        const double base = gum_crest - gum_falloff * dd * dd - skirt_depth;
        const double r = std::pow(std::pow(std::abs(u / a), power) + std::pow(std::abs(v / b), power), 1.0 / power);
        if (r >= 1.0)
            return std::nullopt;
        if (cheek)
            return base + (top - base) * (1.0 - r);
        return base + (crown(u, v) - base) * (1.0 - std::pow(r, wall));
    }
};

Body make_body(const SyntheticSpec& spec, SyntheticShape shape, double md, double bl, double top,
               double lingual_drop, bool half)
{
    Body body;
    body.gum_crest = spec.gum_crest;
    body.gum_falloff = spec.gum_falloff;
    body.shape = shape;
    body.a = md / 2.0;
    body.b = bl / 2.0;
    body.top = top;
    switch (shape) {
    case SyntheticShape::incisor:
        body.power = 3.0;
        body.wall = 8.0;
        break;
    case SyntheticShape::canine:
        body.power = 2.2;
        body.wall = 5.0;
        break;
    case SyntheticShape::premolar:
        body.power = 2.5;
        body.wall = 6.0;
        body.plateau = top - 2.2;
        body.sigma = 0.45 * body.a;
        body.cusps = {{0.0, 0.35 * body.b, 2.2, true}, {0.0, -0.4 * body.b, 2.2 - lingual_drop, false}};
        break;
    case SyntheticShape::molar:
        body.power = 3.0;
        body.wall = 6.0;
        body.plateau = top - 2.0;
        if (half) {
            body.sigma = 0.5 * body.a;
            body.cusps = {{0.0, 0.4 * body.b, 2.0, true}, {0.0, -0.4 * body.b, 2.0 - lingual_drop, false}};
        } else {
            body.sigma = 0.3 * body.a;
            const double cu = 0.45 * body.a;
            const double cb = 0.4 * body.b;
            body.cusps = {{-cu, cb, 2.0, true},
                          {cu, cb, 2.0, true},
                          {-cu, -cb, 2.0 - lingual_drop, false},
                          {cu, -cb, 2.0 - lingual_drop, false}};
        }
        break;
    }
    return body;
}

/// Local maximum of a body's surface by hill climbing from a start point.
Vec2 climb(const Body& body, Vec2 p)
{
    auto f = [&](const Vec2& q) { return body.height(q.x(), q.y()).value_or(-1e9); };
    double step = 0.05;
    while (step > 1e-7) {
        bool moved = false;
        for (int k = 0; k < 8; ++k) {
            const double ang = k * 3.14159265358979323846 / 4.0;
            const Vec2 q = p + step * Vec2(std::cos(ang), std::sin(ang));
            if (f(q) > f(p)) {
                p = q;
                moved = true;
                break;
            }
        }
        if (!moved)
            step *= 0.5;
    }
    return p;
}

/// Shifts a cusped crown so its highest point sits exactly at body.top.
void level(Body& body)
{
    if (body.cusps.empty())
        return;
    for (int iter = 0; iter < 4; ++iter) {
        double highest = -1e9;
        for (const auto& c : body.cusps) {
            const Vec2 p = climb(body, {c.u, c.v});
            highest = std::max(highest, *body.height(p.x(), p.y()));
        }
        body.plateau += body.top - highest;
    }
}

double round_float(double v) { return static_cast<double>(static_cast<float>(v)); }

} // namespace

SyntheticSpec default_synthetic_spec(JawKind kind, bool with_third_molars)
{
    SyntheticSpec spec;
    spec.kind = kind;
    const auto& dims = size_table().at(to_string(kind));
    for (const auto& t : tooth_types(kind)) {
        if (t.is_half())
            continue;
        if (kind.dentition == Dentition::adult && t.ordinal == 8 && !with_third_molars)
            continue;
        SyntheticTooth tooth;
        tooth.code = t.code;
        tooth.shape = shape_of(t.tooth_class);
        tooth.mesiodistal = dims[static_cast<std::size_t>(t.ordinal - 1)].md;
        tooth.buccolingual = dims[static_cast<std::size_t>(t.ordinal - 1)].bl;
        if (tooth.shape == SyntheticShape::premolar)
            tooth.lingual_drop = t.ordinal == 4 ? 1.4 : 0.5;
        spec.teeth.push_back(tooth);
    }
    if (kind.dentition == Dentition::deciduous) {
        spec.arch_k = 0.06;
        spec.apex_y = 18.0;
    }
    return spec;
}

SyntheticTooth* find_tooth(SyntheticSpec& spec, const std::string& code)
{
    for (auto& t : spec.teeth)
        if (t.code == code)
            return &t;
    return nullptr;
}

SyntheticJaw generate_synthetic_jaw(const SyntheticSpec& spec)
{
    if (spec.teeth.empty())
        throw Error(ErrorKind::invalid_input, "synthetic spec has no teeth");
    if (!(spec.grid_spacing > 0.0) || !(spec.arch_k > 0.0) || !(spec.band_half_width > 0.0))
        throw Error(ErrorKind::invalid_input, "synthetic spec lengths must be positive");

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const Parabola curve{spec.arch_k, spec.apex_y};

    // Sort each quadrant from the midline outwards and lay teeth along the arc.
    struct Placed {
        SyntheticTooth tooth;
        double s = 0.0;
        double md = 0.0;
        double bl = 0.0;
        double top = 0.0;
        double side = 1.0;
        double wall_scale = 1.0;
    };
    std::vector<Placed> placed;
    std::vector<SyntheticTooth> sorted = spec.teeth;
    std::sort(sorted.begin(), sorted.end(), [](const SyntheticTooth& a, const SyntheticTooth& b) {
        const auto ta = parse_tooth_code(a.code);
        const auto tb = parse_tooth_code(b.code);
        if (ta.side != tb.side)
            return ta.side == Side::right;
        return ta.ordinal < tb.ordinal;
    });
    std::map<char, double> cursor;
    for (const auto& tooth : sorted) {
        const ToothType type = parse_tooth_code(tooth.code);
        if (type.is_half() || type.kind != spec.kind)
            throw Error(ErrorKind::invalid_input, "synthetic tooth " + tooth.code + " does not fit the jaw kind");
        const bool minus = (spec.kind.jaw == Jaw::upper) == (type.side == Side::right);
        Placed p;
        p.tooth = tooth;
        p.side = minus ? -1.0 : 1.0;
        p.md = tooth.mesiodistal * (1.0 + spec.size_jitter * normal(rng));
        p.bl = tooth.buccolingual * (1.0 + spec.size_jitter * normal(rng));
        p.top = spec.tooth_top + spec.height_jitter * normal(rng);
        p.wall_scale = std::clamp(1.0 + spec.shape_jitter * normal(rng), 0.5, 1.5);
        const char key = type.code[1];
        if (!cursor.contains(key))
            cursor[key] = spec.gap / 2.0;
        const double start = cursor[key];
        p.s = p.side * (start + p.md / 2.0);
        cursor[key] = start + p.md + spec.gap;
        placed.push_back(p);
    }
    for (const auto& p : placed)
        if (!(p.md > 0.5) || !(p.bl > 0.5))
            throw Error(ErrorKind::invalid_input, "synthetic tooth " + p.tooth.code + " is too small");
    std::sort(placed.begin(), placed.end(), [](const Placed& a, const Placed& b) { return a.s < b.s; });
    for (std::size_t i = 1; i < placed.size(); ++i) {
        const auto& a = placed[i - 1];
        const auto& b = placed[i];
        if (a.s + a.md / 2.0 > b.s - b.md / 2.0)
            throw Error(ErrorKind::invalid_input, "synthetic teeth " + a.tooth.code + " and " + b.tooth.code + " overlap");
    }

    SyntheticJaw jaw;
    std::vector<Body> bodies;
    for (const auto& p : placed) {
        GroundTruthTooth gt;
        gt.code = p.tooth.code;
        gt.split = p.tooth.split;
        gt.partial = p.tooth.partial;
        const int index = static_cast<int>(jaw.teeth.size());
        jaw.teeth.push_back(gt);
        if (!p.tooth.present)
            continue;
        const double d = p.tooth.crowding_offset;
        if (p.tooth.shape == SyntheticShape::molar && (p.tooth.split || p.tooth.partial)) {
            const double split_gap = 0.5;
            const double half_md = (p.md - split_gap) / 2.0;
            const double offset = (half_md + split_gap) / 2.0;
            for (int half = 1; half <= 2; ++half) {
                if (half == 2 && p.tooth.partial)
                    continue;
                Body body = make_body(spec, SyntheticShape::molar, half_md, p.bl, p.top, p.tooth.lingual_drop, true);
                body.wall *= p.wall_scale;
                body.tooth = index;
                body.half = half;
                body.s = p.s + (half == 1 ? -1.0 : 1.0) * p.side * offset;
                body.d = d;
                level(body);
                bodies.push_back(body);
            }
        } else {
            Body body = make_body(spec, p.tooth.shape, p.md, p.bl, p.top, p.tooth.lingual_drop, false);
            body.wall *= p.wall_scale;
            body.tooth = index;
            body.s = p.s;
            body.d = d;
            level(body);
            bodies.push_back(body);
        }
    }
    if (spec.cheek) {
        Body cheek;
        cheek.cheek = true;
        cheek.gum_crest = spec.gum_crest;
        cheek.gum_falloff = spec.gum_falloff;
        cheek.shape = SyntheticShape::canine;
        cheek.s = spec.cheek->arc_position;
        cheek.d = spec.band_half_width - spec.cheek->inset;
        cheek.a = cheek.b = spec.cheek->radius;
        cheek.power = 2.0;
        cheek.top = spec.tooth_top - spec.cheek->height_below_top;
        bodies.push_back(cheek);
    }

    const double s_max = std::max(std::abs(placed.front().s - placed.front().md / 2.0),
                                  std::abs(placed.back().s + placed.back().md / 2.0)) +
                         spec.end_margin;
    const double W = spec.band_half_width;
    const double x_end = curve.x_at_arc(s_max);
    const double h = spec.grid_spacing;
    const double x_half = x_end + W + h;
    const double y_top = spec.apex_y + W + h;
    const double y_bottom = curve.point(x_end).y() - W - h;
    const int nx = static_cast<int>(std::ceil(2.0 * x_half / h));
    const int ny = static_cast<int>(std::ceil((y_top - y_bottom) / h)) + 1;

    ArchCurve arch;
    arch.a = -spec.arch_k;
    arch.b = 0.0;
    arch.c = spec.apex_y;

    struct Sample {
        double z;
        int label; ///< body index, or -1 for gum
    };
    auto surface = [&](const Vec2& p, double& s_out, double& d_out) -> std::optional<Sample> {
        const auto proj = project_onto(arch, p);
        const double d = buccal_offset(arch, p);
        const double s = curve.arc(proj.s);
        s_out = s;
        d_out = d;
        if (std::abs(d) > W || std::abs(s) > s_max)
            return std::nullopt;
        Sample best{spec.gum_crest - spec.gum_falloff * d * d, -1};
        for (std::size_t b = 0; b < bodies.size(); ++b) {
            const Body& body = bodies[b];
            if (std::abs(s - body.s) >= body.a * 1.2 + 1.0)
                continue;
            // Arc-length offsets shrink towards the lingual side; measure u on the curve.
            const auto z = body.height(s - body.s, d - body.d);
            if (z && *z > best.z)
                best = {*z, static_cast<int>(b)};
        }
        return best;
    };

    auto node_x = [&](int i) { return (i + 0.5 - nx / 2.0) * h; };
    auto node_y = [&](int j) { return y_bottom + j * h; };
    std::vector<int> node_index(static_cast<std::size_t>(nx) * ny, -1);
    std::vector<double> node_z(node_index.size(), 0.0);
    std::vector<Vec3> vertices;
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double s = 0.0;
            double d = 0.0;
            const Vec2 p(node_x(i), node_y(j));
            const auto sample = surface(p, s, d);
            if (!sample)
                continue;
            const std::size_t k = static_cast<std::size_t>(j) * nx + i;
            node_index[k] = static_cast<int>(vertices.size());
            node_z[k] = sample->z;
            vertices.emplace_back(round_float(p.x()), round_float(p.y()), round_float(sample->z));
        }
    }

    std::vector<std::array<VertexIndex, 3>> faces;
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            const std::size_t a = static_cast<std::size_t>(j) * nx + i;
            const std::size_t b = a + 1;
            const std::size_t c = a + nx + 1;
            const std::size_t d = a + nx;
            if (node_index[a] < 0 || node_index[b] < 0 || node_index[c] < 0 || node_index[d] < 0)
                continue;
            const double ac = node_z[a] + node_z[c];
            const double bd = node_z[b] + node_z[d];
            const bool use_ac = ac > bd || (ac == bd && node_x(i) < 0.0);
            if (use_ac) {
                faces.push_back({node_index[a], node_index[b], node_index[c]});
                faces.push_back({node_index[a], node_index[c], node_index[d]});
            } else {
                faces.push_back({node_index[a], node_index[b], node_index[d]});
                faces.push_back({node_index[b], node_index[c], node_index[d]});
            }
        }
    }
    jaw.mesh = IndexedMesh(std::move(vertices), std::move(faces));

    // Face labels: whichever surface is on top at the face centroid.
    for (std::size_t f = 0; f < jaw.mesh.face_count(); ++f) {
        const Vec3& c = jaw.mesh.face_centroids()[f];
        double s = 0.0;
        double d = 0.0;
        const auto sample = surface(Vec2(c.x(), c.y()), s, d);
        if (!sample || sample->label < 0)
            continue;
        const Body& body = bodies[static_cast<std::size_t>(sample->label)];
        const auto face = static_cast<FaceIndex>(f);
        if (body.cheek) {
            jaw.cheek_faces.push_back(face);
            continue;
        }
        auto& gt = jaw.teeth[static_cast<std::size_t>(body.tooth)];
        gt.faces.push_back(face);
        if (body.half == 1)
            gt.mesial_faces.push_back(face);
        else if (body.half == 2)
            gt.distal_faces.push_back(face);
    }

    // Landmark ground truth from the analytic surfaces.
    auto lift = [&](const Body& body, const Vec2& uv) {
        const Vec2 xy = curve.at(body.s + uv.x(), body.d + uv.y());
        return Vec3(xy.x(), xy.y(), *body.height(uv.x(), uv.y()));
    };
    for (const Body& body : bodies) {
        if (body.cheek)
            continue;
        auto& gt = jaw.teeth[static_cast<std::size_t>(body.tooth)];
        switch (body.shape) {
        case SyntheticShape::incisor:
            gt.landmarks.push_back({LandmarkKind::incisor_midpoint, lift(body, climb(body, {0.0, 0.0}))});
            break;
        case SyntheticShape::canine:
            gt.landmarks.push_back({LandmarkKind::canine_tip, lift(body, climb(body, {0.0, 0.0}))});
            break;
        default:
            for (const auto& c : body.cusps)
                if (c.buccal)
                    gt.landmarks.push_back(
                        {LandmarkKind::buccal_cusp, lift(body, climb(body, {c.u, c.v}))});
            break;
        }
    }
    for (auto& gt : jaw.teeth) {
        // Mesial to distal.
        std::stable_sort(gt.landmarks.begin(), gt.landmarks.end(), [](const auto& a, const auto& b) {
            return std::abs(a.position.x()) < std::abs(b.position.x());
        });
    }
    std::erase_if(jaw.teeth, [&](const GroundTruthTooth& t) {
        return std::none_of(placed.begin(), placed.end(),
                            [&](const Placed& p) { return p.tooth.code == t.code && p.tooth.present; });
    });
    return jaw;
}

std::optional<std::string> ground_truth_label(const SyntheticJaw& jaw, JawKind kind, const std::vector<FaceIndex>& faces,
                                              double min_fraction, double min_half_fraction)
{
    (void)kind;
    if (faces.empty())
        return std::nullopt;
    std::vector<FaceIndex> sorted = faces;
    std::sort(sorted.begin(), sorted.end());
    auto overlap = [&](const std::vector<FaceIndex>& set) {
        std::size_t n = 0;
        auto it = set.begin();
        for (FaceIndex f : sorted) {
            it = std::lower_bound(it, set.end(), f);
            if (it != set.end() && *it == f)
                ++n;
        }
        return n;
    };
    const GroundTruthTooth* best = nullptr;
    std::size_t best_n = 0;
    for (const auto& t : jaw.teeth) {
        const std::size_t n = overlap(t.faces);
        if (n > best_n) {
            best_n = n;
            best = &t;
        }
    }
    if (best == nullptr || static_cast<double>(best_n) < min_fraction * static_cast<double>(sorted.size()))
        return std::nullopt;
    if (best->partial)
        return best->code + ".0";
    if (best->split) {
        const double m = static_cast<double>(overlap(best->mesial_faces));
        const double d = static_cast<double>(overlap(best->distal_faces));
        if (m >= min_half_fraction * static_cast<double>(best_n))
            return best->code + ".0";
        if (d >= min_half_fraction * static_cast<double>(best_n))
            return best->code + ".1";
    }
    return best->code;
}

std::string to_json(const SyntheticSpec& spec)
{
    using nlohmann::json;
    json teeth = json::array();
    for (const auto& t : spec.teeth)
        teeth.push_back({{"code", t.code},
                         {"shape", to_string(t.shape)},
                         {"mesiodistal", t.mesiodistal},
                         {"buccolingual", t.buccolingual},
                         {"lingual_drop", t.lingual_drop},
                         {"present", t.present},
                         {"split", t.split},
                         {"partial", t.partial},
                         {"crowding_offset", t.crowding_offset}});
    json doc = {{"jaw_kind", to_string(spec.kind)},
                {"teeth", teeth},
                {"arch_k", spec.arch_k},
                {"apex_y", spec.apex_y},
                {"grid_spacing", spec.grid_spacing},
                {"band_half_width", spec.band_half_width},
                {"end_margin", spec.end_margin},
                {"gap", spec.gap},
                {"tooth_top", spec.tooth_top},
                {"gum_crest", spec.gum_crest},
                {"gum_falloff", spec.gum_falloff},
                {"size_jitter", spec.size_jitter},
                {"height_jitter", spec.height_jitter},
                {"shape_jitter", spec.shape_jitter},
                {"seed", spec.seed}};
    if (spec.cheek)
        doc["cheek"] = {{"arc_position", spec.cheek->arc_position},
                        {"radius", spec.cheek->radius},
                        {"height_below_top", spec.cheek->height_below_top},
                        {"inset", spec.cheek->inset}};
    return doc.dump(2) + "\n";
}

SyntheticSpec parse_synthetic_spec(const std::string& json_text)
{
    using nlohmann::json;
    try {
        const json doc = json::parse(json_text);
        const JawKind kind = parse_jaw_kind(doc.at("jaw_kind").get<std::string>());
        SyntheticSpec spec = default_synthetic_spec(kind, doc.value("third_molars", false));
        if (doc.contains("teeth")) {
            spec.teeth.clear();
            for (const auto& t : doc.at("teeth")) {
                SyntheticTooth tooth;
                tooth.code = t.at("code").get<std::string>();
                const ToothType type = parse_tooth_code(tooth.code);
                tooth.shape = t.contains("shape") ? parse_shape(t.at("shape").get<std::string>())
                                                  : shape_of(type.tooth_class);
                tooth.mesiodistal = t.at("mesiodistal").get<double>();
                tooth.buccolingual = t.at("buccolingual").get<double>();
                tooth.lingual_drop = t.value("lingual_drop", 0.8);
                tooth.present = t.value("present", true);
                tooth.split = t.value("split", false);
                tooth.partial = t.value("partial", false);
                tooth.crowding_offset = t.value("crowding_offset", 0.0);
                spec.teeth.push_back(tooth);
            }
        }
        for (const auto& code : doc.value("missing", std::vector<std::string>{}))
            if (auto* t = find_tooth(spec, code))
                t->present = false;
        for (const auto& code : doc.value("split", std::vector<std::string>{}))
            if (auto* t = find_tooth(spec, code))
                t->split = true;
        for (const auto& code : doc.value("partial", std::vector<std::string>{}))
            if (auto* t = find_tooth(spec, code))
                t->partial = true;
        spec.arch_k = doc.value("arch_k", spec.arch_k);
        spec.apex_y = doc.value("apex_y", spec.apex_y);
        spec.grid_spacing = doc.value("grid_spacing", spec.grid_spacing);
        spec.band_half_width = doc.value("band_half_width", spec.band_half_width);
        spec.end_margin = doc.value("end_margin", spec.end_margin);
        spec.gap = doc.value("gap", spec.gap);
        spec.tooth_top = doc.value("tooth_top", spec.tooth_top);
        spec.gum_crest = doc.value("gum_crest", spec.gum_crest);
        spec.gum_falloff = doc.value("gum_falloff", spec.gum_falloff);
        spec.size_jitter = doc.value("size_jitter", spec.size_jitter);
        spec.height_jitter = doc.value("height_jitter", spec.height_jitter);
        spec.shape_jitter = doc.value("shape_jitter", spec.shape_jitter);
        spec.seed = doc.value("seed", spec.seed);
        if (doc.contains("cheek") && !doc.at("cheek").is_null()) {
            const auto& c = doc.at("cheek");
            CheekFragment cheek;
            cheek.arc_position = c.value("arc_position", cheek.arc_position);
            cheek.radius = c.value("radius", cheek.radius);
            cheek.height_below_top = c.value("height_below_top", cheek.height_below_top);
            cheek.inset = c.value("inset", cheek.inset);
            spec.cheek = cheek;
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse, std::string("synthetic spec: ") + e.what());
    }
}

} // namespace archmark
