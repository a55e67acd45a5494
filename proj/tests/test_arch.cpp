#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "archmark/arch.hpp"
#include "archmark/error.hpp"

using namespace archmark;

namespace {

ArchCurve curve(double a, double b, double c)
{
    ArchCurve k;
    k.a = a;
    k.b = b;
    k.c = c;
    return k;
}

} // namespace

TEST(ArchFit, ExactOnNoiseFreePoints)
{
    std::vector<Vec2> pts;
    for (double x = -20; x <= 20; x += 2.5)
        pts.emplace_back(x, -0.04 * x * x + 0.3 * x + 25.0);
    const auto k = fit_quadratic(pts);
    EXPECT_NEAR(k.a, -0.04, 1e-12);
    EXPECT_NEAR(k.b, 0.3, 1e-12);
    EXPECT_NEAR(k.c, 25.0, 1e-10);
}

TEST(ArchFit, MatchesWeightedNormalEquations)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-25, 25), noise(-1, 1), w(0.1, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec2> pts;
        std::vector<double> weights;
        for (int i = 0; i < 40; ++i) {
            const double x = u(rng);
            pts.emplace_back(x, -0.05 * x * x + 20 + noise(rng));
            weights.push_back(w(rng));
        }
        Eigen::Matrix3d ata = Eigen::Matrix3d::Zero();
        Eigen::Vector3d aty = Eigen::Vector3d::Zero();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Eigen::Vector3d row(pts[i].x() * pts[i].x(), pts[i].x(), 1.0);
            ata += weights[i] * row * row.transpose();
            aty += weights[i] * row * pts[i].y();
        }
        const Eigen::Vector3d coef = ata.ldlt().solve(aty);
        const auto k = fit_quadratic(pts, weights);
        EXPECT_NEAR(k.a, coef[0], 1e-9);
        EXPECT_NEAR(k.b, coef[1], 1e-8);
        EXPECT_NEAR(k.c, coef[2], 1e-7);
    }
}

TEST(ArchFit, RankDeficientFails)
{
    std::vector<Vec2> pts = {{1, 2}, {1, 3}, {2, 5}, {2, 1}};
    try {
        fit_quadratic(pts);
        FAIL() << "expected an arch_fit error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::arch_fit);
    }
    std::vector<Vec2> three = {{0, 0}, {1, 1}, {2, 0}};
    std::vector<double> zero_weight = {1, 1, 0};
    EXPECT_THROW(fit_quadratic(three, zero_weight), Error);
}

TEST(ArchFit, TranslationEquivariant)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-20, 20), noise(-0.5, 0.5);
    std::vector<Vec2> pts, moved;
    const Vec2 shift(3.5, -7.25);
    for (int i = 0; i < 30; ++i) {
        const double x = u(rng);
        pts.emplace_back(x, -0.05 * x * x + 18 + noise(rng));
        moved.push_back(pts.back() + shift);
    }
    const auto k = fit_quadratic(pts);
    const auto m = fit_quadratic(moved);
    EXPECT_NEAR(m.a, k.a, 1e-10);
    for (double x = -15; x <= 15; x += 1)
        EXPECT_NEAR(m.eval(x + shift.x()), k.eval(x) + shift.y(), 1e-8);
    const auto order = order_by_arch(k, pts);
    EXPECT_EQ(order_by_arch(m, moved), order);
    for (std::size_t i = 0; i < pts.size(); ++i)
        EXPECT_NEAR(project_onto(m, moved[i]).distance, project_onto(k, pts[i]).distance, 1e-8);
}

TEST(ArchProjection, MatchesDenseSampling)
{
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> coord(-40, 40), a(-0.2, -0.01), b(-0.5, 0.5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto k = curve(a(rng), b(rng), 20.0);
        const Vec2 p(coord(rng), coord(rng));
        const auto proj = project_onto(k, p);
        double best = std::numeric_limits<double>::infinity();
        for (double x = -120; x <= 120; x += 1e-3)
            best = std::min(best, (Vec2(x, k.eval(x)) - p).norm());
        EXPECT_LE(proj.distance, best + 1e-9);
        EXPECT_GE(proj.distance, best - 1e-3);
        EXPECT_NEAR(proj.nearest.y(), k.eval(proj.s), 1e-9);
        EXPECT_NEAR((proj.nearest - p).norm(), proj.distance, 1e-9);
    }
}

TEST(ArchDirections, UnitAndPerpendicular)
{
    const auto k = curve(-0.05, 0.1, 20.0);
    for (double x = -30; x <= 30; x += 0.7) {
        for (double off : {-3.0, 0.0, 4.0}) {
            const Vec2 p(x, k.eval(x) + off);
            const Vec2 d = direction_at_2d(k, p, ArchDirection::distal);
            const Vec2 bu = direction_at_2d(k, p, ArchDirection::buccal);
            EXPECT_NEAR(d.norm(), 1.0, 1e-12);
            EXPECT_NEAR(bu.norm(), 1.0, 1e-12);
            EXPECT_LT(std::abs(d.dot(bu)), 1e-9);
            EXPECT_EQ(direction_at_2d(k, p, ArchDirection::mesial), -d);
            EXPECT_EQ(direction_at_2d(k, p, ArchDirection::lingual), -bu);
            const Vec3 d3 = direction_at(k, p, ArchDirection::distal);
            EXPECT_NEAR(d3.norm(), 1.0, 1e-12);
        }
    }
}

TEST(ArchDirections, DistalPointsAwayFromMidlineAndBuccalOutwards)
{
    const auto k = curve(-0.05, 0.0, 20.0);
    EXPECT_GT(direction_at_2d(k, Vec2(10, k.eval(10)), ArchDirection::distal).x(), 0);
    EXPECT_LT(direction_at_2d(k, Vec2(-10, k.eval(-10)), ArchDirection::distal).x(), 0);
    EXPECT_GT(direction_at_2d(k, Vec2(0, 20), ArchDirection::buccal).y(), 0.999);
    EXPECT_GT(buccal_offset(k, Vec2(0, 22)), 0);
    EXPECT_LT(buccal_offset(k, Vec2(0, 18)), 0);
    EXPECT_NEAR(buccal_offset(k, Vec2(15, k.eval(15))), 0.0, 1e-9);
}

TEST(ArchOrder, StableForEqualParameters)
{
    const auto k = curve(-0.05, 0.0, 20.0);
    std::vector<Vec2> pts = {{5, 18.75}, {-3, 19.55}, {5, 18.75}, {-10, 15}, {5, 18.75}};
    const auto order = order_by_arch(k, pts);
    EXPECT_EQ(order, (std::vector<std::size_t>{3, 1, 0, 2, 4}));
}
