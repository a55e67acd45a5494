#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "archmark/peaks.hpp"
#include "support/fixtures.hpp"

using namespace archmark;

namespace {

double bumps(double x, double y)
{
    auto g = [](double dx, double dy, double h) { return h * std::exp(-(dx * dx + dy * dy) / 2.0); };
    return g(x - 3.0, y - 3.0, 5.0) + g(x - 7.0, y - 6.0, 2.0);
}

} // namespace

TEST(Peaks, FindsStrictMaxima)
{
    const auto mesh = fixtures::heightfield(50, 50, 0.2, bumps);
    const auto peaks = find_peaks(mesh, Frame{});
    ASSERT_EQ(peaks.size(), 2u);
    EXPECT_NEAR(peaks[0].position.x(), 3.0, 1e-9);
    EXPECT_NEAR(peaks[0].position.y(), 3.0, 1e-9);
    EXPECT_NEAR(peaks[1].position.x(), 7.0, 1e-9);
    EXPECT_NEAR(peaks[1].position.y(), 6.0, 1e-9);
    for (const auto& p : peaks) {
        for (VertexIndex n : mesh.vertex_neighbors(p.vertex))
            EXPECT_GT(p.height, mesh.vertices()[n].z());
    }
}

TEST(Peaks, PlateausAreNotPeaks)
{
    const auto mesa = fixtures::heightfield(30, 30, 0.2, [](double x, double y) {
        const double r = std::hypot(x - 3.0, y - 3.0);
        return r < 1.0 ? 2.0 : 2.0 - (r - 1.0);
    });
    EXPECT_TRUE(find_peaks(mesa, Frame{}).empty());
}

TEST(Peaks, HeightFilterExcludesExactThreshold)
{
    std::vector<Peak> peaks(4);
    peaks[0].height = 10.0;
    peaks[1].height = 4.0;          // exactly 6 mm below the top
    peaks[2].height = 4.0 + 1e-9;
    peaks[3].height = 1.0;
    for (int i = 0; i < 4; ++i)
        peaks[i].vertex = i;
    const auto kept = filter_by_height(peaks, 6.0);
    ASSERT_EQ(kept.size(), 2u);
    EXPECT_EQ(kept[0].vertex, 0);
    EXPECT_EQ(kept[1].vertex, 2);
    EXPECT_EQ(filter_by_height(kept, 6.0), kept);
    EXPECT_TRUE(filter_by_height({}, 6.0).empty());
}

TEST(Peaks, InvariantUnderRigidMotion)
{
    const auto mesh = fixtures::heightfield(50, 50, 0.2, bumps);
    const auto base = find_peaks(mesh, Frame{});
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const auto motion = fixtures::random_motion(rng);
        const auto moved = find_peaks(mesh.transformed(motion), Frame{}.transformed(motion));
        ASSERT_EQ(moved.size(), base.size());
        for (std::size_t i = 0; i < base.size(); ++i) {
            EXPECT_EQ(moved[i].vertex, base[i].vertex);
            EXPECT_NEAR(moved[i].height, base[i].height, 1e-9);
        }
    }
}
