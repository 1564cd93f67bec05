#include <gtest/gtest.h>

#include <memory>

#include "oracles.hpp"
#include "smallscat/convergence.hpp"
#include "smallscat/errors.hpp"

using namespace smallscat;

namespace {

WaveParameters wave2()
{
    WaveParameters w;
    w.omega = 2.0;
    return w;
}

std::shared_ptr<const PlaneWave> plane(const WaveParameters& w)
{
    return std::make_shared<PlaneWave>(CVec3(1, 0, 0), Vec3(0, 0, 1), w.wavenumber());
}

RefinementOptions shell_options(std::size_t points = 32)
{
    RefinementOptions o;
    o.evaluation_points = evaluation_shell(Box{}, points);
    return o;
}

TEST(Schedule, SpacingLawAttached)
{
    const auto n = ScalarFieldProfile::constant(5.0);
    const RefinementSchedule s({0.1, 0.05}, 0.5, n, Box{});
    ASSERT_EQ(s.steps().size(), 2u);
    EXPECT_NEAR(s.steps()[0].spacing, spacing_law(0.1, 0.5, 5.0), 1e-15);
    EXPECT_NEAR(s.steps()[1].expected_count, 5.0 * count_scale(0.05, 0.5), 1e-9);
}

TEST(Schedule, RejectsNonDecreasingRadii)
{
    const auto n = ScalarFieldProfile::constant(5.0);
    try {
        RefinementSchedule({0.05, 0.05}, 0.5, n, Box{});
        FAIL() << "expected ConfigError";
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.path(), "convergence.schedule");
    }
    EXPECT_THROW(RefinementSchedule({0.05, 0.08}, 0.5, n, Box{}), ConfigError);
}

TEST(Schedule, RatioOfRadiusToSpacingShrinks)
{
    const RefinementSchedule s({0.08, 0.05, 0.032, 0.02}, 0.5, ScalarFieldProfile::parse("gauss(0.5,0.5,0.5,0.3)"),
                               Box{});
    for (std::size_t i = 1; i < s.steps().size(); ++i) {
        const auto& p = s.steps()[i - 1];
        const auto& q = s.steps()[i];
        EXPECT_LT(q.radius / q.spacing, p.radius / p.spacing);
    }
}

TEST(Shell, PointsOnSphereOutsideDomain)
{
    const Box box;
    const auto pts = evaluation_shell(box, 64, 0.2);
    ASSERT_EQ(pts.size(), 64u);
    const double radius = 0.5 * box.diameter() + 0.2 * box.diameter();
    for (const Vec3& p : pts) {
        EXPECT_NEAR((p - box.center).norm(), radius, 1e-14);
        EXPECT_FALSE(box.contains(p));
    }
}

TEST(RelativeL2, Basics)
{
    const std::vector<CVec3> b = {CVec3(1, 0, 0), CVec3(0, 1, 0)};
    EXPECT_EQ(relative_l2(b, b), 0.0);
    const std::vector<CVec3> a = {CVec3(1, 0, 0), CVec3(0, 0, 0)};
    EXPECT_NEAR(relative_l2(a, b), std::sqrt(0.5), 1e-15);
}

TEST(Refinement, ZeroImpedanceGivesZeroError)
{
    const WaveParameters w = wave2();
    const EffectiveMedium med(ScalarFieldProfile::parse("20*gauss(0.5,0.5,0.5,0.3)"), ScalarFieldProfile::constant(0.0),
                              w, Box{});
    const RefinementSchedule s({0.08, 0.05}, 0.5, med.density(), Box{});
    const ConvergenceReport rep = run_refinement(s, med, plane(w), 4, shell_options());
    ASSERT_EQ(rep.rows.size(), 2u);
    for (const auto& r : rep.rows) {
        EXPECT_EQ(r.error, 0.0);
        EXPECT_FALSE(r.skipped);
    }
}

TEST(Refinement, MatchedLatticeIsPureRoundoff)
{
    const WaveParameters w = wave2();
    const int n = 4;
    const double a = 0.03, kappa = 0.5;
    const auto density = ScalarFieldProfile::constant(n * n * n * std::pow(a, 2 - kappa));
    const EffectiveMedium med(density, ScalarFieldProfile::parse("0.6 + 0.2*i"), w, Box{});
    const auto inc = plane(w);
    const ContinuumSolution ref = solve_limit_curl(CollocationGrid(Box{}, n, med), w, inc);
    const ConvergenceReport rep = run_refinement(RefinementSchedule({a}, kappa, density, Box{}), med, inc, ref,
                                                 shell_options());
    ASSERT_EQ(rep.rows.size(), 1u);
    EXPECT_EQ(rep.rows[0].count, static_cast<std::size_t>(n * n * n));
    EXPECT_LT(rep.rows[0].error, 1e-10);
}

TEST(Refinement, CountLawConservedForConstantDensity)
{
    const WaveParameters w = wave2();
    const auto density = ScalarFieldProfile::constant(8.0);
    const EffectiveMedium med(density, ScalarFieldProfile::constant(0.0), w, Box{});
    const std::vector<double> radii = {0.1, 0.07, 0.05};
    const ConvergenceReport rep =
        run_refinement(RefinementSchedule(radii, 0.5, density, Box{}), med, plane(w), 2, shell_options(8));
    ASSERT_EQ(rep.rows.size(), 3u);
    for (const auto& r : rep.rows) {
        const double scaled = static_cast<double>(r.count) * std::pow(r.radius, 1.5);
        EXPECT_LE(std::abs(scaled - 8.0), std::pow(r.radius, 1.5) * 1.0 + 1e-12);
    }
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        EXPECT_LT(rep.rows[i].radius, rep.rows[i - 1].radius);
    }
}

TEST(Refinement, CapSkipsStep)
{
    const WaveParameters w = wave2();
    const auto density = ScalarFieldProfile::constant(8.0);
    const EffectiveMedium med(density, ScalarFieldProfile::constant(0.01), w, Box{});
    RefinementOptions opts = shell_options(8);
    opts.placement.cap = 300;
    const ConvergenceReport rep =
        run_refinement(RefinementSchedule({0.1, 0.05}, 0.5, density, Box{}), med, plane(w), 2, opts);
    ASSERT_EQ(rep.rows.size(), 2u);
    EXPECT_FALSE(rep.rows[0].skipped);
    EXPECT_TRUE(rep.rows[1].skipped);
    EXPECT_FALSE(rep.rows[1].note.empty());
    EXPECT_NE(rep.to_csv().find("skipped"), std::string::npos);
}

TEST(Report, EmptyRunHasHeaderOnly)
{
    const ConvergenceReport rep;
    EXPECT_EQ(rep.to_csv(), "a,d,M,eps_L2,status\n");
    EXPECT_EQ(rep.to_csv(true, "config_hash=0"), "# config_hash=0\na,d,M,eps_L2,wall_time,status\n");
    EXPECT_TRUE(rep.to_json().at("rows").empty());
}

TEST(Report, RerunIsByteIdentical)
{
    const WaveParameters w = wave2();
    const EffectiveMedium med(ScalarFieldProfile::parse("2*gauss(0.5,0.5,0.5,0.3)"),
                              ScalarFieldProfile::parse("0.01"), w, Box{});
    const RefinementSchedule s({0.03, 0.025, 0.02}, 0.5, med.density(), Box{});
    RefinementOptions opts = shell_options(16);
    opts.placement.mode = PlacementMode::stratified;
    opts.placement.seed = 9;
    const auto inc = plane(w);
    const ContinuumSolution ref = solve_limit_curl(CollocationGrid(Box{}, 4, med), w, inc);
    const ConvergenceReport a = run_refinement(s, med, inc, ref, opts);
    const ConvergenceReport b = run_refinement(s, med, inc, ref, opts);
    ASSERT_EQ(a.rows.size(), 3u);
    EXPECT_EQ(a.to_csv(), b.to_csv());
    EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
    EXPECT_EQ(a.to_json().at("rows")[0].count("wall_time"), 0u);
    EXPECT_EQ(a.to_json(true).at("rows")[0].count("wall_time"), 1u);
}

} // namespace
