#include <gtest/gtest.h>

#include <memory>

#include "oracles.hpp"
#include "smallscat/discrete_solver.hpp"
#include "smallscat/errors.hpp"

using namespace smallscat;

namespace {

WaveParameters wave_omega(double omega)
{
    WaveParameters w;
    w.omega = omega;
    return w;
}

std::shared_ptr<const PlaneWave> plane(const WaveParameters& w, cplx scale = 1.0)
{
    return std::make_shared<PlaneWave>(CVec3(scale, 0.0, 0.0), Vec3(0, 0, 1), w.wavenumber());
}

ParticleCloud manual_cloud(std::vector<Vec3> positions, std::vector<cplx> h, double a, double kappa = 0.5)
{
    ParticleCloud c;
    c.positions = std::move(positions);
    c.radius = a;
    c.kappa = kappa;
    c.spacing = a * 2;
    for (const cplx v : h) {
        c.impedances.push_back(v / std::pow(a, kappa));
    }
    return c;
}

// Random cloud of M sites in the unit cube, pairwise at least `gap` apart.
ParticleCloud random_cloud(std::size_t m, double a, std::uint64_t seed)
{
    std::vector<Vec3> pts;
    for (const Vec3& p : oracle::random_points(20 * m, 0, 1, seed)) {
        bool ok = true;
        for (const Vec3& q : pts) {
            ok = ok && (p - q).norm() > 0.08;
        }
        if (ok) {
            pts.push_back(p);
        }
        if (pts.size() == m) {
            break;
        }
    }
    std::vector<cplx> h;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        h.emplace_back(0.5 + 0.1 * static_cast<double>(i % 5), 0.05 * static_cast<double>(i % 3));
    }
    return manual_cloud(std::move(pts), std::move(h), a);
}

TEST(AssembleSystem, SingleParticleHasNoCoupling)
{
    const WaveParameters w = wave_omega(2.0);
    const ParticleCloud c = manual_cloud({Vec3(0.3, 0.4, 0.5)}, {cplx{1, 0.5}}, 0.05);
    const ParticleSystem sys = assemble_system(c, w, plane(w));
    EXPECT_EQ(sys.matrix(), Eigen::MatrixXcd::Identity(3, 3));
    const DiscreteSolution sol = solve_moments(sys);
    EXPECT_EQ(sol.moment(0), plane(w)->curl(c.positions[0]));
}

TEST(AssembleSystem, ZeroImpedanceDecouples)
{
    const WaveParameters w = wave_omega(2.0);
    ParticleCloud c = random_cloud(10, 0.01, 1);
    std::fill(c.impedances.begin(), c.impedances.end(), cplx{});
    const ParticleSystem sys = assemble_system(c, w, plane(w));
    EXPECT_EQ(sys.matrix(), Eigen::MatrixXcd::Identity(30, 30));
    const DiscreteSolution sol = solve_moments(sys);
    for (std::size_t m = 0; m < sol.size(); ++m) {
        EXPECT_EQ(sol.moment(m), plane(w)->curl(c.positions[m]));
        EXPECT_EQ(sol.charge(m), CVec3::Zero());
    }
    const Vec3 x(3, 2, 1);
    EXPECT_EQ(sol.field(x), plane(w)->value(x));
}

TEST(AssembleSystem, TwoParticlesMatchHandAssembly)
{
    const WaveParameters w = wave_omega(1.5);
    const double a = 0.02, kappa = 0.3;
    const std::vector<Vec3> x = {Vec3(0.1, 0.2, 0.3), Vec3(0.5, 0.45, 0.35)};
    const std::vector<cplx> h = {cplx{1, 0.2}, cplx{0.3, -0.1}};
    const ParticleSystem sys = assemble_system(manual_cloud(x, h, a, kappa), w, plane(w));

    const cplx beta = 8.0 * oracle::kPi / 3.0 * cplx{0, 1} * w.omega * w.eps0;
    Eigen::MatrixXcd want = Eigen::MatrixXcd::Identity(6, 6);
    for (int j = 0; j < 2; ++j) {
        for (int m = 0; m < 2; ++m) {
            if (j != m) {
                const cplx s = h[m] * std::pow(a, 2 - kappa);
                want.block<3, 3>(3 * j, 3 * m) = beta * s * dyadic_green(x[j], x[m], w.wavenumber());
            }
        }
    }
    const Eigen::MatrixXcd got = sys.matrix();
    for (int r = 0; r < 6; ++r) {
        for (int col = 0; col < 6; ++col) {
            EXPECT_LE(std::abs(got(r, col) - want(r, col)), 1e-14 * std::max(1.0, std::abs(want(r, col))));
        }
    }
}

TEST(AssembleSystem, CoincidentParticlesNamed)
{
    const WaveParameters w = wave_omega(1.0);
    const ParticleCloud c = manual_cloud({Vec3(0.1, 0.1, 0.1), Vec3(0.5, 0.5, 0.5), Vec3(0.1, 0.1, 0.1)},
                                         {1.0, 1.0, 1.0}, 0.01);
    try {
        assemble_system(c, w, plane(w));
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find('0'), std::string::npos);
        EXPECT_NE(msg.find('2'), std::string::npos);
    }
}

TEST(AssembleSystem, ReciprocalBlocks)
{
    const WaveParameters w = wave_omega(2.0);
    const ParticleCloud c = random_cloud(8, 0.01, 3);
    const ParticleSystem sys = assemble_system(c, w, plane(w));
    const Eigen::MatrixXcd A = sys.matrix();
    for (std::size_t j = 0; j < c.size(); ++j) {
        for (std::size_t m = j + 1; m < c.size(); ++m) {
            const CMat3 cjm = A.block<3, 3>(3 * j, 3 * m) / c.strength(m);
            const CMat3 cmj = A.block<3, 3>(3 * m, 3 * j) / c.strength(j);
            EXPECT_LT((cjm - cmj.transpose()).norm(), 1e-13 * cjm.norm());
        }
    }
}

TEST(SolveMoments, DirectAndIterativeAgree)
{
    const WaveParameters w = wave_omega(2.0);
    const ParticleCloud c = random_cloud(64, 0.02, 11);
    ASSERT_EQ(c.size(), 64u);
    const ParticleSystem sys = assemble_system(c, w, plane(w));
    SolverOptions direct;
    direct.backend = Backend::direct;
    SolverOptions iter;
    iter.backend = Backend::iterative;
    const DiscreteSolution a = solve_moments(sys, direct);
    const DiscreteSolution b = solve_moments(sys, iter);
    EXPECT_EQ(a.diagnostics().backend, Backend::direct);
    EXPECT_EQ(b.diagnostics().backend, Backend::iterative);
    EXPECT_TRUE(std::isnan(b.diagnostics().condition_estimate));
    double num = 0, den = 0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        num += (a.moment(m) - b.moment(m)).squaredNorm();
        den += a.moment(m).squaredNorm();
    }
    EXPECT_LT(std::sqrt(num / den), 1e-6);
    // The coupling must actually matter for the comparison to mean anything.
    double shift = 0;
    for (std::size_t m = 0; m < c.size(); ++m) {
        shift += (a.moment(m) - sys.rhs.segment<3>(3 * m)).squaredNorm();
    }
    EXPECT_GT(std::sqrt(shift / den), 1e-2);
}

TEST(SolveMoments, DirectResidualSmall)
{
    const WaveParameters w = wave_omega(2.0);
    const ParticleSystem sys = assemble_system(random_cloud(40, 0.02, 13), w, plane(w));
    const DiscreteSolution sol = solve_moments(sys);
    EXPECT_EQ(sol.diagnostics().backend, Backend::direct);
    EXPECT_LT(sol.diagnostics().residual, 1e-10);
    Eigen::VectorXcd p(3 * sol.size());
    for (std::size_t m = 0; m < sol.size(); ++m) {
        p.segment<3>(3 * m) = sol.moment(m);
    }
    EXPECT_LT((sys.matrix() * p - sys.rhs).norm() / sys.rhs.norm(), 1e-10);
}

TEST(SolveMoments, SingularSystemReported)
{
    // Two sites on the x axis: blocks beta s D are diagonal with D_xx = d1.
    // Choosing beta s d1 = 1 makes I - (beta s D)^2 singular in the xx entry.
    const WaveParameters w = wave_omega(1.0);
    const Vec3 x0(0.2, 0.5, 0.5), x1(0.7, 0.5, 0.5);
    const cplx d1 = dyadic_green(x0, x1, w.wavenumber())(0, 0);
    const cplx s = 1.0 / (w.moment_coefficient() * d1);
    const double a = 0.01;
    const cplx h = s / std::pow(a, 1.5);
    const ParticleSystem sys = assemble_system(manual_cloud({x0, x1}, {h, h}, a), w, plane(w));
    SolverOptions direct;
    direct.backend = Backend::direct;
    EXPECT_THROW(solve_moments(sys, direct), SolverError);
}

TEST(Charges, SingleParticleClosedForm)
{
    const WaveParameters w = wave_omega(2.0);
    const double a = 0.05, kappa = 0.5;
    const Vec3 x1(0.4, 0.5, 0.6);
    const cplx h{0.7, 0.2};
    const auto inc = plane(w, cplx{1, -0.5});
    const DiscreteSolution sol = solve_moments(assemble_system(manual_cloud({x1}, {h}, a, kappa), w, inc));

    const cplx k = w.wavenumber().value();
    const cplx beta = 8.0 * oracle::kPi / 3.0 * cplx{0, 1} * w.omega * w.eps0;
    const cplx phase = std::exp(cplx{0, 1} * k * x1(2));
    const CVec3 q_want = -beta * h * std::pow(a, 2 - kappa) * cplx{0, 1} * k *
                         oracle::cross(CVec3(0, 0, 1), inc->amplitude()) * phase;
    EXPECT_LT(oracle::rel(sol.charge(0), q_want), 1e-12);
    EXPECT_EQ(charges(sol).size(), 1u);
}

TEST(Charges, ScaleWithRadiusAtFixedMoment)
{
    const WaveParameters w = wave_omega(2.0);
    const Vec3 x1(0.4, 0.5, 0.6);
    const auto q = [&](double a) {
        ParticleCloud c = manual_cloud({x1}, {cplx{1, 0}}, a);
        return solve_moments(assemble_system(c, w, plane(w))).charge(0).norm();
    };
    EXPECT_NEAR(q(0.04) / q(0.02), std::pow(2.0, 1.5), 1e-12);
}

TEST(EvaluateField, SingleParticleClosedForm)
{
    const WaveParameters w = wave_omega(2.0);
    const Vec3 x1(0.5, 0.5, 0.5);
    const auto inc = plane(w);
    const DiscreteSolution sol =
        solve_moments(assemble_system(manual_cloud({x1}, {cplx{0.4, 0.1}}, 0.05), w, inc));
    const cplx k = w.wavenumber().value();
    for (const Vec3& x : oracle::random_points(50, -2, 3, 21)) {
        if ((x - x1).norm() < 0.5) {
            continue;
        }
        // grad g written out independently.
        const double r = (x - x1).norm();
        const cplx g = oracle::green(x, x1, k);
        const CVec3 grad = (g * (cplx{0, 1} * k - 1.0 / r) / r) * (x - x1).cast<cplx>();
        const CVec3 want = inc->value(x) + oracle::cross(grad, sol.charge(0));
        EXPECT_LT(oracle::rel(sol.field(x), want), 1e-12);
    }
}

TEST(EvaluateField, ScatteredPartDecaysLikeInverseDistance)
{
    const WaveParameters w = wave_omega(2.0);
    const Vec3 x1(0.5, 0.5, 0.5);
    const DiscreteSolution sol =
        solve_moments(assemble_system(manual_cloud({x1}, {cplx{0.4, 0.1}}, 0.05), w, plane(w)));
    const Vec3 dir = Vec3(1, 0.3, -0.2).normalized();
    for (const double r : {50.0, 200.0}) {
        const double ratio = sol.scattered_field(x1 + 2 * r * dir).norm() / sol.scattered_field(x1 + r * dir).norm();
        EXPECT_NEAR(ratio, 0.5, 0.01);
    }
}

TEST(EvaluateField, ExclusionRadius)
{
    const WaveParameters w = wave_omega(2.0);
    const Vec3 x1(0.5, 0.5, 0.5);
    DiscreteSolution sol = solve_moments(assemble_system(manual_cloud({x1}, {1.0}, 0.05), w, plane(w)));
    EXPECT_DOUBLE_EQ(sol.exclusion_radius(), 0.15);
    EXPECT_THROW(sol.field(x1 + Vec3(0.1, 0, 0)), DomainError);
    EXPECT_NO_THROW(sol.field(x1 + Vec3(0.2, 0, 0)));
    sol.set_exclusion_radius(0.05);
    EXPECT_NO_THROW(sol.field(x1 + Vec3(0.1, 0, 0)));
}

TEST(Linearity, DoublingAmplitudeDoublesEverything)
{
    const WaveParameters w = wave_omega(2.0);
    const ParticleCloud c = random_cloud(20, 0.02, 17);
    const DiscreteSolution one = solve_moments(assemble_system(c, w, plane(w, 1.0)));
    const DiscreteSolution two = solve_moments(assemble_system(c, w, plane(w, 2.0)));
    for (std::size_t m = 0; m < c.size(); ++m) {
        EXPECT_EQ(two.moment(m), (2.0 * one.moment(m)).eval());
        EXPECT_EQ(two.charge(m), (2.0 * one.charge(m)).eval());
    }
    const Vec3 x(2, 2, 2);
    EXPECT_LT((two.scattered_field(x) - 2.0 * one.scattered_field(x)).norm(), 1e-15 * one.scattered_field(x).norm());
}

TEST(NeglectedTerms, BoundRatioShrinksWithRadius)
{
    // |j2 / j1| ~ a max(1/d^3, k^2/d) / max(1/d^2, k/d) at fixed d.
    const double d = 0.1, k = 2.0, kappa = 0.5;
    double last = std::numeric_limits<double>::infinity();
    for (const double a : {0.05, 0.02, 0.01, 0.005}) {
        const double dropped = a * std::max(1 / (d * d * d), k * k / d) * std::pow(a, 2 - kappa);
        const double kept = std::max(1 / (d * d), k / d) * std::pow(a, 2 - kappa);
        EXPECT_LT(dropped / kept, last);
        last = dropped / kept;
    }
}

TEST(SolutionJson, Layout)
{
    const WaveParameters w = wave_omega(2.0);
    const DiscreteSolution sol = solve_moments(assemble_system(random_cloud(3, 0.02, 2), w, plane(w)));
    const nlohmann::json doc = solution_to_json(sol);
    EXPECT_EQ(doc.at("diagnostics").at("backend"), "direct");
    ASSERT_EQ(doc.at("particles").size(), 3u);
    EXPECT_EQ(doc.at("particles")[0].at("P").size(), 6u);
    EXPECT_EQ(doc.at("particles")[0].at("Q").size(), 6u);
    EXPECT_EQ(doc.at("particles")[0].at("x").size(), 3u);
}

} // namespace
