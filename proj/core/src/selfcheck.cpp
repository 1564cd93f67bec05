#include "smallscat/selfcheck.hpp"

#include <memory>
#include <random>

#include "smallscat/discrete_solver.hpp"
#include "smallscat/greens.hpp"

namespace smallscat {

namespace {

class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    Vec3 point(double half) { return {uniform(-half, half), uniform(-half, half), uniform(-half, half)}; }
    // Pair separated by at least 0.2.
    std::pair<Vec3, Vec3> pair()
    {
        while (true) {
            Vec3 x = point(1.0);
            Vec3 y = point(1.0);
            if ((x - y).norm() > 0.2)
                return {x, y};
        }
    }

private:
    std::mt19937_64 rng_;
};

CheckResult make(std::string name, double value, double tol)
{
    return {std::move(name), value, tol, value < tol};
}

template <class F>
CMat3 fd_jacobian(const F& f, const Vec3& x, double s)
{
    CMat3 jac;
    for (int j = 0; j < 3; ++j) {
        const Vec3 e = s * Vec3::Unit(j);
        jac.col(j) = (f(x + e) - f(x - e)) / (2.0 * s);
    }
    return jac;
}

CVec3 curl_of(const CMat3& jac)
{
    return {jac(2, 1) - jac(1, 2), jac(0, 2) - jac(2, 0), jac(1, 0) - jac(0, 1)};
}

} // namespace

std::vector<CheckResult> run_self_checks(const WaveParameters& wave, const PlaneWave& incident, std::uint64_t seed)
{
    const Wavenumber k = wave.wavenumber();
    const cplx k2 = k.squared();
    const double kabs = std::abs(k.value());
    constexpr int kPairs = 100;
    std::vector<CheckResult> out;

    {
        Sampler s(seed);
        double worst = 0.0;
        for (int p = 0; p < kPairs; ++p) {
            const auto [x, y] = s.pair();
            const double r = (x - y).norm();
            const double h = 1e-4 * r;
            const cplx g = scalar_green(x, y, k);
            cplx lap = -6.0 * g;
            for (int d = 0; d < 3; ++d)
                lap += scalar_green(x + h * Vec3::Unit(d), y, k) + scalar_green(x - h * Vec3::Unit(d), y, k);
            lap /= h * h;
            worst = std::max(worst, std::abs(lap + k2 * g) / (std::abs(g) * (kabs * kabs + 1.0 / (r * r))));
        }
        out.push_back(make("helmholtz_residual", worst, 1e-5));
    }
    {
        Sampler s(seed + 1);
        double trace = 0.0;
        double hess = 0.0;
        double sym = 0.0;
        double grad = 0.0;
        double curl = 0.0;
        for (int p = 0; p < kPairs; ++p) {
            const auto [x, y] = s.pair();
            const double r = (x - y).norm();
            const double h = 1e-4 * r;
            const cplx g = scalar_green(x, y, k);
            const CMat3 d = dyadic_green(x, y, k);
            trace = std::max(trace, std::abs(d.trace() - 2.0 * k2 * g) / std::abs(2.0 * k2 * g));

            auto gx = [&](const Vec3& p) { return scalar_green(p, y, k); };
            CMat3 fd;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const Vec3 ei = h * Vec3::Unit(i);
                    const Vec3 ej = h * Vec3::Unit(j);
                    fd(i, j) = i == j ? (gx(x + ei) - 2.0 * g + gx(x - ei)) / (h * h)
                                      : (gx(x + ei + ej) - gx(x + ei - ej) - gx(x - ei + ej) + gx(x - ei - ej)) /
                                            (4.0 * h * h);
                }
            fd.diagonal().array() += k2 * g;
            hess = std::max(hess, (fd - d).norm() / d.norm());

            const CMat3 swapped = dyadic_green(y, x, k);
            sym = std::max(sym, std::max((d - swapped).norm(), (d - d.transpose()).norm()) / d.norm());

            CVec3 gfd;
            for (int i = 0; i < 3; ++i) {
                const Vec3 e = 1e-5 * r * Vec3::Unit(i);
                gfd[i] = (gx(x + e) - gx(x - e)) / (2e-5 * r);
            }
            const CVec3 ga = grad_green(x, y, k);
            grad = std::max(grad, (gfd - ga).norm() / ga.norm());

            const CVec3 q(cplx(1.0, 0.3), cplx(-0.4, 0.2), cplx(0.7, -1.1));
            auto dip = [&](const Vec3& p) -> CVec3 { return cross(grad_green(p, y, k), q); };
            const CVec3 c_fd = curl_of(fd_jacobian(dip, x, h));
            const CVec3 c_an = d * q;
            curl = std::max(curl, (c_fd - c_an).norm() / c_an.norm());
        }
        out.push_back(make("dyadic_trace_identity", trace, 1e-10));
        out.push_back(make("dyadic_vs_fd_hessian", hess, 1e-5));
        out.push_back(make("dyadic_symmetry", sym, 1e-14));
        out.push_back(make("gradient_vs_fd", grad, 1e-6));
        out.push_back(make("dyadic_is_curl_of_dipole", curl, 1e-5));
    }
    {
        Sampler s(seed + 2);
        const double h = 1e-4 / std::max(kabs, 1.0);
        double curl = 0.0;
        double div = 0.0;
        double cc = 0.0;
        auto e0 = [&](const Vec3& p) -> CVec3 { return incident.value(p); };
        auto c0 = [&](const Vec3& p) -> CVec3 { return curl_of(fd_jacobian(e0, p, h)); };
        for (int p = 0; p < 20; ++p) {
            const Vec3 x = s.point(2.0);
            const CMat3 jac = fd_jacobian(e0, x, h);
            const CVec3 c_an = incident.curl(x);
            curl = std::max(curl, (curl_of(jac) - c_an).norm() / c_an.norm());
            div = std::max(div, std::abs(jac.trace()) / (kabs * incident.value(x).norm()));
            const CVec3 ccfd = curl_of(fd_jacobian(c0, x, 1e-3 / std::max(kabs, 1.0)));
            cc = std::max(cc, (ccfd - k2 * e0(x)).norm() / (k2 * e0(x)).norm());
        }
        out.push_back(make("incident_curl_vs_fd", curl, 1e-7));
        out.push_back(make("incident_divergence", div, 1e-7));
        out.push_back(make("incident_curl_curl", cc, 1e-6));
    }
    {
        // One particle: P1 = curl E0(x1), Q1 = -beta h a^{2-kappa} P1.
        const double a = 0.05;
        const double kappa = 0.5;
        const cplx h(0.7, 0.2);
        ParticleCloud cloud;
        cloud.radius = a;
        cloud.kappa = kappa;
        cloud.positions = {Vec3(0.1, -0.2, 0.3)};
        cloud.impedances = {h / std::pow(a, kappa)};
        auto field = std::make_shared<PlaneWave>(incident);
        const auto sol = solve_moments(assemble_system(cloud, wave, field));
        const CVec3 q = (-wave.moment_coefficient() * h * std::pow(a, 2.0 - kappa)) * incident.curl(cloud.positions[0]);
        Sampler s(seed + 3);
        double worst = 0.0;
        for (int p = 0; p < 50; ++p) {
            Vec3 x = s.point(3.0);
            if ((x - cloud.positions[0]).norm() < 0.5)
                continue;
            const CVec3 expected = incident.value(x) + cross(grad_green(x, cloud.positions[0], k), q);
            worst = std::max(worst, (sol.field(x) - expected).norm() / expected.norm());
        }
        out.push_back(make("single_scatterer_closed_form", worst, 1e-12));
    }
    {
        const auto target = ScalarFieldProfile::from_function(
            [&](const Vec3& x) { return wave.mu0 * cplx(1.0 + 0.5 * x.x() * x.x(), 0.3 * x.y()); }, "target");
        const Box box{Vec3::Zero(), 1.0};
        double worst = 0.0;
        for (int i = 0; i < 17; ++i)
            for (int j = 0; j < 17; ++j)
                for (int l = 0; l < 17; ++l) {
                    const Vec3 x = box.lower() + box.edge * Vec3(i, j, l) / 16.0;
                    const cplx hn = design_hn(target, wave, x).hn;
                    const EffectiveMedium m(ScalarFieldProfile::constant(1.0), ScalarFieldProfile::constant(hn), wave,
                                            box);
                    worst = std::max(worst, std::abs(m.permeability(x) - target(x)) / std::abs(target(x)));
                }
        out.push_back(make("design_round_trip", worst, 1e-12));
    }
    return out;
}

} // namespace smallscat
