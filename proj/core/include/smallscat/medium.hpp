#pragma once

#include <functional>
#include <string>

#include "smallscat/fieldexpr.hpp"
#include "smallscat/greens.hpp"
#include "smallscat/types.hpp"

namespace smallscat {

/// Background material and frequency. With sigma0 > 0 the permittivity is
/// replaced by eps0 + i sigma0 / omega everywhere it appears.
struct WaveParameters {
    double omega = 1.0;
    double eps0 = 1.0;
    double mu0 = 1.0;
    double sigma0 = 0.0;

    /// Throws std::invalid_argument unless omega, eps0, mu0 > 0 and sigma0 >= 0.
    void validate() const;

    cplx permittivity() const { return {eps0, sigma0 / omega}; }
    /// k^2 = omega^2 eps mu0.
    cplx k_squared() const { return omega * omega * permittivity() * mu0; }
    /// Branch with Im k >= 0.
    Wavenumber wavenumber() const;
    /// (8 pi / 3) i omega eps, the factor multiplying h N in Psi.
    cplx moment_coefficient() const { return kSphereFactor * kI * omega * permittivity(); }
};

/// A scalar function of position: either a parsed expression or a callable.
class ScalarFieldProfile {
public:
    using Fn = std::function<cplx(const Vec3&)>;

    static ScalarFieldProfile from_expression(const FieldExpr& expr);
    static ScalarFieldProfile parse(std::string_view source);
    static ScalarFieldProfile constant(cplx value);
    static ScalarFieldProfile from_function(Fn fn, std::string description = "<function>");

    cplx operator()(const Vec3& x) const { return fn_(x); }
    const std::string& description() const noexcept { return description_; }
    bool is_constant_zero() const noexcept { return zero_; }

private:
    ScalarFieldProfile(Fn fn, std::string description, bool zero)
        : fn_(std::move(fn)), description_(std::move(description)), zero_(zero)
    {
    }
    Fn fn_;
    std::string description_;
    bool zero_ = false;
};

/// Evaluates a particle-density profile and enforces N real and >= 0.
/// Throws ConfigError naming the point otherwise.
double density_at(const ScalarFieldProfile& density, const Vec3& x);

/// Density N(x), impedance h(x) and background wave, both profiles cut off
/// outside the domain.
class EffectiveMedium {
public:
    EffectiveMedium(ScalarFieldProfile density, ScalarFieldProfile impedance, WaveParameters wave,
                    Box domain);

    /// h(x) N(x), zero outside the domain.
    cplx hn(const Vec3& x) const;
    /// Psi(x) = 1 + (8 pi / 3) i omega eps h(x) N(x).
    cplx psi(const Vec3& x) const;
    /// mu(x) = mu0 / Psi(x). Throws SingularMediumError if |Psi| < 1e-12.
    cplx permeability(const Vec3& x) const;
    /// K^2(x) = k^2 / Psi(x) = omega^2 eps mu(x).
    cplx refraction_sq(const Vec3& x) const;

    const ScalarFieldProfile& density() const noexcept { return density_; }
    const ScalarFieldProfile& impedance() const noexcept { return impedance_; }
    const WaveParameters& wave() const noexcept { return wave_; }
    const Box& domain() const noexcept { return domain_; }

private:
    cplx checked_psi(const Vec3& x) const;

    ScalarFieldProfile density_;
    ScalarFieldProfile impedance_;
    WaveParameters wave_;
    Box domain_;
};

struct DesignSample {
    cplx hn;
    /// False when Re(hN) < 0, i.e. no passive impedance with N >= 0 realizes it.
    bool passive = true;
};

/// Inverts mu = mu0 / Psi for the product h N at one point:
/// hN = (mu0 / mu - 1) / ((8 pi / 3) i omega eps). Throws ConfigError if mu(x) == 0.
DesignSample design_hn(const ScalarFieldProfile& target_mu, const WaveParameters& wave, const Vec3& x);

} // namespace smallscat
