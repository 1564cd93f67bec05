#include "smallscat/medium.hpp"

#include <stdexcept>

#include <fmt/format.h>

#include "smallscat/errors.hpp"

namespace smallscat {

void WaveParameters::validate() const
{
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(omega))
        throw std::invalid_argument("omega must be positive");
    if (!positive(eps0))
        throw std::invalid_argument("eps0 must be positive");
    if (!positive(mu0))
        throw std::invalid_argument("mu0 must be positive");
    if (!std::isfinite(sigma0) || sigma0 < 0.0)
        throw std::invalid_argument("sigma0 must be non-negative");
}

Wavenumber WaveParameters::wavenumber() const
{
    cplx k = std::sqrt(k_squared());
    if (k.imag() < 0.0)
        k = -k;
    return Wavenumber(k);
}

ScalarFieldProfile ScalarFieldProfile::from_expression(const FieldExpr& expr)
{
    const bool zero = expr.root().op == FieldExpr::Op::number && expr.root().number == 0.0;
    return ScalarFieldProfile([expr](const Vec3& x) { return expr.evaluate(x); }, expr.to_string(),
                              zero);
}

ScalarFieldProfile ScalarFieldProfile::parse(std::string_view source)
{
    return from_expression(FieldExpr::parse(source));
}

ScalarFieldProfile ScalarFieldProfile::constant(cplx value)
{
    return ScalarFieldProfile([value](const Vec3&) { return value; },
                              fmt::format("{:.17g}{:+.17g}i", value.real(), value.imag()),
                              value == cplx{0.0, 0.0});
}

ScalarFieldProfile ScalarFieldProfile::from_function(Fn fn, std::string description)
{
    return ScalarFieldProfile(std::move(fn), std::move(description), false);
}

double density_at(const ScalarFieldProfile& density, const Vec3& x)
{
    const cplx v = density(x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw ConfigError("density N is not finite at " + format_point(x), "profiles.density_N");
    if (std::abs(v.imag()) > 1e-14 * std::max(1.0, std::abs(v.real())))
        throw ConfigError("density N is not real at " + format_point(x), "profiles.density_N");
    if (v.real() < 0.0)
        throw ConfigError(fmt::format("density N = {:.6g} < 0 at {}", v.real(), format_point(x)),
                          "profiles.density_N");
    return v.real();
}

EffectiveMedium::EffectiveMedium(ScalarFieldProfile density, ScalarFieldProfile impedance,
                                 WaveParameters wave, Box domain)
    : density_(std::move(density)), impedance_(std::move(impedance)), wave_(wave), domain_(domain)
{
    wave_.validate();
}

cplx EffectiveMedium::hn(const Vec3& x) const
{
    if (!domain_.contains(x) || density_.is_constant_zero() || impedance_.is_constant_zero())
        return 0.0;
    return impedance_(x) * density_(x);
}

cplx EffectiveMedium::psi(const Vec3& x) const
{
    return 1.0 + wave_.moment_coefficient() * hn(x);
}

cplx EffectiveMedium::checked_psi(const Vec3& x) const
{
    const cplx p = psi(x);
    if (std::abs(p) < 1e-12)
        throw SingularMediumError("Psi vanishes", x);
    return p;
}

cplx EffectiveMedium::permeability(const Vec3& x) const
{
    return wave_.mu0 / checked_psi(x);
}

cplx EffectiveMedium::refraction_sq(const Vec3& x) const
{
    return wave_.k_squared() / checked_psi(x);
}

DesignSample design_hn(const ScalarFieldProfile& target_mu, const WaveParameters& wave, const Vec3& x)
{
    const cplx mu = target_mu(x);
    if (mu == cplx{0.0, 0.0})
        throw ConfigError("target permeability vanishes at " + format_point(x), "design.target_mu");
    const cplx hn = (wave.mu0 / mu - 1.0) / wave.moment_coefficient();
    return {hn, hn.real() >= 0.0};
}

} // namespace smallscat
