#include "smallscat/fields.hpp"

#include <stdexcept>

namespace smallscat {

PlaneWave::PlaneWave(const CVec3& amplitude, const Vec3& direction, Wavenumber k)
    : amplitude_(amplitude), k_(k)
{
    const double len = direction.norm();
    if (!(len > 0.0) || !std::isfinite(len))
        throw std::invalid_argument("plane wave direction must be a nonzero finite vector");
    direction_ = direction / len;

    const cplx transverse = direction_.cast<cplx>().dot(amplitude_);
    if (std::abs(transverse) > 1e-12 * std::max(1.0, amplitude_.norm()))
        throw std::invalid_argument("plane wave amplitude is not transverse to its direction");
}

cplx PlaneWave::phase(const Vec3& x) const
{
    return std::exp(kI * k_.value() * direction_.dot(x));
}

CVec3 PlaneWave::value(const Vec3& x) const
{
    return amplitude_ * phase(x);
}

CVec3 PlaneWave::curl(const Vec3& x) const
{
    return (kI * k_.value() * phase(x)) * cross(direction_, amplitude_);
}

PlaneWave PlaneWave::scaled(cplx factor) const
{
    return PlaneWave(amplitude_ * factor, direction_, k_);
}

} // namespace smallscat
