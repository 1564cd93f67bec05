#include "smallscat/greens.hpp"

#include <stdexcept>

#include "smallscat/errors.hpp"

namespace smallscat {

Wavenumber::Wavenumber(cplx k) : k_(k)
{
    if (k.imag() < 0.0)
        throw std::invalid_argument("wavenumber must satisfy Im k >= 0");
    if (k == cplx{0.0, 0.0})
        throw std::invalid_argument("k = 0 is only available through Wavenumber::static_limit()");
}

namespace {

struct Separation {
    double r;
    Vec3 unit;
};

Separation separate(const Vec3& x, const Vec3& y, double min_separation)
{
    const Vec3 diff = x - y;
    const double r = diff.norm();
    if (!(r > min_separation))
        throw DomainError("Green's function evaluated at coincident points " + format_point(x));
    return {r, diff / r};
}

cplx green_of_r(double r, cplx k)
{
    return std::exp(kI * k * r) / (4.0 * kPi * r);
}

// Radial coefficients of D: D = g * (a * rr^T + b * I).
struct DyadicCoefficients {
    cplx a;
    cplx b;
};

DyadicCoefficients dyadic_coefficients(double r, cplx k)
{
    const cplx g = green_of_r(r, k);
    const cplx ikr = kI * k / r;
    const double inv_r2 = 1.0 / (r * r);
    const cplx k2 = k * k;
    return {g * (-k2 - 3.0 * ikr + 3.0 * inv_r2), g * (k2 + ikr - inv_r2)};
}

} // namespace

cplx scalar_green(const Vec3& x, const Vec3& y, Wavenumber k, double min_separation)
{
    const auto s = separate(x, y, min_separation);
    return green_of_r(s.r, k.value());
}

CVec3 grad_green(const Vec3& x, const Vec3& y, Wavenumber k, double min_separation)
{
    const auto s = separate(x, y, min_separation);
    const cplx g = green_of_r(s.r, k.value());
    return (g * (kI * k.value() - 1.0 / s.r)) * s.unit.cast<cplx>();
}

CMat3 dyadic_green(const Vec3& x, const Vec3& y, Wavenumber k, double min_separation)
{
    const auto s = separate(x, y, min_separation);
    const auto [a, b] = dyadic_coefficients(s.r, k.value());
    CMat3 d = a * (s.unit * s.unit.transpose()).cast<cplx>();
    d.diagonal().array() += b;
    return d;
}

CVec3 dyadic_apply(const Vec3& x, const Vec3& y, Wavenumber k, const CVec3& q,
                   double min_separation)
{
    const auto s = separate(x, y, min_separation);
    const auto [a, b] = dyadic_coefficients(s.r, k.value());
    const cplx proj = s.unit.cast<cplx>().dot(q); // conjugates only the real unit vector
    return a * proj * s.unit.cast<cplx>() + b * q;
}

} // namespace smallscat
