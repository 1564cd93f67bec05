#pragma once

// Free-space Helmholtz Green's function g(x,y) = exp(ik|x-y|) / (4 pi |x-y|),
// its gradient and the dyadic coupling kernel D = Hess_x g + k^2 g I.

#include "smallscat/types.hpp"

namespace smallscat {

/// Background wavenumber. Im k >= 0 so that outgoing waves decay.
class Wavenumber {
public:
    /// Throws std::invalid_argument if Im k < 0 or k == 0.
    explicit Wavenumber(cplx k);
    explicit Wavenumber(double k) : Wavenumber(cplx{k, 0.0}) {}

    /// k = 0 (Laplace/Coulomb kernel). Test support only.
    static Wavenumber static_limit() noexcept { return Wavenumber{}; }

    cplx value() const noexcept { return k_; }
    cplx squared() const noexcept { return k_ * k_; }

private:
    Wavenumber() = default;
    cplx k_{0.0, 0.0};
};

/// Default coincidence threshold for unit-size domains. Callers working on a
/// domain of diameter L should pass 1e-12 * L.
inline constexpr double kDefaultMinSeparation = 1e-12;

cplx scalar_green(const Vec3& x, const Vec3& y, Wavenumber k,
                  double min_separation = kDefaultMinSeparation);

/// Gradient with respect to x.
CVec3 grad_green(const Vec3& x, const Vec3& y, Wavenumber k,
                 double min_separation = kDefaultMinSeparation);

/// D(x,y) = Hess_x g + k^2 g I. D(x,y) Q equals curl_x [grad_x g, Q].
/// Symmetric in its indices and in (x, y); trace D = 2 k^2 g.
CMat3 dyadic_green(const Vec3& x, const Vec3& y, Wavenumber k,
                   double min_separation = kDefaultMinSeparation);

/// D(x,y) Q without forming the matrix.
CVec3 dyadic_apply(const Vec3& x, const Vec3& y, Wavenumber k, const CVec3& q,
                   double min_separation = kDefaultMinSeparation);

} // namespace smallscat
