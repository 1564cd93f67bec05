#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace smallscat {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using CMat3 = Eigen::Matrix3cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Spherical-particle moment factor 8*pi/3.
inline constexpr double kSphereFactor = 8.0 * kPi / 3.0;

/// Bilinear complex cross product a x b. Eigen's cross() conjugates its
/// result for complex scalars, which is not what the field formulas need.
inline CVec3 cross(const CVec3& a, const CVec3& b)
{
    return {a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(), a.x() * b.y() - a.y() * b.x()};
}

inline CVec3 cross(const Vec3& a, const CVec3& b)
{
    return cross(CVec3(a.cast<cplx>()), b);
}

/// Axis-aligned cube, described by its center and edge length.
struct Box {
    Vec3 center = Vec3::Constant(0.5);
    double edge = 1.0;

    Vec3 lower() const { return center.array() - 0.5 * edge; }
    Vec3 upper() const { return center.array() + 0.5 * edge; }
    double diameter() const { return edge * std::sqrt(3.0); }
    double volume() const { return edge * edge * edge; }

    bool contains(const Vec3& x) const
    {
        return ((x - center).cwiseAbs().array() <= 0.5 * edge).all();
    }
};

} // namespace smallscat
