#pragma once

#include <functional>
#include <memory>

#include "smallscat/greens.hpp"
#include "smallscat/types.hpp"

namespace smallscat {

/// Source of the incident field E0 and its curl at arbitrary points.
class IncidentField {
public:
    virtual ~IncidentField() = default;
    virtual CVec3 value(const Vec3& x) const = 0;
    virtual CVec3 curl(const Vec3& x) const = 0;
};

/// E0(x) = E exp(i k alpha . x), with alpha a unit vector and alpha . E = 0.
class PlaneWave final : public IncidentField {
public:
    /// Normalizes `direction`. Throws std::invalid_argument for a zero
    /// direction or a non-transverse amplitude (|alpha . E| > 1e-12 max(1, |E|)).
    PlaneWave(const CVec3& amplitude, const Vec3& direction, Wavenumber k);

    CVec3 value(const Vec3& x) const override;
    /// i k (alpha x E) exp(i k alpha . x)
    CVec3 curl(const Vec3& x) const override;

    const CVec3& amplitude() const noexcept { return amplitude_; }
    const Vec3& direction() const noexcept { return direction_; }
    Wavenumber wavenumber() const noexcept { return k_; }

    PlaneWave scaled(cplx factor) const;

private:
    cplx phase(const Vec3& x) const;

    CVec3 amplitude_;
    Vec3 direction_;
    Wavenumber k_;
};

/// Adapts a pair of callables to the IncidentField contract.
class CallbackField final : public IncidentField {
public:
    using Fn = std::function<CVec3(const Vec3&)>;
    CallbackField(Fn value, Fn curl) : value_(std::move(value)), curl_(std::move(curl)) {}

    CVec3 value(const Vec3& x) const override { return value_(x); }
    CVec3 curl(const Vec3& x) const override { return curl_(x); }

private:
    Fn value_;
    Fn curl_;
};

} // namespace smallscat
