#include "smallscat/errors.hpp"

#include <fmt/format.h>

namespace smallscat {

std::string format_point(const Vec3& x)
{
    return fmt::format("({:.17g}, {:.17g}, {:.17g})", x.x(), x.y(), x.z());
}

EvalError::EvalError(const std::string& message, const Vec3& point)
    : Error(message + " at " + format_point(point)), point_(point)
{
}

SingularMediumError::SingularMediumError(const std::string& message, const Vec3& point)
    : Error(message + " at " + format_point(point)), point_(point)
{
}

} // namespace smallscat
