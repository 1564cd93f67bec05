#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "smallscat/types.hpp"

namespace smallscat {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Kernel evaluated at (numerically) coincident points.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid user input. `path()` names the offending configuration key when known.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& message, std::string path = {})
        : Error(path.empty() ? message : path + ": " + message), path_(std::move(path))
    {
    }
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t column)
        : Error("column " + std::to_string(column) + ": " + message), column_(column)
    {
    }
    /// 1-based column of the first offending token.
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

class EvalError : public Error {
public:
    EvalError(const std::string& message, const Vec3& point);
    const Vec3& point() const noexcept { return point_; }

private:
    Vec3 point_;
};

/// Psi(x) vanishes, so mu(x) and K^2(x) are undefined.
class SingularMediumError : public Error {
public:
    SingularMediumError(const std::string& message, const Vec3& point);
    const Vec3& point() const noexcept { return point_; }

private:
    Vec3 point_;
};

class SolverError : public Error {
public:
    using Error::Error;
};

std::string format_point(const Vec3& x);

} // namespace smallscat
