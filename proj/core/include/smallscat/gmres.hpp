#pragma once

#include <functional>

#include <Eigen/Core>

namespace smallscat {

using LinearMap = std::function<void(const Eigen::VectorXcd& in, Eigen::VectorXcd& out)>;

struct GmresOptions {
    double tolerance = 1e-8; // relative residual ||b - A x|| / ||b||
    int restart = 60;
    int max_iterations = 2000;
};

struct GmresResult {
    int iterations = 0;
    double relative_residual = 0.0;
    bool converged = false;
};

/// Restarted GMRES(m) for complex systems given only the action of A.
/// `x` holds the initial guess on entry and the approximation on exit.
GmresResult gmres(const LinearMap& apply, const Eigen::VectorXcd& rhs, Eigen::VectorXcd& x,
                  const GmresOptions& options = {});

} // namespace smallscat
