#pragma once

// The operator shared by the particle system and its collocation limit:
//   (A p)_j = p_j + beta * sum_{m != j} s_m D(x_j, x_m) p_m,
// with beta = (8 pi / 3) i omega eps and per-site strengths s_m
// (h(x_m) a^{2-kappa} for particles, h N v for collocation cells).

#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "smallscat/fields.hpp"
#include "smallscat/gmres.hpp"
#include "smallscat/greens.hpp"
#include "smallscat/medium.hpp"

namespace smallscat {

class CouplingOperator {
public:
    /// Throws DomainError naming the first pair of coincident sites.
    CouplingOperator(std::vector<Vec3> sites, std::vector<cplx> strengths, const WaveParameters& wave,
                     double min_separation);

    std::size_t sites() const noexcept { return sites_.size(); }
    Eigen::Index rows() const noexcept { return static_cast<Eigen::Index>(3 * sites_.size()); }

    /// Dense I + C, row-major in 3x3 blocks.
    Eigen::MatrixXcd assemble() const;
    /// out = (I + C) in, recomputing D on the fly.
    void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;

    const std::vector<Vec3>& positions() const noexcept { return sites_; }
    const std::vector<cplx>& strengths() const noexcept { return strengths_; }
    cplx coefficient() const noexcept { return coefficient_; }
    Wavenumber wavenumber() const noexcept { return k_; }
    double min_separation() const noexcept { return min_separation_; }

private:
    std::vector<Vec3> sites_;
    std::vector<cplx> strengths_;
    cplx coefficient_;
    Wavenumber k_;
    double min_separation_;
};

/// Stacks curl E0 at the sites.
Eigen::VectorXcd curl_rhs(const std::vector<Vec3>& sites, const IncidentField& incident);

enum class Backend { automatic, direct, iterative };

struct SolverOptions {
    Backend backend = Backend::automatic;
    /// Automatic mode switches to the iterative backend above this many sites.
    std::size_t direct_limit = 2000;
    /// A-posteriori relative residual required of the direct solve.
    double direct_tolerance = 1e-10;
    double max_condition = 1e12;
    GmresOptions iterative{};
};

struct SolverDiagnostics {
    Backend backend = Backend::direct;
    double residual = 0.0;
    /// 1-norm condition estimate; NaN for the iterative backend.
    double condition_estimate = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
};

std::string to_string(Backend b);

struct CoupledSolve {
    Eigen::VectorXcd solution;
    SolverDiagnostics diagnostics;
};

/// Solves (I + C) p = rhs. Throws SolverError (message includes diagnostics)
/// if the matrix is numerically singular, the condition estimate exceeds
/// `max_condition`, the residual check fails or GMRES does not converge.
CoupledSolve solve_coupled(const CouplingOperator& op, const Eigen::VectorXcd& rhs,
                           const SolverOptions& options = {});

/// Direct solve of an explicitly assembled matrix, with the same checks.
CoupledSolve solve_dense(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                         const SolverOptions& options = {});

/// Number of OpenMP threads the solvers use; 0 restores the runtime default.
void set_thread_count(int threads);

} // namespace smallscat
