#include "smallscat/coupling.hpp"

#include <Eigen/LU>
#include <fmt/format.h>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "smallscat/errors.hpp"

namespace smallscat {

CouplingOperator::CouplingOperator(std::vector<Vec3> sites, std::vector<cplx> strengths,
                                   const WaveParameters& wave, double min_separation)
    : sites_(std::move(sites)),
      strengths_(std::move(strengths)),
      coefficient_(wave.moment_coefficient()),
      k_(wave.wavenumber()),
      min_separation_(min_separation)
{
    if (sites_.size() != strengths_.size())
        throw std::invalid_argument("site and strength counts differ");
    // O(M^2) once; the solvers rely on all pairs being separated.
    const std::size_t m = sites_.size();
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = j + 1; i < m; ++i)
            if (!((sites_[i] - sites_[j]).norm() > min_separation_))
                throw DomainError(fmt::format("sites {} and {} coincide at {}", j, i, format_point(sites_[j])));
}

Eigen::MatrixXcd CouplingOperator::assemble() const
{
    const auto m = static_cast<std::ptrdiff_t>(sites_.size());
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(rows(), rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < m; ++j) {
        for (std::ptrdiff_t i = 0; i < m; ++i) {
            if (i == j || strengths_[i] == cplx{})
                continue;
            a.block<3, 3>(3 * j, 3 * i) =
                (coefficient_ * strengths_[i]) * dyadic_green(sites_[j], sites_[i], k_, min_separation_);
        }
    }
    return a;
}

void CouplingOperator::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const
{
    const auto m = static_cast<std::ptrdiff_t>(sites_.size());
    out.resize(rows());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < m; ++j) {
        CVec3 acc = CVec3::Zero();
        for (std::ptrdiff_t i = 0; i < m; ++i) {
            if (i == j || strengths_[i] == cplx{})
                continue;
            acc += strengths_[i] * dyadic_apply(sites_[j], sites_[i], k_, in.segment<3>(3 * i), min_separation_);
        }
        out.segment<3>(3 * j) = in.segment<3>(3 * j) + coefficient_ * acc;
    }
}

Eigen::VectorXcd curl_rhs(const std::vector<Vec3>& sites, const IncidentField& incident)
{
    Eigen::VectorXcd rhs(3 * static_cast<Eigen::Index>(sites.size()));
    for (std::size_t j = 0; j < sites.size(); ++j)
        rhs.segment<3>(3 * static_cast<Eigen::Index>(j)) = incident.curl(sites[j]);
    return rhs;
}

std::string to_string(Backend b)
{
    switch (b) {
    case Backend::automatic: return "auto";
    case Backend::direct: return "direct";
    case Backend::iterative: return "gmres";
    }
    return "?";
}

namespace {

double relative_residual(const Eigen::VectorXcd& ax, const Eigen::VectorXcd& rhs)
{
    const double bn = rhs.norm();
    const double rn = (ax - rhs).norm();
    return bn == 0.0 ? rn : rn / bn;
}

std::string describe(const SolverDiagnostics& d)
{
    return fmt::format("backend={} residual={:.3e} condition={:.3e} iterations={}", to_string(d.backend),
                       d.residual, d.condition_estimate, d.iterations);
}

} // namespace

CoupledSolve solve_dense(const Eigen::MatrixXcd& matrix, const Eigen::VectorXcd& rhs,
                         const SolverOptions& options)
{
    CoupledSolve out;
    out.diagnostics.backend = Backend::direct;
    if (matrix.rows() == 0) {
        out.solution = rhs;
        out.diagnostics.condition_estimate = 1.0;
        return out;
    }
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(matrix);
    const double rcond = lu.rcond();
    out.diagnostics.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(out.diagnostics.condition_estimate <= options.max_condition))
        throw SolverError("coupling matrix is ill-conditioned: " + describe(out.diagnostics));
    out.solution = lu.solve(rhs);
    out.diagnostics.residual = relative_residual(matrix * out.solution, rhs);
    if (!(out.diagnostics.residual <= options.direct_tolerance))
        throw SolverError("direct solve failed its residual check: " + describe(out.diagnostics));
    return out;
}

CoupledSolve solve_coupled(const CouplingOperator& op, const Eigen::VectorXcd& rhs, const SolverOptions& options)
{
    Backend backend = options.backend;
    if (backend == Backend::automatic)
        backend = op.sites() > options.direct_limit ? Backend::iterative : Backend::direct;

    if (backend == Backend::direct)
        return solve_dense(op.assemble(), rhs, options);

    CoupledSolve out;
    out.diagnostics.backend = Backend::iterative;
    out.solution = rhs;
    const auto result = gmres([&op](const Eigen::VectorXcd& in, Eigen::VectorXcd& o) { op.apply(in, o); }, rhs,
                              out.solution, options.iterative);
    out.diagnostics.iterations = result.iterations;
    out.diagnostics.residual = result.relative_residual;
    if (!result.converged)
        throw SolverError("GMRES did not converge: " + describe(out.diagnostics));
    return out;
}

void set_thread_count(int threads)
{
#ifdef _OPENMP
    omp_set_num_threads(threads > 0 ? threads : omp_get_num_procs());
#else
    (void)threads;
#endif
}

} // namespace smallscat
