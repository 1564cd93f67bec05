#include "smallscat/continuum_solver.hpp"

#include <stdexcept>

#include "smallscat/errors.hpp"

namespace smallscat {

CollocationGrid::CollocationGrid(const Box& domain, int n, const EffectiveMedium& medium)
    : domain_(domain), n_(n)
{
    build_nodes();
    const double v = cell_volume();
    weights_.resize(nodes_.size());
    for (std::size_t c = 0; c < nodes_.size(); ++c)
        weights_[c] = medium.hn(nodes_[c]) * v;
}

CollocationGrid::CollocationGrid(const Box& domain, int n, std::vector<cplx> weights)
    : domain_(domain), n_(n), weights_(std::move(weights))
{
    build_nodes();
    if (weights_.size() != nodes_.size())
        throw std::invalid_argument("weight count does not match n^3");
}

void CollocationGrid::build_nodes()
{
    if (n_ < 1)
        throw ConfigError("collocation grid needs n >= 1", "continuum.n");
    if (!(domain_.edge > 0.0))
        throw ConfigError("domain edge must be positive", "domain.edge");
    const double h = spacing();
    const Vec3 lo = domain_.lower();
    nodes_.reserve(static_cast<std::size_t>(n_) * n_ * n_);
    for (int k = 0; k < n_; ++k)
        for (int j = 0; j < n_; ++j)
            for (int i = 0; i < n_; ++i)
                nodes_.push_back(lo + h * Vec3(i + 0.5, j + 0.5, k + 0.5));
}

CollocationSystem assemble_collocation_system(const CollocationGrid& grid, const WaveParameters& wave,
                                              const IncidentField& incident)
{
    CouplingOperator op(grid.nodes(), grid.weights(), wave, 1e-12 * grid.domain().diameter());
    Eigen::VectorXcd rhs = curl_rhs(grid.nodes(), incident);
    return {std::move(op), std::move(rhs)};
}

ContinuumSolution::ContinuumSolution(CollocationGrid grid, const WaveParameters& wave,
                                     std::shared_ptr<const IncidentField> incident, Eigen::VectorXcd nodal_curl,
                                     SolverDiagnostics diagnostics)
    : grid_(std::move(grid)),
      wave_(wave),
      incident_(std::move(incident)),
      curl_(std::move(nodal_curl)),
      diagnostics_(diagnostics),
      k_(wave.wavenumber()),
      coefficient_(wave.moment_coefficient())
{
}

CVec3 ContinuumSolution::field(const Vec3& x) const
{
    const auto& nodes = grid_.nodes();
    const auto& w = grid_.weights();
    const double coincident = 1e-12 * grid_.domain().diameter();
    CVec3 sum = CVec3::Zero();
    for (std::size_t c = 0; c < nodes.size(); ++c) {
        if (w[c] == cplx{} || (x - nodes[c]).norm() <= coincident)
            continue;
        sum += w[c] * cross(grad_green(x, nodes[c], k_, 0.0), nodal_curl(c));
    }
    return incident_->value(x) - coefficient_ * sum;
}

std::optional<CVec3> ContinuumSolution::interpolated_curl(const Vec3& x) const
{
    const int n = grid_.n();
    if (n < 2)
        return std::nullopt;
    const double h = grid_.spacing();
    const Vec3 t = (x - grid_.domain().lower()) / h - Vec3::Constant(0.5);
    int base[3];
    double frac[3];
    for (int d = 0; d < 3; ++d) {
        if (!(t[d] >= 0.0 && t[d] <= n - 1))
            return std::nullopt;
        base[d] = std::min(static_cast<int>(std::floor(t[d])), n - 2);
        frac[d] = t[d] - base[d];
    }
    CVec3 acc = CVec3::Zero();
    for (int dk = 0; dk < 2; ++dk)
        for (int dj = 0; dj < 2; ++dj)
            for (int di = 0; di < 2; ++di) {
                const double wgt = (di ? frac[0] : 1.0 - frac[0]) * (dj ? frac[1] : 1.0 - frac[1]) *
                                   (dk ? frac[2] : 1.0 - frac[2]);
                if (wgt != 0.0)
                    acc += wgt * nodal_curl(grid_.index(base[0] + di, base[1] + dj, base[2] + dk));
            }
    return acc;
}

ContinuumSolution solve_limit_curl(const CollocationGrid& grid, const WaveParameters& wave,
                                   std::shared_ptr<const IncidentField> incident, const SolverOptions& options)
{
    if (!incident)
        throw std::invalid_argument("incident field is required");
    auto system = assemble_collocation_system(grid, wave, *incident);
    auto solved = solve_coupled(system.op, system.rhs, options);
    return ContinuumSolution(grid, wave, std::move(incident), std::move(solved.solution), solved.diagnostics);
}

namespace {

template <class F>
CVec3 central_curl(const F& f, const Vec3& x, double s)
{
    // jac(i, j) = d f_i / d x_j
    CMat3 jac;
    for (int j = 0; j < 3; ++j) {
        const Vec3 e = s * Vec3::Unit(j);
        jac.col(j) = (f(x + e) - f(x - e)) / (2.0 * s);
    }
    return {jac(2, 1) - jac(1, 2), jac(0, 2) - jac(2, 0), jac(1, 0) - jac(0, 1)};
}

} // namespace

PdeResidual effective_pde_residual(const ContinuumSolution& solution, const EffectiveMedium& medium,
                                   const Vec3& x)
{
    PdeResidual out;
    const auto& wave = solution.wave();
    const cplx k2 = wave.k_squared();
    const cplx beta = wave.moment_coefficient();
    const IncidentField& incident = solution.incident();

    const double h = solution.grid().spacing();
    const double step = 0.25 * h;
    for (int d = 0; d < 3; ++d)
        for (double sign : {-1.0, 1.0})
            if (!solution.interpolated_curl(x + sign * step * Vec3::Unit(d))) {
                out.notice = "difference stencil leaves the collocation node hull; residual skipped";
                return out;
            }

    const double e0_step = 1e-3 / std::max(std::abs(std::sqrt(k2)), 1.0 / solution.grid().domain().edge);
    auto e0 = [&](const Vec3& p) -> CVec3 { return incident.value(p); };
    auto curl_e0 = [&](const Vec3& p) -> CVec3 { return central_curl(e0, p, e0_step); };
    const CVec3 curlcurl_e0 = central_curl(curl_e0, x, e0_step);

    auto density = [&](const Vec3& p) -> CVec3 { return medium.hn(p) * *solution.interpolated_curl(p); };
    const CVec3 curl_density = central_curl(density, x, step);

    Vec3 grad_re;
    Vec3 grad_im;
    for (int d = 0; d < 3; ++d) {
        const Vec3 e = step * Vec3::Unit(d);
        const cplx diff = (medium.hn(x + e) - medium.hn(x - e)) / (2.0 * step);
        grad_re[d] = diff.real();
        grad_im[d] = diff.imag();
    }
    const CVec3 grad_hn = grad_re.cast<cplx>() + kI * grad_im.cast<cplx>();

    const CVec3 e = solution.field(x);
    const CVec3 curl_e = *solution.interpolated_curl(x);
    const CVec3 curlcurl_e = curlcurl_e0 + k2 * (e - e0(x)) - beta * curl_density;

    const cplx big_k2 = medium.refraction_sq(x);
    const CVec3 residual = curlcurl_e - big_k2 * e + (beta / medium.psi(x)) * cross(grad_hn, curl_e);
    const double scale = (big_k2 * e).norm();
    out.evaluated = true;
    out.value = scale > 0.0 ? residual.norm() / scale : residual.norm();
    return out;
}

nlohmann::json nodal_to_json(const ContinuumSolution& solution)
{
    const auto& grid = solution.grid();
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t c = 0; c < grid.nodes().size(); ++c) {
        const auto& y = grid.nodes()[c];
        const CVec3 w = solution.nodal_curl(c);
        nodes.push_back({{"y", {y.x(), y.y(), y.z()}},
                         {"weight", {grid.weights()[c].real(), grid.weights()[c].imag()}},
                         {"W", {w.x().real(), w.x().imag(), w.y().real(), w.y().imag(), w.z().real(), w.z().imag()}}});
    }
    const auto& d = solution.diagnostics();
    nlohmann::json diag = {{"backend", to_string(d.backend)}, {"residual", d.residual}, {"iterations", d.iterations}};
    diag["condition_estimate"] = std::isfinite(d.condition_estimate) ? nlohmann::json(d.condition_estimate) : nlohmann::json();
    const Vec3& c = grid.domain().center;
    return {{"n", grid.n()},
            {"omega_box", {{"center", {c.x(), c.y(), c.z()}}, {"edge", grid.domain().edge}}},
            {"diagnostics", std::move(diag)},
            {"nodes", std::move(nodes)}};
}

} // namespace smallscat
