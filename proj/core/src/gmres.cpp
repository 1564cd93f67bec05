#include "smallscat/gmres.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace smallscat {

using cd = std::complex<double>;

GmresResult gmres(const LinearMap& apply, const Eigen::VectorXcd& rhs, Eigen::VectorXcd& x,
                  const GmresOptions& options)
{
    const Eigen::Index n = rhs.size();
    GmresResult result;
    const double bnorm = rhs.norm();
    if (bnorm == 0.0) {
        x.setZero(n);
        result.converged = true;
        return result;
    }
    if (x.size() != n)
        x = rhs;

    const int m = std::max(1, options.restart);
    Eigen::MatrixXcd basis(n, m + 1);
    Eigen::MatrixXcd hess = Eigen::MatrixXcd::Zero(m + 1, m);
    std::vector<double> cs(m);
    std::vector<cd> sn(m);
    Eigen::VectorXcd g(m + 1);
    Eigen::VectorXcd w(n);
    Eigen::VectorXcd r(n);

    while (true) {
        apply(x, r);
        r = rhs - r;
        double beta = r.norm();
        result.relative_residual = beta / bnorm;
        if (result.relative_residual <= options.tolerance) {
            result.converged = true;
            return result;
        }
        if (result.iterations >= options.max_iterations)
            return result;

        basis.col(0) = r / beta;
        hess.setZero();
        g.setZero();
        g(0) = beta;

        int j = 0;
        for (; j < m && result.iterations < options.max_iterations; ++j) {
            ++result.iterations;
            apply(basis.col(j), w);
            for (int i = 0; i <= j; ++i) {
                hess(i, j) = basis.col(i).dot(w);
                w -= hess(i, j) * basis.col(i);
            }
            const double wn = w.norm();
            hess(j + 1, j) = wn;

            for (int i = 0; i < j; ++i) {
                const cd a = hess(i, j);
                const cd b = hess(i + 1, j);
                hess(i, j) = cs[i] * a + sn[i] * b;
                hess(i + 1, j) = -std::conj(sn[i]) * a + cs[i] * b;
            }
            const cd h1 = hess(j, j);
            const double denom = std::hypot(std::abs(h1), wn);
            if (denom == 0.0) {
                cs[j] = 1.0;
                sn[j] = 0.0;
            } else if (std::abs(h1) == 0.0) {
                cs[j] = 0.0;
                sn[j] = 1.0;
            } else {
                cs[j] = std::abs(h1) / denom;
                sn[j] = (h1 / std::abs(h1)) * wn / denom;
            }
            hess(j, j) = cs[j] * h1 + sn[j] * wn;
            hess(j + 1, j) = 0.0;
            g(j + 1) = -std::conj(sn[j]) * g(j);
            g(j) = cs[j] * g(j);

            const bool breakdown = wn <= 1e-14 * beta;
            if (!breakdown)
                basis.col(j + 1) = w / wn;
            if (std::abs(g(j + 1)) / bnorm <= options.tolerance || breakdown) {
                ++j;
                break;
            }
        }

        const Eigen::VectorXcd y = hess.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
        x += basis.leftCols(j) * y;
    }
}

} // namespace smallscat
