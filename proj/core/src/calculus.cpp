#include "mitest/calculus.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mitest {

namespace {

void require_positive(const ProbTable& p, const char* who) {
    if (!p.all_positive())
        throw std::domain_error(std::string(who) + ": table has a zero cell");
}

// Restricted cell index list in vec2 order.
std::vector<std::pair<int, int>> vec2_cells(int rows, int cols) {
    std::vector<std::pair<int, int>> cells;
    cells.reserve(rows * cols - 1);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            if (i != rows - 1 || j != cols - 1) cells.emplace_back(i, j);
    return cells;
}

} // namespace

RestrictedVector mi_gradient(const ProbTable& p) {
    require_positive(p, "mi_gradient");
    const int I = p.rows(), J = p.cols();
    auto ell = [&](int i, int j) {
        return std::log(p.p(i, j) / (p.row_marginals(i) * p.col_marginals(j)));
    };
    const double ell_last = ell(I - 1, J - 1);

    RestrictedVector g;
    g.rows = I;
    g.cols = J;
    g.values.resize(I * J - 1);
    int k = 0;
    for (int j = 0; j < J; ++j)
        for (int i = 0; i < I; ++i)
            if (i != I - 1 || j != J - 1) g.values(k++) = ell(i, j) - ell_last;
    return g;
}

Eigen::MatrixXd mi_hessian(const ProbTable& p) {
    require_positive(p, "mi_hessian");
    const int I = p.rows(), J = p.cols();
    const auto cells = vec2_cells(I, J);
    const int m = static_cast<int>(cells.size());

    // A(ab, cd) = d l_ab / d p_cd of the unrestricted coordinates:
    // delta(ab=cd)/p_ab - delta(a=c)/p_a* - delta(b=d)/p_*b.
    auto A = [&](int a, int b, int c, int d) {
        double v = 0.0;
        if (a == c && b == d) v += 1.0 / p.p(a, b);
        if (a == c) v -= 1.0 / p.row_marginals(a);
        if (b == d) v -= 1.0 / p.col_marginals(b);
        return v;
    };

    // Chain rule through p_IJ = 1 - sum of restricted cells:
    // H[(ij),(st)] = A(ij,st) - A(ij,IJ) - A(IJ,st) + A(IJ,IJ).
    // The paper's compact form carries sign errata in the rank-one term;
    // this orientation is pinned by the finite-difference oracle.
    const int li = I - 1, lj = J - 1;
    const double a_last = A(li, lj, li, lj);

    Eigen::MatrixXd h(m, m);
    for (int u = 0; u < m; ++u) {
        const auto [i, j] = cells[u];
        const double a_u_last = A(i, j, li, lj);
        for (int v = 0; v < m; ++v) {
            const auto [s, t] = cells[v];
            h(u, v) = A(i, j, s, t) - a_u_last - A(li, lj, s, t) + a_last;
        }
    }
    return 0.5 * (h + h.transpose());
}

Eigen::MatrixXd multinomial_cov(const ProbTable& p) {
    require_positive(p, "multinomial_cov");
    const Eigen::VectorXd q = vec2(p).values;
    Eigen::MatrixXd sigma = -q * q.transpose();
    sigma.diagonal() += q;
    return sigma;
}

FdResult fd_derivatives(const Measure& measure, const ProbTable& p,
                        double gradient_step, double hessian_step) {
    require_positive(p, "fd_derivatives");
    const int I = p.rows(), J = p.cols();
    const auto cells = vec2_cells(I, J);
    const int m = static_cast<int>(cells.size());
    const double min_cell = p.p.minCoeff();

    // Keep perturbations well inside the simplex.
    const double hg = std::min(gradient_step, 0.05 * min_cell);
    const double hh = std::min(hessian_step, 0.05 * min_cell);
    if (hg <= 0.0 || hh <= 0.0)
        throw std::domain_error("fd_derivatives: step leaves the simplex interior");

    const Eigen::VectorXd q0 = vec2(p).values;
    auto eval = [&](const Eigen::VectorXd& q) {
        RestrictedVector rv{q, I, J};
        return measure(unvec2(rv));
    };

    auto gradient_at = [&](double h) {
        Eigen::VectorXd g(m);
        for (int k = 0; k < m; ++k) {
            Eigen::VectorXd qp = q0, qm = q0;
            qp(k) += h;
            qm(k) -= h;
            g(k) = (eval(qp) - eval(qm)) / (2.0 * h);
        }
        return g;
    };
    const double f0 = eval(q0);
    auto hessian_at = [&](double h) {
        Eigen::MatrixXd hess(m, m);
        for (int a = 0; a < m; ++a) {
            Eigen::VectorXd qp = q0, qm = q0;
            qp(a) += h;
            qm(a) -= h;
            hess(a, a) = (eval(qp) + eval(qm) - 2.0 * f0) / (h * h);
            for (int b = a + 1; b < m; ++b) {
                Eigen::VectorXd qpp = q0, qpm = q0, qmp = q0, qmm = q0;
                qpp(a) += h; qpp(b) += h;
                qpm(a) += h; qpm(b) -= h;
                qmp(a) -= h; qmp(b) += h;
                qmm(a) -= h; qmm(b) -= h;
                const double v =
                    (eval(qpp) - eval(qpm) - eval(qmp) + eval(qmm)) /
                    (4.0 * h * h);
                hess(a, b) = v;
                hess(b, a) = v;
            }
        }
        return hess;
    };

    // One Richardson step lifts both stencils from O(h^2) to O(h^4), which
    // keeps the oracle sharp even when small cells force tiny steps.
    FdResult out;
    out.gradient.rows = I;
    out.gradient.cols = J;
    out.gradient.values =
        (4.0 * gradient_at(0.5 * hg) - gradient_at(hg)) / 3.0;
    out.hessian = (4.0 * hessian_at(0.5 * hh) - hessian_at(hh)) / 3.0;
    return out;
}

} // namespace mitest
