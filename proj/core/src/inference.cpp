#include "mitest/inference.hpp"

#include "mitest/calculus.hpp"
#include "mitest/measures.hpp"
#include "mitest/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace mitest {

std::string to_string(Statistic s) {
    switch (s) {
        case Statistic::T1: return "T1";
        case Statistic::T2: return "T2";
        case Statistic::Pearson: return "pearson";
        case Statistic::G2: return "g2";
    }
    return "?";
}

std::string to_string(PValueMethod m) {
    switch (m) {
        case PValueMethod::Series: return "series";
        case PValueMethod::MonteCarlo: return "mc";
        case PValueMethod::ClassicalDof: return "classical";
    }
    return "?";
}

double t1_statistic(const JointTable& t) {
    return 2.0 * static_cast<double>(t.n) * mutual_information(empirical(t));
}

double t2_statistic(const JointTable& t) {
    const ProbTable p_hat = empirical(t);
    if ((p_hat.row_marginals.array() <= 0.0).any() ||
        (p_hat.col_marginals.array() <= 0.0).any())
        throw std::domain_error("t2_statistic: zero marginal");
    const ProbTable p_h0 = product_of_marginals(p_hat);
    const Eigen::VectorXd d = vec2(p_hat).values - vec2(p_h0).values;
    const Eigen::MatrixXd h = mi_hessian(p_h0);
    return static_cast<double>(t.n) * d.dot(h * d);
}

namespace {

ProbTable null_table(const JointTable& t, const TestOptions& options) {
    if (options.true_marginals) {
        const auto& [px, py] = *options.true_marginals;
        if (px.size() != t.rows() || py.size() != t.cols())
            throw std::invalid_argument("independence_test: marginal size mismatch");
        return ProbTable(px * py.transpose());
    }
    return product_of_marginals(empirical(t));
}

} // namespace

TestResult independence_test(const JointTable& t, Statistic stat,
                             const TestOptions& options) {
    if (!(options.alpha > 0.0 && options.alpha < 1.0))
        throw std::invalid_argument("independence_test: alpha must lie in (0,1)");

    TestResult r;
    r.statistic = stat;
    r.alpha = options.alpha;
    r.method = options.method;
    r.n = t.n;
    r.rows = t.rows();
    r.cols = t.cols();

    switch (stat) {
        case Statistic::T1: r.value = t1_statistic(t); break;
        case Statistic::G2: r.value = g2(t); break;
        case Statistic::T2: r.value = t2_statistic(t); break;
        case Statistic::Pearson: r.value = pearson_chi2(t); break;
    }

    const double per_cell =
        static_cast<double>(t.n) / static_cast<double>(t.rows() * t.cols());
    if (per_cell < 5.0)
        r.warnings.push_back("small sample: n/(I*J) = " +
                             std::to_string(per_cell) +
                             " < 5, asymptotic approximation may be poor");

    if (options.method == PValueMethod::ClassicalDof) {
        r.dof = (t.rows() - 1) * (t.cols() - 1);
        r.p_value = chi2_sf(static_cast<double>(*r.dof), r.value);
    } else {
        const ProbTable p_h0 = null_table(t, options);
        ChiBarWeights w =
            chi_bar_weights(mi_hessian(p_h0), multinomial_cov(p_h0));
        w.rows = t.rows();
        w.cols = t.cols();
        r.weights = w;

        PValueMethod method = options.method;
        if (method == PValueMethod::Series && w.has_negative()) {
            method = PValueMethod::MonteCarlo;
            r.warnings.push_back("negative eigen-weights: switched to Monte Carlo");
        }
        if (method == PValueMethod::Series) {
            try {
                r.p_value = pvalue(w, r.value, TailMethod::Series);
            } catch (const SeriesNotConverged&) {
                method = PValueMethod::MonteCarlo;
                r.warnings.push_back("series hit iteration cap: switched to Monte Carlo");
            }
        }
        if (method == PValueMethod::MonteCarlo) {
            if (!options.seed)
                throw std::invalid_argument(
                    "independence_test: Monte Carlo p-value needs a seed");
            r.p_value = pvalue(w, r.value, TailMethod::MonteCarlo, options.seed,
                               options.mc_draws);
        }
        r.method = method;
    }

    r.reject = r.p_value < options.alpha;
    return r;
}

} // namespace mitest
