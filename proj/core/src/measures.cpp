#include "mitest/measures.hpp"

#include <cmath>
#include <stdexcept>

namespace mitest {

double mutual_information(const ProbTable& p) {
    double mi = 0.0;
    for (int j = 0; j < p.cols(); ++j)
        for (int i = 0; i < p.rows(); ++i) {
            const double pij = p.p(i, j);
            if (pij > 0.0)
                mi += pij * std::log(pij / (p.row_marginals(i) * p.col_marginals(j)));
        }
    return mi;
}

double joint_entropy(const ProbTable& p) {
    double h = 0.0;
    for (int j = 0; j < p.cols(); ++j)
        for (int i = 0; i < p.rows(); ++i) {
            const double pij = p.p(i, j);
            if (pij > 0.0) h -= pij * std::log(pij);
        }
    return h;
}

double normalized_mutual_information(const ProbTable& p) {
    const double h = joint_entropy(p);
    if (h <= 0.0)
        throw std::domain_error("normalized_mutual_information: zero joint entropy");
    return mutual_information(p) / h;
}

double g2(const JointTable& t) {
    // Same code path as T1 = 2 n MI(p_hat); the count-based form
    // 2 sum n_ij ln(n n_ij / (n_i* n_*j)) is algebraically identical.
    return 2.0 * static_cast<double>(t.n) * mutual_information(empirical(t));
}

double pearson_chi2(const JointTable& t) {
    const ProbTable p = empirical(t);
    const double n = static_cast<double>(t.n);
    double chi2 = 0.0;
    for (int j = 0; j < p.cols(); ++j)
        for (int i = 0; i < p.rows(); ++i) {
            const double expected = n * p.row_marginals(i) * p.col_marginals(j);
            if (expected <= 0.0)
                throw std::domain_error("pearson_chi2: zero expected count");
            const double diff = n * p.p(i, j) - expected;
            chi2 += diff * diff / expected;
        }
    return chi2;
}

} // namespace mitest
