#include "mitest/table.hpp"

#include <cmath>
#include <stdexcept>

namespace mitest {

ProbTable::ProbTable(Eigen::MatrixXd probs) : p(std::move(probs)) {
    if (p.rows() < 2 || p.cols() < 2)
        throw std::invalid_argument("ProbTable: need at least 2x2");
    if ((p.array() < 0.0).any())
        throw std::invalid_argument("ProbTable: negative probability");
    const double total = p.sum();
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("ProbTable: probabilities sum to " +
                                    std::to_string(total));
    if (std::abs(total - 1.0) > 1e-12)
        p /= total;
    row_marginals = p.rowwise().sum();
    col_marginals = p.colwise().sum().transpose();
}

JointTable from_counts(const CountMatrix& matrix) {
    if (matrix.rows() < 2 || matrix.cols() < 2)
        throw std::invalid_argument("from_counts: need at least 2 rows and 2 columns");
    if ((matrix.array() < 0).any())
        throw std::invalid_argument("from_counts: negative count");
    if (matrix.sum() == 0)
        throw std::invalid_argument("from_counts: empty table");

    std::vector<int> keep_rows, keep_cols;
    for (int i = 0; i < matrix.rows(); ++i)
        if (matrix.row(i).sum() > 0) keep_rows.push_back(i);
    for (int j = 0; j < matrix.cols(); ++j)
        if (matrix.col(j).sum() > 0) keep_cols.push_back(j);

    if (keep_rows.size() < 2 || keep_cols.size() < 2)
        throw std::invalid_argument(
            "from_counts: fewer than 2 nonempty rows or columns after pruning");

    JointTable t;
    t.counts.resize(static_cast<int>(keep_rows.size()),
                    static_cast<int>(keep_cols.size()));
    for (std::size_t a = 0; a < keep_rows.size(); ++a)
        for (std::size_t b = 0; b < keep_cols.size(); ++b)
            t.counts(static_cast<int>(a), static_cast<int>(b)) =
                matrix(keep_rows[a], keep_cols[b]);
    t.n = t.counts.sum();
    t.pruned_rows = static_cast<int>(matrix.rows() - t.counts.rows());
    t.pruned_cols = static_cast<int>(matrix.cols() - t.counts.cols());
    return t;
}

ProbTable empirical(const JointTable& table) {
    return ProbTable(table.counts.cast<double>() / static_cast<double>(table.n));
}

ProbTable product_of_marginals(const ProbTable& p) {
    return ProbTable(p.row_marginals * p.col_marginals.transpose());
}

RestrictedVector vec2(const ProbTable& p) {
    RestrictedVector v;
    v.rows = p.rows();
    v.cols = p.cols();
    v.values.resize(p.rows() * p.cols() - 1);
    int k = 0;
    for (int j = 0; j < p.cols(); ++j)
        for (int i = 0; i < p.rows(); ++i)
            if (i != p.rows() - 1 || j != p.cols() - 1)
                v.values(k++) = p.p(i, j);
    return v;
}

ProbTable unvec2(const RestrictedVector& v) {
    if (v.values.size() != v.rows * v.cols - 1)
        throw std::invalid_argument("unvec2: length does not match dims");
    Eigen::MatrixXd m(v.rows, v.cols);
    int k = 0;
    for (int j = 0; j < v.cols; ++j)
        for (int i = 0; i < v.rows; ++i)
            if (i != v.rows - 1 || j != v.cols - 1)
                m(i, j) = v.values(k++);
    m(v.rows - 1, v.cols - 1) = 1.0 - v.values.sum();
    return ProbTable(m);
}

} // namespace mitest
