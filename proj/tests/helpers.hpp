#ifndef MITEST_TESTS_HELPERS_HPP
#define MITEST_TESTS_HELPERS_HPP

#include "mitest/rng.hpp"
#include "mitest/table.hpp"

#include <cmath>

namespace mitest::testing {

/// Dirichlet-style random interior table: exponential draws shifted away
/// from zero, normalized. All cells comfortably positive.
inline ProbTable random_interior_table(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = 0.1 + -std::log(rng.uniform01());
    m /= m.sum();
    return ProbTable(m);
}

/// Random product table with marginals bounded away from zero.
inline ProbTable random_product_table(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::VectorXd px(rows), py(cols);
    for (int i = 0; i < rows; ++i) px(i) = 0.2 + -std::log(rng.uniform01());
    for (int j = 0; j < cols; ++j) py(j) = 0.2 + -std::log(rng.uniform01());
    px /= px.sum();
    py /= py.sum();
    return ProbTable(px * py.transpose());
}

/// Random counts table with every cell at least 1.
inline JointTable random_counts_table(int rows, int cols, std::uint64_t seed) {
    Rng rng(seed);
    CountMatrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i)
            m(i, j) = 1 + static_cast<std::int64_t>(rng.uniform_index(80));
    return from_counts(m);
}

} // namespace mitest::testing

#endif
