#ifndef MITEST_TABLE_HPP
#define MITEST_TABLE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace mitest {

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Observed counts n_ij of an IxJ contingency table. Immutable after
/// construction; build through from_counts().
struct JointTable {
    CountMatrix counts;
    std::int64_t n = 0;
    std::vector<std::string> row_labels; // may be empty
    std::vector<std::string> col_labels;
    int pruned_rows = 0; // all-zero rows/columns removed at ingestion
    int pruned_cols = 0;

    int rows() const { return static_cast<int>(counts.rows()); }
    int cols() const { return static_cast<int>(counts.cols()); }
};

/// A probability mass function on the IxJ grid with derived marginals.
///
/// Entries are nonnegative and sum to 1 within 1e-12 (inputs off by up to
/// 1e-9 are renormalized, anything worse is rejected). Marginals are the
/// exact computed row/column sums.
struct ProbTable {
    Eigen::MatrixXd p;
    Eigen::VectorXd row_marginals;
    Eigen::VectorXd col_marginals;

    explicit ProbTable(Eigen::MatrixXd probs);

    int rows() const { return static_cast<int>(p.rows()); }
    int cols() const { return static_cast<int>(p.cols()); }

    /// True when every cell is strictly positive (precondition of the
    /// gradient/Hessian/covariance operations).
    bool all_positive() const { return (p.array() > 0.0).all(); }
};

/// Column-major flattening of the IxJ grid with the last cell (I,J)
/// dropped: cells (1,1),(2,1),...,(I,1),(1,2),...  Length IJ-1.
struct RestrictedVector {
    Eigen::VectorXd values;
    int rows = 0;
    int cols = 0;

    int size() const { return static_cast<int>(values.size()); }
};

/// Validates a counts matrix, prunes all-zero rows/columns, and records
/// how many were pruned. Rejects tables smaller than 2x2 after pruning.
JointTable from_counts(const CountMatrix& matrix);

/// Relative frequencies p_ij = n_ij / n.
ProbTable empirical(const JointTable& table);

/// The independence-hypothesis table with entries p_i* * p_*j.
ProbTable product_of_marginals(const ProbTable& p);

RestrictedVector vec2(const ProbTable& p);

/// Inverse of vec2: restores the full table, with the last cell set to
/// 1 - sum(values).
ProbTable unvec2(const RestrictedVector& v);

} // namespace mitest

#endif
