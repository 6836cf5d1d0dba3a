#ifndef MITEST_MEASURES_HPP
#define MITEST_MEASURES_HPP

#include "mitest/table.hpp"

namespace mitest {

// All measures are in nats. Cells with p_ij = 0 are skipped (0 ln 0 := 0)
// and the summation order is fixed column-major so the G2 identity
// g2(t) == 2 n MI(empirical(t)) is bit-reproducible.

double mutual_information(const ProbTable& p);

double joint_entropy(const ProbTable& p);

/// MI / joint entropy; requires positive joint entropy.
double normalized_mutual_information(const ProbTable& p);

/// Likelihood-ratio statistic G2 = 2 sum n_ij ln(n_ij / expected_ij).
double g2(const JointTable& t);

/// Pearson chi-square statistic against the product-of-marginals fit.
double pearson_chi2(const JointTable& t);

} // namespace mitest

#endif
