#ifndef MITEST_BINNING_HPP
#define MITEST_BINNING_HPP

#include "mitest/table.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace mitest {

enum class BinRule { Sqrt, Rice, Fixed };
enum class BinStrategy { EqualWidth, EqualFrequency };

struct BinningSpec {
    BinRule rule = BinRule::Sqrt;
    BinStrategy strategy = BinStrategy::EqualFrequency;
    int kx = 0; // used when rule == Fixed; must be >= 2
    int ky = 0;
    std::optional<std::pair<double, double>> x_range; // equal-width only
    std::optional<std::pair<double, double>> y_range;
};

/// sqrt rule: ceil(sqrt(n)); rice rule: ceil(2 n^(1/3)). Clamped to >= 2;
/// n must be >= 4.
int bin_count_rule(std::int64_t n, BinRule rule);

struct DiscretizeResult {
    JointTable table;
    std::vector<double> x_edges; // interior bin edges actually used
    std::vector<double> y_edges;
    std::vector<std::string> warnings; // duplicate-edge merges and the like
};

/// Bins paired observations onto a kx x ky grid and validates the counts
/// through from_counts. Equal-width bins are half-open [e_i, e_{i+1})
/// with the last bin closed; equal-frequency edges come from empirical
/// quantiles with duplicate edges merged (k reduced, warning recorded).
DiscretizeResult discretize(const std::vector<std::pair<double, double>>& pairs,
                            const BinningSpec& spec);

} // namespace mitest

#endif
