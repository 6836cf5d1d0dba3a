#ifndef MITEST_CSV_HPP
#define MITEST_CSV_HPP

#include "mitest/table.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace mitest {

/// Counts CSV: one table row of comma-separated nonnegative integers per
/// line; a non-numeric first line is treated as a header and skipped.
JointTable read_counts_csv(std::istream& in);
JointTable read_counts_file(const std::string& path);

struct PairsData {
    bool numeric = false;
    std::vector<std::pair<double, double>> values; // when numeric
    std::vector<std::pair<std::string, std::string>> labels; // otherwise
};

/// Pairs CSV: two columns x,y per line. When every value parses as a
/// number the data is numeric (binning path); otherwise the columns are
/// treated as categorical labels. A non-numeric first line followed by
/// numeric data is treated as a header.
PairsData read_pairs_csv(std::istream& in);
PairsData read_pairs_file(const std::string& path);

/// Cross-tabulates categorical label pairs; categories ordered by first
/// appearance and recorded in the table's labels.
JointTable cross_tabulate(
    const std::vector<std::pair<std::string, std::string>>& labels);

} // namespace mitest

#endif
