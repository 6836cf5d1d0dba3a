#include "mitest/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mitest {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    return fields;
}

bool parse_int(const std::string& s, std::int64_t& out) {
    const auto [ptr, ec] =
        std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_double(const std::string& s, double& out) {
    const auto [ptr, ec] =
        std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

std::vector<std::vector<std::string>> read_rows(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        rows.push_back(split_csv_line(line));
    }
    return rows;
}

} // namespace

JointTable read_counts_csv(std::istream& in) {
    auto rows = read_rows(in);
    if (!rows.empty()) {
        // Header auto-detection: skip a first line with any non-numeric field.
        std::int64_t v;
        bool numeric = true;
        for (const auto& f : rows.front())
            if (!parse_int(f, v)) { numeric = false; break; }
        if (!numeric) rows.erase(rows.begin());
    }
    if (rows.empty()) throw std::invalid_argument("counts CSV: no data rows");

    const std::size_t cols = rows.front().size();
    CountMatrix m(static_cast<int>(rows.size()), static_cast<int>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw std::invalid_argument("counts CSV: ragged row " +
                                        std::to_string(i + 1));
        for (std::size_t j = 0; j < cols; ++j) {
            std::int64_t v;
            if (!parse_int(rows[i][j], v))
                throw std::invalid_argument("counts CSV: non-integer field '" +
                                            rows[i][j] + "'");
            m(static_cast<int>(i), static_cast<int>(j)) = v;
        }
    }
    return from_counts(m);
}

JointTable read_counts_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
    return read_counts_csv(in);
}

PairsData read_pairs_csv(std::istream& in) {
    auto rows = read_rows(in);
    if (rows.size() >= 2) {
        double x, y;
        const bool head_numeric = rows[0].size() == 2 &&
                                  parse_double(rows[0][0], x) &&
                                  parse_double(rows[0][1], y);
        const bool body_numeric = rows[1].size() == 2 &&
                                  parse_double(rows[1][0], x) &&
                                  parse_double(rows[1][1], y);
        if (!head_numeric && body_numeric) rows.erase(rows.begin());
    }
    if (rows.empty()) throw std::invalid_argument("pairs CSV: no data rows");

    PairsData data;
    data.numeric = true;
    for (const auto& row : rows) {
        if (row.size() != 2)
            throw std::invalid_argument("pairs CSV: expected 2 columns, got " +
                                        std::to_string(row.size()));
        double x, y;
        if (!parse_double(row[0], x) || !parse_double(row[1], y)) {
            data.numeric = false;
            break;
        }
    }
    for (const auto& row : rows) {
        if (data.numeric) {
            double x, y;
            parse_double(row[0], x);
            parse_double(row[1], y);
            data.values.emplace_back(x, y);
        } else {
            data.labels.emplace_back(row[0], row[1]);
        }
    }
    return data;
}

PairsData read_pairs_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
    return read_pairs_csv(in);
}

JointTable cross_tabulate(
    const std::vector<std::pair<std::string, std::string>>& labels) {
    std::map<std::string, int> xi, yi;
    std::vector<std::string> xnames, ynames;
    for (const auto& [x, y] : labels) {
        if (xi.emplace(x, static_cast<int>(xnames.size())).second)
            xnames.push_back(x);
        if (yi.emplace(y, static_cast<int>(ynames.size())).second)
            ynames.push_back(y);
    }
    CountMatrix m = CountMatrix::Zero(static_cast<int>(xnames.size()),
                                      static_cast<int>(ynames.size()));
    for (const auto& [x, y] : labels) m(xi[x], yi[y]) += 1;

    JointTable t = from_counts(m);
    if (t.pruned_rows == 0 && t.pruned_cols == 0) {
        t.row_labels = xnames;
        t.col_labels = ynames;
    }
    return t;
}

} // namespace mitest
