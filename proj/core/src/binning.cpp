#include "mitest/binning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mitest {

int bin_count_rule(std::int64_t n, BinRule rule) {
    if (n < 4) throw std::invalid_argument("bin_count_rule: n must be >= 4");
    double k = 0.0;
    switch (rule) {
        case BinRule::Sqrt:
            k = std::ceil(std::sqrt(static_cast<double>(n)));
            break;
        case BinRule::Rice:
            k = std::ceil(2.0 * std::cbrt(static_cast<double>(n)));
            break;
        case BinRule::Fixed:
            throw std::invalid_argument("bin_count_rule: fixed rule has no formula");
    }
    return std::max(2, static_cast<int>(k));
}

namespace {

// Type-7 empirical quantile on sorted data.
double quantile_sorted(const std::vector<double>& sorted, double prob) {
    const double pos = prob * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    return lo + 1 < sorted.size()
               ? sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac
               : sorted[lo];
}

struct AxisBins {
    std::vector<double> edges; // interior edges, nondecreasing
    int k = 0;
};

// Interior edges for one axis. Returns merged edge count; ties at
// quantile edges reduce k.
AxisBins axis_edges(const std::vector<double>& values, int k,
                    BinStrategy strategy,
                    const std::optional<std::pair<double, double>>& range,
                    const char* axis, std::vector<std::string>& warnings) {
    AxisBins out;
    if (strategy == BinStrategy::EqualWidth) {
        double lo, hi;
        if (range) {
            lo = range->first;
            hi = range->second;
        } else {
            auto [mn, mx] = std::minmax_element(values.begin(), values.end());
            lo = *mn;
            hi = *mx;
        }
        if (!(hi > lo))
            throw std::invalid_argument(std::string("discretize: all ") + axis +
                                        " values identical");
        const double width = (hi - lo) / static_cast<double>(k);
        for (int i = 1; i < k; ++i) out.edges.push_back(lo + width * i);
        out.k = k;
        return out;
    }

    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 1; i < k; ++i)
        out.edges.push_back(
            quantile_sorted(sorted, static_cast<double>(i) / k));
    out.edges.erase(std::unique(out.edges.begin(), out.edges.end()),
                    out.edges.end());
    if (static_cast<int>(out.edges.size()) < k - 1)
        warnings.push_back(std::string("duplicate quantile edges on ") + axis +
                           ": bins reduced from " + std::to_string(k) + " to " +
                           std::to_string(out.edges.size() + 1));
    out.k = static_cast<int>(out.edges.size()) + 1;
    if (out.k < 2)
        throw std::invalid_argument(std::string("discretize: fewer than 2 ") +
                                    axis + " bins after merging");
    return out;
}

int bin_index(const AxisBins& bins, double v) {
    // Half-open [e_i, e_{i+1}); the last bin is closed above because
    // values past the final edge all map to it.
    const auto it = std::upper_bound(bins.edges.begin(), bins.edges.end(), v);
    return std::min(bins.k - 1,
                    static_cast<int>(it - bins.edges.begin()));
}

} // namespace

DiscretizeResult discretize(const std::vector<std::pair<double, double>>& pairs,
                            const BinningSpec& spec) {
    if (pairs.size() < 4)
        throw std::invalid_argument("discretize: need at least 4 pairs");
    for (const auto& [x, y] : pairs)
        if (!std::isfinite(x) || !std::isfinite(y))
            throw std::invalid_argument("discretize: non-finite value");

    int kx, ky;
    if (spec.rule == BinRule::Fixed) {
        if (spec.kx < 2 || spec.ky < 2)
            throw std::invalid_argument("discretize: fixed bin counts must be >= 2");
        kx = spec.kx;
        ky = spec.ky;
    } else {
        kx = ky = bin_count_rule(static_cast<std::int64_t>(pairs.size()), spec.rule);
    }

    std::vector<double> xs, ys;
    xs.reserve(pairs.size());
    ys.reserve(pairs.size());
    for (const auto& [x, y] : pairs) {
        xs.push_back(x);
        ys.push_back(y);
    }

    DiscretizeResult res;
    const AxisBins bx =
        axis_edges(xs, kx, spec.strategy, spec.x_range, "x", res.warnings);
    const AxisBins by =
        axis_edges(ys, ky, spec.strategy, spec.y_range, "y", res.warnings);

    CountMatrix counts = CountMatrix::Zero(bx.k, by.k);
    for (const auto& [x, y] : pairs)
        counts(bin_index(bx, x), bin_index(by, y)) += 1;

    res.table = from_counts(counts);
    res.x_edges = bx.edges;
    res.y_edges = by.edges;
    return res;
}

} // namespace mitest
