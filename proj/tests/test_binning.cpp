#include "mitest/binning.hpp"

#include "mitest/rng.hpp"

#include <cmath>
#include <doctest.h>

using namespace mitest;

TEST_CASE("bin count rules") {
    CHECK(bin_count_rule(100, BinRule::Sqrt) == 10);
    CHECK(bin_count_rule(1000, BinRule::Rice) == 20);
    CHECK(bin_count_rule(4, BinRule::Sqrt) == 2);
    CHECK(bin_count_rule(50, BinRule::Sqrt) == 8);  // ceil(7.07)
    CHECK(bin_count_rule(100, BinRule::Rice) == 10); // ceil(9.28)
    CHECK_THROWS_AS(bin_count_rule(3, BinRule::Sqrt), std::invalid_argument);
}

TEST_CASE("equal-width discretization of a diagonal") {
    const std::vector<std::pair<double, double>> pairs = {
        {0, 0}, {1, 1}, {2, 2}, {3, 3}};
    BinningSpec spec;
    spec.rule = BinRule::Fixed;
    spec.kx = spec.ky = 2;
    spec.strategy = BinStrategy::EqualWidth;
    const DiscretizeResult res = discretize(pairs, spec);
    CHECK(res.table.counts(0, 0) == 2);
    CHECK(res.table.counts(0, 1) == 0);
    CHECK(res.table.counts(1, 0) == 0);
    CHECK(res.table.counts(1, 1) == 2);
}

TEST_CASE("equal-frequency split balances marginals") {
    Rng rng(5);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 101; ++i)
        pairs.emplace_back(rng.normal(), rng.normal());
    BinningSpec spec;
    spec.rule = BinRule::Fixed;
    spec.kx = spec.ky = 2;
    const DiscretizeResult res = discretize(pairs, spec);
    CHECK(std::abs(res.table.counts.row(0).sum() - 50) <= 1);
    CHECK(std::abs(res.table.counts.col(0).sum() - 50) <= 1);
    CHECK(res.table.n == 101);
}

TEST_CASE("every pair lands in exactly one bin") {
    Rng rng(17);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 500; ++i)
        pairs.emplace_back(rng.normal() * 3.0, rng.uniform01());
    for (BinStrategy strat : {BinStrategy::EqualWidth, BinStrategy::EqualFrequency}) {
        BinningSpec spec;
        spec.rule = BinRule::Sqrt;
        spec.strategy = strat;
        const DiscretizeResult res = discretize(pairs, spec);
        CHECK(res.table.n == 500);
    }
}

TEST_CASE("equal-frequency counts are invariant under monotone transforms") {
    Rng rng(23);
    std::vector<std::pair<double, double>> pairs, mapped;
    for (int i = 0; i < 300; ++i) {
        const double x = rng.normal(), y = rng.normal() + 0.5 * x;
        pairs.emplace_back(x, y);
        mapped.emplace_back(std::exp(x), std::atan(y));
    }
    BinningSpec spec;
    spec.rule = BinRule::Rice;
    spec.strategy = BinStrategy::EqualFrequency;
    const DiscretizeResult a = discretize(pairs, spec);
    const DiscretizeResult b = discretize(mapped, spec);
    REQUIRE(a.table.rows() == b.table.rows());
    REQUIRE(a.table.cols() == b.table.cols());
    CHECK((a.table.counts.array() == b.table.counts.array()).all());
}

TEST_CASE("duplicate quantile edges merge with a warning") {
    // Forty copies of 30.0 sit across every interior quantile.
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 60; ++i)
        pairs.emplace_back(i >= 10 && i < 50 ? 30.0 : static_cast<double>(i), i);
    BinningSpec spec;
    spec.rule = BinRule::Fixed;
    spec.kx = spec.ky = 5;
    const DiscretizeResult res = discretize(pairs, spec);
    CHECK(res.table.rows() < 5);
    REQUIRE_FALSE(res.warnings.empty());
    CHECK(res.warnings[0].find("duplicate") != std::string::npos);
}

TEST_CASE("degenerate axes are rejected") {
    std::vector<std::pair<double, double>> pairs = {
        {1.0, 0.0}, {1.0, 1.0}, {1.0, 2.0}, {1.0, 3.0}};
    BinningSpec spec;
    spec.rule = BinRule::Fixed;
    spec.kx = spec.ky = 2;
    CHECK_THROWS_AS(discretize(pairs, spec), std::invalid_argument);
    spec.strategy = BinStrategy::EqualWidth;
    CHECK_THROWS_AS(discretize(pairs, spec), std::invalid_argument);

    CHECK_THROWS_AS(discretize({{0, 0}, {1, 1}}, spec), std::invalid_argument);
    CHECK_THROWS_AS(
        discretize({{0, 0}, {1, 1}, {2, 2}, {std::nan(""), 3}}, spec),
        std::invalid_argument);
}

TEST_CASE("equal-frequency edges are nondecreasing") {
    Rng rng(31);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 256; ++i)
        pairs.emplace_back(rng.uniform01(), rng.uniform01());
    BinningSpec spec;
    spec.rule = BinRule::Sqrt;
    const DiscretizeResult res = discretize(pairs, spec);
    for (std::size_t i = 1; i < res.x_edges.size(); ++i)
        CHECK(res.x_edges[i] >= res.x_edges[i - 1]);
}
