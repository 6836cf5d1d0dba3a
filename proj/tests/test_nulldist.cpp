#include "mitest/nulldist.hpp"

#include "helpers.hpp"
#include "mitest/calculus.hpp"
#include "mitest/rng.hpp"
#include "mitest/table.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <doctest.h>

using namespace mitest;
using mitest::testing::random_product_table;

namespace {

ChiBarWeights unit_weights(int k) {
    ChiBarWeights w;
    w.lambdas = Eigen::VectorXd::Ones(k);
    return w;
}

ChiBarWeights make_weights(std::initializer_list<double> vals) {
    ChiBarWeights w;
    w.lambdas = Eigen::VectorXd(static_cast<int>(vals.size()));
    int i = 0;
    for (double v : vals) w.lambdas(i++) = v;
    return w;
}

ChiBarWeights weights_at(const ProbTable& p) {
    return chi_bar_weights(mi_hessian(p), multinomial_cov(p));
}

} // namespace

TEST_CASE("eigen-weights at uniform 2x2 are (1, 0, 0)") {
    const ProbTable u{Eigen::MatrixXd::Constant(2, 2, 0.25)};
    const ChiBarWeights w = weights_at(u);
    REQUIRE(w.lambdas.size() == 3);
    CHECK(w.lambdas(0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(w.lambdas(1) == 0.0);
    CHECK(w.lambdas(2) == 0.0);
}

TEST_CASE("eigen-weights at 5x5 uniform: sixteen ones, eight zeros") {
    const ProbTable u{Eigen::MatrixXd::Constant(5, 5, 0.04)};
    const ChiBarWeights w = weights_at(u);
    REQUIRE(w.lambdas.size() == 24);
    for (int i = 0; i < 16; ++i)
        CHECK(w.lambdas(i) == doctest::Approx(1.0).epsilon(1e-8));
    for (int i = 16; i < 24; ++i) CHECK(w.lambdas(i) == 0.0);
}

TEST_CASE("identity quadratic form has all-ones spectrum") {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(4, 4);
    const ChiBarWeights w = chi_bar_weights(id, id);
    for (int i = 0; i < 4; ++i) CHECK(w.lambdas(i) == doctest::Approx(1.0));
}

TEST_CASE("weight sum equals trace of H Sigma on random product tables") {
    for (std::uint64_t s = 0; s < 15; ++s) {
        const int rows = 2 + static_cast<int>(s % 4);
        const int cols = 2 + static_cast<int>((s / 2) % 4);
        const ProbTable p = random_product_table(rows, cols, 4000 + s);
        const Eigen::MatrixXd h = mi_hessian(p);
        const Eigen::MatrixXd sigma = multinomial_cov(p);
        const ChiBarWeights w = chi_bar_weights(h, sigma);
        CHECK(std::abs(w.sum() - (h * sigma).trace()) <= 1e-9);
        // expected structure: (I-1)(J-1) ones, rest zeros
        const int ones = (rows - 1) * (cols - 1);
        for (int i = 0; i < ones; ++i)
            CHECK(w.lambdas(i) == doctest::Approx(1.0).epsilon(1e-8));
        for (int i = ones; i < w.lambdas.size(); ++i)
            CHECK(std::abs(w.lambdas(i)) <= 1e-8);
    }
}

TEST_CASE("non positive definite sigma is rejected") {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
    Eigen::MatrixXd bad = -id;
    CHECK_THROWS_AS(chi_bar_weights(id, bad), std::domain_error);
}

TEST_CASE("series cdf reproduces chi-square CDFs") {
    boost::math::chi_squared chi1(1);
    CHECK(cdf(unit_weights(1), 3.8415, 1e-3) ==
          doctest::Approx(boost::math::cdf(chi1, 3.8415)).epsilon(1e-9));
    CHECK(cdf(unit_weights(1), 3.8415, 1e-3) ==
          doctest::Approx(0.95005).epsilon(1e-4));

    for (int k : {2, 5, 16, 24}) {
        boost::math::chi_squared chik(k);
        for (double x : {0.5, 2.0, 10.0, 25.0, 40.0})
            CHECK(cdf(unit_weights(k), x, 1e-3) ==
                  doctest::Approx(boost::math::cdf(chik, x)).epsilon(1e-9));
    }
}

TEST_CASE("cdf scaling property of a single weight") {
    CHECK(cdf(make_weights({2.0}), 2.0 * 3.8415, 1e-3) ==
          doctest::Approx(0.95005).epsilon(1e-4));
    CHECK(cdf(make_weights({1.0, 0.0, 0.0}), 3.8415, 1e-3) ==
          doctest::Approx(0.95005).epsilon(1e-4));
}

TEST_CASE("cdf edge and error cases") {
    CHECK(cdf(unit_weights(3), 0.0, 1e-3) == 0.0);
    CHECK_THROWS_AS(cdf(unit_weights(1), 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(cdf(unit_weights(1), 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(cdf(make_weights({1.0, -0.5}), 1.0, 1e-3), std::domain_error);
}

TEST_CASE("cdf is nondecreasing and reaches 1") {
    const ChiBarWeights w = make_weights({2.3, 1.1, 0.4, 0.4, 0.15});
    double prev = 0.0;
    for (double x = 0.0; x <= 20.0; x += 0.25) {
        const double f = cdf(w, x, 1e-6);
        CHECK(f >= prev - 1e-12);
        prev = f;
    }
    const double mean = w.sum();
    const double sd = std::sqrt(2.0 * w.lambdas.squaredNorm());
    CHECK(cdf(w, mean + 10.0 * sd, 1e-6) > 0.999);
}

TEST_CASE("sampling moments and determinism") {
    const auto draws = sample(make_weights({1.0, 0.0, 0.0}), 1000000, 99);
    double mean = 0.0;
    for (double d : draws) mean += d;
    mean /= static_cast<double>(draws.size());
    CHECK(std::abs(mean - 1.0) <= 3.0 * std::sqrt(2.0 / 1e6));

    const auto d16 = sample(unit_weights(16), 200000, 7);
    double m16 = 0.0, v16 = 0.0;
    for (double d : d16) m16 += d;
    m16 /= static_cast<double>(d16.size());
    for (double d : d16) v16 += (d - m16) * (d - m16);
    v16 /= static_cast<double>(d16.size() - 1);
    CHECK(std::abs(m16 - 16.0) <= 5.0 * std::sqrt(32.0 / 2e5));
    // var of chi2_16 is 32; se of the sample variance ~ sqrt(2/m)*var
    CHECK(std::abs(v16 - 32.0) <= 5.0 * 32.0 * std::sqrt(2.0 / 2e5));

    CHECK(sample(unit_weights(3), 5000, 42) == sample(unit_weights(3), 5000, 42));
    CHECK(sample(unit_weights(3), 5000, 42) != sample(unit_weights(3), 5000, 43));
}

TEST_CASE("quantiles against chi-square oracles") {
    CHECK(quantile(make_weights({1.0, 0.0, 0.0}), 0.95, TailMethod::Series) ==
          doctest::Approx(3.8415).epsilon(3e-5));
    CHECK(quantile(unit_weights(16), 0.95, TailMethod::Series) ==
          doctest::Approx(26.296).epsilon(5e-5));
    CHECK(quantile(unit_weights(1), 0.5, TailMethod::Series) ==
          doctest::Approx(0.4549).epsilon(3e-4));
}

TEST_CASE("monte carlo quantile needs a seed and is close to series") {
    CHECK_THROWS_AS(quantile(unit_weights(4), 0.9, TailMethod::MonteCarlo),
                    std::invalid_argument);
    const double qs = quantile(unit_weights(4), 0.9, TailMethod::Series);
    const double qm = quantile(unit_weights(4), 0.9, TailMethod::MonteCarlo, 11);
    CHECK(std::abs(qs - qm) <= 0.15);
}

TEST_CASE("quantile and cdf are inverse") {
    const ChiBarWeights w = make_weights({1.7, 1.0, 0.6, 0.3});
    for (double level : {0.5, 0.9, 0.95, 0.99}) {
        const double q = quantile(w, level, TailMethod::Series);
        CHECK(detail::series_cdf(w, q, 1e-12) ==
              doctest::Approx(level).epsilon(1e-6));
    }
}

TEST_CASE("p-values") {
    CHECK(pvalue(unit_weights(5), 0.0, TailMethod::Series) == 1.0);
    CHECK(pvalue(make_weights({1.0, 0.0, 0.0}), 3.8415, TailMethod::Series) ==
          doctest::Approx(0.05).epsilon(2e-3));
    CHECK(pvalue(unit_weights(16), 26.296, TailMethod::Series) ==
          doctest::Approx(0.05).epsilon(2e-3));
    CHECK_THROWS_AS(pvalue(unit_weights(1), -1.0, TailMethod::Series),
                    std::invalid_argument);

    // MC p-value uses add-one smoothing
    const double pm =
        pvalue(make_weights({1.0}), 3.8415, TailMethod::MonteCarlo, 5, 200000);
    CHECK(std::abs(pm - 0.05) <= 4.0 * std::sqrt(0.05 * 0.95 / 2e5));
}

TEST_CASE("series and monte carlo cdf agree") {
    Rng rng(2024);
    for (int rep = 0; rep < 4; ++rep) {
        const int len = 3 + static_cast<int>(rng.uniform_index(10));
        ChiBarWeights w;
        w.lambdas = Eigen::VectorXd(len);
        for (int i = 0; i < len; ++i)
            w.lambdas(i) = 0.1 + 2.9 * rng.uniform01();
        std::sort(w.lambdas.data(), w.lambdas.data() + len,
                  std::greater<double>());
        const auto draws = sample(w, 200000, 555 + rep);
        const double mean = w.sum();
        for (double frac : {0.4, 1.0, 1.8}) {
            const double x = frac * mean;
            const double fs = cdf(w, x, 1e-6);
            std::size_t below = 0;
            for (double d : draws)
                if (d <= x) ++below;
            const double fm = static_cast<double>(below) / draws.size();
            const double se = std::sqrt(std::max(fs * (1 - fs), 1e-9) / 2e5);
            CHECK(std::abs(fs - fm) <= 4.0 * se);
        }
    }
}
