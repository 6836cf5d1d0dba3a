#include "mitest/calculus.hpp"

#include "helpers.hpp"
#include "mitest/measures.hpp"
#include "mitest/rng.hpp"

#include <cmath>
#include <doctest.h>

using namespace mitest;
using mitest::testing::random_interior_table;
using mitest::testing::random_product_table;

namespace {

ProbTable asym_2x2() {
    Eigen::MatrixXd m(2, 2);
    m << 0.4, 0.1, 0.1, 0.4;
    return ProbTable(m);
}

const ProbTable uniform_2x2{Eigen::MatrixXd::Constant(2, 2, 0.25)};

double max_rel_err(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want,
                   double abs_floor = 1e-8) {
    double worst = 0.0;
    for (int i = 0; i < got.rows(); ++i)
        for (int j = 0; j < got.cols(); ++j) {
            const double denom = std::max(std::abs(want(i, j)), abs_floor);
            worst = std::max(worst, std::abs(got(i, j) - want(i, j)) / denom);
        }
    return worst;
}

} // namespace

TEST_CASE("gradient vanishes at independence") {
    CHECK(mi_gradient(uniform_2x2).values.cwiseAbs().maxCoeff() <= 1e-14);
    for (std::uint64_t s = 0; s < 20; ++s) {
        const ProbTable p = random_product_table(3, 5, 50 + s);
        CHECK(mi_gradient(p).values.cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("gradient matches finite differences at an asymmetric point") {
    const ProbTable p = asym_2x2();
    const auto fd = fd_derivatives(
        [](const ProbTable& q) { return mutual_information(q); }, p);
    const RestrictedVector g = mi_gradient(p);
    CHECK((g.values - fd.gradient.values).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("hessian at uniform 2x2") {
    const Eigen::MatrixXd h = mi_hessian(uniform_2x2);
    Eigen::MatrixXd want(3, 3);
    want << 0, 0, 0, 0, 4, 4, 0, 4, 4;
    CHECK((h - want).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("hessian spot value at (0.4, 0.1, 0.1, 0.4)") {
    const Eigen::MatrixXd h = mi_hessian(asym_2x2());
    Eigen::MatrixXd want(3, 3);
    want << -3.0, -1.5, -1.5, -1.5, 8.5, 2.5, -1.5, 2.5, 8.5;
    CHECK((h - want).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("hessian at 5x5 uniform matches finite differences") {
    const ProbTable p{Eigen::MatrixXd::Constant(5, 5, 0.04)};
    const Eigen::MatrixXd h = mi_hessian(p);
    REQUIRE(h.rows() == 24);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
    const auto fd = fd_derivatives(
        [](const ProbTable& q) { return mutual_information(q); }, p);
    CHECK(max_rel_err(h, fd.hessian) <= 1e-6);
}

TEST_CASE("gradient and hessian agree with the oracle on random tables") {
    const auto mi = [](const ProbTable& q) { return mutual_information(q); };
    for (std::uint64_t s = 0; s < 40; ++s) {
        const int rows = 2 + static_cast<int>(s % 5);
        const int cols = 2 + static_cast<int>((s / 5) % 5);
        const ProbTable p = random_interior_table(rows, cols, 7000 + s);
        const auto fd = fd_derivatives(mi, p);

        const RestrictedVector g = mi_gradient(p);
        double gworst = 0.0;
        for (int k = 0; k < g.size(); ++k) {
            const double denom = std::max(std::abs(fd.gradient.values(k)), 1e-8);
            gworst = std::max(
                gworst, std::abs(g.values(k) - fd.gradient.values(k)) / denom);
        }
        CHECK(gworst <= 1e-6);
        CHECK(max_rel_err(mi_hessian(p), fd.hessian) <= 1e-5);
    }
}

TEST_CASE("hessian is positive semidefinite at product tables") {
    Rng rng(31337);
    for (std::uint64_t s = 0; s < 5; ++s) {
        const ProbTable p = random_product_table(3, 4, 9000 + s);
        const Eigen::MatrixXd h = mi_hessian(p);
        for (int trial = 0; trial < 200; ++trial) {
            Eigen::VectorXd x(h.rows());
            for (int k = 0; k < x.size(); ++k) x(k) = rng.normal();
            CHECK(x.dot(h * x) >= -1e-10 * x.squaredNorm());
        }
    }
}

TEST_CASE("calculus operations refuse zero cells") {
    Eigen::MatrixXd m(2, 2);
    m << 0.5, 0.0, 0.25, 0.25;
    ProbTable p(m); // has an interior zero
    CHECK_THROWS_AS(mi_gradient(p), std::domain_error);
    CHECK_THROWS_AS(mi_hessian(p), std::domain_error);
    CHECK_THROWS_AS(multinomial_cov(p), std::domain_error);
}

TEST_CASE("multinomial covariance closed forms") {
    const Eigen::MatrixXd sigma = multinomial_cov(uniform_2x2);
    const Eigen::MatrixXd want = 0.25 * Eigen::MatrixXd::Identity(3, 3) -
                                 0.0625 * Eigen::MatrixXd::Ones(3, 3);
    CHECK((sigma - want).cwiseAbs().maxCoeff() <= 1e-15);

    const ProbTable u23{Eigen::MatrixXd::Constant(2, 3, 1.0 / 6)};
    const Eigen::MatrixXd s23 = multinomial_cov(u23);
    REQUIRE(s23.rows() == 5);
    CHECK(s23(0, 0) == doctest::Approx(5.0 / 36).epsilon(1e-14));
    CHECK(s23(0, 1) == doctest::Approx(-1.0 / 36).epsilon(1e-14));
}

TEST_CASE("near-degenerate covariance is ill-conditioned") {
    // One near-vanishing cell gives the covariance a near-zero eigenvalue
    // while the other cells keep O(1) variance.
    Eigen::MatrixXd m(2, 2);
    m << 0.5 - 1e-8, 1e-8, 0.25, 0.25;
    const Eigen::MatrixXd sigma = multinomial_cov(ProbTable(m));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sigma);
    const double cond = svd.singularValues()(0) /
                        svd.singularValues()(svd.singularValues().size() - 1);
    CHECK(cond > 1e6);
}

TEST_CASE("finite differences of entropy-like measures") {
    const auto fd_mi = fd_derivatives(
        [](const ProbTable& q) { return mutual_information(q); }, uniform_2x2);
    CHECK(fd_mi.gradient.values.cwiseAbs().maxCoeff() <= 1e-9);

    // joint entropy is stationary at the uniform table too
    const auto fd_h = fd_derivatives(
        [](const ProbTable& q) { return joint_entropy(q); }, uniform_2x2);
    CHECK(fd_h.gradient.values.cwiseAbs().maxCoeff() <= 1e-9);

    const auto fd_asym = fd_derivatives(
        [](const ProbTable& q) { return mutual_information(q); }, asym_2x2());
    Eigen::MatrixXd want(3, 3);
    want << -3.0, -1.5, -1.5, -1.5, 8.5, 2.5, -1.5, 2.5, 8.5;
    CHECK((fd_asym.hessian - want).cwiseAbs().maxCoeff() <= 1e-5);
}
