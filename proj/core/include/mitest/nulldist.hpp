#ifndef MITEST_NULLDIST_HPP
#define MITEST_NULLDIST_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mitest {

/// The weight vector lambda of the null distribution chi2_lambda, the law
/// of sum_k lambda_k * chi2_1. Nonincreasing; entries within zero_tol of
/// zero are clamped to exactly zero.
struct ChiBarWeights {
    Eigen::VectorXd lambdas;
    double zero_tol = 1e-10;
    int rows = 0; // source table dims; 0 when synthetic
    int cols = 0;

    bool has_negative() const { return (lambdas.array() < 0.0).any(); }
    double sum() const { return lambdas.sum(); }
};

/// Raised when the Moschopoulos series needs more than the iteration cap;
/// callers fall back to Monte Carlo.
struct SeriesNotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class TailMethod { Series, MonteCarlo };

/// Eigen-weights of the quadratic form: the spectrum of L^T H L where
/// L L^T = sigma (Cholesky), equal to the spectrum of sigma * H.
ChiBarWeights chi_bar_weights(const Eigen::MatrixXd& hessian,
                              const Eigen::MatrixXd& sigma,
                              double zero_tol = 1e-10);

/// P(chi2_lambda <= x), by the Moschopoulos sum-of-gammas series, to
/// absolute error tol. tol must lie in (0, 1e-3]; all weights must be
/// nonnegative with at least one positive.
double cdf(const ChiBarWeights& w, double x, double tol = 1e-3);

/// m i.i.d. draws of sum_k lambda_k Z_k^2; deterministic per seed, with
/// fixed-size blocks on derived sub-seeds so a parallel run would produce
/// the identical sequence.
std::vector<double> sample(const ChiBarWeights& w, std::size_t m,
                           std::uint64_t seed);

double quantile(const ChiBarWeights& w, double level, TailMethod method,
                std::optional<std::uint64_t> seed = std::nullopt,
                std::size_t mc_draws = 200000);

double pvalue(const ChiBarWeights& w, double t, TailMethod method,
              std::optional<std::uint64_t> seed = std::nullopt,
              std::size_t mc_draws = 200000);

namespace detail {

/// Precomputed Moschopoulos expansion: the mixture weights c*delta_k are
/// derived once (until their mass is within tol of 1), after which each
/// cdf evaluation costs one incomplete-gamma call per retained term.
class MoschopoulosSeries {
public:
    MoschopoulosSeries(const ChiBarWeights& w, double tol);
    double cdf(double x) const;

private:
    double rho_ = 0.0;   // total gamma shape
    double beta1_ = 0.0; // smallest scale
    std::vector<double> term_weights_; // c * delta_k
};

/// Series CDF without the public tol range restriction (used by quantile
/// bisection and p-values, which need tighter accuracy).
double series_cdf(const ChiBarWeights& w, double x, double tol);

} // namespace detail

} // namespace mitest

#endif
