#ifndef MITEST_SIM_HPP
#define MITEST_SIM_HPP

#include "mitest/inference.hpp"
#include "mitest/nulldist.hpp"
#include "mitest/table.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace mitest {

struct MarginalDist {
    enum class Kind { Uniform, Binomial, Categorical };
    Kind kind = Kind::Uniform;
    int k = 2;               // uniform: categories 0..k-1
    int m = 1;               // binomial: trials
    double q = 0.5;          // binomial: success probability
    std::vector<double> probs; // categorical

    static MarginalDist uniform(int k);
    static MarginalDist binomial(int m, double q);
    static MarginalDist categorical(std::vector<double> probs);

    /// Category probabilities as a vector.
    std::vector<double> pmf() const;
};

enum class Coupling { Independent, Checkerboard };

struct SimConfig {
    MarginalDist dist_x;
    MarginalDist dist_y;
    std::int64_t n = 100;
    std::size_t reps = 1;
    Statistic stat = Statistic::T1;
    std::uint64_t seed = 0;
    Coupling coupling = Coupling::Independent;
    double strength = 0.0; // checkerboard tilt in [0, 1]
};

/// Joint pmf the sampler draws from: the product of the marginals, tilted
/// multiplicatively by (1 + strength * (-1)^(i+j)) for checkerboard
/// coupling and renormalized. strength = 0 recovers independence.
Eigen::MatrixXd joint_pmf(const SimConfig& cfg);

struct SampleResult {
    JointTable table;
    int resamples = 0; // zero-marginal redraws with escalated sub-seeds
};

/// n i.i.d. draws as a counts table; deterministic per (seed, rep_index).
/// Tables with an empty row or column are redrawn on a derived sub-seed.
SampleResult sample_pairs(const SimConfig& cfg, std::size_t rep_index);

/// The chosen statistic over reps independently sampled tables, in
/// rep_index order.
std::vector<double> replicate_statistics(const SimConfig& cfg);

/// Kolmogorov-Smirnov distance between the empirical CDF of samples and
/// chi2_lambda. Negative weights fall back to a two-sample KS against
/// Monte Carlo draws.
double ks_distance(const std::vector<double>& samples, const ChiBarWeights& w);

/// Fraction of replicates with p-value below alpha.
double estimate_size_power(const SimConfig& cfg, double alpha,
                           PValueMethod method);

/// Max relative |T2 - Pearson chi2| over random tables with positive
/// cells; numerically verifies that the two statistics coincide.
double verify_t2_chi2_identity(int rows, int cols, std::size_t trials,
                               std::uint64_t seed);

/// MI along the one-parameter 2x2 family p12 = p21 = 0.25,
/// p22 = 0.5 - p11, for p11 in [0, 0.5].
std::vector<std::pair<double, double>> mi_curve_2x2(
    const std::vector<double>& p11_grid);

/// MI over the full 3-parameter 2x2 simplex (p11, p21, p12) on a regular
/// grid of the given step; emits (p11, p21, p12, MI) rows for plotting.
std::vector<std::array<double, 4>> mi_surface_2x2(double step);

} // namespace mitest

#endif
