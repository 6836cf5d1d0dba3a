#ifndef MITEST_INFERENCE_HPP
#define MITEST_INFERENCE_HPP

#include "mitest/nulldist.hpp"
#include "mitest/table.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mitest {

enum class Statistic { T1, T2, Pearson, G2 };

enum class PValueMethod { Series, MonteCarlo, ClassicalDof };

std::string to_string(Statistic s);
std::string to_string(PValueMethod m);

struct TestOptions {
    double alpha = 0.05;
    PValueMethod method = PValueMethod::ClassicalDof;
    std::optional<std::uint64_t> seed;
    std::size_t mc_draws = 200000;
    /// Known-truth marginals for simulation studies; when set, the null
    /// weights are evaluated at their product instead of the plug-in
    /// product of sample marginals.
    std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXd>> true_marginals;
};

struct TestResult {
    Statistic statistic = Statistic::T2;
    double value = 0.0;
    std::optional<ChiBarWeights> weights; // series / mc methods
    std::optional<int> dof;               // classical method
    double p_value = 1.0;
    double alpha = 0.05;
    bool reject = false;
    PValueMethod method = PValueMethod::ClassicalDof;
    std::int64_t n = 0;
    int rows = 0;
    int cols = 0;
    std::vector<std::string> warnings;
};

/// T1 = 2 n MI(p_hat); identical to the likelihood-ratio G2.
double t1_statistic(const JointTable& t);

/// T2 = n d^T H d with d = vec2(p_hat) - vec2(p_hat_H0) and the Hessian
/// evaluated at the plug-in product of sample marginals. Numerically
/// equal to the Pearson chi-square statistic.
double t2_statistic(const JointTable& t);

TestResult independence_test(const JointTable& t, Statistic stat,
                             const TestOptions& options = {});

} // namespace mitest

#endif
