#include "mitest/nulldist.hpp"

#include "mitest/rng.hpp"
#include "mitest/specfun.hpp"

#include <algorithm>
#include <cmath>

namespace mitest {

namespace {

constexpr std::size_t kSeriesCap = 100000;
constexpr std::size_t kSampleBlock = 8192;

struct GammaGroup {
    double alpha; // shape, multiplicity / 2
    double beta;  // scale, 2 * lambda
};

// Merge weights equal within 1e-9 relative into Gamma(m/2, 2*lambda)
// groups; conditions the delta recursion.
std::vector<GammaGroup> group_weights(const Eigen::VectorXd& lambdas) {
    std::vector<double> pos;
    for (int i = 0; i < lambdas.size(); ++i)
        if (lambdas(i) > 0.0) pos.push_back(lambdas(i));
    std::sort(pos.begin(), pos.end());

    std::vector<GammaGroup> groups;
    for (double lam : pos) {
        if (!groups.empty() &&
            std::abs(2.0 * lam - groups.back().beta) <=
                1e-9 * groups.back().beta) {
            groups.back().alpha += 0.5;
        } else {
            groups.push_back({0.5, 2.0 * lam});
        }
    }
    return groups;
}

} // namespace

ChiBarWeights chi_bar_weights(const Eigen::MatrixXd& hessian,
                              const Eigen::MatrixXd& sigma, double zero_tol) {
    if (hessian.rows() != hessian.cols() || sigma.rows() != sigma.cols() ||
        hessian.rows() != sigma.rows())
        throw std::invalid_argument("chi_bar_weights: dimension mismatch");

    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("chi_bar_weights: sigma is not positive definite");
    const Eigen::MatrixXd l = llt.matrixL();
    const Eigen::MatrixXd m = l.transpose() * hessian * l;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("chi_bar_weights: eigensolver failed");

    ChiBarWeights w;
    w.zero_tol = zero_tol;
    w.lambdas = es.eigenvalues().reverse();
    for (int i = 0; i < w.lambdas.size(); ++i)
        if (std::abs(w.lambdas(i)) < zero_tol) w.lambdas(i) = 0.0;
    return w;
}

namespace detail {

MoschopoulosSeries::MoschopoulosSeries(const ChiBarWeights& w, double tol) {
    if (w.has_negative())
        throw std::domain_error("cdf: negative weight; use Monte Carlo");
    const auto groups = group_weights(w.lambdas);
    if (groups.empty()) throw std::domain_error("cdf: no positive weight");

    beta1_ = groups.front().beta; // smallest scale
    double log_c = 0.0;
    for (const auto& g : groups) {
        rho_ += g.alpha;
        log_c += g.alpha * std::log(beta1_ / g.beta);
    }
    const double c = std::exp(log_c);

    // delta recursion with c_i = sum_g alpha_g r_g^i = i * gamma_i.
    // The mixture weights c*delta_k sum to 1, so truncating once the
    // accumulated mass is within tol of 1 bounds the cdf error by tol.
    std::vector<double> ratio_pow(groups.size(), 1.0);
    std::vector<double> coeff; // c_1, c_2, ...
    std::vector<double> delta{1.0};

    term_weights_.push_back(c);
    double mass = c;
    for (std::size_t k = 1; mass < 1.0 - tol; ++k) {
        if (k > kSeriesCap)
            throw SeriesNotConverged(
                "cdf: Moschopoulos series hit the iteration cap");
        double ck = 0.0;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            ratio_pow[g] *= 1.0 - beta1_ / groups[g].beta;
            ck += groups[g].alpha * ratio_pow[g];
        }
        coeff.push_back(ck);

        double dk = 0.0;
        for (std::size_t i = 1; i <= k; ++i)
            dk += coeff[i - 1] * delta[k - i];
        dk /= static_cast<double>(k);
        delta.push_back(dk);

        term_weights_.push_back(c * dk);
        mass += c * dk;
    }
}

double MoschopoulosSeries::cdf(double x) const {
    if (x < 0.0) throw std::domain_error("cdf: x must be nonnegative");
    if (x == 0.0) return 0.0;
    const double y = x / beta1_;
    double result = 0.0;
    for (std::size_t k = 0; k < term_weights_.size(); ++k) {
        const double gk = gamma_p(rho_ + static_cast<double>(k), y);
        result += term_weights_[k] * gk;
        // Remaining mixture mass times the (decreasing) gamma factor
        // bounds the rest of the partial sums; cheap early exit for
        // small x where the high-order terms are negligible.
        if (gk < 1e-18) break;
    }
    return std::clamp(result, 0.0, 1.0);
}

double series_cdf(const ChiBarWeights& w, double x, double tol) {
    return MoschopoulosSeries(w, tol).cdf(x);
}

} // namespace detail

double cdf(const ChiBarWeights& w, double x, double tol) {
    if (!(tol > 0.0) || tol > 1e-3)
        throw std::invalid_argument("cdf: tol must lie in (0, 1e-3]");
    return detail::series_cdf(w, x, tol);
}

std::vector<double> sample(const ChiBarWeights& w, std::size_t m,
                           std::uint64_t seed) {
    if (m < 1) throw std::invalid_argument("sample: m must be >= 1");
    std::vector<double> out;
    out.reserve(m);
    const std::size_t blocks = (m + kSampleBlock - 1) / kSampleBlock;
    for (std::size_t b = 0; b < blocks; ++b) {
        Rng rng(mix_seed(seed, b));
        const std::size_t count = std::min(kSampleBlock, m - b * kSampleBlock);
        for (std::size_t d = 0; d < count; ++d) {
            double v = 0.0;
            for (int k = 0; k < w.lambdas.size(); ++k) {
                if (w.lambdas(k) == 0.0) continue;
                const double z = rng.normal();
                v += w.lambdas(k) * z * z;
            }
            out.push_back(v);
        }
    }
    return out;
}

double quantile(const ChiBarWeights& w, double level, TailMethod method,
                std::optional<std::uint64_t> seed, std::size_t mc_draws) {
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("quantile: level must lie in (0,1)");

    if (method == TailMethod::MonteCarlo) {
        if (!seed)
            throw std::invalid_argument("quantile: Monte Carlo needs a seed");
        const std::size_t m = std::max<std::size_t>(mc_draws, 200000);
        std::vector<double> draws = sample(w, m, *seed);
        std::sort(draws.begin(), draws.end());
        const double pos = level * static_cast<double>(m - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        return lo + 1 < m ? draws[lo] * (1.0 - frac) + draws[lo + 1] * frac
                          : draws[lo];
    }

    const detail::MoschopoulosSeries series(w, 1e-12);
    const double mean = w.lambdas.sum();
    const double sd = std::sqrt(2.0 * w.lambdas.squaredNorm());
    double lo = 0.0, hi = std::max(1.0, mean + 10.0 * sd);
    while (series.cdf(hi) < level) hi *= 2.0;
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        (series.cdf(mid) < level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double pvalue(const ChiBarWeights& w, double t, TailMethod method,
              std::optional<std::uint64_t> seed, std::size_t mc_draws) {
    if (t < 0.0) throw std::invalid_argument("pvalue: t must be nonnegative");
    if (method == TailMethod::Series)
        return std::clamp(1.0 - detail::series_cdf(w, t, 1e-10), 0.0, 1.0);

    if (!seed) throw std::invalid_argument("pvalue: Monte Carlo needs a seed");
    const std::size_t m = std::max<std::size_t>(mc_draws, 1);
    const std::vector<double> draws = sample(w, m, *seed);
    std::size_t exceed = 0;
    for (double d : draws)
        if (d >= t) ++exceed;
    return static_cast<double>(exceed + 1) / static_cast<double>(m + 1);
}

} // namespace mitest
