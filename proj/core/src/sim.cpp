#include "mitest/sim.hpp"

#include "mitest/measures.hpp"
#include "mitest/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mitest {

MarginalDist MarginalDist::uniform(int k) {
    if (k < 2) throw std::invalid_argument("uniform: k must be >= 2");
    MarginalDist d;
    d.kind = Kind::Uniform;
    d.k = k;
    return d;
}

MarginalDist MarginalDist::binomial(int m, double q) {
    if (m < 1 || !(q > 0.0 && q < 1.0))
        throw std::invalid_argument("binomial: need m >= 1 and q in (0,1)");
    MarginalDist d;
    d.kind = Kind::Binomial;
    d.m = m;
    d.q = q;
    return d;
}

MarginalDist MarginalDist::categorical(std::vector<double> probs) {
    if (probs.size() < 2)
        throw std::invalid_argument("categorical: need >= 2 categories");
    double sum = 0.0;
    for (double p : probs) {
        if (p < 0.0) throw std::invalid_argument("categorical: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("categorical: probabilities must sum to 1");
    MarginalDist d;
    d.kind = Kind::Categorical;
    d.probs = std::move(probs);
    return d;
}

std::vector<double> MarginalDist::pmf() const {
    switch (kind) {
        case Kind::Uniform:
            return std::vector<double>(k, 1.0 / k);
        case Kind::Binomial: {
            std::vector<double> p(m + 1);
            // C(m, i) q^i (1-q)^(m-i) via the ratio recurrence.
            p[0] = std::pow(1.0 - q, m);
            for (int i = 1; i <= m; ++i)
                p[i] = p[i - 1] * (static_cast<double>(m - i + 1) / i) *
                       (q / (1.0 - q));
            return p;
        }
        case Kind::Categorical:
            return probs;
    }
    return {};
}

Eigen::MatrixXd joint_pmf(const SimConfig& cfg) {
    const auto px = cfg.dist_x.pmf();
    const auto py = cfg.dist_y.pmf();
    Eigen::MatrixXd joint(px.size(), py.size());
    for (std::size_t i = 0; i < px.size(); ++i)
        for (std::size_t j = 0; j < py.size(); ++j)
            joint(static_cast<int>(i), static_cast<int>(j)) = px[i] * py[j];

    if (cfg.coupling == Coupling::Checkerboard) {
        if (!(cfg.strength >= 0.0 && cfg.strength <= 1.0))
            throw std::invalid_argument("joint_pmf: strength must lie in [0,1]");
        for (int i = 0; i < joint.rows(); ++i)
            for (int j = 0; j < joint.cols(); ++j)
                joint(i, j) *= 1.0 + cfg.strength * ((i + j) % 2 == 0 ? 1.0 : -1.0);
        joint /= joint.sum();
    }
    return joint;
}

SampleResult sample_pairs(const SimConfig& cfg, std::size_t rep_index) {
    if (cfg.n < 1) throw std::invalid_argument("sample_pairs: n must be >= 1");
    const Eigen::MatrixXd joint = joint_pmf(cfg);
    const int rows = static_cast<int>(joint.rows());
    const int cols = static_cast<int>(joint.cols());

    std::vector<double> cum;
    cum.reserve(rows * cols);
    double acc = 0.0;
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            acc += joint(i, j);
            cum.push_back(acc);
        }
    cum.back() = 1.0;

    const std::uint64_t rep_seed = mix_seed(cfg.seed, rep_index);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Rng rng(mix_seed(rep_seed, static_cast<std::uint64_t>(attempt)));
        CountMatrix counts = CountMatrix::Zero(rows, cols);
        for (std::int64_t d = 0; d < cfg.n; ++d) {
            const double u = rng.uniform01();
            const auto it = std::lower_bound(cum.begin(), cum.end(), u);
            const int cell = static_cast<int>(it - cum.begin());
            counts(cell % rows, cell / rows) += 1;
        }
        bool full = true;
        for (int i = 0; i < rows && full; ++i)
            if (counts.row(i).sum() == 0) full = false;
        for (int j = 0; j < cols && full; ++j)
            if (counts.col(j).sum() == 0) full = false;
        if (full) return {from_counts(counts), attempt};
    }
    throw std::runtime_error(
        "sample_pairs: could not draw a table with full marginals");
}

namespace {

double statistic_value(const JointTable& t, Statistic stat) {
    switch (stat) {
        case Statistic::T1: return t1_statistic(t);
        case Statistic::T2: return t2_statistic(t);
        case Statistic::G2: return g2(t);
        case Statistic::Pearson: return pearson_chi2(t);
    }
    return 0.0;
}

} // namespace

std::vector<double> replicate_statistics(const SimConfig& cfg) {
    if (cfg.reps < 1)
        throw std::invalid_argument("replicate_statistics: reps must be >= 1");
    std::vector<double> out(cfg.reps);
    for (std::size_t r = 0; r < cfg.reps; ++r)
        out[r] = statistic_value(sample_pairs(cfg, r).table, cfg.stat);
    return out;
}

double ks_distance(const std::vector<double>& samples, const ChiBarWeights& w) {
    if (samples.size() < 100)
        throw std::invalid_argument("ks_distance: need at least 100 samples");
    std::vector<double> sorted = samples;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    if (w.has_negative()) {
        // Two-sample KS against Monte Carlo draws from chi2_lambda.
        std::vector<double> ref = sample(w, 200000, 0x6d69746573740000ULL);
        std::sort(ref.begin(), ref.end());
        double d = 0.0;
        std::size_t i = 0, j = 0;
        while (i < sorted.size() && j < ref.size()) {
            if (sorted[i] <= ref[j]) ++i; else ++j;
            d = std::max(d, std::abs(static_cast<double>(i) / n -
                                     static_cast<double>(j) / ref.size()));
        }
        return d;
    }

    const detail::MoschopoulosSeries series(w, 1e-9);
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = series.cdf(sorted[i]);
        d = std::max(d, std::max(std::abs((i + 1.0) / n - f),
                                 std::abs(static_cast<double>(i) / n - f)));
    }
    return d;
}

double estimate_size_power(const SimConfig& cfg, double alpha,
                           PValueMethod method) {
    if (cfg.reps < 1)
        throw std::invalid_argument("estimate_size_power: reps must be >= 1");
    std::size_t rejections = 0;
    for (std::size_t r = 0; r < cfg.reps; ++r) {
        TestOptions opts;
        opts.alpha = std::min(alpha, 1.0 - 1e-15);
        opts.method = method;
        opts.seed = mix_seed(cfg.seed ^ 0x70766d63ULL, r);
        const TestResult res =
            independence_test(sample_pairs(cfg, r).table, cfg.stat, opts);
        if (res.p_value < alpha) ++rejections;
    }
    return static_cast<double>(rejections) / static_cast<double>(cfg.reps);
}

double verify_t2_chi2_identity(int rows, int cols, std::size_t trials,
                               std::uint64_t seed) {
    if (trials < 1)
        throw std::invalid_argument("verify_t2_chi2_identity: trials must be >= 1");
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, t));
        CountMatrix counts(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i)
                counts(i, j) = 1 + static_cast<std::int64_t>(rng.uniform_index(100));
        const JointTable table = from_counts(counts);
        const double t2 = t2_statistic(table);
        const double chi2 = pearson_chi2(table);
        const double scale = std::max({std::abs(t2), std::abs(chi2), 1e-12});
        worst = std::max(worst, std::abs(t2 - chi2) / scale);
    }
    return worst;
}

namespace {

ProbTable curve_table(double p11) {
    Eigen::MatrixXd m(2, 2);
    m << p11, 0.25, 0.25, 0.5 - p11;
    return ProbTable(m);
}

} // namespace

std::vector<std::pair<double, double>> mi_curve_2x2(
    const std::vector<double>& p11_grid) {
    std::vector<std::pair<double, double>> out;
    out.reserve(p11_grid.size());
    for (double p11 : p11_grid) {
        if (!(p11 >= 0.0 && p11 <= 0.5))
            throw std::invalid_argument("mi_curve_2x2: p11 must lie in [0, 0.5]");
        out.emplace_back(p11, mutual_information(curve_table(p11)));
    }
    return out;
}

std::vector<std::array<double, 4>> mi_surface_2x2(double step) {
    if (!(step > 0.0 && step < 1.0))
        throw std::invalid_argument("mi_surface_2x2: step must lie in (0,1)");
    std::vector<std::array<double, 4>> out;
    for (double p11 = 0.0; p11 <= 1.0 + 1e-12; p11 += step)
        for (double p21 = 0.0; p11 + p21 <= 1.0 + 1e-12; p21 += step)
            for (double p12 = 0.0; p11 + p21 + p12 <= 1.0 + 1e-12; p12 += step) {
                const double p22 = std::max(0.0, 1.0 - p11 - p21 - p12);
                Eigen::MatrixXd m(2, 2);
                m << p11, p12, p21, p22;
                out.push_back({p11, p21, p12, mutual_information(ProbTable(m))});
            }
    return out;
}

} // namespace mitest
