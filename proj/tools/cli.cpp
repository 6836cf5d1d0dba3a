#include "cli.hpp"

#include "mitest/binning.hpp"
#include "mitest/calculus.hpp"
#include "mitest/csv.hpp"
#include "mitest/inference.hpp"
#include "mitest/measures.hpp"
#include "mitest/nulldist.hpp"
#include "mitest/sim.hpp"
#include "mitest/table.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace mitest::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All floats in the report pass through a fixed 12-significant-digit
// rounding so identical runs emit byte-identical JSON.
double round12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

Statistic parse_stat(const std::string& s) {
    if (s == "t1") return Statistic::T1;
    if (s == "t2") return Statistic::T2;
    if (s == "pearson") return Statistic::Pearson;
    if (s == "g2") return Statistic::G2;
    throw UsageError("unknown statistic '" + s + "' (expected t1|t2|pearson|g2)");
}

PValueMethod parse_method(const std::string& s) {
    if (s == "series") return PValueMethod::Series;
    if (s == "mc") return PValueMethod::MonteCarlo;
    if (s == "classical") return PValueMethod::ClassicalDof;
    throw UsageError("unknown p-value method '" + s +
                     "' (expected series|mc|classical)");
}

BinningSpec parse_binning(const std::string& rule, const std::string& strategy) {
    BinningSpec spec;
    if (rule == "sqrt") {
        spec.rule = BinRule::Sqrt;
    } else if (rule == "rice") {
        spec.rule = BinRule::Rice;
    } else if (rule.rfind("fixed:", 0) == 0) {
        spec.rule = BinRule::Fixed;
        if (std::sscanf(rule.c_str(), "fixed:%d:%d", &spec.kx, &spec.ky) != 2 ||
            spec.kx < 2 || spec.ky < 2)
            throw UsageError("bad --rule '" + rule + "' (expected fixed:KX:KY, K >= 2)");
    } else {
        throw UsageError("unknown --rule '" + rule +
                         "' (expected sqrt|rice|fixed:KX:KY)");
    }
    if (strategy == "freq")
        spec.strategy = BinStrategy::EqualFrequency;
    else if (strategy == "width")
        spec.strategy = BinStrategy::EqualWidth;
    else
        throw UsageError("unknown --strategy '" + strategy +
                         "' (expected width|freq)");
    return spec;
}

MarginalDist parse_dist(const std::string& s) {
    int k, m;
    double q;
    if (std::sscanf(s.c_str(), "uniform:%d", &k) == 1)
        return MarginalDist::uniform(k);
    if (std::sscanf(s.c_str(), "binom:%d:%lf", &m, &q) == 2)
        return MarginalDist::binomial(m, q);
    if (s.rfind("cat:", 0) == 0) {
        std::vector<double> probs;
        std::stringstream ss(s.substr(4));
        std::string field;
        while (std::getline(ss, field, ','))
            probs.push_back(std::strtod(field.c_str(), nullptr));
        return MarginalDist::categorical(probs);
    }
    throw UsageError("unknown distribution '" + s +
                     "' (expected uniform:K|binom:M:Q|cat:p1,p2,...)");
}

JointTable load_table(const std::string& path, const std::string& format,
                      const BinningSpec& spec,
                      std::vector<std::string>& warnings) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open input file '" + path + "'");
    if (format == "counts") return read_counts_csv(in);
    if (format != "pairs")
        throw UsageError("unknown --format '" + format + "' (expected counts|pairs)");

    const PairsData data = read_pairs_csv(in);
    if (!data.numeric) return cross_tabulate(data.labels);
    DiscretizeResult res = discretize(data.values, spec);
    warnings.insert(warnings.end(), res.warnings.begin(), res.warnings.end());
    return std::move(res.table);
}

ordered_json counts_json(const JointTable& t) {
    ordered_json rows = ordered_json::array();
    for (int i = 0; i < t.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (int j = 0; j < t.cols(); ++j) row.push_back(t.counts(i, j));
        rows.push_back(row);
    }
    return rows;
}

ordered_json result_json(const TestResult& r) {
    ordered_json j;
    j["statistic"] = to_string(r.statistic);
    j["value"] = round12(r.value);
    j["p_value"] = round12(r.p_value);
    j["alpha"] = round12(r.alpha);
    j["reject"] = r.reject;
    j["method"] = to_string(r.method);
    j["n"] = r.n;
    j["rows"] = r.rows;
    j["cols"] = r.cols;
    if (r.dof) j["dof"] = *r.dof;
    if (r.weights) {
        ordered_json lam = ordered_json::array();
        for (int i = 0; i < r.weights->lambdas.size(); ++i)
            lam.push_back(round12(r.weights->lambdas(i)));
        j["weights"] = lam;
    }
    return j;
}

struct Output {
    ordered_json config;
    ordered_json result;
    std::string csv;
    std::vector<std::string> warnings;
};

void emit(const Output& o, bool as_csv, const std::string& out_path,
          std::ostream& stdout_stream, long long timing_ms) {
    std::string text;
    if (as_csv) {
        text = o.csv;
    } else {
        ordered_json doc;
        doc["config"] = o.config;
        doc["result"] = o.result;
        doc["warnings"] = o.warnings;
        doc["timing_ms"] = timing_ms;
        text = doc.dump(2);
        text += '\n';
    }
    if (out_path.empty()) {
        stdout_stream << text;
    } else {
        std::ofstream f(out_path);
        if (!f)
            throw std::runtime_error("cannot write output file '" + out_path + "'");
        f << text;
    }
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Mutual-information independence testing for contingency tables"};
    app.require_subcommand(1);

    std::string input, format = "counts", stat_name, pvalue_name;
    std::string rule = "sqrt", strategy = "freq", out_path;
    std::string dist_x_s = "uniform:5", dist_y_s = "uniform:5", dims = "5x5";
    double alpha = 0.05, strength = 0.0;
    std::size_t mc_draws = 200000, reps = 1, trials = 100, points = 101;
    std::int64_t n = 1000;
    std::optional<std::uint64_t> seed;
    bool as_csv = false, surface = false;

    auto add_io = [&](CLI::App* cmd) {
        cmd->add_option("--out", out_path, "Write output to a file instead of stdout");
        auto* fcsv = cmd->add_flag("--csv", as_csv, "CSV output");
        cmd->add_flag("--json", "JSON output (default)")->excludes(fcsv);
        cmd->add_option("--seed", seed, "RNG seed");
    };

    auto* c_test = app.add_subcommand("test", "Run an independence test on a table");
    c_test->add_option("--input", input, "Input CSV")->required();
    c_test->add_option("--format", format, "counts|pairs (default counts)");
    c_test->add_option("--stat", stat_name, "t1|t2|pearson|g2 (default t2)");
    c_test->add_option("--alpha", alpha, "Significance level (default 0.05)");
    c_test->add_option("--pvalue", pvalue_name,
                       "series|mc|classical (default: series for t1, else classical)");
    c_test->add_option("--mc-draws", mc_draws, "Monte Carlo draws (default 200000)");
    c_test->add_option("--rule", rule, "Binning rule for pairs input");
    c_test->add_option("--strategy", strategy, "width|freq (default freq)");
    add_io(c_test);

    auto* c_weights = app.add_subcommand(
        "weights", "Null-distribution eigen-weights at the plug-in marginals");
    c_weights->add_option("--input", input, "Input CSV")->required();
    c_weights->add_option("--format", format, "counts|pairs");
    c_weights->add_option("--rule", rule, "Binning rule for pairs input");
    c_weights->add_option("--strategy", strategy, "width|freq");
    add_io(c_weights);

    auto* c_sim = app.add_subcommand("simulate",
                                     "Replicate statistics under a sampled model");
    c_sim->add_option("--dist-x", dist_x_s, "uniform:K|binom:M:Q|cat:p1,...");
    c_sim->add_option("--dist-y", dist_y_s, "uniform:K|binom:M:Q|cat:p1,...");
    c_sim->add_option("--n", n, "Sample size per replicate");
    c_sim->add_option("--reps", reps, "Replicates");
    c_sim->add_option("--stat", stat_name, "t1|t2|pearson|g2 (default t1)");
    c_sim->add_option("--checkerboard", strength,
                      "Checkerboard dependence strength in [0,1]");
    add_io(c_sim);

    auto* c_power = app.add_subcommand("power", "Empirical rejection rate");
    c_power->add_option("--dist-x", dist_x_s, "Marginal of X");
    c_power->add_option("--dist-y", dist_y_s, "Marginal of Y");
    c_power->add_option("--n", n, "Sample size per replicate");
    c_power->add_option("--reps", reps, "Replicates");
    c_power->add_option("--stat", stat_name, "t1|t2|pearson|g2 (default t2)");
    c_power->add_option("--alpha", alpha, "Significance level");
    c_power->add_option("--pvalue", pvalue_name, "series|mc|classical");
    c_power->add_option("--mc-draws", mc_draws, "Monte Carlo draws");
    c_power->add_option("--checkerboard", strength, "Dependence strength");
    add_io(c_power);

    auto* c_bin = app.add_subcommand("bin", "Discretize a pairs CSV into counts");
    c_bin->add_option("--input", input, "Pairs CSV")->required();
    c_bin->add_option("--rule", rule, "sqrt|rice|fixed:KX:KY");
    c_bin->add_option("--strategy", strategy, "width|freq");
    add_io(c_bin);

    auto* c_verify = app.add_subcommand("verify-conjecture",
                                        "Max relative |T2 - Pearson chi2|");
    c_verify->add_option("--dims", dims, "Table dims, e.g. 3x4 (default 5x5)");
    c_verify->add_option("--trials", trials, "Random tables (default 100)");
    add_io(c_verify);

    auto* c_curve = app.add_subcommand("curve", "MI along the 2x2 p11 family");
    c_curve->add_option("--points", points, "Grid points on [0, 0.5]");
    c_curve->add_flag("--surface", surface, "Also emit the 3-parameter surface");
    add_io(c_curve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const auto t0 = std::chrono::steady_clock::now();
    Output o;
    try {
        if (app.got_subcommand(c_test)) {
            const Statistic stat =
                parse_stat(stat_name.empty() ? "t2" : stat_name);
            TestOptions opts;
            opts.alpha = alpha;
            opts.method = pvalue_name.empty()
                              ? (stat == Statistic::T1 ? PValueMethod::Series
                                                       : PValueMethod::ClassicalDof)
                              : parse_method(pvalue_name);
            if (opts.method == PValueMethod::MonteCarlo && !seed)
                throw UsageError("--pvalue mc requires --seed");
            opts.seed = seed;
            opts.mc_draws = mc_draws;

            const BinningSpec spec = parse_binning(rule, strategy);
            const JointTable t = load_table(input, format, spec, o.warnings);
            const TestResult r = independence_test(t, stat, opts);
            o.warnings.insert(o.warnings.end(), r.warnings.begin(),
                              r.warnings.end());
            o.config = {{"subcommand", "test"},
                        {"input", input},
                        {"format", format},
                        {"stat", to_string(stat)},
                        {"alpha", round12(alpha)},
                        {"pvalue", to_string(r.method)}};
            o.result = result_json(r);
            char line[160];
            std::snprintf(line, sizeof(line), "statistic,value,p_value,reject\n%s,%.12g,%.12g,%d\n",
                          to_string(r.statistic).c_str(), r.value, r.p_value,
                          r.reject ? 1 : 0);
            o.csv = line;
        } else if (app.got_subcommand(c_weights)) {
            const BinningSpec spec = parse_binning(rule, strategy);
            const JointTable t = load_table(input, format, spec, o.warnings);
            const ProbTable p_h0 = product_of_marginals(empirical(t));
            const ChiBarWeights w =
                chi_bar_weights(mi_hessian(p_h0), multinomial_cov(p_h0));
            o.config = {{"subcommand", "weights"},
                        {"input", input},
                        {"format", format}};
            ordered_json lam = ordered_json::array();
            std::ostringstream csv;
            csv << "lambda\n";
            for (int i = 0; i < w.lambdas.size(); ++i) {
                lam.push_back(round12(w.lambdas(i)));
                char buf[48];
                std::snprintf(buf, sizeof(buf), "%.12g\n", w.lambdas(i));
                csv << buf;
            }
            o.result = {{"rows", t.rows()},
                        {"cols", t.cols()},
                        {"classical_dof", (t.rows() - 1) * (t.cols() - 1)},
                        {"weights", lam},
                        {"sum", round12(w.lambdas.sum())}};
            o.csv = csv.str();
        } else if (app.got_subcommand(c_sim) || app.got_subcommand(c_power)) {
            const bool is_power = app.got_subcommand(c_power);
            if (!seed) throw UsageError("simulation subcommands require --seed");
            SimConfig cfg;
            cfg.dist_x = parse_dist(dist_x_s);
            cfg.dist_y = parse_dist(dist_y_s);
            cfg.n = n;
            cfg.reps = reps;
            cfg.stat = parse_stat(stat_name.empty() ? (is_power ? "t2" : "t1")
                                                    : stat_name);
            cfg.seed = *seed;
            if (strength > 0.0) {
                cfg.coupling = Coupling::Checkerboard;
                cfg.strength = strength;
            }
            o.config = {{"subcommand", is_power ? "power" : "simulate"},
                        {"dist_x", dist_x_s},
                        {"dist_y", dist_y_s},
                        {"n", n},
                        {"reps", reps},
                        {"stat", to_string(cfg.stat)},
                        {"checkerboard", round12(strength)},
                        {"seed", *seed}};
            if (is_power) {
                const PValueMethod method =
                    parse_method(pvalue_name.empty() ? "classical" : pvalue_name);
                const double rate = estimate_size_power(cfg, alpha, method);
                o.config["alpha"] = round12(alpha);
                o.config["pvalue"] = to_string(method);
                o.result = {{"rejection_rate", round12(rate)}};
                char line[64];
                std::snprintf(line, sizeof(line), "rejection_rate\n%.12g\n", rate);
                o.csv = line;
            } else {
                const std::vector<double> values = replicate_statistics(cfg);
                double mean = 0.0;
                for (double v : values) mean += v;
                mean /= static_cast<double>(values.size());
                ordered_json vals = ordered_json::array();
                std::ostringstream csv;
                csv << "rep,value\n";
                for (std::size_t i = 0; i < values.size(); ++i) {
                    vals.push_back(round12(values[i]));
                    char buf[64];
                    std::snprintf(buf, sizeof(buf), "%zu,%.12g\n", i, values[i]);
                    csv << buf;
                }
                o.result = {{"mean", round12(mean)}, {"values", vals}};
                o.csv = csv.str();
            }
        } else if (app.got_subcommand(c_bin)) {
            const BinningSpec spec = parse_binning(rule, strategy);
            std::ifstream in(input);
            if (!in)
                throw std::runtime_error("cannot open input file '" + input + "'");
            const PairsData data = read_pairs_csv(in);
            if (!data.numeric)
                throw std::runtime_error(
                    "bin: input is categorical; binning applies to numeric pairs");
            DiscretizeResult res = discretize(data.values, spec);
            o.warnings = res.warnings;
            o.config = {{"subcommand", "bin"},
                        {"input", input},
                        {"rule", rule},
                        {"strategy", strategy}};
            ordered_json xe = ordered_json::array(), ye = ordered_json::array();
            for (double e : res.x_edges) xe.push_back(round12(e));
            for (double e : res.y_edges) ye.push_back(round12(e));
            o.result = {{"rows", res.table.rows()},
                        {"cols", res.table.cols()},
                        {"n", res.table.n},
                        {"counts", counts_json(res.table)},
                        {"x_edges", xe},
                        {"y_edges", ye}};
            std::ostringstream csv;
            for (int i = 0; i < res.table.rows(); ++i) {
                for (int j = 0; j < res.table.cols(); ++j)
                    csv << (j ? "," : "") << res.table.counts(i, j);
                csv << "\n";
            }
            o.csv = csv.str();
        } else if (app.got_subcommand(c_verify)) {
            int rows = 0, cols = 0;
            if (std::sscanf(dims.c_str(), "%dx%d", &rows, &cols) != 2 ||
                rows < 2 || cols < 2)
                throw UsageError("bad --dims '" + dims + "' (expected IxJ, >= 2x2)");
            const double diff =
                verify_t2_chi2_identity(rows, cols, trials, seed.value_or(0));
            o.config = {{"subcommand", "verify-conjecture"},
                        {"dims", dims},
                        {"trials", trials},
                        {"seed", seed.value_or(0)}};
            o.result = {{"max_abs_rel_diff", round12(diff)}};
            char line[64];
            std::snprintf(line, sizeof(line), "max_abs_rel_diff\n%.12g\n", diff);
            o.csv = line;
        } else if (app.got_subcommand(c_curve)) {
            if (points < 2) throw UsageError("--points must be >= 2");
            std::vector<double> grid(points);
            for (std::size_t i = 0; i < points; ++i)
                grid[i] = 0.5 * static_cast<double>(i) /
                          static_cast<double>(points - 1);
            const auto curve = mi_curve_2x2(grid);
            o.config = {{"subcommand", "curve"},
                        {"points", points},
                        {"surface", surface}};
            ordered_json pts = ordered_json::array();
            std::ostringstream csv;
            csv << "p11,mi\n";
            for (const auto& [p11, mi] : curve) {
                pts.push_back({round12(p11), round12(mi)});
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.12g,%.12g\n", p11, mi);
                csv << buf;
            }
            o.result = {{"curve", pts}};
            if (surface) {
                ordered_json sp = ordered_json::array();
                for (const auto& row : mi_surface_2x2(0.05))
                    sp.push_back({round12(row[0]), round12(row[1]),
                                  round12(row[2]), round12(row[3])});
                o.result["surface"] = sp;
            }
            o.csv = csv.str();
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const auto t1 = std::chrono::steady_clock::now();
    const long long ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    try {
        emit(o, as_csv, out_path, out, ms);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace mitest::cli
