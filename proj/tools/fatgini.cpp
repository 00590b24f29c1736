// fatgini — Gini estimation for heavy-tailed data.
//
// Subcommands: gini (estimate from a data file), simulate (write synthetic
// samples), pdf (evaluate the finite-sample densities on a grid), experiment
// (Monte Carlo studies: table, aggregate, convergence, std-decline).
//
// Exit codes: 0 success, 2 input error, 3 statistical rejection of the tail
// estimate, 4 numeric non-convergence.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fatgini/fatgini.hpp"

namespace {

using namespace fatgini;

constexpr std::uint64_t kDefaultSeed = 42;

unsigned default_threads() {
    if (const char* env = std::getenv("FATGINI_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t seed) {
    if (opt->count() == 0) {
        std::cerr << "note: no --seed given; using default seed " << kDefaultSeed << "\n";
        return kDefaultSeed;
    }
    return seed;
}

Normalization parse_normalization(const std::string& s) {
    if (s == "pair-unbiased") return Normalization::pair_unbiased;
    if (s == "plugin") return Normalization::plugin;
    throw std::invalid_argument("unknown normalization '" + s
                                + "' (expected pair-unbiased or plugin)");
}

Family parse_family(const std::string& s) {
    if (s == "pareto" || s == "pareto-I") return Family::pareto_one;
    if (s == "lomax") return Family::lomax;
    throw std::invalid_argument("unknown family '" + s + "' (expected pareto or lomax)");
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty())
        std::cout << text;
    else {
        write_text_file(out_path, text);
        std::cerr << "wrote " << out_path << "\n";
    }
}

// ---- gini ------------------------------------------------------------

struct GiniArgs {
    std::string input;
    std::string method = "direct";
    std::string normalization = "pair-unbiased";
    bool csv = false;
    std::string column;
    double scale_L = 0.0;
    bool scale_given = false;
    double epsilon = 0.01;
    bool plain = false;
};

int run_gini(const GiniArgs& args) {
    if (args.csv && args.column.empty())
        throw std::invalid_argument("--csv requires --column NAME_OR_INDEX");
    const InputDataset ds =
        args.csv ? load_csv_column(args.input, args.column) : load_values(args.input);

    nlohmann::json doc;
    double value = 0.0;
    if (args.method == "direct") {
        const GiniResult r = gini_ordered(ds.sample, parse_normalization(args.normalization));
        value = r.value;
        doc = {{"value", r.value},
               {"method", to_string(r.method)},
               {"n", r.n},
               {"normalization", to_string(*r.normalization)}};
    } else if (args.method == "tail") {
        TailEstimate est;
        if (args.scale_given) {
            est = ml_alpha(ds.sample, args.scale_L, args.epsilon);
        } else {
            std::cerr << "note: no --scale-L given; using the sample minimum as the support "
                         "bound and excluding it from the likelihood\n";
            est = ml_alpha_auto(ds.sample, args.epsilon);
        }
        const GiniResult r = derived_gini(est);  // throws rejected_estimate_error if not accepted
        value = r.value;
        doc = {{"value", r.value},
               {"method", to_string(r.method)},
               {"n", r.n},
               {"epsilon", est.epsilon},
               {"alpha_hat", est.alpha_hat},
               {"alpha_debiased", est.alpha_debiased},
               {"scale_L", est.scale_L},
               {"scale_estimated", est.scale_estimated}};
    } else {
        throw std::invalid_argument("unknown method '" + args.method
                                    + "' (expected direct or tail)");
    }

    if (args.plain)
        std::cout << format_double(value) << "\n";
    else
        std::cout << dump_json(doc);
    return 0;
}

// ---- simulate --------------------------------------------------------

struct SimulateArgs {
    std::string family = "pareto";
    double alpha = 1.1;
    double scale = 1.0;
    std::size_t n = 1000;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
};

int run_simulate(const SimulateArgs& args) {
    Xoshiro256ss rng(args.seed);
    const Sample sample = parse_family(args.family) == Family::pareto_one
                              ? sample_pareto(ParetoSpec(args.alpha, args.scale), args.n, rng)
                              : sample_lomax(LomaxSpec(args.alpha, args.scale), args.n, rng);
    std::string text;
    text.reserve(args.n * 20);
    for (double v : sample.values) {
        text += format_double(v);
        text += '\n';
    }
    emit(text, args.out);
    return 0;
}

// ---- pdf -------------------------------------------------------------

struct PdfArgs {
    std::string which = "derived-gini";
    double alpha = 1.1;
    std::size_t n = 1000;
    double epsilon = 0.01;
    double grid_min = 0.0;
    double grid_max = 0.0;
    bool min_given = false;
    bool max_given = false;
    std::size_t points = 201;
    std::string out;
};

int run_pdf(const PdfArgs& args) {
    if (args.points < 2) throw std::invalid_argument("--points must be at least 2");

    double lo = args.grid_min, hi = args.grid_max;
    std::function<double(double)> density;
    std::string support;

    if (args.which == "derived-gini") {
        const DerivedGiniDistribution dist(args.alpha, args.n, args.epsilon);
        support = "(0, " + format_double(dist.support_max()) + ")";
        if (!args.min_given || !args.max_given) {
            // midpoint grid over the full support
            const double h = dist.support_max() / static_cast<double>(args.points);
            if (!args.min_given) lo = 0.5 * h;
            if (!args.max_given) hi = dist.support_max() - 0.5 * h;
        }
        if (lo <= 0.0 || hi >= dist.support_max() || lo >= hi)
            throw std::domain_error("grid outside the derived-gini support " + support);
        density = [dist](double g) { return pdf_derived_gini(g, dist); };
    } else if (args.which == "alpha-hat" || args.which == "alpha-truncated") {
        const bool truncated = args.which == "alpha-truncated";
        const double support_lo = truncated ? 1.0 + args.epsilon : 0.0;
        support = truncated ? "[" + format_double(support_lo) + ", inf)" : "(0, inf)";
        if (!args.min_given || !args.max_given) {
            const double nd = static_cast<double>(args.n);
            const double mean = args.alpha * nd / (nd - 1.0);
            const double sd = args.n > 2 ? mean / std::sqrt(nd - 2.0) : mean;
            if (!args.min_given) lo = std::max(support_lo + sd * 1e-9, mean - 8.0 * sd);
            if (!args.max_given) hi = mean + 8.0 * sd;
            if (lo >= hi) lo = support_lo + (hi - support_lo) * 1e-6;
        }
        if (lo <= 0.0 || (truncated && lo < support_lo) || lo >= hi || !std::isfinite(hi))
            throw std::domain_error("grid outside the " + args.which + " support " + support);
        if (truncated) {
            density = [args](double a) {
                return pdf_alpha_truncated(a, args.alpha, args.n, args.epsilon);
            };
        } else {
            density = [args](double a) { return pdf_alpha_hat(a, args.alpha, args.n); };
        }
    } else {
        throw std::invalid_argument("unknown density '" + args.which
                                    + "' (expected alpha-hat, alpha-truncated or derived-gini)");
    }

    std::string text = "point,density\n";
    const double step = (hi - lo) / static_cast<double>(args.points - 1);
    for (std::size_t i = 0; i < args.points; ++i) {
        const double x = i + 1 == args.points ? hi : lo + step * static_cast<double>(i);
        text += format_double(x) + ',' + format_double(density(x)) + '\n';
    }
    emit(text, args.out);
    return 0;
}

// ---- experiment ------------------------------------------------------

struct ExperimentArgs {
    double alpha = 1.1;
    double scale = 1.0;
    std::string family = "pareto";
    std::vector<std::size_t> sizes{1000};
    std::size_t reps = 1000;
    double epsilon = 0.01;
    std::uint64_t seed = kDefaultSeed;
    std::string normalization = "pair-unbiased";
    bool raw = false;
    std::size_t units = 10;
    std::size_t unit_size = 1000;
    std::size_t n = 1000;
    int max_U = 60;
    std::size_t histogram_bins = 0;
    unsigned threads = 0;
    std::string out = "report";
};

ExperimentConfig to_config(const ExperimentArgs& args) {
    ExperimentConfig cfg;
    cfg.family = parse_family(args.family);
    cfg.alpha = args.alpha;
    cfg.scale = args.scale;
    cfg.sizes = args.sizes;
    cfg.replications = args.reps;
    cfg.epsilon = args.epsilon;
    cfg.master_seed = args.seed;
    cfg.normalization = parse_normalization(args.normalization);
    cfg.include_raw = args.raw;
    return cfg;
}

int run_experiment_table(const ExperimentArgs& args) {
    const unsigned threads = args.threads ? args.threads : default_threads();
    ExperimentConfig cfg = to_config(args);
    cfg.include_raw = args.raw || args.histogram_bins > 0;
    ExperimentReport report = run_table_experiment(cfg, threads);

    // per-size histograms of the replication estimates (direct, and ML over
    // the accepted replications)
    if (args.histogram_bins > 0) {
        for (std::size_t n : cfg.sizes) {
            std::vector<double> direct, ml;
            for (const auto& rec : report.raw) {
                if (rec.n != n) continue;
                direct.push_back(rec.direct);
                if (rec.accepted) ml.push_back(rec.ml);
            }
            const std::string stem = args.out + "_hist_";
            write_text_file(stem + "direct_n" + std::to_string(n) + ".csv",
                            to_csv(emit_histogram(direct, args.histogram_bins)));
            if (ml.size() >= 2)
                write_text_file(stem + "ml_n" + std::to_string(n) + ".csv",
                                to_csv(emit_histogram(ml, args.histogram_bins)));
            else
                std::cerr << "note: not enough accepted replications at n=" << n
                          << " for an ML histogram\n";
        }
    }
    if (!args.raw) {
        report.raw.clear();
        report.config.include_raw = false;
    }

    write_text_file(args.out + ".json", dump_json(to_json(report)));
    write_text_file(args.out + ".csv", to_csv(report));
    std::cerr << "wrote " << args.out << ".json, " << args.out << ".csv ("
              << report.wall_seconds << " s, " << threads << " threads)\n";
    return 0;
}

int run_experiment_aggregate(const ExperimentArgs& args) {
    const unsigned threads = args.threads ? args.threads : default_threads();
    const AggregationReport report =
        run_aggregation_experiment(args.units, args.unit_size, to_config(args), threads);
    write_text_file(args.out + ".json", dump_json(to_json(report)));
    write_text_file(args.out + ".csv", to_csv(report));
    std::cerr << "wrote " << args.out << ".json, " << args.out << ".csv ("
              << report.wall_seconds << " s)\n";
    return 0;
}

int run_experiment_convergence(const ExperimentArgs& args) {
    const DerivedGiniDistribution dist(args.alpha, args.n, args.epsilon);
    const auto rows = run_convergence_study(dist, args.max_U);
    nlohmann::json doc = {{"alpha", args.alpha},
                          {"n", args.n},
                          {"epsilon", args.epsilon},
                          {"rows", to_json(std::span<const ConvergenceRow>(rows))}};
    write_text_file(args.out + ".json", dump_json(doc));
    write_text_file(args.out + ".csv", to_csv(std::span<const ConvergenceRow>(rows)));
    std::cerr << "wrote " << args.out << ".json, " << args.out << ".csv\n";
    return 0;
}

int run_experiment_std_decline(const ExperimentArgs& args) {
    const unsigned threads = args.threads ? args.threads : default_threads();
    const StdDeclineReport report = run_std_decline_study(to_config(args), threads);
    write_text_file(args.out + ".json", dump_json(to_json(report)));
    write_text_file(args.out + ".csv", to_csv(std::span<const StdDeclineRow>(report.rows)));
    std::cerr << "wrote " << args.out << ".json, " << args.out << ".csv ("
              << report.wall_seconds << " s)\n";
    return 0;
}

int run_main(int argc, char** argv) {
    CLI::App app{"Gini estimation for heavy-tailed data: direct estimators and the "
                 "maximum-likelihood tail route with its exact finite-sample theory"};
    app.require_subcommand(1);

    // gini
    GiniArgs gini_args;
    auto* gini_cmd = app.add_subcommand("gini", "estimate the Gini coefficient of a data file");
    gini_cmd->add_option("input", gini_args.input, "data file (one value per line, or CSV)")
        ->required();
    gini_cmd->add_option("--method", gini_args.method, "direct | tail")
        ->default_str("direct");
    gini_cmd->add_option("--normalization", gini_args.normalization,
                         "pair-unbiased | plugin (direct method)");
    gini_cmd->add_flag("--csv", gini_args.csv, "treat input as CSV with a header row");
    gini_cmd->add_option("--column", gini_args.column, "CSV column name or 0-based index");
    auto* scale_opt = gini_cmd->add_option("--scale-L", gini_args.scale_L,
                                           "known support bound for the tail method "
                                           "(default: sample minimum, excluded)");
    gini_cmd->add_option("--epsilon", gini_args.epsilon,
                         "acceptance margin for the tail method");
    gini_cmd->add_flag("--plain", gini_args.plain, "print the bare value instead of JSON");

    // simulate
    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "write a synthetic heavy-tailed sample");
    sim_cmd->add_option("--family", sim_args.family, "pareto | lomax");
    sim_cmd->add_option("--alpha", sim_args.alpha, "tail exponent")->required();
    sim_cmd->add_option("--scale", sim_args.scale, "L (pareto) or lambda (lomax)");
    sim_cmd->add_option("--n", sim_args.n, "number of draws")->required();
    auto* sim_seed = sim_cmd->add_option("--seed", sim_args.seed, "random stream seed");
    sim_cmd->add_option("--out", sim_args.out, "output file (default: stdout)");

    // pdf
    PdfArgs pdf_args;
    auto* pdf_cmd = app.add_subcommand("pdf", "evaluate a finite-sample density on a grid");
    pdf_cmd->add_option("--which", pdf_args.which, "alpha-hat | alpha-truncated | derived-gini");
    pdf_cmd->add_option("--alpha", pdf_args.alpha, "true tail exponent")->required();
    pdf_cmd->add_option("--n", pdf_args.n, "sample size")->required();
    pdf_cmd->add_option("--epsilon", pdf_args.epsilon, "truncation margin");
    auto* gmin = pdf_cmd->add_option("--grid-min", pdf_args.grid_min, "grid lower end");
    auto* gmax = pdf_cmd->add_option("--grid-max", pdf_args.grid_max, "grid upper end");
    pdf_cmd->add_option("--points", pdf_args.points, "number of grid points");
    pdf_cmd->add_option("--out", pdf_args.out, "output CSV (default: stdout)");

    // experiment
    ExperimentArgs exp_args;
    auto* exp_cmd = app.add_subcommand("experiment", "Monte Carlo studies");
    exp_cmd->require_subcommand(1);
    auto add_common = [&](CLI::App* cmd, bool stochastic) -> CLI::Option* {
        cmd->add_option("--alpha", exp_args.alpha, "true tail exponent");
        cmd->add_option("--epsilon", exp_args.epsilon, "truncation margin");
        cmd->add_option("--out", exp_args.out, "output path prefix");
        if (!stochastic) return nullptr;
        cmd->add_option("--scale", exp_args.scale, "L (pareto) or lambda (lomax)");
        cmd->add_option("--family", exp_args.family, "pareto | lomax");
        cmd->add_option("--reps", exp_args.reps, "replications");
        cmd->add_option("--normalization", exp_args.normalization, "direct estimator form");
        cmd->add_option("--threads", exp_args.threads,
                        "worker threads (default: FATGINI_THREADS or hardware)");
        return cmd->add_option("--seed", exp_args.seed, "master seed");
    };

    auto* table_cmd = exp_cmd->add_subcommand("table", "direct vs ML comparison per sample size");
    table_cmd->add_option("--sizes", exp_args.sizes, "sample sizes")->delimiter(',');
    table_cmd->add_flag("--raw", exp_args.raw, "include per-replication records in the JSON");
    table_cmd->add_option("--histogram", exp_args.histogram_bins,
                          "also write per-size histograms of the replication estimates "
                          "with this many bins");
    auto* table_seed = add_common(table_cmd, true);

    auto* agg_cmd = exp_cmd->add_subcommand("aggregate", "pooled vs per-unit Gini");
    agg_cmd->add_option("--units", exp_args.units, "number of units");
    agg_cmd->add_option("--unit-size", exp_args.unit_size, "sample size per unit");
    auto* agg_seed = add_common(agg_cmd, true);

    auto* conv_cmd = exp_cmd->add_subcommand("convergence", "moment series partial sums");
    conv_cmd->add_option("--n", exp_args.n, "sample size parameter");
    conv_cmd->add_option("--max-U", exp_args.max_U, "largest number of series terms");
    add_common(conv_cmd, false);

    auto* std_cmd = exp_cmd->add_subcommand("std-decline",
                                            "analytic vs Monte Carlo std per sample size");
    std_cmd->add_option("--sizes", exp_args.sizes, "sample sizes")->delimiter(',');
    auto* std_seed = add_common(std_cmd, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gini_cmd->parsed()) {
            gini_args.scale_given = scale_opt->count() > 0;
            return run_gini(gini_args);
        }
        if (sim_cmd->parsed()) {
            sim_args.seed = resolve_seed(sim_seed, sim_args.seed);
            return run_simulate(sim_args);
        }
        if (pdf_cmd->parsed()) {
            pdf_args.min_given = gmin->count() > 0;
            pdf_args.max_given = gmax->count() > 0;
            return run_pdf(pdf_args);
        }
        if (table_cmd->parsed()) {
            exp_args.seed = resolve_seed(table_seed, exp_args.seed);
            return run_experiment_table(exp_args);
        }
        if (agg_cmd->parsed()) {
            exp_args.seed = resolve_seed(agg_seed, exp_args.seed);
            return run_experiment_aggregate(exp_args);
        }
        if (conv_cmd->parsed()) return run_experiment_convergence(exp_args);
        if (std_cmd->parsed()) {
            exp_args.seed = resolve_seed(std_seed, exp_args.seed);
            return run_experiment_std_decline(exp_args);
        }
    } catch (const rejected_estimate_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_main(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
