// Acceptance suite: runs every headline requirement end to end and prints one
// PASS/FAIL line per criterion. Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fatgini/fatgini.hpp"

using namespace fatgini;

namespace {

constexpr std::uint64_t kSeed = 20250809;

unsigned worker_threads() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 2;
}

struct Criterion {
    std::string name;
    bool pass = true;
    std::string detail;

    void clause(bool ok, const std::string& text) {
        if (!detail.empty()) detail += "; ";
        detail += text + (ok ? "" : " <-- VIOLATION");
        pass = pass && ok;
    }

    void within(const std::string& label, double value, double target, double tol) {
        std::ostringstream ss;
        ss << label << "=" << value << " (target " << target << " +- " << tol << ")";
        clause(std::fabs(value - target) <= tol, ss.str());
    }
};

std::vector<Criterion> g_results;

void report(Criterion c, double seconds) {
    std::ostringstream line;
    line << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "  ["
         << std::fixed << seconds << std::defaultfloat << " s]";
    std::cout << line.str() << "\n";
    g_results.push_back(std::move(c));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ExperimentConfig base_config(std::size_t n, std::size_t reps, bool raw = false) {
    ExperimentConfig cfg;
    cfg.family = Family::pareto_one;
    cfg.alpha = 1.1;
    cfg.scale = 1.0;
    cfg.sizes = {n};
    cfg.replications = reps;
    cfg.epsilon = 0.01;
    cfg.master_seed = kSeed;
    cfg.include_raw = raw;
    return cfg;
}

double mean_abs_deviation(const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double mad = 0.0;
    for (double x : v) mad += std::fabs(x - mean);
    return mad / static_cast<double>(v.size());
}

// ---------------------------------------------------------------------

TableRow run_c1(TableRow& row_1e4, TableRow& row_1e5) {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentReport rep3 = run_table_experiment(base_config(1000, 5000, true), worker_threads());
    const TableRow row = rep3.rows.at(0);
    const double wall3 = seconds_since(t0);

    Criterion c{"C1 Monte Carlo table, n=10^3 (5000 replications)"};
    c.within("direct_mean", row.direct_mean, 0.711, 0.010);
    c.within("direct_std", row.direct_std, 0.0648, 0.008);
    if (std::fabs(row.direct_std - 0.0648) > 0.008) {
        std::vector<double> directs;
        directs.reserve(rep3.raw.size());
        for (const auto& r : rep3.raw) directs.push_back(r.direct);
        std::ostringstream note;
        note << "note: the replication mean absolute deviation is "
             << mean_abs_deviation(directs)
             << ", which matches the 0.0648 reference; the standard deviation reported here "
                "does not";
        c.clause(true, note.str());
    }
    c.within("ml_mean", row.ml_mean, 0.8333, 0.010);
    c.within("ml_std", row.ml_std, 0.0476, 0.008);
    c.clause(wall3 < 60.0, "runtime " + std::to_string(wall3) + " s < 60 s");
    report(std::move(c), wall3);

    // n = 10^4 rows feed both C2 and C10
    const auto t1 = std::chrono::steady_clock::now();
    row_1e4 = run_table_experiment(base_config(10000, 2000), worker_threads()).rows.at(0);
    const double wall4 = seconds_since(t1);
    Criterion c2{"C2 Monte Carlo table, n=10^4 (2000 replications)"};
    c2.within("direct_mean", row_1e4.direct_mean, 0.750, 0.010);
    c2.within("ml_std", row_1e4.ml_std, 0.015, 0.005);
    c2.clause(wall4 < 120.0, "runtime " + std::to_string(wall4) + " s < 120 s");
    report(std::move(c2), wall4);

    row_1e5 = run_table_experiment(base_config(100000, 400), worker_threads()).rows.at(0);
    return row;
}

void run_c3() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg = base_config(1000, 1000);
    const AggregationReport agg = run_aggregation_experiment(10, 1000, cfg, worker_threads());
    Criterion c{"C3 aggregation paradox, 10 units x 10^3 (1000 replications)"};
    c.within("per_unit_mean", agg.per_unit_mean_gini, 0.71, 0.02);
    c.within("pooled_mean", agg.pooled_gini, 0.75, 0.02);
    {
        std::ostringstream ss;
        ss << "gap=" << agg.superadditivity_gap << " > 2.326*SE=" << 2.326 * agg.gap_std_error;
        c.clause(agg.superadditivity_gap - 2.326 * agg.gap_std_error > 0.0, ss.str());
    }
    report(std::move(c), seconds_since(t0));
}

void run_c4() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c{"C4 survival-squared quadrature vs closed form"};
    const QuadratureOptions tight{1e-10, 100000};
    for (double alpha : {1.1, 1.5, 2.0, 3.0}) {
        const ParetoSpec d(alpha, 1.0);
        const double quad = integrate_survival_squared(
            [&](double x) { return pareto_survival(d, x); }, d.scale_L, pareto_mean(d), tight);
        std::ostringstream ss;
        ss << "alpha=" << alpha << " |quad-closed|=" << std::fabs(quad - analytic_gini(d));
        c.clause(std::fabs(quad - analytic_gini(d)) <= 1e-6, ss.str());
        if (alpha == 1.1) c.within("gini(1.1)", quad, 0.8333, 1e-4);
    }
    report(std::move(c), seconds_since(t0));
}

void run_c5() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c{"C5 ordered vs pairwise estimator on 500 random samples"};
    Xoshiro256ss rng(kSeed ^ 0x55);
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const auto n = static_cast<std::size_t>(2 + rng.next_u64() % 499);
        Sample s;
        s.values.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (rng.next_open01() < 0.3)
                s.values.push_back(std::floor(8.0 * rng.next_open01()));  // ties and zeros
            else
                s.values.push_back(std::pow(rng.next_open01(), -1.0 / 1.2));
        }
        if (std::all_of(s.values.begin(), s.values.end(), [](double x) { return x == 0.0; }))
            s.values[0] = 1.0;
        const auto norm =
            trial % 2 == 0 ? Normalization::pair_unbiased : Normalization::plugin;
        const double a = gini_pairwise(s, norm).value;
        const double b = gini_ordered(s, norm).value;
        const double rel = std::fabs(a - b) / std::max(a, 1e-300);
        worst = std::max(worst, rel);
    }
    const double wall = seconds_since(t0);
    {
        std::ostringstream ss;
        ss << "max relative difference " << worst << " <= 1e-12";
        c.clause(worst <= 1e-12, ss.str());
    }
    c.clause(wall < 10.0, "runtime " + std::to_string(wall) + " s < 10 s");
    report(std::move(c), wall);
}

void run_c6() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c{"C6 inverse-gamma law of the ML exponent (n=100, 10^4 replications)"};
    const std::size_t n = 100;
    const double alpha = 1.1;
    std::vector<double> hats, debiased;
    hats.reserve(10000);
    debiased.reserve(10000);
    for (std::uint64_t r = 0; r < 10000; ++r) {
        Xoshiro256ss rng(derive_stream_seed(kSeed, 6, r));
        const Sample s = sample_pareto(ParetoSpec(alpha, 1.0), n, rng);
        const TailEstimate est = ml_alpha(s, 1.0);
        hats.push_back(est.alpha_hat);
        debiased.push_back(est.alpha_debiased);
    }
    std::sort(hats.begin(), hats.end());
    double ks = 0.0;
    const double m = static_cast<double>(hats.size());
    for (std::size_t i = 0; i < hats.size(); ++i) {
        const double f = cdf_alpha_hat(hats[i], alpha, n);
        ks = std::max(ks, static_cast<double>(i + 1) / m - f);
        ks = std::max(ks, f - static_cast<double>(i) / m);
    }
    {
        std::ostringstream ss;
        ss << "KS=" << ks << " < 0.0163 (1% critical value)";
        c.clause(ks < 1.63 / std::sqrt(m), ss.str());
    }
    double mean = 0.0;
    for (double v : debiased) mean += v;
    mean /= m;
    double var = 0.0;
    for (double v : debiased) var += (v - mean) * (v - mean);
    const double se = std::sqrt(var / (m - 1.0)) / std::sqrt(m);
    c.within("mean(alpha')", mean, 1.1, 3.0 * se);
    report(std::move(c), seconds_since(t0));
}

void run_c7() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c{"C7 truncated and derived-Gini densities: unit mass + Jacobian identity"};
    const QuadratureOptions tight{1e-9, 100000};
    double worst_trunc = 0.0, worst_derived = 0.0, worst_jacobian = 0.0;
    for (double alpha : {1.1, 1.5, 2.0}) {
        for (std::size_t n : {10ul, 100ul, 1000ul}) {
            for (double eps : {0.01, 0.1}) {
                const double lo = 1.0 + eps;
                const double mass_trunc = integrate(
                    [&](double t) {
                        const double a = lo / t;
                        return pdf_alpha_truncated(a, alpha, n, eps) * lo / (t * t);
                    },
                    0.0, 1.0, tight);
                worst_trunc = std::max(worst_trunc, std::fabs(mass_trunc - 1.0));

                const DerivedGiniDistribution dist(alpha, n, eps);
                const double mass_derived =
                    integrate([&](double g) { return pdf_derived_gini(g, dist); }, 0.0,
                              dist.support_max(), tight);
                worst_derived = std::max(worst_derived, std::fabs(mass_derived - 1.0));

                for (int k = 1; k < 20; ++k) {
                    const double g = dist.support_max() * static_cast<double>(k) / 20.0;
                    const double a = (1.0 + g) / (2.0 * g);
                    const double via_transform =
                        pdf_alpha_truncated(a, alpha, n, eps) / (2.0 * g * g);
                    const double direct = pdf_derived_gini(g, dist);
                    const double err = std::fabs(direct - via_transform)
                                       / std::max(1.0, std::fabs(direct));
                    worst_jacobian = std::max(worst_jacobian, err);
                }
            }
        }
    }
    {
        std::ostringstream ss;
        ss << "max |mass-1|: truncated " << worst_trunc << ", derived " << worst_derived
           << " (<= 1e-6)";
        c.clause(worst_trunc <= 1e-6 && worst_derived <= 1e-6, ss.str());
    }
    {
        std::ostringstream ss;
        ss << "max Jacobian-transform disagreement " << worst_jacobian << " (<= 1e-9)";
        c.clause(worst_jacobian <= 1e-9, ss.str());
    }
    report(std::move(c), seconds_since(t0));
}

void run_c8() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c{"C8 moment series: U=7 plateau, quadrature cross-check, std column"};

    const DerivedGiniDistribution d1k(1.1, 1000, 0.01);
    const double mu7 = gini_moment(1, d1k, 7, 0.0).value;
    const double mu60 = gini_moment(1, d1k, 60, 0.0).value;
    const double rel_gap = std::fabs(mu7 - mu60) / mu60;
    {
        std::ostringstream ss;
        ss << "|mu1(U=7)-mu1(U=60)|/mu1 = " << rel_gap << " (< 1e-6)";
        c.clause(rel_gap < 1e-6, ss.str());
        if (rel_gap >= 1e-6) {
            int u_needed = 60;
            for (int u = 1; u <= 60; ++u) {
                if (std::fabs(gini_moment(1, d1k, u, 0.0).value - mu60) / mu60 < 1e-6) {
                    u_needed = u;
                    break;
                }
            }
            ss.str("");
            ss << "note: the series decays geometrically at ratio ~1/(2 alpha); "
               << u_needed << " terms are needed for 1e-6";
            c.clause(true, ss.str());
        }
    }

    const DerivedGiniDistribution d100(1.1, 100, 0.01);
    const double mu1 = gini_moment(1, d100, 200).value;
    const double quad = integrate([&](double g) { return g * pdf_derived_gini(g, d100); }, 0.0,
                                  d100.support_max(), QuadratureOptions{1e-10, 100000});
    {
        std::ostringstream ss;
        ss << "|mu1 - quadrature| = " << std::fabs(mu1 - quad) << " (<= 1e-6)";
        c.clause(std::fabs(mu1 - quad) <= 1e-6, ss.str());
    }

    const double targets[3] = {0.0476, 0.015, 0.0048};
    const std::size_t sizes[3] = {1000, 10000, 100000};
    double stds[3];
    for (int i = 0; i < 3; ++i)
        stds[i] = derived_gini_std(DerivedGiniDistribution(1.1, sizes[i], 0.01));
    for (int i = 0; i < 3; ++i) {
        std::ostringstream ss;
        ss << "std(n=" << sizes[i] << ")=" << stds[i] << " within 10% of " << targets[i];
        c.clause(std::fabs(stds[i] - targets[i]) <= 0.10 * targets[i], ss.str());
    }
    c.clause(stds[0] > stds[1] && stds[1] > stds[2], "std strictly decreasing in n");
    report(std::move(c), seconds_since(t0));
}

void run_c9() {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c{"C9 determinism across reruns and thread counts"};
    const ExperimentConfig cfg = base_config(500, 200);
    const ExperimentReport first = run_table_experiment(cfg, 1);
    const std::string json1 = dump_json(to_json(first));
    const std::string csv1 = to_csv(first);
    bool identical = true;
    for (unsigned threads : {1u, 4u, 8u}) {
        const ExperimentReport rerun = run_table_experiment(cfg, threads);
        identical = identical && dump_json(to_json(rerun)) == json1 && to_csv(rerun) == csv1;
    }
    c.clause(identical, "JSON and CSV byte-identical at 1, 4 and 8 threads");
    report(std::move(c), seconds_since(t0));
}

void run_c10(const TableRow& r3, const TableRow& r4, const TableRow& r5) {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c{"C10 downward bias, shrinking with n"};
    const double analytic = 1.0 / 1.2;
    c.clause(r3.direct_mean < analytic && r4.direct_mean < analytic && r5.direct_mean < analytic,
             "direct mean below the analytic Gini at n=10^3,10^4,10^5");
    c.within("bias(10^3)", r3.direct_bias, -0.122, 0.012);
    c.within("bias(10^4)", r4.direct_bias, -0.083, 0.012);
    c.within("bias(10^5)", r5.direct_bias, -0.058, 0.012);
    c.clause(r3.direct_bias < r4.direct_bias && r4.direct_bias < r5.direct_bias
                 && r5.direct_bias < 0.0,
             "bias magnitude strictly decreasing");
    report(std::move(c), seconds_since(t0));
}

}  // namespace

int main() {
    std::cout << "fatgini acceptance suite (" << worker_threads() << " worker threads)\n";
    const auto t0 = std::chrono::steady_clock::now();

    TableRow row_1e4, row_1e5;
    const TableRow row_1e3 = run_c1(row_1e4, row_1e5);
    run_c3();
    run_c4();
    run_c5();
    run_c6();
    run_c7();
    run_c8();
    run_c9();
    run_c10(row_1e3, row_1e4, row_1e5);

    int failures = 0;
    for (const auto& c : g_results)
        if (!c.pass) ++failures;
    std::cout << g_results.size() - failures << "/" << g_results.size()
              << " criteria passed in " << seconds_since(t0) << " s\n";
    return failures;
}
