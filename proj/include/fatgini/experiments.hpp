#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fatgini/direct.hpp"
#include "fatgini/distributions.hpp"
#include "fatgini/rng.hpp"
#include "fatgini/tail_ml.hpp"

namespace fatgini {

enum class Family { pareto_one, lomax };

inline const char* to_string(Family f) { return f == Family::pareto_one ? "pareto-I" : "lomax"; }

struct ExperimentConfig {
    Family family = Family::pareto_one;
    double alpha = 1.1;
    double scale = 1.0;  // L for Pareto I, lambda for Lomax
    std::vector<std::size_t> sizes;
    std::size_t replications = 1;
    double epsilon = 0.01;
    std::uint64_t master_seed = 42;
    Normalization normalization = Normalization::pair_unbiased;
    bool include_raw = false;
};

struct ReplicationRecord {
    std::size_t n = 0;
    std::uint64_t rep = 0;
    std::uint64_t seed = 0;
    double direct = 0.0;
    double ml = std::numeric_limits<double>::quiet_NaN();  // NaN when rejected
    bool accepted = false;
};

struct TableRow {
    std::size_t n = 0;
    double direct_mean = 0.0;
    double direct_bias = 0.0;
    double direct_std = 0.0;
    double ml_mean = std::numeric_limits<double>::quiet_NaN();
    double ml_std = std::numeric_limits<double>::quiet_NaN();
    std::size_t ml_rejections = 0;
    double error_ratio = std::numeric_limits<double>::quiet_NaN();
};

struct ExperimentReport {
    ExperimentConfig config;
    double analytic_target = 0.0;
    std::vector<TableRow> rows;
    std::vector<ReplicationRecord> raw;  // filled only when config.include_raw
    double wall_seconds = 0.0;           // runtime; never serialized
};

namespace detail {

/// Runs fn(0..count-1) across `threads` workers over contiguous index blocks.
/// Each index owns its preallocated result slot, so the work assignment never
/// influences the numbers; the first exception is rethrown after join.
template <class Fn>
void parallel_for_index(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(threads, count));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = static_cast<std::size_t>(w) * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                std::scoped_lock lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

struct RunningStats {
    double mean = std::numeric_limits<double>::quiet_NaN();
    double stddev = std::numeric_limits<double>::quiet_NaN();
    std::size_t count = 0;
};

/// Two-pass mean/std (sample std, n-1) over values in index order.
inline RunningStats ordered_stats(std::span<const double> values) {
    RunningStats out;
    out.count = values.size();
    if (values.empty()) return out;
    NeumaierSum sum;
    for (double v : values) sum.add(v);
    out.mean = sum.value() / static_cast<double>(values.size());
    if (values.size() < 2) return out;
    NeumaierSum sq;
    for (double v : values) {
        const double d = v - out.mean;
        sq.add(d * d);
    }
    out.stddev = std::sqrt(sq.value() / static_cast<double>(values.size() - 1));
    return out;
}

inline double analytic_target_for(const ExperimentConfig& cfg) {
    return cfg.family == Family::pareto_one
               ? analytic_gini(ParetoSpec(cfg.alpha, cfg.scale))
               : analytic_gini(LomaxSpec(cfg.alpha, cfg.scale));
}

inline Sample draw_sample(const ExperimentConfig& cfg, std::size_t n, Xoshiro256ss& rng) {
    return cfg.family == Family::pareto_one
               ? sample_pareto(ParetoSpec(cfg.alpha, cfg.scale), n, rng)
               : sample_lomax(LomaxSpec(cfg.alpha, cfg.scale), n, rng);
}

inline void check_config(const ExperimentConfig& cfg) {
    if (cfg.sizes.empty()) throw std::domain_error("experiment: sizes must be nonempty");
    if (cfg.replications < 1) throw std::domain_error("experiment: need replications >= 1");
    for (std::size_t n : cfg.sizes)
        if (n < 2) throw std::domain_error("experiment: every sample size must be >= 2");
    // alpha > 1 so the analytic target (and the ML summaries) exist
    detail::check_tail_defines_mean(cfg.alpha);
}

}  // namespace detail

/// Monte Carlo comparison of the direct and ML-derived Gini, one row per
/// sample size: per replication r the stream is derived from
/// (master_seed, n, r), a sample is drawn, both estimators run, and the rows
/// are reduced in replication order. Output is identical for any thread
/// count. Rejected ML replications (alpha' <= 1+eps) are counted, not fatal.
inline ExperimentReport run_table_experiment(const ExperimentConfig& cfg, unsigned threads = 1) {
    detail::check_config(cfg);
    const auto start = std::chrono::steady_clock::now();

    ExperimentReport report;
    report.config = cfg;
    report.analytic_target = detail::analytic_target_for(cfg);

    for (std::size_t n : cfg.sizes) {
        std::vector<ReplicationRecord> records(cfg.replications);
        detail::parallel_for_index(cfg.replications, threads, [&](std::size_t r) {
            ReplicationRecord& rec = records[r];
            rec.n = n;
            rec.rep = r;
            rec.seed = derive_stream_seed(cfg.master_seed, n, r);
            Xoshiro256ss rng(rec.seed);
            const Sample sample = detail::draw_sample(cfg, n, rng);
            rec.direct = gini_ordered(sample, cfg.normalization).value;
            // Known support bound for Pareto I; Lomax has none, so the bound
            // is estimated as the sample minimum (and excluded), same policy
            // as the CLI applies to raw data.
            const TailEstimate est = cfg.family == Family::pareto_one
                                         ? ml_alpha(sample, cfg.scale, cfg.epsilon)
                                         : ml_alpha_auto(sample, cfg.epsilon);
            rec.accepted = est.accepted;
            if (est.accepted) rec.ml = derived_gini(est).value;
        });

        std::vector<double> direct_values;
        std::vector<double> ml_values;
        direct_values.reserve(records.size());
        ml_values.reserve(records.size());
        std::size_t rejections = 0;
        for (const auto& rec : records) {
            direct_values.push_back(rec.direct);
            if (rec.accepted)
                ml_values.push_back(rec.ml);
            else
                ++rejections;
        }

        const auto direct = detail::ordered_stats(direct_values);
        const auto ml = detail::ordered_stats(ml_values);
        TableRow row;
        row.n = n;
        row.direct_mean = direct.mean;
        row.direct_bias = direct.mean - report.analytic_target;
        row.direct_std = direct.stddev;
        row.ml_mean = ml.mean;
        row.ml_std = ml.stddev;
        row.ml_rejections = rejections;
        row.error_ratio = direct.stddev / ml.stddev;
        report.rows.push_back(row);

        if (cfg.include_raw)
            report.raw.insert(report.raw.end(), records.begin(), records.end());
    }

    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

struct AggregationReport {
    ExperimentConfig config;
    std::size_t units = 0;
    std::size_t unit_size = 0;
    double per_unit_mean_gini = 0.0;     // mean over replications and units
    double pooled_gini = 0.0;            // mean pooled estimate
    double weighted_avg = 0.0;           // mean size-weighted average of parts
    double superadditivity_gap = 0.0;    // mean (pooled - weighted average)
    double gap_std_error = 0.0;
    double wall_seconds = 0.0;
};

/// Draws `units` i.i.d. samples per replication, compares the pooled Gini to
/// the size-weighted average of the per-unit Ginis, and reports the mean gap
/// with its standard error.
inline AggregationReport run_aggregation_experiment(std::size_t units, std::size_t unit_size,
                                                    const ExperimentConfig& cfg,
                                                    unsigned threads = 1) {
    if (units < 2) throw std::domain_error("aggregation: need units >= 2");
    if (unit_size < 2) throw std::domain_error("aggregation: need unit_size >= 2");
    if (cfg.replications < 1) throw std::domain_error("aggregation: need replications >= 1");
    detail::check_tail_defines_mean(cfg.alpha);

    const auto start = std::chrono::steady_clock::now();
    struct Row {
        double part_mean, pooled, weighted, gap;
    };
    std::vector<Row> rows(cfg.replications);
    detail::parallel_for_index(cfg.replications, threads, [&](std::size_t r) {
        std::vector<Sample> samples;
        samples.reserve(units);
        detail::NeumaierSum part_sum;
        for (std::size_t u = 0; u < units; ++u) {
            const std::uint64_t seed =
                derive_stream_seed(cfg.master_seed, r, u);
            Xoshiro256ss rng(seed);
            samples.push_back(detail::draw_sample(cfg, unit_size, rng));
            part_sum.add(gini_ordered(samples.back(), cfg.normalization).value);
        }
        const PooledGini pooled = gini_of_union(samples, cfg.normalization);
        Row& row = rows[r];
        row.part_mean = part_sum.value() / static_cast<double>(units);
        row.pooled = pooled.pooled.value;
        row.weighted = pooled.weighted_part_average;
        row.gap = row.pooled - row.weighted;
    });

    std::vector<double> gaps(rows.size());
    detail::NeumaierSum parts, pooleds, weights;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        parts.add(rows[i].part_mean);
        pooleds.add(rows[i].pooled);
        weights.add(rows[i].weighted);
        gaps[i] = rows[i].gap;
    }
    const auto gap_stats = detail::ordered_stats(gaps);
    const double reps = static_cast<double>(cfg.replications);

    AggregationReport out;
    out.config = cfg;
    out.units = units;
    out.unit_size = unit_size;
    out.per_unit_mean_gini = parts.value() / reps;
    out.pooled_gini = pooleds.value() / reps;
    out.weighted_avg = weights.value() / reps;
    out.superadditivity_gap = gap_stats.mean;
    out.gap_std_error =
        cfg.replications > 1 ? gap_stats.stddev / std::sqrt(reps) : 0.0;
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    std::size_t count = 0;
    double density = 0.0;  // count / (N * width); sums to 1 against width
};

/// Equal-width histogram over [min, max]. A degenerate range (all values
/// equal) collapses to a single zero-width bin with density 0.
inline std::vector<HistogramBin> emit_histogram(std::span<const double> estimates,
                                                std::size_t bins) {
    if (estimates.empty()) throw std::invalid_argument("emit_histogram: empty input");
    if (bins < 2) throw std::invalid_argument("emit_histogram: need bins >= 2");

    double lo = estimates[0], hi = estimates[0];
    for (double v : estimates) {
        if (!std::isfinite(v)) throw std::invalid_argument("emit_histogram: non-finite estimate");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi) return {{lo, hi, estimates.size(), 0.0}};

    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<HistogramBin> out(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].left = lo + width * static_cast<double>(b);
        out[b].right = b + 1 == bins ? hi : lo + width * static_cast<double>(b + 1);
    }
    for (double v : estimates) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        if (b >= bins) b = bins - 1;  // v == max lands in the last bin
        ++out[b].count;
    }
    const double total = static_cast<double>(estimates.size());
    for (auto& bin : out) bin.density = static_cast<double>(bin.count) / (total * width);
    return out;
}

struct ConvergenceRow {
    int terms = 0;    // U: number of series terms in the partial sum
    double mu1 = 0.0;  // partial sum of the first moment
};

/// Partial sums mu(1) of the moment series for U = 1..max_U.
inline std::vector<ConvergenceRow> run_convergence_study(const DerivedGiniDistribution& dist,
                                                         int max_U) {
    if (max_U < 1) throw std::domain_error("convergence study: need max_U >= 1");
    detail::GiniMomentSeries series(1, dist);
    std::vector<ConvergenceRow> rows;
    rows.reserve(static_cast<std::size_t>(max_U));
    double sum = 0.0;
    for (int u = 1; u <= max_U; ++u) {
        sum += series.next();
        rows.push_back({u, sum});
    }
    return rows;
}

struct StdDeclineRow {
    std::size_t n = 0;
    double analytic_std = 0.0;  // from the moment series
    double mc_std = 0.0;        // over accepted Monte Carlo replications
};

struct StdDeclineReport {
    ExperimentConfig config;
    std::vector<StdDeclineRow> rows;
    double wall_seconds = 0.0;
};

/// Analytic (series) and Monte Carlo standard deviation of the ML-derived
/// Gini per sample size; both decline as n grows.
inline StdDeclineReport run_std_decline_study(const ExperimentConfig& cfg, unsigned threads = 1) {
    StdDeclineReport out;
    out.config = cfg;
    const ExperimentReport table = run_table_experiment(cfg, threads);
    for (const auto& row : table.rows) {
        const DerivedGiniDistribution dist(cfg.alpha, row.n, cfg.epsilon);
        out.rows.push_back({row.n, derived_gini_std(dist), row.ml_std});
    }
    out.wall_seconds = table.wall_seconds;
    return out;
}

}  // namespace fatgini
