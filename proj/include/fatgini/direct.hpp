#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fatgini/distributions.hpp"

namespace fatgini {

enum class GiniMethod { direct_pairwise, direct_ordered, ml_derived, analytic };

/// pair_unbiased divides the double sum of |Y_i - Y_j| by 2(n-1) Sum Y;
/// plugin divides by 2n Sum Y.
enum class Normalization { pair_unbiased, plugin };

inline const char* to_string(GiniMethod m) {
    switch (m) {
        case GiniMethod::direct_pairwise: return "direct-pairwise";
        case GiniMethod::direct_ordered: return "direct-ordered";
        case GiniMethod::ml_derived: return "ml-derived";
        case GiniMethod::analytic: return "analytic";
    }
    return "?";
}

inline const char* to_string(Normalization n) {
    return n == Normalization::pair_unbiased ? "pair-unbiased" : "plugin";
}

struct GiniResult {
    double value = 0.0;
    GiniMethod method = GiniMethod::direct_ordered;
    std::size_t n = 0;
    std::optional<Normalization> normalization;  // absent for ml-derived / analytic
};

namespace detail {

/// Neumaier compensated summation; keeps long reductions order-stable and
/// accurate enough for the 1e-12 cross-method agreement bar.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) noexcept {
        const double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    double value() const noexcept { return sum + comp; }
};

inline std::vector<double> checked_sorted_values(const Sample& sample) {
    const auto& v = sample.values;
    if (v.size() < 2)
        throw std::domain_error("gini: need at least 2 observations, got "
                                + std::to_string(v.size()));
    for (double x : v) {
        if (!std::isfinite(x))
            throw std::domain_error("gini: non-finite observation");
        if (x < 0.0)
            throw std::domain_error("gini: negative observation " + std::to_string(x));
    }
    std::vector<double> sorted(v);
    std::stable_sort(sorted.begin(), sorted.end());
    return sorted;
}

inline double checked_total(const std::vector<double>& sorted) {
    NeumaierSum total;
    for (double x : sorted) total.add(x);
    const double sum = total.value();
    if (!(sum > 0.0))
        throw std::domain_error("gini: degenerate sample, all observations are zero");
    return sum;
}

inline double denominator(Normalization norm, std::size_t n, double total) {
    const double pairs =
        norm == Normalization::pair_unbiased ? static_cast<double>(n - 1) : static_cast<double>(n);
    return 2.0 * pairs * total;
}

inline double clamp_unit(double g) noexcept { return g < 0.0 ? 0.0 : (g > 1.0 ? 1.0 : g); }

}  // namespace detail

/// Exact O(n^2) estimator: double sum of |Y_i - Y_j| over the chosen
/// normalization. Values are summed in sorted order, so the result does not
/// depend on the input permutation.
inline GiniResult gini_pairwise(const Sample& sample,
                                Normalization norm = Normalization::pair_unbiased) {
    const auto sorted = detail::checked_sorted_values(sample);
    const std::size_t n = sorted.size();
    const double total = detail::checked_total(sorted);

    detail::NeumaierSum half_diffs;
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            half_diffs.add(sorted[j] - sorted[i]);

    const double double_sum = 2.0 * half_diffs.value();
    return {detail::clamp_unit(double_sum / detail::denominator(norm, n, total)),
            GiniMethod::direct_pairwise, n, norm};
}

/// O(n log n) estimator through the order-statistic identity
/// Sum_i Sum_j |Y_i - Y_j| = 2 Sum_i (2i - n - 1) Y_(i); agrees with
/// gini_pairwise to roundoff under every normalization. Ties are harmless:
/// tied values get interchangeable weights.
inline GiniResult gini_ordered(const Sample& sample,
                               Normalization norm = Normalization::pair_unbiased) {
    const auto sorted = detail::checked_sorted_values(sample);
    const std::size_t n = sorted.size();
    const double total = detail::checked_total(sorted);

    detail::NeumaierSum weighted;
    const double nn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 2.0 * static_cast<double>(i + 1) - nn - 1.0;
        weighted.add(w * sorted[i]);
    }

    const double double_sum = 2.0 * weighted.value();
    return {detail::clamp_unit(double_sum / detail::denominator(norm, n, total)),
            GiniMethod::direct_ordered, n, norm};
}

struct PooledGini {
    GiniResult pooled;           // Gini of the concatenated values
    double weighted_part_average = 0.0;  // size-weighted mean of per-sample Ginis
};

/// Pools every sample into one and estimates its Gini, alongside the
/// size-weighted average of the per-sample Ginis, so callers can measure how
/// much aggregation inflates the coefficient.
inline PooledGini gini_of_union(std::span<const Sample> samples,
                                Normalization norm = Normalization::pair_unbiased) {
    if (samples.size() < 2)
        throw std::domain_error("gini_of_union: need at least 2 samples");

    Sample pooled;
    double weighted = 0.0;
    std::size_t total_n = 0;
    for (const auto& s : samples) {
        const GiniResult part = gini_ordered(s, norm);
        weighted += part.value * static_cast<double>(s.values.size());
        total_n += s.values.size();
        pooled.values.insert(pooled.values.end(), s.values.begin(), s.values.end());
    }
    weighted /= static_cast<double>(total_n);

    return {gini_ordered(pooled, norm), weighted};
}

}  // namespace fatgini
