#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fatgini/numerics.hpp"
#include "fatgini/rng.hpp"

namespace fatgini {

namespace detail {

inline void check_positive(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0)
        throw std::domain_error(std::string(name) + " must be finite and positive, got "
                                + std::to_string(v));
}

inline void check_tail_defines_mean(double alpha) {
    if (alpha <= 1.0)
        throw std::domain_error("tail exponent alpha = " + std::to_string(alpha)
                                + " <= 1: infinite mean, Gini undefined");
}

}  // namespace detail

/// Pareto I: density alpha L^alpha x^-(alpha+1) on x > L.
struct ParetoSpec {
    double alpha;
    double scale_L;

    ParetoSpec(double alpha_, double scale) : alpha(alpha_), scale_L(scale) {
        detail::check_positive(alpha, "ParetoSpec.alpha");
        detail::check_positive(scale_L, "ParetoSpec.scale_L");
    }
};

/// Lomax (Pareto II): survival (1 + x/lambda)^-alpha on x >= 0.
struct LomaxSpec {
    double alpha;
    double scale_lambda;

    LomaxSpec(double alpha_, double scale) : alpha(alpha_), scale_lambda(scale) {
        detail::check_positive(alpha, "LomaxSpec.alpha");
        detail::check_positive(scale_lambda, "LomaxSpec.scale_lambda");
    }
};

/// Strictly positive observations plus a free-form provenance note
/// ("file:..." or a simulation seed description).
struct Sample {
    std::vector<double> values;
    std::string seed_info;
};

inline double pareto_pdf(const ParetoSpec& d, double x) {
    if (!(x >= d.scale_L)) return 0.0;  // boundary x == L carries the formula value
    return std::exp(std::log(d.alpha) + d.alpha * std::log(d.scale_L)
                    - (d.alpha + 1.0) * std::log(x));
}

inline double pareto_survival(const ParetoSpec& d, double x) {
    if (x <= d.scale_L) return 1.0;
    return std::exp(d.alpha * std::log(d.scale_L / x));
}

inline double pareto_cdf(const ParetoSpec& d, double x) { return 1.0 - pareto_survival(d, x); }

/// Quantile of the survival level: x with P(X > x) = u.
inline double pareto_tail_quantile(const ParetoSpec& d, double u) {
    return d.scale_L * std::pow(u, -1.0 / d.alpha);
}

inline double pareto_mean(const ParetoSpec& d) {
    detail::check_tail_defines_mean(d.alpha);
    return d.alpha * d.scale_L / (d.alpha - 1.0);
}

inline double lomax_pdf(const LomaxSpec& d, double x) {
    if (x < 0.0) return 0.0;
    return d.alpha / d.scale_lambda
           * std::exp(-(d.alpha + 1.0) * std::log1p(x / d.scale_lambda));
}

inline double lomax_survival(const LomaxSpec& d, double x) {
    if (x <= 0.0) return 1.0;
    return std::exp(-d.alpha * std::log1p(x / d.scale_lambda));
}

inline double lomax_cdf(const LomaxSpec& d, double x) { return 1.0 - lomax_survival(d, x); }

inline double lomax_tail_quantile(const LomaxSpec& d, double u) {
    return d.scale_lambda * std::expm1(-std::log(u) / d.alpha);
}

inline double lomax_mean(const LomaxSpec& d) {
    detail::check_tail_defines_mean(d.alpha);
    return d.scale_lambda / (d.alpha - 1.0);
}

/// Closed-form Gini 1/(2 alpha - 1); requires alpha > 1.
inline double analytic_gini(const ParetoSpec& d) {
    detail::check_tail_defines_mean(d.alpha);
    return 1.0 / (2.0 * d.alpha - 1.0);
}

/// Closed-form Gini alpha/(2 alpha - 1); requires alpha > 1.
inline double analytic_gini(const LomaxSpec& d) {
    detail::check_tail_defines_mean(d.alpha);
    return d.alpha / (2.0 * d.alpha - 1.0);
}

/// Inverse-transform draws X = L U^(-1/alpha); every value > L since U < 1.
inline Sample sample_pareto(const ParetoSpec& d, std::size_t n, Xoshiro256ss& rng) {
    if (n < 1) throw std::invalid_argument("sample_pareto: need n >= 1");
    Sample out;
    out.values.reserve(n);
    const double inv_alpha = 1.0 / d.alpha;
    for (std::size_t i = 0; i < n; ++i)
        out.values.push_back(d.scale_L * std::pow(rng.next_open01(), -inv_alpha));
    return out;
}

/// Inverse-transform draws X = lambda (U^(-1/alpha) - 1); strictly positive.
inline Sample sample_lomax(const LomaxSpec& d, std::size_t n, Xoshiro256ss& rng) {
    if (n < 1) throw std::invalid_argument("sample_lomax: need n >= 1");
    Sample out;
    out.values.reserve(n);
    const double inv_alpha = 1.0 / d.alpha;
    for (std::size_t i = 0; i < n; ++i)
        out.values.push_back(d.scale_lambda * std::expm1(-std::log(rng.next_open01()) * inv_alpha));
    return out;
}

}  // namespace fatgini
