#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fatgini/errors.hpp"

namespace fatgini {

/// ln Gamma(s) for s > 0.
inline double log_gamma(double s) {
    if (!std::isfinite(s) || s <= 0.0)
        throw std::domain_error("log_gamma: shape must be finite and positive, got "
                                + std::to_string(s));
    return std::lgamma(s);
}

namespace detail {

inline constexpr int kGammaMaxIter = 10'000'000;
// just above one ulp, so a converged continued fraction cannot oscillate
// across the threshold forever
inline constexpr double kGammaEps = 3.0e-16;

inline void check_gamma_args(double s, double x, const char* who) {
    if (!std::isfinite(s) || s <= 0.0)
        throw std::domain_error(std::string(who) + ": shape must be finite and positive, got "
                                + std::to_string(s));
    if (!std::isfinite(x) || x < 0.0)
        throw std::domain_error(std::string(who) + ": argument must be finite and nonnegative, got "
                                + std::to_string(x));
}

/// Power series for the lower regularized function, reliable for x < s + 1.
/// Returns ln P(s, x) directly, so tail masses far below the double range
/// survive in log space.
inline double log_gamma_p_series(double s, double x) {
    double term = 1.0 / s;
    double sum = term;
    double denom = s;
    for (int it = 0; it < kGammaMaxIter; ++it) {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kGammaEps)
            return std::log(sum) + s * std::log(x) - x - std::lgamma(s);
    }
    throw numeric_error("reg_gamma_p: series did not converge for s=" + std::to_string(s)
                        + ", x=" + std::to_string(x));
}

/// Modified Lentz continued fraction for the upper regularized function,
/// reliable for x >= s + 1.
inline double gamma_q_cf(double s, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kGammaMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kGammaEps)
            return std::exp(s * std::log(x) - x - std::lgamma(s)) * h;
    }
    throw numeric_error("reg_gamma_q: continued fraction did not converge for s="
                        + std::to_string(s) + ", x=" + std::to_string(x));
}

}  // namespace detail

/// Lower regularized incomplete gamma P(s, x) in [0, 1].
inline double reg_gamma_p(double s, double x) {
    detail::check_gamma_args(s, x, "reg_gamma_p");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return std::exp(detail::log_gamma_p_series(s, x));
    const double q = detail::gamma_q_cf(s, x);
    return 1.0 - q;
}

/// Upper regularized incomplete gamma Q(s, x) = 1 - P(s, x).
inline double reg_gamma_q(double s, double x) {
    detail::check_gamma_args(s, x, "reg_gamma_q");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - std::exp(detail::log_gamma_p_series(s, x));
    return detail::gamma_q_cf(s, x);
}

/// ln P(s, x); stays finite down to tail masses far below the double range,
/// which the moment series needs for large shape parameters.
inline double log_reg_gamma_p(double s, double x) {
    detail::check_gamma_args(s, x, "log_reg_gamma_p");
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    if (x < s + 1.0) return detail::log_gamma_p_series(s, x);
    return std::log1p(-detail::gamma_q_cf(s, x));
}

/// The Gamma(shape) tail split at a fixed cutoff: P(shape, cutoff) and its
/// complement. Small value type used by the truncated-estimator formulas,
/// where the normalizer Gamma(n) - Gamma(n, cutoff) appears as Gamma(n) * P.
struct LogRegularizedGamma {
    double shape;
    double cutoff;

    double p() const { return reg_gamma_p(shape, cutoff); }
    double q() const { return reg_gamma_q(shape, cutoff); }
    double log_p() const { return log_reg_gamma_p(shape, cutoff); }
};

struct QuadratureOptions {
    double abs_tol = 1e-8;
    int max_intervals = 100000;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights on [-1, 1].
inline constexpr double kGK15Nodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
};
inline constexpr double kGK15WeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kGK15WeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

// One Kronrod-15 panel; err is |K15 - G7|, an upper-biased estimate of the
// Kronrod error. Nodes are strictly interior, endpoints are never evaluated.
template <class F>
double gauss_kronrod_15(F&& f, double a, double b, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f_mid = f(mid);
    double k15 = kGK15WeightsK[7] * f_mid;
    double g7 = kGK15WeightsG[3] * f_mid;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kGK15Nodes[i];
        const double pair = f(mid + dx) + f(mid - dx);
        k15 += kGK15WeightsK[i] * pair;
        if (i % 2 == 1) g7 += kGK15WeightsG[i / 2] * pair;
    }
    k15 *= half;
    g7 *= half;
    err = std::fabs(k15 - g7);
    return k15;
}

}  // namespace detail

/// Adaptive quadrature of f over the finite interval [a, b]: bisects until
/// each subinterval's error estimate fits its share of abs_tol. Throws
/// numeric_error carrying the offending bracket when the interval budget runs
/// out.
template <class F>
double integrate(F&& f, double a, double b, QuadratureOptions opt = {}) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
        throw std::domain_error("integrate: need finite bounds with a < b");

    struct Segment {
        double lo, hi;
    };
    std::vector<Segment> pending{{a, b}};
    const double total = b - a;
    const double min_len = total * 1e-15;
    double sum = 0.0;
    int used = 1;
    while (!pending.empty()) {
        const Segment seg = pending.back();
        pending.pop_back();
        double err = 0.0;
        const double value = detail::gauss_kronrod_15(f, seg.lo, seg.hi, err);
        const double len = seg.hi - seg.lo;
        if (err <= opt.abs_tol * (len / total) || len <= min_len) {
            sum += value;
            continue;
        }
        if (used + 1 > opt.max_intervals)
            throw numeric_error("integrate: interval budget exhausted refining ["
                                    + std::to_string(seg.lo) + ", " + std::to_string(seg.hi) + "]",
                                seg.lo, seg.hi, sum + value);
        const double mid = 0.5 * (seg.lo + seg.hi);
        pending.push_back({seg.lo, mid});
        pending.push_back({mid, seg.hi});
        ++used;
    }
    return sum;
}

/// Gini of a nonnegative random variable from its survival function:
/// G = 1 - (1/mean) * Integral_0^inf S(x)^2 dx, where S == 1 below `lower`.
/// The improper tail is compactified through x = lower/t (or x = mean(1-t)/t
/// when the support starts at 0), so fat tails carry no truncation error.
/// Caller guarantees S is nonincreasing with S(lower) = 1 and that S^2 decays
/// faster than 1/x.
template <class F>
double integrate_survival_squared(F&& survival, double lower, double mean,
                                  QuadratureOptions opt = {}) {
    if (!std::isfinite(mean) || mean <= 0.0)
        throw std::domain_error("integrate_survival_squared: mean must be finite and positive");
    if (!std::isfinite(lower) || lower < 0.0)
        throw std::domain_error("integrate_survival_squared: lower bound must be finite and >= 0");

    double tail;
    if (lower > 0.0) {
        tail = integrate(
            [&](double t) {
                const double x = lower / t;
                const double s = survival(x);
                return s * s * lower / (t * t);
            },
            0.0, 1.0, opt);
    } else {
        tail = integrate(
            [&](double t) {
                const double x = mean * (1.0 - t) / t;
                const double s = survival(x);
                return s * s * mean / (t * t);
            },
            0.0, 1.0, opt);
    }
    const double gini = 1.0 - (lower + tail) / mean;
    return gini < 0.0 ? 0.0 : gini;  // roundoff guard at perfect equality
}

}  // namespace fatgini
