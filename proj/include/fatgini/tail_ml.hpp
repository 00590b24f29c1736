#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "fatgini/direct.hpp"
#include "fatgini/errors.hpp"
#include "fatgini/numerics.hpp"

namespace fatgini {

/// Maximum-likelihood tail exponent for a power-law sample, with the
/// finite-sample debiasing factor (n-1)/n and the acceptance condition
/// alpha' > 1 + epsilon that keeps the implied mean finite.
struct TailEstimate {
    double alpha_hat = 0.0;       // n / Sum log(x_i / L)
    double alpha_debiased = 0.0;  // (n-1)/n * alpha_hat, unbiased for alpha
    std::size_t n = 0;            // observations entering the likelihood
    double epsilon = 0.0;
    bool accepted = false;        // alpha_debiased > 1 + epsilon
    double scale_L = 0.0;
    bool scale_estimated = false;  // L taken as the sample minimum (excluded)
};

namespace detail {

inline void check_pdf_params(double alpha, std::size_t n, std::size_t min_n, const char* who) {
    if (!std::isfinite(alpha) || alpha <= 0.0)
        throw std::domain_error(std::string(who) + ": alpha must be finite and positive");
    if (n < min_n)
        throw std::domain_error(std::string(who) + ": need n >= " + std::to_string(min_n));
}

}  // namespace detail

/// ML fit with a known support bound: alpha_hat = n / Sum log(x_i / scale_L).
/// Every value must be >= scale_L and at least one strictly above it.
inline TailEstimate ml_alpha(const Sample& sample, double scale_L, double epsilon = 0.01) {
    const auto& v = sample.values;
    if (v.size() < 2)
        throw std::domain_error("ml_alpha: need at least 2 observations");
    if (!std::isfinite(scale_L) || scale_L <= 0.0)
        throw std::domain_error("ml_alpha: scale_L must be finite and positive");
    if (!std::isfinite(epsilon) || epsilon < 0.0)
        throw std::domain_error("ml_alpha: epsilon must be finite and >= 0");

    detail::NeumaierSum log_sum;
    for (double x : v) {
        if (!std::isfinite(x) || x < scale_L)
            throw std::domain_error("ml_alpha: observation " + std::to_string(x)
                                    + " below the support bound " + std::to_string(scale_L));
        log_sum.add(std::log(x / scale_L));
    }
    const double total = log_sum.value();
    if (!(total > 0.0))
        throw std::domain_error("ml_alpha: all observations equal the support bound; "
                                "the estimate diverges");

    const double n = static_cast<double>(v.size());
    TailEstimate est;
    est.alpha_hat = n / total;
    est.alpha_debiased = est.alpha_hat * (n - 1.0) / n;
    est.n = v.size();
    est.epsilon = epsilon;
    est.accepted = est.alpha_debiased > 1.0 + epsilon;
    est.scale_L = scale_L;
    return est;
}

/// ML fit with the support bound estimated as the sample minimum; one copy of
/// the minimum is excluded from the likelihood, so n drops by one.
inline TailEstimate ml_alpha_auto(const Sample& sample, double epsilon = 0.01) {
    const auto& v = sample.values;
    if (v.size() < 3)
        throw std::domain_error("ml_alpha_auto: need at least 3 observations "
                                "(one is consumed estimating the support bound)");
    const auto min_it = std::min_element(v.begin(), v.end());
    if (!std::isfinite(*min_it) || *min_it <= 0.0)
        throw std::domain_error("ml_alpha_auto: observations must be strictly positive");

    Sample reduced;
    reduced.values.reserve(v.size() - 1);
    reduced.values.insert(reduced.values.end(), v.begin(), min_it);
    reduced.values.insert(reduced.values.end(), std::next(min_it), v.end());

    TailEstimate est = ml_alpha(reduced, *min_it, epsilon);
    est.scale_estimated = true;
    return est;
}

/// Density of alpha_hat: inverse gamma with shape n and scale alpha*n.
inline double pdf_alpha_hat(double a, double alpha, std::size_t n) {
    detail::check_pdf_params(alpha, n, 1, "pdf_alpha_hat");
    if (!std::isfinite(a) || a <= 0.0)
        throw std::domain_error("pdf_alpha_hat: evaluation point must be positive");
    const double nd = static_cast<double>(n);
    const double scale = alpha * nd;
    return std::exp(nd * std::log(scale) - (nd + 1.0) * std::log(a) - scale / a - log_gamma(nd));
}

/// CDF of alpha_hat; equals Q(n, alpha*n / a).
inline double cdf_alpha_hat(double a, double alpha, std::size_t n) {
    detail::check_pdf_params(alpha, n, 1, "cdf_alpha_hat");
    if (a <= 0.0) return 0.0;
    return reg_gamma_q(static_cast<double>(n), alpha * static_cast<double>(n) / a);
}

/// Density of the debiased estimator alpha' = (n-1)/n * alpha_hat: inverse
/// gamma with shape n and scale alpha*(n-1), so its mean is exactly alpha.
inline double pdf_alpha_debiased(double a, double alpha, std::size_t n) {
    detail::check_pdf_params(alpha, n, 2, "pdf_alpha_debiased");
    if (!std::isfinite(a) || a <= 0.0)
        throw std::domain_error("pdf_alpha_debiased: evaluation point must be positive");
    const double nd = static_cast<double>(n);
    const double scale = alpha * (nd - 1.0);
    return std::exp(nd * std::log(scale) - (nd + 1.0) * std::log(a) - scale / a - log_gamma(nd));
}

/// Density of alpha' conditional on alpha' > 1 + epsilon: the debiased
/// density renormalized by the acceptance mass P(n, alpha(n-1)/(1+epsilon)),
/// evaluated in log space. Zero below the cutoff.
inline double pdf_alpha_truncated(double a, double alpha, std::size_t n, double epsilon) {
    detail::check_pdf_params(alpha, n, 2, "pdf_alpha_truncated");
    if (!std::isfinite(epsilon) || epsilon <= 0.0)
        throw std::domain_error("pdf_alpha_truncated: epsilon must be positive");
    if (!std::isfinite(a))
        throw std::domain_error("pdf_alpha_truncated: evaluation point must be finite");
    if (a < 1.0 + epsilon) return 0.0;

    const double nd = static_cast<double>(n);
    const double scale = alpha * (nd - 1.0);
    const LogRegularizedGamma tail{nd, scale / (1.0 + epsilon)};
    return std::exp(nd * std::log(scale) - (nd + 1.0) * std::log(a) - scale / a - log_gamma(nd)
                    - tail.log_p());
}

/// Plug-in Gini from an accepted tail estimate: G = 1/(2 alpha' - 1).
inline GiniResult derived_gini(const TailEstimate& estimate) {
    if (!estimate.accepted)
        throw rejected_estimate_error(estimate.alpha_debiased, 1.0 + estimate.epsilon);
    GiniResult out;
    out.value = 1.0 / (2.0 * estimate.alpha_debiased - 1.0);
    out.method = GiniMethod::ml_derived;
    out.n = estimate.n;
    return out;
}

/// Exact law of the derived Gini G = 1/(2 alpha'' - 1) for samples of size n
/// from a tail with exponent alpha, truncated at 1 + epsilon. Support is
/// (0, 1/(2 epsilon + 1)).
struct DerivedGiniDistribution {
    double alpha;
    std::size_t n;
    double epsilon;

    DerivedGiniDistribution(double alpha_, std::size_t n_, double epsilon_)
        : alpha(alpha_), n(n_), epsilon(epsilon_) {
        if (!std::isfinite(alpha) || alpha <= 1.0)
            throw std::domain_error("DerivedGiniDistribution: alpha must exceed 1");
        if (n < 2) throw std::domain_error("DerivedGiniDistribution: need n >= 2");
        if (!std::isfinite(epsilon) || epsilon <= 0.0)
            throw std::domain_error("DerivedGiniDistribution: epsilon must be positive");
    }

    double support_max() const noexcept { return 1.0 / (2.0 * epsilon + 1.0); }
    double scale() const noexcept { return alpha * (static_cast<double>(n) - 1.0); }
};

/// Density of the derived Gini; zero outside the open support.
inline double pdf_derived_gini(double g, const DerivedGiniDistribution& dist) {
    if (!std::isfinite(g)) throw std::domain_error("pdf_derived_gini: non-finite point");
    if (g <= 0.0 || g >= dist.support_max()) return 0.0;

    const double nd = static_cast<double>(dist.n);
    const double scale = dist.scale();
    const LogRegularizedGamma tail{nd, scale / (1.0 + dist.epsilon)};
    const double w = 2.0 * scale * g / (g + 1.0);
    return std::exp(nd * std::log(w) - w - log_gamma(nd) - tail.log_p() - std::log(g)
                    - std::log1p(g));
}

struct MomentResult {
    double value = 0.0;
    int terms_used = 0;
    bool converged = false;
};

namespace detail {

/// Terms of the derived-Gini moment series
///   mu(m) = Sum_i C(i+m-1, i) (2B)^-(i+m) Gamma(i+m+n) P(i+m+n, x0)
///           / (Gamma(n) P(n, x0)),   B = alpha(n-1),  x0 = B/(1+eps).
/// Successive terms are produced by a log-space ratio recurrence, so neither
/// Gamma(i+m+n) nor the binomial factor is ever formed directly and shapes up
/// to n ~ 1e6 stay in range.
class GiniMomentSeries {
public:
    GiniMomentSeries(int m, const DerivedGiniDistribution& dist)
        : m_(m), n_(static_cast<double>(dist.n)), two_b_(2.0 * dist.scale()),
          cutoff_(dist.scale() / (1.0 + dist.epsilon)) {
        if (m < 1) throw std::domain_error("gini_moment: order must be >= 1");
        const double log_p_base = log_reg_gamma_p(n_, cutoff_);
        log_p_prev_ = log_reg_gamma_p(n_ + m_, cutoff_);
        log_term_ = log_gamma(n_ + m_) - log_gamma(n_) - m_ * std::log(two_b_) + log_p_prev_
                    - log_p_base;
    }

    /// Term for the current index, then advances the recurrence.
    double next() {
        const double term = std::exp(log_term_);
        const double shape_next = n_ + m_ + static_cast<double>(index_) + 1.0;
        const double log_p_next = log_reg_gamma_p(shape_next, cutoff_);
        const double i = static_cast<double>(index_);
        log_term_ += std::log((i + m_) / (i + 1.0)) + std::log((shape_next - 1.0) / two_b_)
                     + log_p_next - log_p_prev_;
        log_p_prev_ = log_p_next;
        ++index_;
        return term;
    }

private:
    double m_;
    double n_;
    double two_b_;
    double cutoff_;
    double log_term_ = 0.0;
    double log_p_prev_ = 0.0;
    int index_ = 0;
};

}  // namespace detail

/// m-th moment of the derived Gini by the series above. Stops after terms_U
/// terms or once a term's relative contribution drops below rel_tol,
/// whichever comes first; converged reports whether the tolerance was met.
inline MomentResult gini_moment(int m, const DerivedGiniDistribution& dist, int terms_U = 60,
                                double rel_tol = 1e-12) {
    if (terms_U < 1) throw std::domain_error("gini_moment: need terms_U >= 1");
    if (!std::isfinite(rel_tol) || rel_tol < 0.0)
        throw std::domain_error("gini_moment: rel_tol must be >= 0");

    detail::GiniMomentSeries series(m, dist);
    MomentResult out;
    for (int i = 0; i < terms_U; ++i) {
        const double term = series.next();
        out.value += term;
        ++out.terms_used;
        if (term <= rel_tol * out.value) {
            out.converged = true;
            break;
        }
    }
    return out;
}

/// Standard deviation sqrt(mu(2) - mu(1)^2) of the derived Gini; throws
/// numeric_error if the series does not settle within the term budget.
inline double derived_gini_std(const DerivedGiniDistribution& dist, int terms_U = 400,
                               double rel_tol = 1e-13) {
    const MomentResult m1 = gini_moment(1, dist, terms_U, rel_tol);
    const MomentResult m2 = gini_moment(2, dist, terms_U, rel_tol);
    if (!m1.converged || !m2.converged)
        throw numeric_error("derived_gini_std: moment series not converged after "
                                + std::to_string(terms_U) + " terms",
                            std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN(),
                            m2.value - m1.value * m1.value);
    const double var = m2.value - m1.value * m1.value;
    return std::sqrt(var > 0.0 ? var : 0.0);
}

}  // namespace fatgini
