#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace fatgini {

/// Input data could not be parsed; carries the 1-based line number when known (0 = whole file).
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& msg, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A tail-exponent estimate failed the acceptance condition alpha' > 1 + eps,
/// so the implied distribution has an infinite mean and no Gini.
class rejected_estimate_error : public std::runtime_error {
public:
    rejected_estimate_error(double alpha_debiased, double threshold)
        : std::runtime_error("tail estimate rejected: debiased exponent "
                             + std::to_string(alpha_debiased) + " is not above "
                             + std::to_string(threshold)
                             + "; the implied mean is infinite and the Gini undefined"),
          alpha_debiased_(alpha_debiased),
          threshold_(threshold) {}

    double alpha_debiased() const noexcept { return alpha_debiased_; }
    double threshold() const noexcept { return threshold_; }

private:
    double alpha_debiased_;
    double threshold_;
};

/// An iterative numeric routine exhausted its budget before reaching tolerance.
/// For quadrature, bracket_lo/bracket_hi hold the subinterval it was refining
/// and partial the estimate accumulated so far.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg,
                           double bracket_lo = std::numeric_limits<double>::quiet_NaN(),
                           double bracket_hi = std::numeric_limits<double>::quiet_NaN(),
                           double partial = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(msg), bracket_lo_(bracket_lo), bracket_hi_(bracket_hi), partial_(partial) {}

    double bracket_lo() const noexcept { return bracket_lo_; }
    double bracket_hi() const noexcept { return bracket_hi_; }
    double partial() const noexcept { return partial_; }

private:
    double bracket_lo_;
    double bracket_hi_;
    double partial_;
};

}  // namespace fatgini
