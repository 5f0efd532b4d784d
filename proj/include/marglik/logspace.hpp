#ifndef MARGLIK_LOGSPACE_HPP
#define MARGLIK_LOGSPACE_HPP

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace marglik {

// A density, weight, or ratio on the natural-log scale.  The stored value is
// either finite or -inf (the log of an exact zero); +inf and NaN are rejected
// at construction.
class LogValue {
public:
    // Default-constructs log(0).
    constexpr LogValue() : value_(-std::numeric_limits<double>::infinity()) {}

    static constexpr LogValue zero() { return LogValue(); }

    // Wraps a value already on the log scale.  Throws std::invalid_argument
    // on NaN or +inf.
    static LogValue from_log(double log_value);

    // log(x) for x >= 0.  Throws std::invalid_argument on negative, NaN, or
    // infinite input.
    static LogValue from_linear(double x);

    constexpr double log() const { return value_; }
    double exp() const { return std::exp(value_); }
    constexpr bool is_zero() const { return value_ == -std::numeric_limits<double>::infinity(); }

    friend constexpr bool operator==(LogValue a, LogValue b) { return a.value_ == b.value_; }
    friend constexpr bool operator!=(LogValue a, LogValue b) { return a.value_ != b.value_; }

private:
    constexpr explicit LogValue(double v) : value_(v) {}

    double value_;
};

// log(sum_i exp(values[i])), accumulated against the running maximum so no
// intermediate exp overflows.  Empty input and all-(-inf) input give -inf.
// -inf entries contribute exactly nothing to the sum.  The result equals
// max(v) + log(sum_i exp(v_i - max(v))) and summation runs in input order.
double log_sum_exp(std::span<const double> values);
LogValue log_sum_exp(std::span<const LogValue> values);

// log(exp(a) + exp(b)).
double log_add_exp(double a, double b);

// log(exp(a) - exp(b)) for a >= b; returns -inf when a == b.
double log_sub_exp(double a, double b);

} // namespace marglik

#endif
