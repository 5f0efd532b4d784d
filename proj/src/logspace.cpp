#include "marglik/logspace.hpp"

#include <algorithm>
#include <stdexcept>

namespace marglik {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

LogValue LogValue::from_log(double log_value) {
    if (std::isnan(log_value) || log_value == std::numeric_limits<double>::infinity()) {
        throw std::invalid_argument("LogValue must be finite or -inf");
    }
    return LogValue(log_value);
}

LogValue LogValue::from_linear(double x) {
    if (std::isnan(x) || std::isinf(x) || x < 0.0) {
        throw std::invalid_argument("LogValue::from_linear requires finite x >= 0");
    }
    return LogValue(std::log(x));
}

double log_sum_exp(std::span<const double> values) {
    if (values.empty()) {
        return kNegInf;
    }
    const double max = *std::max_element(values.begin(), values.end());
    if (max == kNegInf) {
        return kNegInf;
    }
    double sum = 0.0;
    for (double v : values) {
        sum += std::exp(v - max);  // exp(-inf - max) == 0, adds nothing
    }
    return max + std::log(sum);
}

LogValue log_sum_exp(std::span<const LogValue> values) {
    if (values.empty()) {
        return LogValue::zero();
    }
    double max = kNegInf;
    for (LogValue v : values) {
        max = std::max(max, v.log());
    }
    if (max == kNegInf) {
        return LogValue::zero();
    }
    double sum = 0.0;
    for (LogValue v : values) {
        sum += std::exp(v.log() - max);
    }
    return LogValue::from_log(max + std::log(sum));
}

double log_add_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

double log_sub_exp(double a, double b) {
    if (b == kNegInf) return a;
    if (a < b) throw std::invalid_argument("log_sub_exp requires a >= b");
    if (a == b) return kNegInf;
    return a + std::log1p(-std::exp(b - a));
}

} // namespace marglik
