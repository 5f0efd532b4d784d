#include "marglik/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "marglik/errors.hpp"

namespace marglik {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();
}

RatioSet compute_ratios(const ArrogantHistogram& hist,
                        std::span<const EvaluatedSample> eval_samples, double log_jacobian) {
    if (eval_samples.empty()) {
        throw std::invalid_argument("compute_ratios requires a nonempty estimation set");
    }
    RatioSet out;
    out.log_ratios.reserve(eval_samples.size());
    for (const EvaluatedSample& s : eval_samples) {
        const LogValue f = hist.query_log_density(s.theta);
        if (f.is_zero()) {
            out.log_ratios.push_back(LogValue::zero());
            ++out.zero_count;
        } else {
            out.log_ratios.push_back(
                LogValue::from_log(f.log() - (s.log_joint + log_jacobian)));
        }
    }
    return out;
}

double estimate_log_marginal(const RatioSet& ratios) {
    if (ratios.size() == 0) {
        throw std::invalid_argument("estimate_log_marginal requires at least one ratio");
    }
    if (ratios.zero_count == ratios.size()) {
        throw AllRatiosZeroError();
    }
    const LogValue total = log_sum_exp(std::span<const LogValue>(ratios.log_ratios));
    const double log_mean = total.log() - std::log(static_cast<double>(ratios.size()));
    return -log_mean;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("normal_quantile requires p in (0,1)");
    }
    static const boost::math::normal_distribution<double> standard_normal;
    return boost::math::quantile(standard_normal, p);
}

double normal_two_sided_quantile(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence level must lie in (0,1)");
    }
    return normal_quantile(0.5 + level / 2.0);
}

ConfidenceInterval confidence_interval(const RatioSet& ratios, double level) {
    const std::size_t n = ratios.size();
    if (n < 2) {
        throw TooFewSamplesError(n);
    }
    if (ratios.zero_count == n) {
        throw AllRatiosZeroError();
    }
    const double z = normal_two_sided_quantile(level);

    // log S via the same route as the point estimate, so the interval and
    // the estimate agree bit for bit when the variance vanishes.
    const double log_s =
        log_sum_exp(std::span<const LogValue>(ratios.log_ratios)).log() -
        std::log(static_cast<double>(n));

    // Work with u_i = exp(log_ratio_i - max) in [0,1]; zeros stay exactly 0.
    double max = kNegInf;
    for (LogValue r : ratios.log_ratios) {
        max = std::max(max, r.log());
    }

    // Welford accumulation of the variance of the u_i.
    double mean_u = 0.0;
    double m2_u = 0.0;
    std::size_t count = 0;
    for (LogValue r : ratios.log_ratios) {
        const double u = r.is_zero() ? 0.0 : std::exp(r.log() - max);
        ++count;
        const double delta = u - mean_u;
        mean_u += delta / static_cast<double>(count);
        m2_u += delta * (u - mean_u);
    }
    const double var_u = m2_u / static_cast<double>(n - 1);
    const double sd_u = std::sqrt(std::max(var_u, 0.0));
    ConfidenceInterval ci{};
    ci.level = level;
    if (sd_u == 0.0) {
        ci.degenerate = true;
        ci.log_low = -log_s;
        ci.log_high = -log_s;
        return ci;
    }
    const double log_half_width =
        std::log(z) + (max + std::log(sd_u)) - 0.5 * std::log(static_cast<double>(n));

    ci.log_low = -log_add_exp(log_s, log_half_width);
    if (log_half_width >= log_s) {
        ci.upper_unbounded = true;
        ci.log_high = kPosInf;
    } else {
        ci.log_high = -log_sub_exp(log_s, log_half_width);
    }
    return ci;
}

double harmonic_mean_estimate(std::span<const double> log_likelihoods) {
    if (log_likelihoods.empty()) {
        throw std::invalid_argument("harmonic_mean_estimate requires at least one value");
    }
    std::vector<double> negated(log_likelihoods.begin(), log_likelihoods.end());
    for (double& v : negated) {
        v = -v;
    }
    return -(log_sum_exp(negated) - std::log(static_cast<double>(negated.size())));
}

std::vector<TracePoint> running_trace(const RatioSet& ratios, std::size_t stride) {
    if (stride < 1) {
        throw std::invalid_argument("running_trace requires stride >= 1");
    }
    const std::size_t n = ratios.size();
    std::vector<TracePoint> trace;

    // Running log-sum of exp(ratio) against the running maximum; rescale the
    // accumulated sum whenever a new maximum appears.
    double max = kNegInf;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ratios.log_ratios[i].log();
        if (r != kNegInf) {
            if (r > max) {
                sum = max == kNegInf ? 0.0 : sum * std::exp(max - r);
                max = r;
            }
            sum += std::exp(r - max);
        }
        const std::size_t k = i + 1;
        if (k % stride == 0 || k == n) {
            if (max == kNegInf) {
                continue;  // no finite ratio yet; prefix estimate undefined
            }
            const double log_total = max + std::log(sum);
            trace.push_back(TracePoint{k, -(log_total - std::log(static_cast<double>(k)))});
        }
    }
    return trace;
}

} // namespace marglik
