#ifndef MARGLIK_ESTIMATOR_HPP
#define MARGLIK_ESTIMATOR_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "marglik/histogram.hpp"
#include "marglik/logspace.hpp"
#include "marglik/samples.hpp"

namespace marglik {

// One log importance ratio per estimation sample:
//   log r_i = query_log_density(theta'_i) - (log_joint_i + log_jacobian).
// Samples in empty bins contribute an exact zero ratio (-inf here) and still
// count toward n.
struct RatioSet {
    std::vector<LogValue> log_ratios;
    std::size_t zero_count = 0;

    std::size_t size() const { return log_ratios.size(); }
};

// eval_samples carry standardized coordinates and the log joint densities as
// ingested; the Jacobian of the standardization is passed separately.
RatioSet compute_ratios(const ArrogantHistogram& hist,
                        std::span<const EvaluatedSample> eval_samples, double log_jacobian);

// log p(x|T) = -(log_sum_exp(log_ratios) - log n).  Summation runs in input
// order, so the result is deterministic for a fixed ratio sequence.  Throws
// AllRatiosZeroError when no sample landed in an occupied bin.
double estimate_log_marginal(const RatioSet& ratios);

// Central-limit interval on S = mean of the ratios (the estimate of
// 1/p(x|T)), endpoint-mapped to the log scale.
struct ConfidenceInterval {
    double log_low;
    double log_high;  // +inf when upper_unbounded
    double level;
    bool degenerate;       // zero sample variance among the ratios
    bool upper_unbounded;  // S - z*sd/sqrt(n) <= 0, no finite upper endpoint
};

// S +- z*sd/sqrt(n) with the sample standard deviation of the ratios (zeros
// included), accumulated in a single stable pass against the running mean of
// exp(log_ratio - max).  Throws TooFewSamplesError for n < 2.
ConfidenceInterval confidence_interval(const RatioSet& ratios, double level);

// Two-sided standard normal quantile helper: returns z with
// P(-z <= Z <= z) = level.
double normal_two_sided_quantile(double level);

// Inverse standard normal CDF.
double normal_quantile(double p);

// Harmonic mean of the likelihoods, as a log marginal likelihood:
//   -(log_sum_exp(-ll_i) - log n).
// Inputs are log p(x|theta_i,T), not log joints.
double harmonic_mean_estimate(std::span<const double> log_likelihoods);

// Prefix estimate of the log marginal likelihood, for stability diagnostics.
struct TracePoint {
    std::size_t k;          // prefix length
    double running_log_ml;
};

// Points at k = stride, 2*stride, ..., plus the full length.  Prefixes with
// no finite ratio yet are skipped (their estimate is not defined).
std::vector<TracePoint> running_trace(const RatioSet& ratios, std::size_t stride);

// Estimate and diagnostics for one pipeline run.
struct EstimateReport {
    double log_ml = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;  // +inf when the interval is one-sided
    double confidence = 0.0;
    std::size_t n_eval = 0;
    std::size_t m_hist = 0;
    std::size_t tuning_count = 0;
    double bin_width = 0.0;  // in standardized coordinate units
    std::size_t occupied_bins = 0;
    double coverage = 0.0;  // tuning-sample coverage at the selected width
    double zero_ratio_fraction = 0.0;
    std::string method;
    std::vector<std::string> warnings;
};

} // namespace marglik

#endif
