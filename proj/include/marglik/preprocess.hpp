#ifndef MARGLIK_PREPROCESS_HPP
#define MARGLIK_PREPROCESS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "marglik/histogram.hpp"
#include "marglik/samples.hpp"

namespace marglik {

// Split of the N input samples, by input order: the first m_hist build the
// histogram, the next t_tune tune the bin width, the rest estimate.
struct PartitionPlan {
    std::size_t m_hist;
    std::size_t t_tune;
    std::size_t n_eval;
};

// m_hist defaults to floor(min(0.2 N, 2 sqrt(N))), clamped to at least 1.
// Throws InsufficientSamplesError when fewer than 2 estimation samples
// remain.
PartitionPlan partition_samples(const SampleSet& s, std::size_t t_tune = 40,
                                std::optional<std::size_t> m_override = std::nullopt);

struct SampleSplit {
    std::span<const EvaluatedSample> hist;
    std::span<const EvaluatedSample> tune;
    std::span<const EvaluatedSample> eval;
};

SampleSplit split_samples(const SampleSet& s, const PartitionPlan& plan);

// Per-dimension standard deviations used to standardize coordinates, plus
// the log Jacobian of that change of variables.
struct ScalingVector {
    std::vector<double> scale;  // all positive and finite
    double log_jacobian;        // sum_k log(scale[k])
};

// Sample standard deviation (m-1 denominator) of each coordinate over the
// histogram subset only.  Throws DegenerateDimensionError on a constant
// coordinate.
ScalingVector compute_scaling(std::span<const EvaluatedSample> hist_samples);

// Unit scales: standardization disabled.
ScalingVector identity_scaling(std::size_t dim);

// theta'_k = theta_k / scale_k and log_joint' = log_joint + log_jacobian, so
// exp(log_joint') is the correct unnormalized density of theta' and the
// marginal likelihood is unchanged.
EvaluatedSample apply_scaling(const EvaluatedSample& s, const ScalingVector& sc);

// Per-dimension closed intervals, in original (unscaled) parameter units,
// where the posterior density is known to be positive.  Endpoints may be
// +-inf.
struct SupportRanges {
    std::vector<double> lo;
    std::vector<double> hi;

    static SupportRanges unbounded(std::size_t dim);
    std::size_t dim() const { return lo.size(); }
};

struct SupportViolation {
    BinKey bin;       // integer coordinates of the offending bin
    std::size_t dim;  // first dimension on which it escapes the range
    double bin_lo;    // bin extent mapped back to original units
    double bin_hi;
    double range_lo;
    double range_hi;
};

// Every occupied bin, mapped back to original units through the scaling,
// must lie inside the declared ranges on every dimension; otherwise the
// first violating bin (in bin-key order) is returned.
std::optional<SupportViolation> check_support(const ArrogantHistogram& hist,
                                              const ScalingVector& sc,
                                              const SupportRanges& ranges);

} // namespace marglik

#endif
