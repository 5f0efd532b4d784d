#ifndef MARGLIK_HISTOGRAM_HPP
#define MARGLIK_HISTOGRAM_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "marglik/logspace.hpp"
#include "marglik/samples.hpp"

namespace marglik {

// Integer coordinates of a cubic bin of side h, anchored at the origin of
// the (standardized) coordinate system.
using BinKey = std::vector<std::int64_t>;

// coords_k = floor(theta_k / bin_width)
BinKey bin_index(std::span<const double> theta, double bin_width);

struct BinStats {
    double log_height;    // minimum log_joint among the samples in the bin
    std::uint32_t count;  // number of histogram samples in the bin
};

// Sparse histogram whose bin height is the minimum sampled density among the
// points in the bin, normalized to integrate to 1.  Bins with no samples
// have density zero.  Immutable once built; queries are safe from any number
// of concurrent readers.
class ArrogantHistogram {
public:
    // Builds from at least one sample with standardized coordinates.
    // O(d m log m).
    static ArrogantHistogram build(std::span<const EvaluatedSample> hist_samples,
                                   double bin_width);

    std::size_t dim() const { return dim_; }
    double bin_width() const { return bin_width_; }

    // log of the normalizing constant: log_sum_exp(heights) + d*log(h).
    double log_norm() const { return log_norm_; }

    std::size_t occupied_count() const { return bins_.size(); }

    // Normalized log density at a standardized point: height - log_norm in
    // an occupied bin, log(0) otherwise.  O(d log l).
    LogValue query_log_density(std::span<const double> theta) const;

    // Ordered so iteration (support checks, diagnostics dumps) is
    // deterministic.
    const std::map<BinKey, BinStats>& bins() const { return bins_; }

private:
    ArrogantHistogram() = default;

    std::size_t dim_ = 0;
    double bin_width_ = 0.0;
    double log_norm_ = 0.0;
    std::map<BinKey, BinStats> bins_;
};

struct CoverageReport {
    double fraction;  // share of tuning samples landing in occupied bins
    double target;
};

// Fraction of tuning samples whose bin is occupied.  Tuning set must be
// nonempty.
CoverageReport coverage_fraction(const ArrogantHistogram& hist,
                                 std::span<const EvaluatedSample> tuning_samples,
                                 double target = 0.5);

struct BinWidthOptions {
    double target = 0.5;          // desired coverage fraction
    double grid_ratio = 0.8;      // successive candidate widths shrink by this factor
    int grid_size = 60;
    // Largest candidate width; defaults to the largest per-dimension range
    // of the histogram samples.
    std::optional<double> h_max;
};

struct BinWidthSelection {
    double bin_width;
    CoverageReport coverage;  // coverage achieved at the selected width
};

// Evaluates coverage at explicit candidate widths and returns the one
// minimizing |coverage - target|, ties broken toward the smaller width.
// Throws NoPositiveCoverageError if every candidate covers nothing.
BinWidthSelection select_bin_width(std::span<const EvaluatedSample> hist_samples,
                                   std::span<const EvaluatedSample> tuning_samples,
                                   std::span<const double> candidates, double target);

// Same, over the geometric grid h_j = h_max * grid_ratio^j, j = 0..grid_size-1.
BinWidthSelection select_bin_width(std::span<const EvaluatedSample> hist_samples,
                                   std::span<const EvaluatedSample> tuning_samples,
                                   const BinWidthOptions& options = {});

} // namespace marglik

#endif
