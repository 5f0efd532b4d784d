#include "marglik/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "marglik/errors.hpp"

namespace marglik {

namespace {

void fill_bin_key(std::span<const double> theta, double bin_width, BinKey& out) {
    out.resize(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        out[k] = static_cast<std::int64_t>(std::floor(theta[k] / bin_width));
    }
}

// Occupied-bin keys only; enough for coverage evaluation during bin-width
// selection without building heights.
std::set<BinKey> occupied_keys(std::span<const EvaluatedSample> samples, double bin_width) {
    std::set<BinKey> keys;
    BinKey key;
    for (const EvaluatedSample& s : samples) {
        fill_bin_key(s.theta, bin_width, key);
        keys.insert(key);
    }
    return keys;
}

double coverage_over_keys(const std::set<BinKey>& keys,
                          std::span<const EvaluatedSample> tuning_samples, double bin_width) {
    std::size_t hits = 0;
    BinKey key;
    for (const EvaluatedSample& s : tuning_samples) {
        fill_bin_key(s.theta, bin_width, key);
        hits += keys.count(key);
    }
    return static_cast<double>(hits) / static_cast<double>(tuning_samples.size());
}

double largest_dimension_range(std::span<const EvaluatedSample> samples) {
    const std::size_t dim = samples.front().theta.size();
    double largest = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (const EvaluatedSample& s : samples) {
            lo = std::min(lo, s.theta[k]);
            hi = std::max(hi, s.theta[k]);
        }
        largest = std::max(largest, hi - lo);
    }
    return largest;
}

} // namespace

BinKey bin_index(std::span<const double> theta, double bin_width) {
    if (!(bin_width > 0.0)) {
        throw std::invalid_argument("bin_index requires bin_width > 0");
    }
    BinKey key;
    fill_bin_key(theta, bin_width, key);
    return key;
}

ArrogantHistogram ArrogantHistogram::build(std::span<const EvaluatedSample> hist_samples,
                                           double bin_width) {
    if (hist_samples.empty()) {
        throw std::invalid_argument("histogram requires at least one sample");
    }
    if (!(bin_width > 0.0)) {
        throw std::invalid_argument("histogram requires bin_width > 0");
    }
    ArrogantHistogram h;
    h.dim_ = hist_samples.front().theta.size();
    h.bin_width_ = bin_width;

    BinKey key;
    for (const EvaluatedSample& s : hist_samples) {
        fill_bin_key(s.theta, bin_width, key);
        auto [it, inserted] = h.bins_.try_emplace(key, BinStats{s.log_joint, 1});
        if (!inserted) {
            it->second.log_height = std::min(it->second.log_height, s.log_joint);
            ++it->second.count;
        }
    }

    std::vector<double> heights;
    heights.reserve(h.bins_.size());
    for (const auto& [_, stats] : h.bins_) {
        heights.push_back(stats.log_height);
    }
    h.log_norm_ = log_sum_exp(heights) +
                  static_cast<double>(h.dim_) * std::log(bin_width);
    return h;
}

LogValue ArrogantHistogram::query_log_density(std::span<const double> theta) const {
    BinKey key;
    fill_bin_key(theta, bin_width_, key);
    auto it = bins_.find(key);
    if (it == bins_.end()) {
        return LogValue::zero();
    }
    return LogValue::from_log(it->second.log_height - log_norm_);
}

CoverageReport coverage_fraction(const ArrogantHistogram& hist,
                                 std::span<const EvaluatedSample> tuning_samples,
                                 double target) {
    if (tuning_samples.empty()) {
        throw std::invalid_argument("coverage_fraction requires a nonempty tuning set");
    }
    std::size_t hits = 0;
    BinKey key;
    for (const EvaluatedSample& s : tuning_samples) {
        fill_bin_key(s.theta, hist.bin_width(), key);
        hits += hist.bins().count(key);
    }
    return CoverageReport{static_cast<double>(hits) / static_cast<double>(tuning_samples.size()),
                          target};
}

BinWidthSelection select_bin_width(std::span<const EvaluatedSample> hist_samples,
                                   std::span<const EvaluatedSample> tuning_samples,
                                   std::span<const double> candidates, double target) {
    if (hist_samples.empty() || tuning_samples.empty()) {
        throw std::invalid_argument("select_bin_width requires nonempty sample sets");
    }
    if (candidates.empty()) {
        throw std::invalid_argument("select_bin_width requires at least one candidate");
    }

    bool any_positive = false;
    double best_h = 0.0;
    double best_coverage = 0.0;
    double best_score = std::numeric_limits<double>::infinity();
    for (double h : candidates) {
        if (!(h > 0.0)) {
            throw std::invalid_argument("candidate bin widths must be positive");
        }
        const auto keys = occupied_keys(hist_samples, h);
        const double coverage = coverage_over_keys(keys, tuning_samples, h);
        any_positive = any_positive || coverage > 0.0;
        const double score = std::abs(coverage - target);
        if (score < best_score || (score == best_score && h < best_h)) {
            best_score = score;
            best_h = h;
            best_coverage = coverage;
        }
    }
    if (!any_positive) {
        throw NoPositiveCoverageError();
    }
    return BinWidthSelection{best_h, CoverageReport{best_coverage, target}};
}

BinWidthSelection select_bin_width(std::span<const EvaluatedSample> hist_samples,
                                   std::span<const EvaluatedSample> tuning_samples,
                                   const BinWidthOptions& options) {
    if (hist_samples.empty()) {
        throw std::invalid_argument("select_bin_width requires nonempty sample sets");
    }
    double h_max = options.h_max.value_or(largest_dimension_range(hist_samples));
    if (!(h_max > 0.0)) {
        h_max = 1.0;  // all histogram samples coincide; any width works
    }
    std::vector<double> candidates;
    candidates.reserve(static_cast<std::size_t>(options.grid_size));
    double h = h_max;
    for (int j = 0; j < options.grid_size; ++j) {
        candidates.push_back(h);
        h *= options.grid_ratio;
    }
    return select_bin_width(hist_samples, tuning_samples, candidates, options.target);
}

} // namespace marglik
