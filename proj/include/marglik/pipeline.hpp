#ifndef MARGLIK_PIPELINE_HPP
#define MARGLIK_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "marglik/estimator.hpp"
#include "marglik/histogram.hpp"
#include "marglik/preprocess.hpp"
#include "marglik/samples.hpp"

namespace marglik {

struct PipelineConfig {
    std::size_t tuning_count = 40;
    double coverage_target = 0.5;
    double confidence = 0.95;
    bool scale = true;
    std::optional<std::uint64_t> shuffle_seed;
    std::optional<SupportRanges> support;  // absent dimensions are unbounded
    std::optional<std::size_t> m_override;
    std::size_t trace_stride = 0;  // 0 disables the running trace
    bool dump_bins = false;
};

// One occupied-bin record for the diagnostics dump.
struct BinRecord {
    BinKey coords;
    double log_height;
    std::uint32_t count;
};

struct PipelineResult {
    EstimateReport report;
    std::vector<TracePoint> trace;  // present when trace_stride > 0
    std::vector<BinRecord> bins;    // present when dump_bins
};

// partition -> optional shuffle -> standardize -> select bin width -> build
// histogram -> support guard -> ratios -> estimate with confidence interval.
// Throws the module errors (InsufficientSamplesError, SupportViolationError,
// AllRatiosZeroError, ...) unchanged.
PipelineResult run_pipeline(const SampleSet& input, const PipelineConfig& config);

} // namespace marglik

#endif
