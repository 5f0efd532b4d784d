#include "marglik/pipeline.hpp"

#include <cmath>
#include <string>

#include "marglik/errors.hpp"

namespace marglik {

namespace {

std::vector<EvaluatedSample> scale_thetas(std::span<const EvaluatedSample> samples,
                                          const ScalingVector& sc) {
    std::vector<EvaluatedSample> out;
    out.reserve(samples.size());
    for (const EvaluatedSample& s : samples) {
        EvaluatedSample scaled;
        scaled.theta.resize(s.theta.size());
        for (std::size_t k = 0; k < s.theta.size(); ++k) {
            scaled.theta[k] = s.theta[k] / sc.scale[k];
        }
        scaled.log_joint = s.log_joint;  // Jacobian enters in compute_ratios
        out.push_back(std::move(scaled));
    }
    return out;
}

} // namespace

PipelineResult run_pipeline(const SampleSet& input, const PipelineConfig& config) {
    const SampleSet* samples = &input;
    std::optional<SampleSet> shuffled;
    if (config.shuffle_seed) {
        shuffled = shuffle_samples(input, *config.shuffle_seed);
        samples = &*shuffled;
    }

    const PartitionPlan plan = partition_samples(*samples, config.tuning_count, config.m_override);
    const SampleSplit split = split_samples(*samples, plan);

    const ScalingVector scaling =
        config.scale ? compute_scaling(split.hist) : identity_scaling(samples->dim());

    // The histogram subset gets the full change of variables so bin heights
    // are standardized-density minima; the estimation subset keeps its raw
    // log joints and the Jacobian enters once in compute_ratios.
    std::vector<EvaluatedSample> hist_scaled;
    hist_scaled.reserve(split.hist.size());
    for (const EvaluatedSample& s : split.hist) {
        hist_scaled.push_back(apply_scaling(s, scaling));
    }
    const std::vector<EvaluatedSample> tune_scaled = scale_thetas(split.tune, scaling);
    const std::vector<EvaluatedSample> eval_scaled = scale_thetas(split.eval, scaling);

    BinWidthOptions width_options;
    width_options.target = config.coverage_target;
    const BinWidthSelection selection = select_bin_width(hist_scaled, tune_scaled, width_options);

    const ArrogantHistogram hist = ArrogantHistogram::build(hist_scaled, selection.bin_width);

    if (config.support) {
        if (auto violation = check_support(hist, scaling, *config.support)) {
            throw SupportViolationError(violation->bin, violation->dim, violation->bin_lo,
                                        violation->bin_hi, violation->range_lo,
                                        violation->range_hi);
        }
    }

    const RatioSet ratios = compute_ratios(hist, eval_scaled, scaling.log_jacobian);

    PipelineResult result;
    EstimateReport& report = result.report;
    report.log_ml = estimate_log_marginal(ratios);
    const ConfidenceInterval ci = confidence_interval(ratios, config.confidence);
    report.ci_low = ci.log_low;
    report.ci_high = ci.log_high;
    report.confidence = config.confidence;
    report.n_eval = plan.n_eval;
    report.m_hist = plan.m_hist;
    report.tuning_count = plan.t_tune;
    report.bin_width = selection.bin_width;
    report.occupied_bins = hist.occupied_count();
    report.coverage = selection.coverage.fraction;
    report.zero_ratio_fraction =
        static_cast<double>(ratios.zero_count) / static_cast<double>(ratios.size());
    report.method = "arrogance";

    if (ci.degenerate) {
        report.warnings.push_back("confidence interval degenerate: zero sample variance among ratios");
    }
    if (ci.upper_unbounded) {
        report.warnings.push_back(
            "confidence interval upper endpoint unbounded: S - z*sd/sqrt(n) <= 0");
    }
    if (report.zero_ratio_fraction > 0.75) {
        report.warnings.push_back(
            "zero-ratio fraction " + std::to_string(report.zero_ratio_fraction) +
            " is far above the 0.5 design point; the interval may be unreliable");
    }

    if (config.trace_stride > 0) {
        result.trace = running_trace(ratios, config.trace_stride);
    }
    if (config.dump_bins) {
        result.bins.reserve(hist.occupied_count());
        for (const auto& [key, stats] : hist.bins()) {
            result.bins.push_back(BinRecord{key, stats.log_height, stats.count});
        }
    }
    return result;
}

} // namespace marglik
