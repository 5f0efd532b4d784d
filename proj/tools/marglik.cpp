// marglik: estimate log marginal likelihoods from posterior samples via
// arrogance sampling, generate oracle datasets, and compare estimators.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "marglik/errors.hpp"
#include "marglik/io.hpp"
#include "marglik/models.hpp"
#include "marglik/pipeline.hpp"
#include "marglik/version.hpp"

namespace {

constexpr int kExitInputError = 2;
constexpr int kExitSupportViolation = 3;
constexpr int kExitEstimationFailure = 4;

marglik::SampleFormat resolve_format(const std::string& flag_value, const std::string& path) {
    if (!flag_value.empty()) {
        return marglik::sample_format_from_name(flag_value);
    }
    if (path.ends_with(".ndjson") || path.ends_with(".jsonl")) {
        return marglik::SampleFormat::ndjson;
    }
    return marglik::SampleFormat::csv;
}

// "dim:lo:hi" with 0-based dim; "inf"/"-inf" accepted as endpoints.
std::map<std::size_t, std::pair<double, double>> parse_support_specs(
    const std::vector<std::string>& specs) {
    std::map<std::size_t, std::pair<double, double>> out;
    for (const std::string& spec : specs) {
        const auto first = spec.find(':');
        const auto second = spec.find(':', first == std::string::npos ? first : first + 1);
        if (first == std::string::npos || second == std::string::npos) {
            throw marglik::ConfigError("--support expects dim:lo:hi, got '" + spec + "'");
        }
        const std::string dim_str = spec.substr(0, first);
        const std::string lo_str = spec.substr(first + 1, second - first - 1);
        const std::string hi_str = spec.substr(second + 1);
        std::size_t dim = 0;
        try {
            dim = std::stoul(dim_str);
        } catch (const std::exception&) {
            throw marglik::ConfigError("--support: cannot parse dimension '" + dim_str + "'");
        }
        auto endpoint = [&spec](const std::string& s) {
            if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
            if (s == "-inf") return -std::numeric_limits<double>::infinity();
            try {
                return std::stod(s);
            } catch (const std::exception&) {
                throw marglik::ConfigError("--support: cannot parse endpoint '" + s + "' in '" +
                                           spec + "'");
            }
        };
        const double lo = endpoint(lo_str);
        const double hi = endpoint(hi_str);
        if (!(lo < hi)) {
            throw marglik::ConfigError("--support: need lo < hi in '" + spec + "'");
        }
        out[dim] = {lo, hi};
    }
    return out;
}

marglik::SupportRanges materialize_support(
    const std::map<std::size_t, std::pair<double, double>>& specs, std::size_t dim) {
    marglik::SupportRanges ranges = marglik::SupportRanges::unbounded(dim);
    for (const auto& [k, interval] : specs) {
        if (k >= dim) {
            throw marglik::ConfigError("--support names dimension " + std::to_string(k) +
                                       " but the input has only " + std::to_string(dim));
        }
        ranges.lo[k] = interval.first;
        ranges.hi[k] = interval.second;
    }
    return ranges;
}

std::map<std::string, std::string> parse_model_params(const std::vector<std::string>& params) {
    std::map<std::string, std::string> out;
    for (const std::string& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw marglik::ConfigError("--model-params expects key=value, got '" + p + "'");
        }
        out[p.substr(0, eq)] = p.substr(eq + 1);
    }
    return out;
}

void emit(const std::string& output_path, const std::string& text) {
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path);
    if (!out) {
        throw marglik::ConfigError("cannot open output file '" + output_path + "'");
    }
    out << text;
}

struct EstimateArgs {
    std::string input;
    std::string output;
    std::string format;
    std::size_t tuning_count = 40;
    double coverage_target = 0.5;
    double confidence = 0.95;
    bool no_scale = false;
    std::optional<std::uint64_t> shuffle_seed;
    std::vector<std::string> support_specs;
    std::optional<std::size_t> m_override;
    std::size_t trace_stride = 0;
    bool dump_bins = false;
};

void validate_shared(const EstimateArgs& args) {
    if (!(args.confidence > 0.0 && args.confidence < 1.0)) {
        throw marglik::ConfigError("--confidence must lie in (0,1)");
    }
    if (!(args.coverage_target > 0.0 && args.coverage_target < 1.0)) {
        throw marglik::ConfigError("--coverage-target must lie in (0,1)");
    }
    if (args.tuning_count < 1) {
        throw marglik::ConfigError("--tuning-count must be at least 1");
    }
}

int cmd_estimate(const EstimateArgs& args) {
    validate_shared(args);
    const auto support_specs = parse_support_specs(args.support_specs);

    marglik::RunConfig config;
    config.input_path = args.input;
    config.output_path = args.output;
    config.format = resolve_format(args.format, args.input);
    config.pipeline.tuning_count = args.tuning_count;
    config.pipeline.coverage_target = args.coverage_target;
    config.pipeline.confidence = args.confidence;
    config.pipeline.scale = !args.no_scale;
    config.pipeline.shuffle_seed = args.shuffle_seed;
    config.pipeline.m_override = args.m_override;
    config.pipeline.trace_stride = args.trace_stride;
    config.pipeline.dump_bins = args.dump_bins;

    const marglik::SampleSet samples = marglik::parse_samples_file(config.input_path, config.format);
    if (!support_specs.empty()) {
        config.pipeline.support = materialize_support(support_specs, samples.dim());
    }

    const marglik::PipelineResult result = marglik::run_pipeline(samples, config.pipeline);
    for (const std::string& w : result.report.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
    emit(config.output_path,
         marglik::dump_report(marglik::report_to_json(result, marglik::config_to_json(config))));
    return 0;
}

int cmd_generate(const std::string& model_name, const std::vector<std::string>& params,
                 std::size_t n, std::uint64_t seed, const std::string& output,
                 const std::string& format) {
    if (n < 1) {
        throw marglik::ConfigError("--n must be at least 1");
    }
    const marglik::AnalyticModel model = marglik::make_model(model_name, parse_model_params(params));
    const marglik::SampleSet samples = model.draw(n, seed);
    marglik::write_samples_file(output, samples, resolve_format(format, output));
    return 0;
}

int cmd_compare(const std::string& model_name, const std::vector<std::string>& params,
                std::size_t n, std::uint64_t base_seed, std::size_t runs,
                const std::string& output, const EstimateArgs& shared) {
    validate_shared(shared);
    if (n < 1 || runs < 1) {
        throw marglik::ConfigError("--n and --runs must be at least 1");
    }
    const marglik::AnalyticModel model = marglik::make_model(model_name, parse_model_params(params));

    marglik::PipelineConfig pipeline;
    pipeline.tuning_count = shared.tuning_count;
    pipeline.coverage_target = shared.coverage_target;
    pipeline.confidence = shared.confidence;
    pipeline.scale = !shared.no_scale;
    pipeline.m_override = shared.m_override;
    pipeline.trace_stride =
        shared.trace_stride > 0 ? shared.trace_stride : std::max<std::size_t>(1, n / 100);

    nlohmann::json results = nlohmann::json::array();
    std::size_t arrogance_wins = 0;
    for (std::size_t run = 0; run < runs; ++run) {
        const std::uint64_t seed = base_seed + run;
        const marglik::SampleSet samples = model.draw(n, seed);
        const marglik::PipelineResult arrogance = marglik::run_pipeline(samples, pipeline);

        // Same seed, so the likelihoods are evaluated at the same draws.
        const std::vector<double> lls = model.draw_log_likelihoods(n, seed);
        const double hme = marglik::harmonic_mean_estimate(lls);

        marglik::RatioSet hme_ratios;
        hme_ratios.log_ratios.reserve(lls.size());
        for (double ll : lls) {
            hme_ratios.log_ratios.push_back(marglik::LogValue::from_log(-ll));
        }
        const auto hme_trace = marglik::running_trace(hme_ratios, pipeline.trace_stride);

        const double arrogance_error = std::abs(arrogance.report.log_ml - model.true_log_ml);
        const double hme_error = std::abs(hme - model.true_log_ml);
        arrogance_wins += arrogance_error < hme_error ? 1 : 0;

        nlohmann::json arrogance_trace = nlohmann::json::array();
        for (const marglik::TracePoint& p : arrogance.trace) {
            arrogance_trace.push_back({{"k", p.k}, {"running_log_ml", p.running_log_ml}});
        }
        nlohmann::json hme_trace_json = nlohmann::json::array();
        for (const marglik::TracePoint& p : hme_trace) {
            hme_trace_json.push_back({{"k", p.k}, {"running_log_ml", p.running_log_ml}});
        }
        results.push_back({
            {"seed", seed},
            {"arrogance_log_ml", arrogance.report.log_ml},
            {"arrogance_ci_low", arrogance.report.ci_low},
            {"arrogance_ci_high", std::isinf(arrogance.report.ci_high)
                                      ? nlohmann::json(nullptr)
                                      : nlohmann::json(arrogance.report.ci_high)},
            {"arrogance_abs_error", arrogance_error},
            {"harmonic_mean_log_ml", hme},
            {"harmonic_mean_abs_error", hme_error},
            {"warnings", arrogance.report.warnings},
            {"arrogance_trace", arrogance_trace},
            {"harmonic_mean_trace", hme_trace_json},
        });
    }

    nlohmann::json report{
        {"method", "compare"},
        {"version", marglik::kVersion},
        {"format_version", marglik::kReportFormatVersion},
        {"model", model_name},
        {"model_params", parse_model_params(params)},
        {"n", n},
        {"seed", base_seed},
        {"runs", runs},
        {"true_log_ml", model.true_log_ml},
        {"confidence", shared.confidence},
        {"results", results},
        {"summary",
         {{"arrogance_wins", arrogance_wins},
          {"arrogance_win_fraction",
           static_cast<double>(arrogance_wins) / static_cast<double>(runs)}}},
    };
    emit(output, marglik::dump_report(report));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"marginal likelihood estimation from posterior samples (arrogance sampling)"};
    app.require_subcommand(1);
    app.set_version_flag("--version", marglik::kVersion);

    EstimateArgs est;
    std::string model_name;
    std::vector<std::string> model_params;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t runs = 1;
    std::string gen_output;

    auto add_shared_flags = [&est](CLI::App* cmd) {
        cmd->add_option("--tuning-count", est.tuning_count,
                        "samples reserved for bin-width tuning (default 40)");
        cmd->add_option("--coverage-target", est.coverage_target,
                        "tuning-sample coverage the bin width aims for (default 0.5)");
        cmd->add_option("--confidence", est.confidence, "confidence level (default 0.95)");
        cmd->add_flag("--no-scale", est.no_scale, "disable per-dimension standardization");
        cmd->add_option("--m-override", est.m_override, "histogram sample count override");
        cmd->add_option("--trace-stride", est.trace_stride,
                        "emit running estimates every this many samples");
    };

    CLI::App* estimate = app.add_subcommand("estimate", "estimate log p(x|T) from a sample file");
    estimate->add_option("--input", est.input, "sample file")->required();
    estimate->add_option("--output", est.output, "report path (stdout when omitted)");
    estimate->add_option("--format", est.format, "csv or ndjson (default: by file extension)");
    add_shared_flags(estimate);
    estimate->add_option("--shuffle-seed", est.shuffle_seed,
                         "shuffle samples with this seed before partitioning");
    estimate->add_option("--support", est.support_specs,
                         "declared positive-support range dim:lo:hi (repeatable, 0-based dim)");
    estimate->add_flag("--dump-bins", est.dump_bins, "include per-bin diagnostics in the report");

    CLI::App* generate = app.add_subcommand("generate", "draw an evaluated sample file from a model");
    generate->add_option("--model", model_name, "mvn, normal-normal, or beta-binomial")->required();
    generate->add_option("--model-params", model_params, "model parameters as key=value");
    generate->add_option("--n", n, "number of samples")->required();
    generate->add_option("--seed", seed, "random seed (default 0)");
    generate->add_option("--output", gen_output, "sample file to write")->required();
    generate->add_option("--format", est.format, "csv or ndjson (default: by file extension)");

    CLI::App* compare = app.add_subcommand("compare",
                                           "arrogance vs harmonic mean on a known model");
    compare->add_option("--model", model_name, "mvn, normal-normal, or beta-binomial")->required();
    compare->add_option("--model-params", model_params, "model parameters as key=value");
    compare->add_option("--n", n, "number of samples per run")->required();
    compare->add_option("--seed", seed, "base seed; run i uses seed+i (default 0)");
    compare->add_option("--runs", runs, "number of seeded replications (default 1)");
    compare->add_option("--output", gen_output, "report path (stdout when omitted)");
    add_shared_flags(compare);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    try {
        if (estimate->parsed()) {
            return cmd_estimate(est);
        }
        if (generate->parsed()) {
            return cmd_generate(model_name, model_params, n, seed, gen_output, est.format);
        }
        return cmd_compare(model_name, model_params, n, seed, runs, gen_output, est);
    } catch (const marglik::SupportViolationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSupportViolation;
    } catch (const marglik::InsufficientSamplesError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimationFailure;
    } catch (const marglik::AllRatiosZeroError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimationFailure;
    } catch (const marglik::NoPositiveCoverageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimationFailure;
    } catch (const marglik::TooFewSamplesError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEstimationFailure;
    } catch (const std::exception& e) {
        // Parse, dimension, finiteness, config, and degenerate-input errors.
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
