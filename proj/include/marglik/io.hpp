#ifndef MARGLIK_IO_HPP
#define MARGLIK_IO_HPP

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "marglik/pipeline.hpp"
#include "marglik/samples.hpp"

namespace marglik {

enum class SampleFormat { csv, ndjson };

// "csv" or "ndjson"; throws ConfigError otherwise.
SampleFormat sample_format_from_name(const std::string& name);
std::string to_string(SampleFormat format);

// csv: a header line "theta_1,...,theta_d,log_joint" then one numeric row
// per sample.  ndjson: one {"theta": [...], "log_joint": ...} record per
// line.  Rows are numbered from 1 (the csv header is row 0) and errors name
// the first offending row.
SampleSet parse_samples_file(const std::string& path, SampleFormat format);
SampleSet parse_samples(std::istream& in, SampleFormat format);

// Values are written with enough digits to round-trip exactly, so rereading
// a written file reproduces the set bit for bit.
void write_samples_file(const std::string& path, const SampleSet& samples, SampleFormat format);
void write_samples(std::ostream& out, const SampleSet& samples, SampleFormat format);

// Full CLI configuration for one estimate run; echoed verbatim into the
// report.
struct RunConfig {
    std::string input_path;
    std::string output_path;  // empty writes the report to stdout
    SampleFormat format = SampleFormat::csv;
    PipelineConfig pipeline;
};

nlohmann::json config_to_json(const RunConfig& config);

// Self-describing report document.  All numeric fields serialize losslessly;
// an unbounded ci_high is stored as null.
nlohmann::json report_to_json(const PipelineResult& result, const nlohmann::json& config_echo);

struct ParsedReport {
    PipelineResult result;
    nlohmann::json config;  // echoed subtree, kept verbatim
    std::string version;
    int format_version = 0;
};

ParsedReport report_from_json(const nlohmann::json& j);

// Two-space indented dump with a trailing newline; byte-stable for equal
// documents.
std::string dump_report(const nlohmann::json& j);

} // namespace marglik

#endif
