#include "marglik/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "marglik/errors.hpp"
#include "marglik/version.hpp"

namespace marglik {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
}

double parse_number(const std::string& token, std::size_t row, const std::string& field) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (!token.empty() && (token.front() == '+')) {
        ++begin;  // from_chars does not accept a leading plus
    }
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
        throw SampleParseError(row, "cannot parse '" + token + "' in field '" + field + "'");
    }
    return value;
}

SampleSet parse_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        return validate_sample_set({});
    }
    const std::vector<std::string> header = split(line, ',');
    if (header.size() < 2 || header.back() != "log_joint") {
        throw SampleParseError(0, "header must be theta_1,...,theta_d,log_joint");
    }
    const std::size_t dim = header.size() - 1;
    for (std::size_t k = 0; k < dim; ++k) {
        if (header[k] != "theta_" + std::to_string(k + 1)) {
            throw SampleParseError(0, "expected column 'theta_" + std::to_string(k + 1) +
                                          "', found '" + header[k] + "'");
        }
    }

    std::vector<EvaluatedSample> rows;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) {
            throw SampleParseError(row, "empty line");
        }
        const std::vector<std::string> tokens = split(line, ',');
        if (tokens.size() != dim + 1) {
            throw DimensionMismatchError(row, dim, tokens.size() - 1);
        }
        EvaluatedSample s;
        s.theta.resize(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            s.theta[k] = parse_number(tokens[k], row, header[k]);
        }
        s.log_joint = parse_number(tokens[dim], row, "log_joint");
        rows.push_back(std::move(s));
    }
    return validate_sample_set(std::move(rows));
}

SampleSet parse_ndjson(std::istream& in) {
    std::vector<EvaluatedSample> rows;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) {
            throw SampleParseError(row, "empty line");
        }
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw SampleParseError(row, std::string("invalid record: ") + e.what());
        }
        if (!record.is_object() || !record.contains("theta") || !record.contains("log_joint")) {
            throw SampleParseError(row, "record must carry 'theta' and 'log_joint'");
        }
        const nlohmann::json& theta = record["theta"];
        if (!theta.is_array() || theta.empty()) {
            throw SampleParseError(row, "'theta' must be a nonempty array");
        }
        EvaluatedSample s;
        s.theta.reserve(theta.size());
        for (const nlohmann::json& v : theta) {
            if (!v.is_number()) {
                throw SampleParseError(row, "'theta' entries must be numbers");
            }
            s.theta.push_back(v.get<double>());
        }
        const nlohmann::json& lj = record["log_joint"];
        if (lj.is_number()) {
            s.log_joint = lj.get<double>();
        } else if (lj.is_string()) {
            // Strings like "inf"/"nan" parse but are rejected as non-finite.
            s.log_joint = parse_number(lj.get<std::string>(), row, "log_joint");
        } else {
            throw SampleParseError(row, "'log_joint' must be a number");
        }
        if (!std::isfinite(s.log_joint)) {
            throw NonFiniteValueError(row, "log_joint");
        }
        rows.push_back(std::move(s));
    }
    return validate_sample_set(std::move(rows));
}

void write_double(std::ostream& out, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << buf;
}

} // namespace

SampleFormat sample_format_from_name(const std::string& name) {
    if (name == "csv") return SampleFormat::csv;
    if (name == "ndjson") return SampleFormat::ndjson;
    throw ConfigError("unknown sample format '" + name + "' (known: csv, ndjson)");
}

std::string to_string(SampleFormat format) {
    return format == SampleFormat::csv ? "csv" : "ndjson";
}

SampleSet parse_samples(std::istream& in, SampleFormat format) {
    return format == SampleFormat::csv ? parse_csv(in) : parse_ndjson(in);
}

SampleSet parse_samples_file(const std::string& path, SampleFormat format) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open input file '" + path + "'");
    }
    return parse_samples(in, format);
}

void write_samples(std::ostream& out, const SampleSet& samples, SampleFormat format) {
    if (format == SampleFormat::csv) {
        for (std::size_t k = 1; k <= samples.dim(); ++k) {
            out << "theta_" << k << ',';
        }
        out << "log_joint\n";
        for (const EvaluatedSample& s : samples.samples()) {
            for (double t : s.theta) {
                write_double(out, t);
                out << ',';
            }
            write_double(out, s.log_joint);
            out << '\n';
        }
        return;
    }
    for (const EvaluatedSample& s : samples.samples()) {
        nlohmann::json record{{"theta", s.theta}, {"log_joint", s.log_joint}};
        out << record.dump() << '\n';
    }
}

void write_samples_file(const std::string& path, const SampleSet& samples, SampleFormat format) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot open output file '" + path + "'");
    }
    write_samples(out, samples, format);
}

nlohmann::json config_to_json(const RunConfig& config) {
    nlohmann::json support = nlohmann::json::array();
    if (config.pipeline.support) {
        const SupportRanges& r = *config.pipeline.support;
        for (std::size_t k = 0; k < r.dim(); ++k) {
            if (std::isinf(r.lo[k]) && std::isinf(r.hi[k])) {
                continue;  // unbounded dimensions are the default, not echoed
            }
            nlohmann::json entry;
            entry["dim"] = k;
            entry["lo"] = std::isinf(r.lo[k]) ? nlohmann::json("-inf") : nlohmann::json(r.lo[k]);
            entry["hi"] = std::isinf(r.hi[k]) ? nlohmann::json("inf") : nlohmann::json(r.hi[k]);
            support.push_back(entry);
        }
    }
    nlohmann::json j{
        {"input", config.input_path},
        {"output", config.output_path},
        {"format", to_string(config.format)},
        {"tuning_count", config.pipeline.tuning_count},
        {"coverage_target", config.pipeline.coverage_target},
        {"confidence", config.pipeline.confidence},
        {"scale", config.pipeline.scale},
        {"shuffle_seed", config.pipeline.shuffle_seed ? nlohmann::json(*config.pipeline.shuffle_seed)
                                                      : nlohmann::json(nullptr)},
        {"support", support},
        {"m_override", config.pipeline.m_override ? nlohmann::json(*config.pipeline.m_override)
                                                  : nlohmann::json(nullptr)},
        {"trace_stride", config.pipeline.trace_stride},
        {"dump_bins", config.pipeline.dump_bins},
    };
    return j;
}

nlohmann::json report_to_json(const PipelineResult& result, const nlohmann::json& config_echo) {
    const EstimateReport& r = result.report;
    nlohmann::json j{
        {"log_ml", r.log_ml},
        {"ci_low", r.ci_low},
        {"ci_high", std::isinf(r.ci_high) ? nlohmann::json(nullptr) : nlohmann::json(r.ci_high)},
        {"confidence", r.confidence},
        {"n_eval", r.n_eval},
        {"m_hist", r.m_hist},
        {"tuning_count", r.tuning_count},
        {"bin_width", r.bin_width},
        {"occupied_bins", r.occupied_bins},
        {"coverage", r.coverage},
        {"zero_ratio_fraction", r.zero_ratio_fraction},
        {"method", r.method},
        {"warnings", r.warnings},
        {"version", kVersion},
        {"format_version", kReportFormatVersion},
        {"config", config_echo},
    };
    if (!result.trace.empty()) {
        nlohmann::json trace = nlohmann::json::array();
        for (const TracePoint& p : result.trace) {
            trace.push_back({{"k", p.k}, {"running_log_ml", p.running_log_ml}});
        }
        j["trace"] = trace;
    }
    if (!result.bins.empty()) {
        nlohmann::json bins = nlohmann::json::array();
        for (const BinRecord& b : result.bins) {
            bins.push_back({{"coords", b.coords}, {"log_height", b.log_height}, {"count", b.count}});
        }
        j["bins"] = bins;
    }
    return j;
}

ParsedReport report_from_json(const nlohmann::json& j) {
    ParsedReport out;
    EstimateReport& r = out.result.report;
    r.log_ml = j.at("log_ml").get<double>();
    r.ci_low = j.at("ci_low").get<double>();
    r.ci_high = j.at("ci_high").is_null() ? std::numeric_limits<double>::infinity()
                                          : j.at("ci_high").get<double>();
    r.confidence = j.at("confidence").get<double>();
    r.n_eval = j.at("n_eval").get<std::size_t>();
    r.m_hist = j.at("m_hist").get<std::size_t>();
    r.tuning_count = j.at("tuning_count").get<std::size_t>();
    r.bin_width = j.at("bin_width").get<double>();
    r.occupied_bins = j.at("occupied_bins").get<std::size_t>();
    r.coverage = j.at("coverage").get<double>();
    r.zero_ratio_fraction = j.at("zero_ratio_fraction").get<double>();
    r.method = j.at("method").get<std::string>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    out.version = j.at("version").get<std::string>();
    out.format_version = j.at("format_version").get<int>();
    out.config = j.at("config");
    if (j.contains("trace")) {
        for (const nlohmann::json& p : j.at("trace")) {
            out.result.trace.push_back(
                TracePoint{p.at("k").get<std::size_t>(), p.at("running_log_ml").get<double>()});
        }
    }
    if (j.contains("bins")) {
        for (const nlohmann::json& b : j.at("bins")) {
            out.result.bins.push_back(BinRecord{b.at("coords").get<BinKey>(),
                                                b.at("log_height").get<double>(),
                                                b.at("count").get<std::uint32_t>()});
        }
    }
    return out;
}

std::string dump_report(const nlohmann::json& j) {
    return j.dump(2) + "\n";
}

} // namespace marglik
