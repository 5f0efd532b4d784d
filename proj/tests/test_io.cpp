#include <cmath>
#include <limits>
#include <sstream>

#include <doctest.h>

#include "marglik/errors.hpp"
#include "marglik/io.hpp"
#include "marglik/models.hpp"
#include "marglik/pipeline.hpp"

#include "testutil.hpp"

using namespace marglik;

TEST_CASE("csv parsing") {
    SUBCASE("a well-formed file") {
        std::istringstream in(
            "theta_1,theta_2,log_joint\n"
            "0.5,-1.25,-3.5\n"
            "1.5,2.25,-4.5\n"
            "-0.25,0,-5\n");
        const SampleSet s = parse_samples(in, SampleFormat::csv);
        CHECK(s.size() == 3);
        CHECK(s.dim() == 2);
        CHECK(s[1].theta[1] == 2.25);
        CHECK(s[2].log_joint == -5.0);
    }
    SUBCASE("header missing log_joint") {
        std::istringstream in("theta_1,theta_2\n0.5,1.0\n");
        try {
            parse_samples(in, SampleFormat::csv);
            FAIL("expected SampleParseError");
        } catch (const SampleParseError& e) {
            CHECK(e.row == 0);
        }
    }
    SUBCASE("misnamed theta column") {
        std::istringstream in("x_1,log_joint\n0.5,-1\n");
        CHECK_THROWS_AS(parse_samples(in, SampleFormat::csv), SampleParseError);
    }
    SUBCASE("wrong column count is a dimension mismatch with the row number") {
        std::istringstream in("theta_1,theta_2,log_joint\n0.5,1.0,-1\n0.5,-1\n");
        try {
            parse_samples(in, SampleFormat::csv);
            FAIL("expected DimensionMismatchError");
        } catch (const DimensionMismatchError& e) {
            CHECK(e.row == 2);
        }
    }
    SUBCASE("unparseable token") {
        std::istringstream in("theta_1,log_joint\nabc,-1\n");
        try {
            parse_samples(in, SampleFormat::csv);
            FAIL("expected SampleParseError");
        } catch (const SampleParseError& e) {
            CHECK(e.row == 1);
        }
    }
    SUBCASE("infinite value is non-finite, not a parse failure") {
        std::istringstream in("theta_1,log_joint\n0.5,inf\n");
        try {
            parse_samples(in, SampleFormat::csv);
            FAIL("expected NonFiniteValueError");
        } catch (const NonFiniteValueError& e) {
            CHECK(e.row == 1);
        }
    }
    SUBCASE("empty file gives an empty set") {
        std::istringstream in("");
        CHECK(parse_samples(in, SampleFormat::csv).size() == 0);
    }
}

TEST_CASE("ndjson parsing") {
    SUBCASE("a well-formed stream") {
        std::istringstream in(
            "{\"theta\": [0.5, 1.5], \"log_joint\": -2.5}\n"
            "{\"theta\": [1.0, -1.0], \"log_joint\": -3.5}\n");
        const SampleSet s = parse_samples(in, SampleFormat::ndjson);
        CHECK(s.size() == 2);
        CHECK(s.dim() == 2);
        CHECK(s[0].theta[0] == 0.5);
    }
    SUBCASE("string log_joint of inf is rejected as non-finite") {
        std::istringstream in("{\"theta\": [0.5], \"log_joint\": \"inf\"}\n");
        try {
            parse_samples(in, SampleFormat::ndjson);
            FAIL("expected NonFiniteValueError");
        } catch (const NonFiniteValueError& e) {
            CHECK(e.row == 1);
            CHECK(e.field == "log_joint");
        }
    }
    SUBCASE("missing fields") {
        std::istringstream in("{\"theta\": [0.5]}\n");
        CHECK_THROWS_AS(parse_samples(in, SampleFormat::ndjson), SampleParseError);
    }
    SUBCASE("invalid json names the row") {
        std::istringstream in("{\"theta\": [0.5], \"log_joint\": -1}\nnot json\n");
        try {
            parse_samples(in, SampleFormat::ndjson);
            FAIL("expected SampleParseError");
        } catch (const SampleParseError& e) {
            CHECK(e.row == 2);
        }
    }
    SUBCASE("ragged dimensions are caught with the row number") {
        std::istringstream in(
            "{\"theta\": [0.5], \"log_joint\": -1}\n"
            "{\"theta\": [0.5, 1.0], \"log_joint\": -1}\n");
        try {
            parse_samples(in, SampleFormat::ndjson);
            FAIL("expected DimensionMismatchError");
        } catch (const DimensionMismatchError& e) {
            CHECK(e.row == 2);
        }
    }
}

TEST_CASE("written samples parse back bit for bit") {
    const AnalyticModel model = make_mvn_model(3, {0.0, -5.0, 1e6}, {1.0, 1e-8, 25.0}, -321.5);
    const SampleSet original = model.draw(200, 77);
    for (SampleFormat format : {SampleFormat::csv, SampleFormat::ndjson}) {
        std::stringstream buffer;
        write_samples(buffer, original, format);
        const SampleSet round = parse_samples(buffer, format);
        REQUIRE(round.size() == original.size());
        REQUIRE(round.dim() == original.dim());
        for (std::size_t i = 0; i < original.size(); ++i) {
            CHECK(round[i].theta == original[i].theta);
            CHECK(round[i].log_joint == original[i].log_joint);
        }
    }
}

TEST_CASE("sample format names") {
    CHECK(sample_format_from_name("csv") == SampleFormat::csv);
    CHECK(sample_format_from_name("ndjson") == SampleFormat::ndjson);
    CHECK_THROWS_AS(sample_format_from_name("tsv"), ConfigError);
    CHECK(to_string(SampleFormat::ndjson) == "ndjson");
}

TEST_CASE("report serialization is a fixed point") {
    SUBCASE("organic pipeline report") {
        const AnalyticModel model = make_mvn_model(2, {0.0, 1.0}, {1.0, 2.0}, 0.5);
        const SampleSet samples = model.draw(1200, 19);
        PipelineConfig config;
        config.trace_stride = 200;
        config.dump_bins = true;
        const PipelineResult result = run_pipeline(samples, config);

        RunConfig rc;
        rc.input_path = "samples.csv";
        rc.output_path = "report.json";
        rc.pipeline = config;
        const nlohmann::json j = report_to_json(result, config_to_json(rc));
        const std::string once = dump_report(j);

        const ParsedReport parsed = report_from_json(nlohmann::json::parse(once));
        const std::string twice = dump_report(report_to_json(parsed.result, parsed.config));
        CHECK(once == twice);

        // numeric fields reproduce exactly
        CHECK(parsed.result.report.log_ml == result.report.log_ml);
        CHECK(parsed.result.report.ci_low == result.report.ci_low);
        CHECK(parsed.result.report.ci_high == result.report.ci_high);
        CHECK(parsed.result.report.bin_width == result.report.bin_width);
        CHECK(parsed.result.report.coverage == result.report.coverage);
        CHECK(parsed.result.trace.size() == result.trace.size());
        CHECK(parsed.result.bins.size() == result.bins.size());
        CHECK(parsed.version == std::string("0.1.0"));
    }
    SUBCASE("unbounded upper endpoint goes through null") {
        PipelineResult result;
        result.report.log_ml = -2.5;
        result.report.ci_low = -3.0;
        result.report.ci_high = std::numeric_limits<double>::infinity();
        result.report.confidence = 0.95;
        result.report.method = "arrogance";
        result.report.warnings = {"confidence interval upper endpoint unbounded"};

        RunConfig rc;
        const nlohmann::json j = report_to_json(result, config_to_json(rc));
        CHECK(j.at("ci_high").is_null());
        const ParsedReport parsed = report_from_json(j);
        CHECK(std::isinf(parsed.result.report.ci_high));
        const std::string once = dump_report(j);
        const std::string twice = dump_report(report_to_json(parsed.result, parsed.config));
        CHECK(once == twice);
    }
    SUBCASE("required field names are present") {
        const AnalyticModel model = make_mvn_model(1, {0.0}, {1.0}, 0.0);
        const SampleSet samples = model.draw(500, 1);
        const PipelineResult result = run_pipeline(samples, PipelineConfig{});
        const nlohmann::json j = report_to_json(result, config_to_json(RunConfig{}));
        for (const char* field :
             {"log_ml", "ci_low", "ci_high", "confidence", "n_eval", "m_hist", "tuning_count",
              "bin_width", "occupied_bins", "coverage", "zero_ratio_fraction", "method",
              "warnings", "version", "config"}) {
            CHECK_MESSAGE(j.contains(field), field);
        }
    }
}

TEST_CASE("config echo records support ranges with infinite endpoints as strings") {
    RunConfig rc;
    rc.input_path = "in.csv";
    SupportRanges ranges = SupportRanges::unbounded(3);
    ranges.lo[1] = 0.0;
    ranges.hi[1] = 10.0;
    ranges.lo[2] = 1e-6;
    rc.pipeline.support = ranges;
    const nlohmann::json j = config_to_json(rc);
    REQUIRE(j.at("support").size() == 2);  // fully unbounded dim 0 is omitted
    CHECK(j.at("support")[0].at("dim") == 1);
    CHECK(j.at("support")[0].at("lo") == 0.0);
    CHECK(j.at("support")[1].at("hi") == "inf");
}
