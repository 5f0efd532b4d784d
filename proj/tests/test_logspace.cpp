#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <doctest.h>

#include "marglik/logspace.hpp"

using marglik::LogValue;
using marglik::log_sum_exp;

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

// Reference evaluation, the definition itself.
double lse_reference(const std::vector<double>& v) {
    const double max = *std::max_element(v.begin(), v.end());
    if (max == kNegInf) return kNegInf;
    double sum = 0.0;
    for (double x : v) sum += std::exp(x - max);
    return max + std::log(sum);
}
} // namespace

TEST_CASE("log_sum_exp on the documented cases") {
    CHECK(log_sum_exp(std::vector<double>{}) == kNegInf);
    CHECK(log_sum_exp(std::vector<double>{-7.5}) == doctest::Approx(-7.5).epsilon(1e-15));

    const double direct = std::log(std::exp(-2.0) + std::exp(-3.0));
    CHECK(log_sum_exp(std::vector<double>{-2.0, -3.0}) == doctest::Approx(direct).epsilon(1e-15));
    CHECK(log_sum_exp(std::vector<double>{-2.0, -3.0}) == doctest::Approx(-1.686738).epsilon(1e-6));
}

TEST_CASE("log_sum_exp handles huge magnitudes without overflow") {
    CHECK(log_sum_exp(std::vector<double>{-1e6, -1e6}) ==
          doctest::Approx(-1e6 + std::log(2.0)).epsilon(1e-12));
    CHECK(log_sum_exp(std::vector<double>{800.0, 800.0}) ==
          doctest::Approx(800.0 + std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("log_sum_exp equals max + log(sum exp(v - max)) and is permutation stable") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> spread(-400.0, 100.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(37);
        for (double& x : v) x = spread(rng);

        CHECK(log_sum_exp(v) == lse_reference(v));

        std::vector<double> shuffled = v;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CHECK(std::abs(log_sum_exp(shuffled) - log_sum_exp(v)) <= 1e-12);
    }
}

TEST_CASE("appending log(0) changes nothing, exactly") {
    std::vector<double> v{-2.0, -3.5, -1.25};
    const double base = log_sum_exp(v);
    v.push_back(kNegInf);
    CHECK(log_sum_exp(v) == base);

    CHECK(log_sum_exp(std::vector<double>{kNegInf, kNegInf}) == kNegInf);
}

TEST_CASE("adding a constant shifts the result by that constant") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> spread(-50.0, 50.0);
    for (double c : {-1000.0, -1.0, 0.25, 50.0}) {
        std::vector<double> v(20);
        for (double& x : v) x = spread(rng);
        std::vector<double> shifted = v;
        for (double& x : shifted) x += c;
        CHECK(std::abs(log_sum_exp(shifted) - (log_sum_exp(v) + c)) <= 1e-12);
    }
}

TEST_CASE("LogValue rejects NaN and +inf, admits -inf") {
    CHECK_THROWS_AS(LogValue::from_log(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(LogValue::from_log(kPosInf), std::invalid_argument);
    CHECK(LogValue::from_log(kNegInf).is_zero());
    CHECK(LogValue::zero().is_zero());
    CHECK(LogValue::from_log(-3.0).log() == -3.0);

    CHECK(LogValue::from_linear(0.0).is_zero());
    CHECK(LogValue::from_linear(2.0).log() == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(LogValue::from_linear(-1.0), std::invalid_argument);
}

TEST_CASE("log_sum_exp over LogValue spans matches the double path") {
    std::vector<LogValue> v{LogValue::from_log(-2.0), LogValue::zero(), LogValue::from_log(-3.0)};
    const LogValue total = log_sum_exp(std::span<const LogValue>(v));
    CHECK(total.log() == log_sum_exp(std::vector<double>{-2.0, -3.0}));

    const std::vector<LogValue> zeros{LogValue::zero(), LogValue::zero()};
    CHECK(log_sum_exp(std::span<const LogValue>(zeros)).is_zero());
    CHECK(log_sum_exp(std::span<const LogValue>{}).is_zero());
}

TEST_CASE("log_add_exp and log_sub_exp") {
    CHECK(marglik::log_add_exp(std::log(0.25), std::log(0.5)) ==
          doctest::Approx(std::log(0.75)).epsilon(1e-14));
    CHECK(marglik::log_add_exp(kNegInf, -1.0) == -1.0);
    CHECK(marglik::log_sub_exp(std::log(0.75), std::log(0.25)) ==
          doctest::Approx(std::log(0.5)).epsilon(1e-14));
    CHECK(marglik::log_sub_exp(-1.0, kNegInf) == -1.0);
    CHECK(marglik::log_sub_exp(-1.0, -1.0) == kNegInf);
    CHECK_THROWS_AS(marglik::log_sub_exp(-2.0, -1.0), std::invalid_argument);
}
