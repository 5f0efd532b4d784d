#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "marglik/errors.hpp"
#include "marglik/models.hpp"

#include "testutil.hpp"

using namespace marglik;

namespace {

// Quadrature of exp(log_joint) over [a,b]; the normalizer oracle for the
// one-dimensional models.
double integrate_joint(const AnalyticModel& m, double a, double b, std::size_t intervals) {
    return testutil::simpson(
        [&m](double x) {
            const std::vector<double> theta{x};
            const double lp = m.log_joint(theta);
            return std::isfinite(lp) ? std::exp(lp) : 0.0;
        },
        a, b, intervals);
}

} // namespace

TEST_CASE("mvn model plants its normalizer") {
    SUBCASE("standard normal in one dimension") {
        const AnalyticModel m = make_mvn_model(1, {0.0}, {1.0}, 0.0);
        CHECK(m.true_log_ml == 0.0);
        CHECK(m.log_joint(std::vector<double>{0.0}) == doctest::Approx(-0.918939).epsilon(1e-6));
    }
    SUBCASE("planted constant shifts every density") {
        const AnalyticModel base = make_mvn_model(1, {0.0}, {1.0}, 0.0);
        const AnalyticModel planted = make_mvn_model(1, {0.0}, {1.0}, 7.3);
        CHECK(planted.true_log_ml == 7.3);
        for (double x : {-1.5, 0.0, 2.25}) {
            const std::vector<double> theta{x};
            CHECK(planted.log_joint(theta) ==
                  doctest::Approx(base.log_joint(theta) + 7.3).epsilon(1e-12));
        }
    }
    SUBCASE("five dimensions at the mode") {
        const AnalyticModel m = make_mvn_model(5, {0.0}, {1.0}, 0.0);
        const std::vector<double> origin(5, 0.0);
        CHECK(m.log_joint(origin) == doctest::Approx(-4.594693).epsilon(1e-6));
        CHECK(m.dim == 5);
    }
    SUBCASE("scalar mean and variance broadcast across dimensions") {
        const AnalyticModel m = make_mvn_model(3, {2.0}, {4.0}, 0.0);
        const SampleSet s = m.draw(10, 1);
        CHECK(s.dim() == 3);
    }
}

TEST_CASE("normal-normal conjugate marginal") {
    SUBCASE("single zero observation with unit prior and noise") {
        const AnalyticModel m = make_normal_normal_model(1.0, 1.0, {0.0});
        const double expected = -0.5 * std::log(4.0 * std::numbers::pi);
        CHECK(m.true_log_ml == doctest::Approx(expected).epsilon(1e-12));
        CHECK(m.true_log_ml == doctest::Approx(-1.265512).epsilon(1e-6));
    }
    SUBCASE("vanishing noise concentrates the marginal at the prior density") {
        const AnalyticModel m = make_normal_normal_model(1.0, 1e-3, {0.0});
        const double prior_at_zero = -0.5 * std::log(2.0 * std::numbers::pi);
        CHECK(std::abs(m.true_log_ml - prior_at_zero) < 1e-4);
    }
    SUBCASE("two observations cross-checked by quadrature") {
        const AnalyticModel m = make_normal_normal_model(1.0, 1.0, {1.0, -1.0});
        const double quad = integrate_joint(m, -12.0, 12.0, 2'000'000);
        CHECK(std::abs(std::log(quad) - m.true_log_ml) <= 1e-6);
    }
}

TEST_CASE("beta-binomial marginal") {
    SUBCASE("uniform prior, one success in two trials") {
        const AnalyticModel m = make_beta_binomial_model(1.0, 1.0, 2, 1);
        CHECK(m.true_log_ml == doctest::Approx(std::log(1.0 / 3.0)).epsilon(1e-12));
        CHECK(m.true_log_ml == doctest::Approx(-1.098612).epsilon(1e-6));
    }
    SUBCASE("no data means marginal one") {
        const AnalyticModel m = make_beta_binomial_model(1.0, 1.0, 0, 0);
        CHECK(m.true_log_ml == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("informative prior cross-checked by quadrature") {
        const AnalyticModel m = make_beta_binomial_model(2.0, 3.0, 5, 2);
        const double quad = integrate_joint(m, 0.0, 1.0, 2'000'000);
        CHECK(std::abs(std::log(quad) - m.true_log_ml) <= 1e-6);
    }
    SUBCASE("declared support leaves out the boundary") {
        const AnalyticModel m = make_beta_binomial_model(1.0, 1.0, 2, 1);
        CHECK(m.support.lo[0] == doctest::Approx(1e-6));
        CHECK(m.support.hi[0] == doctest::Approx(1.0 - 1e-6));
    }
    SUBCASE("draws stay strictly inside (0,1)") {
        const AnalyticModel m = make_beta_binomial_model(1.0, 1.0, 2, 1);
        const SampleSet s = m.draw(5000, 9);
        for (const EvaluatedSample& row : s.samples()) {
            CHECK(row.theta[0] > 0.0);
            CHECK(row.theta[0] < 1.0);
        }
    }
}

TEST_CASE("every one-dimensional model normalizes to its true_log_ml") {
    struct Case {
        AnalyticModel model;
        double lo;
        double hi;
    };
    const std::vector<Case> cases{
        {make_mvn_model(1, {0.5}, {2.0}, 0.0), 0.5 - 18.0, 0.5 + 18.0},
        {make_mvn_model(1, {0.0}, {1.0}, -4.2), -12.0, 12.0},
        {make_normal_normal_model(2.0, 0.5, {0.3, -0.9, 1.4}), -10.0, 10.0},
        {make_beta_binomial_model(1.0, 1.0, 2, 1), 0.0, 1.0},
        {make_beta_binomial_model(2.0, 3.0, 5, 2), 0.0, 1.0},
    };
    for (const Case& c : cases) {
        const double quad = integrate_joint(c.model, c.lo, c.hi, 2'000'000);
        CHECK(std::abs(std::log(quad) - c.model.true_log_ml) <= 1e-6);
    }
}

TEST_CASE("posterior draws actually follow the posterior (first two moments)") {
    // normal-normal: posterior N(mu, v) with v = 1/(1/t^2 + J/s^2)
    const AnalyticModel m = make_normal_normal_model(10.0, 1.0, {0.0});
    const double v = 1.0 / (1.0 / 100.0 + 1.0);
    const SampleSet s = m.draw(200000, 31);
    double mean = 0.0;
    for (const EvaluatedSample& row : s.samples()) mean += row.theta[0];
    mean /= static_cast<double>(s.size());
    double var = 0.0;
    for (const EvaluatedSample& row : s.samples()) {
        var += (row.theta[0] - mean) * (row.theta[0] - mean);
    }
    var /= static_cast<double>(s.size() - 1);
    CHECK(std::abs(mean - 0.0) < 0.02);
    CHECK(std::abs(var - v) < 0.02);
}

TEST_CASE("samplers are deterministic per seed") {
    const AnalyticModel m = make_mvn_model(2, {0.0, 1.0}, {1.0, 2.0}, 0.0);
    const SampleSet a = m.draw(50, 7);
    const SampleSet b = m.draw(50, 7);
    const SampleSet c = m.draw(50, 8);
    bool identical = true;
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        identical = identical && a[i].theta == b[i].theta && a[i].log_joint == b[i].log_joint;
        differs = differs || a[i].theta != c[i].theta;
    }
    CHECK(identical);
    CHECK(differs);
}

TEST_CASE("make_model resolves names and parameters") {
    SUBCASE("mvn defaults") {
        const AnalyticModel m = make_model("mvn", {});
        CHECK(m.dim == 1);
        CHECK(m.true_log_ml == 0.0);
    }
    SUBCASE("normal-normal with an observation list") {
        const AnalyticModel m =
            make_model("normal-normal", {{"tau", "1"}, {"sigma", "1"}, {"obs", "1:-1"}});
        const AnalyticModel direct = make_normal_normal_model(1.0, 1.0, {1.0, -1.0});
        CHECK(m.true_log_ml == doctest::Approx(direct.true_log_ml).epsilon(1e-14));
    }
    SUBCASE("beta-binomial") {
        const AnalyticModel m = make_model(
            "beta-binomial", {{"alpha", "2"}, {"beta", "3"}, {"trials", "5"}, {"successes", "2"}});
        CHECK(m.name == "beta-binomial");
    }
    SUBCASE("unknown model") {
        CHECK_THROWS_AS(make_model("cauchy", {}), ConfigError);
    }
    SUBCASE("unknown parameter") {
        CHECK_THROWS_AS(make_model("mvn", {{"bogus", "1"}}), ConfigError);
    }
    SUBCASE("missing required parameter") {
        CHECK_THROWS_AS(make_model("normal-normal", {{"tau", "1"}}), ConfigError);
    }
    SUBCASE("malformed number") {
        CHECK_THROWS_AS(make_model("mvn", {{"dim", "two"}}), ConfigError);
    }
}
