#ifndef MARGLIK_MODELS_HPP
#define MARGLIK_MODELS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "marglik/preprocess.hpp"
#include "marglik/samples.hpp"

namespace marglik {

// A seeded posterior sampler paired with the closed-form log marginal
// likelihood it should reproduce.  Ground truth for the acceptance tests and
// for the CLI generate/compare commands; exp(log_joint(theta) - true_log_ml)
// is the normalized density of the sampler's distribution.
struct AnalyticModel {
    std::string name;
    std::size_t dim = 0;
    double true_log_ml = 0.0;
    SupportRanges support;
    std::function<std::vector<double>(std::mt19937_64&)> sample;
    std::function<double(std::span<const double>)> log_joint;
    // log p(x|theta,T), for the harmonic-mean baseline.
    std::function<double(std::span<const double>)> log_likelihood;

    // n evaluated posterior draws; identical seeds give identical sequences.
    SampleSet draw(std::size_t n, std::uint64_t seed) const;
    std::vector<double> draw_log_likelihoods(std::size_t n, std::uint64_t seed) const;
};

// Independent normal coordinates with a planted normalizing constant:
// log_joint = planted_log_ml + sum_k log N(theta_k; mean_k, var_k).
AnalyticModel make_mvn_model(std::size_t dim, std::vector<double> mean,
                             std::vector<double> var_diag, double planted_log_ml);

// Normal prior N(0, prior_sd^2) on the mean of a normal likelihood with
// known noise_sd; conjugate posterior and closed-form marginal.
AnalyticModel make_normal_normal_model(double prior_sd, double noise_sd,
                                       std::vector<double> observations);

// Beta(alpha, beta) prior on a binomial success probability; posterior is
// Beta(k+alpha, n-k+beta) and the marginal is a ratio of beta functions.
// Declares support [eps, 1-eps] with eps = 1e-6 because the posterior
// density vanishes at the boundary.
AnalyticModel make_beta_binomial_model(double alpha, double beta, unsigned trials,
                                       unsigned successes);

// CLI-facing factory: model names "mvn", "normal-normal", "beta-binomial",
// parameters as key=value strings.  Throws ConfigError on unknown names or
// parameters.
AnalyticModel make_model(const std::string& name,
                         const std::map<std::string, std::string>& params);

} // namespace marglik

#endif
