#include "marglik/models.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "marglik/errors.hpp"

namespace marglik {

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // log(2*pi)/2

double normal_log_pdf(double x, double mean, double var) {
    const double d = x - mean;
    return -kHalfLog2Pi - 0.5 * std::log(var) - 0.5 * d * d / var;
}

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double log_choose(unsigned n, unsigned k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) {
            throw std::invalid_argument(value);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("model parameter '" + key + "': cannot parse '" + value + "' as a number");
    }
}

unsigned parse_unsigned(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    if (v < 0.0 || v != std::floor(v)) {
        throw ConfigError("model parameter '" + key + "' must be a nonnegative integer");
    }
    return static_cast<unsigned>(v);
}

// Colon-separated list of numbers, e.g. "1.5:-2:0.25".
std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ':')) {
        out.push_back(parse_double(key, item));
    }
    if (out.empty()) {
        throw ConfigError("model parameter '" + key + "' must list at least one number");
    }
    return out;
}

std::string take(std::map<std::string, std::string>& params, const std::string& key,
                 const std::string& fallback) {
    auto it = params.find(key);
    if (it == params.end()) {
        return fallback;
    }
    std::string v = it->second;
    params.erase(it);
    return v;
}

std::string take_required(std::map<std::string, std::string>& params, const std::string& key,
                          const std::string& model) {
    auto it = params.find(key);
    if (it == params.end()) {
        throw ConfigError("model '" + model + "' requires parameter '" + key + "'");
    }
    std::string v = it->second;
    params.erase(it);
    return v;
}

void reject_leftovers(const std::map<std::string, std::string>& params, const std::string& model) {
    if (!params.empty()) {
        throw ConfigError("unknown parameter '" + params.begin()->first + "' for model '" + model + "'");
    }
}

} // namespace

SampleSet AnalyticModel::draw(std::size_t n, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<EvaluatedSample> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        EvaluatedSample s;
        s.theta = sample(rng);
        s.log_joint = log_joint(s.theta);
        rows.push_back(std::move(s));
    }
    return validate_sample_set(std::move(rows));
}

std::vector<double> AnalyticModel::draw_log_likelihoods(std::size_t n, std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(log_likelihood(sample(rng)));
    }
    return out;
}

AnalyticModel make_mvn_model(std::size_t dim, std::vector<double> mean,
                             std::vector<double> var_diag, double planted_log_ml) {
    if (dim == 0) {
        throw std::invalid_argument("mvn model requires dim >= 1");
    }
    if (mean.size() == 1 && dim > 1) {
        mean.assign(dim, mean.front());
    }
    if (var_diag.size() == 1 && dim > 1) {
        var_diag.assign(dim, var_diag.front());
    }
    if (mean.size() != dim || var_diag.size() != dim) {
        throw std::invalid_argument("mvn model mean/variance length must match dim");
    }
    for (double v : var_diag) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("mvn model requires positive finite variances");
        }
    }

    AnalyticModel m;
    m.name = "mvn";
    m.dim = dim;
    m.true_log_ml = planted_log_ml;
    m.support = SupportRanges::unbounded(dim);

    std::vector<double> sd(dim);
    for (std::size_t k = 0; k < dim; ++k) {
        sd[k] = std::sqrt(var_diag[k]);
    }
    m.sample = [dim, mean, sd](std::mt19937_64& rng) {
        std::normal_distribution<double> unit(0.0, 1.0);
        std::vector<double> theta(dim);
        for (std::size_t k = 0; k < dim; ++k) {
            theta[k] = mean[k] + sd[k] * unit(rng);
        }
        return theta;
    };
    m.log_joint = [dim, mean, var_diag, planted_log_ml](std::span<const double> theta) {
        double lp = planted_log_ml;
        for (std::size_t k = 0; k < dim; ++k) {
            lp += normal_log_pdf(theta[k], mean[k], var_diag[k]);
        }
        return lp;
    };
    // A planted-normalizer model has no prior/likelihood split; the joint
    // stands in for the likelihood so the harmonic-mean path stays usable.
    m.log_likelihood = m.log_joint;
    return m;
}

AnalyticModel make_normal_normal_model(double prior_sd, double noise_sd,
                                       std::vector<double> observations) {
    if (!(prior_sd > 0.0) || !(noise_sd > 0.0)) {
        throw std::invalid_argument("normal-normal model requires positive prior_sd and noise_sd");
    }
    if (observations.empty()) {
        throw std::invalid_argument("normal-normal model requires at least one observation");
    }
    const double t2 = prior_sd * prior_sd;
    const double s2 = noise_sd * noise_sd;
    const double count = static_cast<double>(observations.size());
    double sum_x = 0.0;
    double sum_x2 = 0.0;
    for (double x : observations) {
        sum_x += x;
        sum_x2 += x * x;
    }
    const double posterior_var = 1.0 / (1.0 / t2 + count / s2);
    const double posterior_mean = posterior_var * sum_x / s2;

    AnalyticModel m;
    m.name = "normal-normal";
    m.dim = 1;
    m.support = SupportRanges::unbounded(1);
    // Integrate the joint exponent in closed form by completing the square
    // in theta.
    m.true_log_ml = -0.5 * count * std::log(2.0 * std::numbers::pi * s2) -
                    0.5 * std::log(2.0 * std::numbers::pi * t2) +
                    0.5 * std::log(2.0 * std::numbers::pi * posterior_var) -
                    0.5 * sum_x2 / s2 + 0.5 * posterior_mean * posterior_mean / posterior_var;

    m.sample = [posterior_mean, posterior_var](std::mt19937_64& rng) {
        std::normal_distribution<double> posterior(posterior_mean, std::sqrt(posterior_var));
        return std::vector<double>{posterior(rng)};
    };
    auto log_lik = [observations, s2](std::span<const double> theta) {
        double ll = 0.0;
        for (double x : observations) {
            ll += normal_log_pdf(x, theta[0], s2);
        }
        return ll;
    };
    m.log_likelihood = log_lik;
    m.log_joint = [t2, log_lik](std::span<const double> theta) {
        return normal_log_pdf(theta[0], 0.0, t2) + log_lik(theta);
    };
    return m;
}

AnalyticModel make_beta_binomial_model(double alpha, double beta, unsigned trials,
                                       unsigned successes) {
    if (!(alpha > 0.0) || !(beta > 0.0)) {
        throw std::invalid_argument("beta-binomial model requires alpha, beta > 0");
    }
    if (successes > trials) {
        throw std::invalid_argument("beta-binomial model requires successes <= trials");
    }
    const double k = static_cast<double>(successes);
    const double nk = static_cast<double>(trials - successes);
    const double lc = log_choose(trials, successes);
    const double log_prior_norm = log_beta(alpha, beta);

    AnalyticModel m;
    m.name = "beta-binomial";
    m.dim = 1;
    m.true_log_ml = lc + log_beta(k + alpha, nk + beta) - log_prior_norm;

    constexpr double kEps = 1e-6;
    m.support = SupportRanges{{kEps}, {1.0 - kEps}};

    const double post_a = k + alpha;
    const double post_b = nk + beta;
    m.sample = [post_a, post_b](std::mt19937_64& rng) {
        std::gamma_distribution<double> ga(post_a, 1.0);
        std::gamma_distribution<double> gb(post_b, 1.0);
        const double x = ga(rng);
        const double y = gb(rng);
        return std::vector<double>{x / (x + y)};
    };
    auto log_lik = [lc, k, nk](std::span<const double> theta) {
        return lc + k * std::log(theta[0]) + nk * std::log1p(-theta[0]);
    };
    m.log_likelihood = log_lik;
    m.log_joint = [alpha, beta, log_prior_norm, log_lik](std::span<const double> theta) {
        const double prior = (alpha - 1.0) * std::log(theta[0]) +
                             (beta - 1.0) * std::log1p(-theta[0]) - log_prior_norm;
        return prior + log_lik(theta);
    };
    return m;
}

AnalyticModel make_model(const std::string& name,
                         const std::map<std::string, std::string>& params) {
    std::map<std::string, std::string> p = params;
    try {
        if (name == "mvn") {
            const auto dim = parse_unsigned("dim", take(p, "dim", "1"));
            const auto mean = parse_double_list("mean", take(p, "mean", "0"));
            const auto var = parse_double_list("var", take(p, "var", "1"));
            const auto planted = parse_double("planted", take(p, "planted", "0"));
            reject_leftovers(p, name);
            return make_mvn_model(dim, mean, var, planted);
        }
        if (name == "normal-normal") {
            const auto tau = parse_double("tau", take_required(p, "tau", name));
            const auto sigma = parse_double("sigma", take_required(p, "sigma", name));
            const auto obs = parse_double_list("obs", take_required(p, "obs", name));
            reject_leftovers(p, name);
            return make_normal_normal_model(tau, sigma, obs);
        }
        if (name == "beta-binomial") {
            const auto alpha = parse_double("alpha", take(p, "alpha", "1"));
            const auto beta = parse_double("beta", take(p, "beta", "1"));
            const auto trials = parse_unsigned("trials", take_required(p, "trials", name));
            const auto successes = parse_unsigned("successes", take_required(p, "successes", name));
            reject_leftovers(p, name);
            return make_beta_binomial_model(alpha, beta, trials, successes);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("model '") + name + "': " + e.what());
    }
    throw ConfigError("unknown model '" + name + "' (known: mvn, normal-normal, beta-binomial)");
}

} // namespace marglik
