#include "marglik/samples.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "marglik/errors.hpp"

namespace marglik {

SampleSet validate_sample_set(std::vector<EvaluatedSample> rows) {
    if (rows.empty()) {
        return SampleSet({}, 0);
    }
    const std::size_t dim = rows.front().theta.size();
    if (dim == 0) {
        throw DimensionMismatchError(1, 1, 0);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t row = i + 1;
        const EvaluatedSample& s = rows[i];
        if (s.theta.size() != dim) {
            throw DimensionMismatchError(row, dim, s.theta.size());
        }
        for (std::size_t k = 0; k < dim; ++k) {
            if (!std::isfinite(s.theta[k])) {
                throw NonFiniteValueError(row, "theta_" + std::to_string(k + 1));
            }
        }
        if (!std::isfinite(s.log_joint)) {
            throw NonFiniteValueError(row, "log_joint");
        }
    }
    return SampleSet(std::move(rows), dim);
}

SampleSet shuffle_samples(const SampleSet& s, std::uint64_t seed) {
    std::vector<EvaluatedSample> rows = s.samples();
    std::mt19937_64 rng(seed);
    std::shuffle(rows.begin(), rows.end(), rng);
    return SampleSet(std::move(rows), s.dim());
}

} // namespace marglik
