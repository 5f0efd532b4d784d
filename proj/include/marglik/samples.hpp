#ifndef MARGLIK_SAMPLES_HPP
#define MARGLIK_SAMPLES_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

namespace marglik {

// One posterior draw theta together with its unnormalized log joint density
// log p(theta ^ x | T).  Both are finite after validation.
struct EvaluatedSample {
    std::vector<double> theta;
    double log_joint = 0.0;
};

// An ordered, validated collection of evaluated samples sharing one
// dimension.  Order is preserved exactly as ingested; partitioning depends
// on it.  Immutable after construction.
class SampleSet {
public:
    std::size_t size() const { return samples_.size(); }
    std::size_t dim() const { return dim_; }
    const std::vector<EvaluatedSample>& samples() const { return samples_; }
    const EvaluatedSample& operator[](std::size_t i) const { return samples_[i]; }

private:
    SampleSet(std::vector<EvaluatedSample> samples, std::size_t dim)
        : samples_(std::move(samples)), dim_(dim) {}

    friend SampleSet validate_sample_set(std::vector<EvaluatedSample> rows);
    friend SampleSet shuffle_samples(const SampleSet& s, std::uint64_t seed);

    std::vector<EvaluatedSample> samples_;
    std::size_t dim_;
};

// Checks every row for a consistent positive dimension and finite values
// (log_joint of -inf is rejected: a posterior draw has positive density at
// itself).  Rows are numbered from 1; throws DimensionMismatchError or
// NonFiniteValueError naming the first offending row.
SampleSet validate_sample_set(std::vector<EvaluatedSample> rows);

// Deterministic seeded permutation of a sample set, for callers whose chains
// are autocorrelated and who want the partition subsets decorrelated.
SampleSet shuffle_samples(const SampleSet& s, std::uint64_t seed);

} // namespace marglik

#endif
