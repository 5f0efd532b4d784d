#ifndef MARGLIK_ERRORS_HPP
#define MARGLIK_ERRORS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace marglik {

// Row numbering convention for input errors: row 0 is the header line of a
// delimited file; data rows count from 1 in file order.

// A row whose parameter vector length disagrees with the rest of the input.
class DimensionMismatchError : public std::runtime_error {
public:
    DimensionMismatchError(std::size_t row, std::size_t expected, std::size_t got)
        : std::runtime_error("row " + std::to_string(row) + ": dimension mismatch, expected " +
                             std::to_string(expected) + " coordinates, got " + std::to_string(got)),
          row(row), expected(expected), got(got) {}

    std::size_t row;
    std::size_t expected;
    std::size_t got;
};

// A NaN or infinite value where a finite one is required.
class NonFiniteValueError : public std::runtime_error {
public:
    NonFiniteValueError(std::size_t row, std::string field)
        : std::runtime_error("row " + std::to_string(row) + ": non-finite value in field '" + field + "'"),
          row(row), field(std::move(field)) {}

    std::size_t row;
    std::string field;
};

// Malformed input that cannot be interpreted as a sample row at all.
class SampleParseError : public std::runtime_error {
public:
    SampleParseError(std::size_t row, const std::string& reason)
        : std::runtime_error("row " + std::to_string(row) + ": " + reason), row(row) {}

    std::size_t row;
};

// Partitioning would leave fewer than two estimation samples.
class InsufficientSamplesError : public std::runtime_error {
public:
    InsufficientSamplesError(std::size_t total, std::size_t m_hist, std::size_t t_tune)
        : std::runtime_error("insufficient samples: N=" + std::to_string(total) + " with m=" +
                             std::to_string(m_hist) + " histogram and t=" + std::to_string(t_tune) +
                             " tuning samples leaves fewer than 2 for estimation"),
          total(total), m_hist(m_hist), t_tune(t_tune) {}

    std::size_t total;
    std::size_t m_hist;
    std::size_t t_tune;
};

// A coordinate with zero sample standard deviation; it cannot be standardized
// and must be removed or scaled manually.
class DegenerateDimensionError : public std::runtime_error {
public:
    explicit DegenerateDimensionError(std::size_t dim)
        : std::runtime_error("dimension " + std::to_string(dim) +
                             " has zero sample standard deviation over the histogram subset"),
          dim(dim) {}

    std::size_t dim;
};

// Every candidate bin width left all tuning samples in empty bins.
class NoPositiveCoverageError : public std::runtime_error {
public:
    NoPositiveCoverageError()
        : std::runtime_error("every candidate bin width gives zero coverage; "
                             "tuning samples are disjoint from the histogram samples") {}
};

// Every estimation sample fell in an empty histogram bin.
class AllRatiosZeroError : public std::runtime_error {
public:
    AllRatiosZeroError()
        : std::runtime_error("all estimation samples fell in empty histogram bins; "
                             "bin-width selection failed for this input") {}
};

class TooFewSamplesError : public std::runtime_error {
public:
    explicit TooFewSamplesError(std::size_t n)
        : std::runtime_error("need at least 2 estimation samples for a confidence interval, got " +
                             std::to_string(n)),
          n(n) {}

    std::size_t n;
};

// An occupied histogram bin extends outside the declared positive-support
// range; continuing would risk an infinite-variance estimate.
class SupportViolationError : public std::runtime_error {
public:
    SupportViolationError(std::vector<std::int64_t> bin, std::size_t dim, double bin_lo,
                          double bin_hi, double range_lo, double range_hi)
        : std::runtime_error("occupied bin spans [" + std::to_string(bin_lo) + ", " +
                             std::to_string(bin_hi) + ") on dimension " + std::to_string(dim) +
                             ", outside declared support [" + std::to_string(range_lo) + ", " +
                             std::to_string(range_hi) + "]"),
          bin(std::move(bin)), dim(dim), bin_lo(bin_lo), bin_hi(bin_hi) {}

    std::vector<std::int64_t> bin;
    std::size_t dim;
    double bin_lo;
    double bin_hi;
};

// Bad command-line configuration: unknown model, invalid flag value, etc.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace marglik

#endif
