#include "marglik/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "marglik/errors.hpp"

namespace marglik {

PartitionPlan partition_samples(const SampleSet& s, std::size_t t_tune,
                                std::optional<std::size_t> m_override) {
    if (s.size() == 0) {
        throw InsufficientSamplesError(0, 0, t_tune);
    }
    if (t_tune < 1) {
        throw std::invalid_argument("partition_samples requires t_tune >= 1");
    }
    const std::size_t total = s.size();
    std::size_t m_hist;
    if (m_override) {
        m_hist = *m_override;
        if (m_hist < 1) {
            throw std::invalid_argument("m_override must be at least 1");
        }
    } else {
        const double n = static_cast<double>(total);
        m_hist = static_cast<std::size_t>(std::floor(std::min(0.2 * n, 2.0 * std::sqrt(n))));
        m_hist = std::max<std::size_t>(m_hist, 1);
    }
    if (m_hist + t_tune + 2 > total) {
        throw InsufficientSamplesError(total, m_hist, t_tune);
    }
    return PartitionPlan{m_hist, t_tune, total - m_hist - t_tune};
}

SampleSplit split_samples(const SampleSet& s, const PartitionPlan& plan) {
    if (plan.m_hist + plan.t_tune + plan.n_eval != s.size()) {
        throw std::invalid_argument("partition plan does not match sample set size");
    }
    std::span<const EvaluatedSample> all(s.samples());
    return SampleSplit{
        all.subspan(0, plan.m_hist),
        all.subspan(plan.m_hist, plan.t_tune),
        all.subspan(plan.m_hist + plan.t_tune, plan.n_eval),
    };
}

ScalingVector compute_scaling(std::span<const EvaluatedSample> hist_samples) {
    if (hist_samples.size() < 2) {
        throw std::invalid_argument("compute_scaling requires at least 2 samples");
    }
    const std::size_t dim = hist_samples.front().theta.size();
    const double m = static_cast<double>(hist_samples.size());

    ScalingVector sc;
    sc.scale.resize(dim);
    sc.log_jacobian = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
        double mean = 0.0;
        for (const EvaluatedSample& s : hist_samples) {
            mean += s.theta[k];
        }
        mean /= m;
        double ss = 0.0;
        for (const EvaluatedSample& s : hist_samples) {
            const double d = s.theta[k] - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / (m - 1.0));
        if (!(sd > 0.0)) {
            throw DegenerateDimensionError(k);
        }
        sc.scale[k] = sd;
        sc.log_jacobian += std::log(sd);
    }
    return sc;
}

ScalingVector identity_scaling(std::size_t dim) {
    return ScalingVector{std::vector<double>(dim, 1.0), 0.0};
}

EvaluatedSample apply_scaling(const EvaluatedSample& s, const ScalingVector& sc) {
    if (s.theta.size() != sc.scale.size()) {
        throw std::invalid_argument("apply_scaling dimension mismatch");
    }
    EvaluatedSample out;
    out.theta.resize(s.theta.size());
    for (std::size_t k = 0; k < s.theta.size(); ++k) {
        out.theta[k] = s.theta[k] / sc.scale[k];
    }
    out.log_joint = s.log_joint + sc.log_jacobian;
    return out;
}

SupportRanges SupportRanges::unbounded(std::size_t dim) {
    const double inf = std::numeric_limits<double>::infinity();
    return SupportRanges{std::vector<double>(dim, -inf), std::vector<double>(dim, inf)};
}

std::optional<SupportViolation> check_support(const ArrogantHistogram& hist,
                                              const ScalingVector& sc,
                                              const SupportRanges& ranges) {
    if (ranges.dim() != hist.dim() || sc.scale.size() != hist.dim()) {
        throw std::invalid_argument("check_support dimension mismatch");
    }
    for (std::size_t k = 0; k < ranges.dim(); ++k) {
        if (!(ranges.lo[k] < ranges.hi[k])) {
            throw std::invalid_argument("support range must satisfy lo < hi");
        }
    }
    const double h = hist.bin_width();
    for (const auto& [key, _] : hist.bins()) {
        for (std::size_t k = 0; k < key.size(); ++k) {
            // Whole-bin containment in original units, conservatively closed
            // on both ends.
            const double lo = static_cast<double>(key[k]) * h * sc.scale[k];
            const double hi = static_cast<double>(key[k] + 1) * h * sc.scale[k];
            if (lo < ranges.lo[k] || hi > ranges.hi[k]) {
                return SupportViolation{key, k, lo, hi, ranges.lo[k], ranges.hi[k]};
            }
        }
    }
    return std::nullopt;
}

} // namespace marglik
