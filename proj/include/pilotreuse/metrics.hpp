// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "pilotreuse/types.hpp"

namespace pilotreuse {

struct Rate {
    double achievable = 0.0;  // E[log2(1 + gamma)]
    double net = 0.0;         // (1 - tau/Tc) * achievable
};

inline Rate achievable_rate(std::span<const double> sinr, int tau, int coherence) {
    if (sinr.empty()) throw DomainError("achievable_rate: no SINR samples");
    if (tau > coherence) throw DomainError("achievable_rate: tau exceeds coherence length");
    double sum = 0.0;
    for (double g : sinr) sum += std::log2(1.0 + g);
    const double ach = sum / static_cast<double>(sinr.size());
    return {ach, (1.0 - static_cast<double>(tau) / coherence) * ach};
}

struct CdfPoint {
    double value;
    double probability;
};

/// Right-continuous step CDF evaluated at the sorted samples; ties collapse
/// to one point carrying the cumulative probability.
inline std::vector<CdfPoint> empirical_cdf(std::span<const double> samples) {
    if (samples.empty()) throw DomainError("empirical_cdf: no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<CdfPoint> out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
        out.push_back({sorted[i], static_cast<double>(i + 1) / n});
    }
    return out;
}

/// Empirical quantile (inverse of the step CDF): smallest sample x with F(x) >= q.
inline double empirical_quantile(std::span<const double> samples, double q) {
    if (samples.empty()) throw DomainError("empirical_quantile: no samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = sorted.size();
    auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    idx = std::clamp<std::size_t>(idx, 1, n);
    return sorted[idx - 1];
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool overlaps(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }
};

/// Wilson score interval for a binomial proportion; z = 1.96 gives 95%.
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    // The closed form leaves round-off at the boundaries; pin them exactly.
    const double lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
    const double hi = successes == trials ? 1.0 : std::min(1.0, center + half);
    return {lo, hi};
}

}  // namespace pilotreuse
