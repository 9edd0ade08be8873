// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

#include "pilotreuse/types.hpp"

namespace pilotreuse {

/// Purpose tags that keep derived substreams disjoint.
enum class StreamTag : std::uint32_t {
    Scenario = 1,
    Activity = 2,
    Assignment = 3,
    Channel = 4,
    Test = 99,
};

/// Seeded random stream. Substreams are derived from (master seed, tag, ids)
/// so results never depend on the order in which workers pick up tasks.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : RandomStream(seed, StreamTag::Test, {}) {}

    RandomStream(std::uint64_t master, StreamTag tag, std::initializer_list<std::uint64_t> ids) {
        std::vector<std::uint32_t> words{static_cast<std::uint32_t>(master),
                                         static_cast<std::uint32_t>(master >> 32),
                                         static_cast<std::uint32_t>(tag)};
        for (auto id : ids) {
            words.push_back(static_cast<std::uint32_t>(id));
            words.push_back(static_cast<std::uint32_t>(id >> 32));
        }
        std::seed_seq seq(words.begin(), words.end());
        engine_.seed(seq);
    }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    double uniform01() { return uniform(0.0, 1.0); }

    double normal() { return normal_(engine_); }

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    cplx complex_normal(double variance = 1.0) {
        const double s = std::sqrt(0.5 * variance);
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {s * re, s * im};
    }

    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace pilotreuse
