// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "pilotreuse/features.hpp"

namespace pilotreuse {

/// Pilot assignment schemes plus the perfect-CSI reference used by the harness.
enum class Method { NnChart, NnCmd, NnPosition, Random, Sgps, PerfectCsi, BruteForce };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::NnChart: return "NN_CHART";
        case Method::NnCmd: return "NN_CMD";
        case Method::NnPosition: return "NN_POSITION";
        case Method::Random: return "RANDOM";
        case Method::Sgps: return "SGPS";
        case Method::PerfectCsi: return "PERFECT_CSI";
        case Method::BruteForce: return "BRUTE_FORCE";
    }
    return "?";
}

inline std::optional<Method> parse_method(const std::string& name) {
    for (auto m : {Method::NnChart, Method::NnCmd, Method::NnPosition, Method::Random, Method::Sgps,
                   Method::PerfectCsi, Method::BruteForce}) {
        if (name == to_string(m)) return m;
    }
    return std::nullopt;
}

/// Pilot index per UE (0-based internally, 1-based in exported files).
struct PilotAssignment {
    std::vector<int> pilot;
    int pilot_count = 0;
    Method method = Method::Random;
    std::uint64_t seed = 0;
    std::string feature;              // identity of the feature set that drove it
    std::vector<std::size_t> order;   // UEs in the order they were assigned

    std::size_t size() const { return pilot.size(); }
};

/// Co-pilot groups G_k and active interferers I_k, indexed like the active set.
struct CopilotSets {
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::vector<std::size_t>> interferers;
};

inline std::vector<std::size_t> pilot_multiplicities(const PilotAssignment& a) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(a.pilot_count), 0);
    for (int p : a.pilot) ++counts[static_cast<std::size_t>(p)];
    return counts;
}

inline bool is_balanced(const PilotAssignment& a) {
    const auto counts = pilot_multiplicities(a);
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    return *hi - *lo <= 1;
}

/// Greedy nearest-neighbor chain: pilots are handed out cyclically 1..tau,
/// each to the unassigned UE closest (squared Euclidean, ties to the lower
/// index) to the previously assigned one.
inline PilotAssignment nearest_neighbor_assignment(const FeatureSet& features, int tau, std::size_t start) {
    const std::size_t n = features.size();
    if (n == 0) throw DomainError("nearest_neighbor_assignment: empty feature set");
    if (tau < 1) throw DomainError("nearest_neighbor_assignment: tau must be >= 1");
    if (start >= n) throw DomainError("nearest_neighbor_assignment: start UE out of range");
    if (!features.vectors.allFinite()) throw DomainError("nearest_neighbor_assignment: non-finite feature");

    PilotAssignment out;
    out.pilot.assign(n, -1);
    out.pilot_count = tau;
    out.feature = to_string(features.kind);
    switch (features.kind) {
        case FeatureKind::Chart: out.method = Method::NnChart; break;
        case FeatureKind::CmdRow: out.method = Method::NnCmd; break;
        case FeatureKind::Position: out.method = Method::NnPosition; break;
    }
    out.order.reserve(n);

    std::vector<char> assigned(n, 0);
    std::size_t prev = start;
    out.pilot[start] = 0;
    assigned[start] = 1;
    out.order.push_back(start);
    int p = 1;
    for (std::size_t step = 1; step < n; ++step) {
        if (p == tau) p = 0;
        std::size_t best = n;
        double best_dist = std::numeric_limits<double>::infinity();
        const auto ref = features.vectors.row(static_cast<Eigen::Index>(prev));
        for (std::size_t j = 0; j < n; ++j) {
            if (assigned[j]) continue;
            const double dist = (features.vectors.row(static_cast<Eigen::Index>(j)) - ref).squaredNorm();
            if (dist < best_dist) {
                best_dist = dist;
                best = j;
            }
        }
        out.pilot[best] = p;
        assigned[best] = 1;
        out.order.push_back(best);
        prev = best;
        ++p;
    }
    return out;
}

/// Same, with the starting UE drawn from `rng`.
inline PilotAssignment nearest_neighbor_assignment(const FeatureSet& features, int tau, RandomStream& rng) {
    if (features.size() == 0) throw DomainError("nearest_neighbor_assignment: empty feature set");
    return nearest_neighbor_assignment(features, tau, rng.index(features.size()));
}

/// Random baseline: a shuffled balanced cyclic list, or iid uniform pilots.
inline PilotAssignment random_assignment(std::size_t n, int tau, RandomStream& rng, bool balanced = true) {
    if (tau < 1) throw DomainError("random_assignment: tau must be >= 1");
    PilotAssignment out;
    out.method = Method::Random;
    out.pilot_count = tau;
    out.feature = balanced ? "balanced" : "iid";
    out.pilot.resize(n);
    if (balanced) {
        for (std::size_t i = 0; i < n; ++i) out.pilot[i] = static_cast<int>(i % static_cast<std::size_t>(tau));
        std::shuffle(out.pilot.begin(), out.pilot.end(), rng.engine());
    } else {
        for (auto& p : out.pilot) p = static_cast<int>(rng.index(static_cast<std::size_t>(tau)));
    }
    return out;
}

/// Balance tracker: every pilot ends with floor(N/tau) or ceil(N/tau) users.
class BalancedCounts {
public:
    BalancedCounts(std::size_t n, int tau)
        : counts_(static_cast<std::size_t>(tau), 0), base_(n / static_cast<std::size_t>(tau)),
          extra_(n % static_cast<std::size_t>(tau)) {}

    bool can_take(int p) const {
        const auto c = counts_[static_cast<std::size_t>(p)];
        return c < base_ || (c == base_ && full_ < extra_);
    }
    void take(int p) {
        if (++counts_[static_cast<std::size_t>(p)] == base_ + 1) ++full_;
    }
    void release(int p) {
        if (counts_[static_cast<std::size_t>(p)]-- == base_ + 1) --full_;
    }
    std::size_t count(int p) const { return counts_[static_cast<std::size_t>(p)]; }

private:
    std::vector<std::size_t> counts_;
    std::size_t base_;
    std::size_t extra_;
    std::size_t full_ = 0;
};

/// Covariance-driven greedy baseline. UEs are taken in decreasing total
/// similarity; each joins the pilot whose current holders are least similar
/// to it (largest minimum CMD, empty group counts as 1) among pilots that
/// still have room under the balance constraint.
inline PilotAssignment sgps_assignment(const RMatrix& d, int tau) {
    if (tau < 1) throw DomainError("sgps_assignment: tau must be >= 1");
    const auto n = static_cast<std::size_t>(d.rows());
    std::vector<double> similarity(n);
    for (std::size_t i = 0; i < n; ++i) similarity[i] = (1.0 - d.row(static_cast<Eigen::Index>(i)).array()).sum();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return similarity[a] > similarity[b]; });

    PilotAssignment out;
    out.method = Method::Sgps;
    out.pilot_count = tau;
    out.feature = "cmd";
    out.pilot.assign(n, -1);
    out.order = order;
    std::vector<std::vector<std::size_t>> holders(static_cast<std::size_t>(tau));
    BalancedCounts counts(n, tau);
    for (auto u : order) {
        int best = -1;
        double best_score = -1.0;
        for (int p = 0; p < tau; ++p) {
            if (!counts.can_take(p)) continue;
            double score = 1.0;
            for (auto m : holders[static_cast<std::size_t>(p)])
                score = std::min(score, d(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(m)));
            if (score > best_score) {
                best_score = score;
                best = p;
            }
        }
        out.pilot[u] = best;
        counts.take(best);
        holders[static_cast<std::size_t>(best)].push_back(u);
    }
    return out;
}

inline CopilotSets copilot_sets(const PilotAssignment& a, const ActiveSet& active) {
    CopilotSets out;
    out.groups.resize(active.size());
    out.interferers.resize(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
        const auto k = active.indices[i];
        for (std::size_t j = 0; j < a.size(); ++j)
            if (a.pilot[j] == a.pilot[k]) out.groups[i].push_back(j);
        for (auto j : active.indices)
            if (j != k && a.pilot[j] == a.pilot[k]) out.interferers[i].push_back(j);
    }
    return out;
}

/// Smallest dissimilarity between two UEs sharing a pilot, over `scope`
/// (all UEs when empty). 1 when nobody shares.
inline double min_intra_group_dissimilarity(const RMatrix& d, const PilotAssignment& a,
                                            const std::vector<std::size_t>& scope = {}) {
    std::vector<std::size_t> ues = scope;
    if (ues.empty()) {
        ues.resize(a.size());
        std::iota(ues.begin(), ues.end(), std::size_t{0});
    }
    double best = 1.0;
    for (std::size_t x = 0; x < ues.size(); ++x)
        for (std::size_t y = x + 1; y < ues.size(); ++y)
            if (a.pilot[ues[x]] == a.pilot[ues[y]])
                best = std::min(best, d(static_cast<Eigen::Index>(ues[x]), static_cast<Eigen::Index>(ues[y])));
    return best;
}

}  // namespace pilotreuse
