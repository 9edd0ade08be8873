// SPDX-License-Identifier: Apache-2.0
//
// Reference implementations used to check the fast paths. They follow the
// textbook formulas directly and share no code with the routines they check.
#pragma once

#include <ostream>
#include <vector>

#include "pilotreuse/phy.hpp"

namespace pilotreuse::oracle {

inline constexpr std::size_t kBruteForceMaxUsers = 12;

namespace detail {

struct Search {
    const RMatrix& d;
    std::vector<char> in_scope;
    std::size_t n;
    int tau;
    BalancedCounts counts;
    std::vector<int> current;
    std::vector<int> best;
    double best_value = -1.0;

    void run(std::size_t u, int used, double value) {
        if (value <= best_value) return;  // the min can only shrink further down
        if (u == n) {
            best_value = value;
            best = current;
            return;
        }
        // Pilot labels are interchangeable: a new label is only opened in order.
        for (int p = 0; p < std::min(tau, used + 1); ++p) {
            if (!counts.can_take(p)) continue;
            double v = value;
            if (in_scope[u]) {
                for (std::size_t j = 0; j < u; ++j)
                    if (current[j] == p && in_scope[j])
                        v = std::min(v, d(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(j)));
            }
            current[u] = p;
            counts.take(p);
            run(u + 1, std::max(used, p + 1), v);
            counts.release(p);
            current[u] = -1;
        }
    }
};

}  // namespace detail

/// Exhaustive search over balanced assignments for the largest minimum
/// dissimilarity between co-pilot UEs in `active` (all UEs when empty).
inline PilotAssignment brute_force_assignment(const RMatrix& d, int tau, const ActiveSet& active = {}) {
    const auto n = static_cast<std::size_t>(d.rows());
    if (n > kBruteForceMaxUsers)
        throw DomainError("brute_force_assignment: N=" + std::to_string(n) + " exceeds the exhaustive limit of " +
                          std::to_string(kBruteForceMaxUsers));
    if (tau < 1) throw DomainError("brute_force_assignment: tau must be >= 1");
    detail::Search search{d, std::vector<char>(n, active.indices.empty() ? 1 : 0), n, tau, BalancedCounts(n, tau),
                          std::vector<int>(n, -1), {}, -1.0};
    for (auto k : active.indices) search.in_scope[k] = 1;
    search.run(0, 0, 1.0);
    PilotAssignment out;
    out.method = Method::BruteForce;
    out.pilot_count = tau;
    out.feature = "cmd";
    out.pilot = search.best;
    return out;
}

/// CMD by forming the matrix product explicitly.
inline double dense_cmd(const CMatrix& a, const CMatrix& b) {
    return 1.0 - (a.adjoint() * b).trace().real() / (a.norm() * b.norm());
}

/// SINR with the interference-plus-noise matrix built explicitly.
inline double dense_sinr(Eigen::Index k, const CVector& w, const CMatrix& estimates, const CMatrix& error_sum,
                         double tx_power, double noise_power) {
    const auto dim = estimates.rows();
    CMatrix b = error_sum + (noise_power / tx_power) * CMatrix::Identity(dim, dim);
    for (Eigen::Index j = 0; j < estimates.cols(); ++j)
        if (j != k) b += estimates.col(j) * estimates.col(j).adjoint();
    const cplx num = w.adjoint() * estimates.col(k);
    return std::norm(num) / (w.adjoint() * b * w)(0).real();
}

/// LMMSE estimate with an explicit inverse.
inline CVector dense_lmmse(const CMatrix& cov, const std::vector<CMatrix>& interferers, const CVector& y,
                           double tx_power, int tau, double noise_power) {
    CMatrix q = cov + (noise_power / (tx_power * tau)) * CMatrix::Identity(cov.rows(), cov.cols());
    for (const auto& r : interferers) q += r;
    return cov * q.inverse() * y;
}

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Small self-check suite run by `pilotreuse oracle`.
inline std::vector<CheckResult> run_suite(std::uint64_t seed) {
    std::vector<CheckResult> out;

    // Brute force upper-bounds the nearest-neighbor chain on small CMD instances.
    {
        SystemConfig cfg = desk_config();
        cfg.users = 8;
        cfg.active_users = 8;
        cfg.antennas = 8;
        cfg.pilot_length = 2;
        int violations = 0;
        double nn_sum = 0.0, bf_sum = 0.0;
        for (std::uint64_t inst = 0; inst < 20; ++inst) {
            RandomStream rng(seed, StreamTag::Test, {1, inst});
            const auto sc = build_scenario(cfg, rng);
            const auto d = dissimilarity_matrix(covariance_set(sc));
            const auto nn = nearest_neighbor_assignment(cmd_feature(d), 2, rng);
            const auto bf = brute_force_assignment(d, 2);
            const double nn_obj = min_intra_group_dissimilarity(d, nn);
            const double bf_obj = min_intra_group_dissimilarity(d, bf);
            violations += bf_obj + 1e-12 < nn_obj ? 1 : 0;
            nn_sum += nn_obj;
            bf_sum += bf_obj;
        }
        out.push_back({"brute_force_bounds_nn", violations == 0,
                       "mean NN objective " + std::to_string(nn_sum / 20) + ", brute force " + std::to_string(bf_sum / 20)});
    }

    // Analytic covariance against a sample covariance.
    {
        SystemConfig cfg = desk_config();
        cfg.antennas = 8;
        cfg.sectors = 1;
        cfg.paths = 20;
        RandomStream rng(seed, StreamTag::Test, {2});
        const auto sc = build_scenario(cfg, rng);
        const auto& user = sc.users.front();
        const CMatrix analytic = analytic_covariance(user, 0, cfg, cfg.quadrature_points);
        CovarianceAccumulator acc(cfg.antennas);
        for (int t = 0; t < 200000; ++t) acc.add(sample_channel(user, 0, cfg, rng));
        const double rel = (acc.covariance() - analytic).norm() / analytic.norm();
        out.push_back({"analytic_vs_sample_covariance", rel <= 0.02, "relative Frobenius error " + std::to_string(rel)});
    }

    // Fast LMMSE path against the explicit-inverse formula.
    {
        RandomStream rng(seed, StreamTag::Test, {3});
        const int dim = 6;
        auto random_psd = [&] {
            CMatrix g(dim, dim);
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) g(i, j) = rng.complex_normal();
            return CMatrix(g * g.adjoint());
        };
        const CMatrix r = random_psd();
        const std::vector<CMatrix> interferers{random_psd()};
        CVector y(dim);
        for (int i = 0; i < dim; ++i) y(i) = rng.complex_normal();
        const auto est = lmmse_estimate(r, interferers, y, 1.0, 4, 0.5);
        const double rel = (est.channel - dense_lmmse(r, interferers, y, 1.0, 4, 0.5)).norm() / est.channel.norm();
        out.push_back({"lmmse_vs_explicit_inverse", rel < 1e-10, "relative error " + std::to_string(rel)});
    }
    return out;
}

}  // namespace pilotreuse::oracle
