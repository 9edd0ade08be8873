// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "pilotreuse/pilotreuse.hpp"

namespace pilotreuse::testing {

inline RandomStream stream(std::uint64_t id) { return RandomStream(20240611, StreamTag::Test, {id}); }

/// G G^H with G dim x rank complex Gaussian.
inline CMatrix random_psd(Eigen::Index dim, RandomStream& rng, Eigen::Index rank = -1) {
    if (rank < 0) rank = dim;
    CMatrix g(dim, rank);
    for (Eigen::Index j = 0; j < rank; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rng.complex_normal();
    return g * g.adjoint();
}

inline CVector random_vector(Eigen::Index dim, RandomStream& rng, double variance = 1.0) {
    CVector v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = rng.complex_normal(variance);
    return v;
}

/// Draw from CN(0, R) via a Cholesky-like factor (eigendecomposition, PSD safe).
inline CVector correlated_vector(const CMatrix& r, RandomStream& rng) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
    const RVector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * (ev.cast<cplx>().asDiagonal() * random_vector(r.rows(), rng));
}

/// Small configuration that keeps unit tests fast.
inline SystemConfig tiny_config() {
    SystemConfig cfg = desk_config();
    cfg.users = 24;
    cfg.active_users = 6;
    cfg.antennas = 4;
    cfg.pilot_length = 4;
    cfg.paths = 10;
    cfg.chart_neighbors = 5;
    return with_snr_db(cfg, 0.0);
}

/// User at a given azimuth (radians) and distance.
inline UserRecord user_at(double azimuth, double distance, const SystemConfig& cfg) {
    const Eigen::Vector2d pos(distance * std::cos(azimuth), distance * std::sin(azimuth));
    return make_user(0, pos, sector_orientations(cfg.sectors), cfg.angular_std());
}

/// Spearman rank correlation without tie handling (inputs are tie-free).
inline double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    auto ranks = [](const std::vector<double>& v) {
        std::vector<std::size_t> idx(v.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return v[x] < v[y]; });
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
        return r;
    };
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
    return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

/// Euclidean distances between 2-D points, scaled into [0, 1].
inline RMatrix point_dissimilarity(const std::vector<Eigen::Vector2d>& pts) {
    const auto n = static_cast<Eigen::Index>(pts.size());
    RMatrix d(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            d(i, j) = (pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]).norm();
    return d / d.maxCoeff();
}

inline std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace pilotreuse::testing
