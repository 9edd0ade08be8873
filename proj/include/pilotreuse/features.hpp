// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "pilotreuse/channel.hpp"

namespace pilotreuse {

enum class FeatureKind { CmdRow, Chart, Position };

inline const char* to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::CmdRow: return "cmd_row";
        case FeatureKind::Chart: return "chart";
        case FeatureKind::Position: return "position";
    }
    return "?";
}

/// One feature vector per UE, stored as the rows of `vectors`.
struct FeatureSet {
    FeatureKind kind = FeatureKind::CmdRow;
    RMatrix vectors;

    std::size_t size() const { return static_cast<std::size_t>(vectors.rows()); }
    Eigen::Index dim() const { return vectors.cols(); }
};

/// Builds a feature set from per-UE rows; all rows must share one dimension.
inline FeatureSet feature_set_from_rows(FeatureKind kind, const std::vector<std::vector<double>>& rows) {
    FeatureSet f{kind, RMatrix(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()))};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size())
            throw DomainError("feature dimension mismatch at UE " + std::to_string(i) + ": " +
                              std::to_string(rows[i].size()) + " vs " + std::to_string(rows.front().size()));
        for (std::size_t c = 0; c < rows[i].size(); ++c)
            f.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    }
    return f;
}

/// Round-off allowance outside [0, 1] before a CMD value is rejected.
inline constexpr double kCmdClampSlack = 1e-9;

namespace detail {

// Re tr(A^H B) = sum of Re(conj(a_ij) b_ij). Written so swapping the
// arguments gives a bit-identical result.
inline double real_inner(const CMatrix& a, const CMatrix& b) {
    return (a.real().array() * b.real().array() + a.imag().array() * b.imag().array()).sum();
}

inline double clamp_cmd(double value) {
    if (value < -kCmdClampSlack || value > 1.0 + kCmdClampSlack)
        throw NumericalError("cmd: value " + std::to_string(value) + " outside [0,1] beyond round-off");
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace detail

/// Covariance matrix distance 1 - tr(A^H B) / (|A|_F |B|_F).
inline double cmd(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DomainError("cmd: dimension mismatch");
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw DomainError("cmd: zero matrix has no normalized distance");
    if (a == b) return 0.0;
    return detail::clamp_cmd(1.0 - detail::real_inner(a, b) / (na * nb));
}

/// Pairwise CMD over a covariance set. Only the sector blocks enter since the
/// off-diagonal blocks vanish.
inline RMatrix dissimilarity_matrix(const CovarianceSet& covs) {
    const std::size_t n = covs.size();
    if (n < 2) throw DomainError("dissimilarity_matrix: need at least two users");
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 0.0;
        for (const auto& b : covs.blocks(i)) sq += b.squaredNorm();
        norms[i] = std::sqrt(sq);
        if (norms[i] == 0.0) throw DomainError("dissimilarity_matrix: user " + std::to_string(i) + " has zero covariance");
    }
    RMatrix d = RMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double inner = 0.0;
            for (int s = 0; s < covs.sectors(); ++s) inner += detail::real_inner(covs.block(i, s), covs.block(j, s));
            double value;
            try {
                value = detail::clamp_cmd(1.0 - inner / (norms[i] * norms[j]));
            } catch (const NumericalError& e) {
                throw NumericalError(std::string(e.what()) + " for pair (" + std::to_string(i) + ", " +
                                     std::to_string(j) + ")");
            }
            if (value > 0.0 && value < kCmdClampSlack && covs.blocks(i) == covs.blocks(j)) value = 0.0;
            d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = value;
            d(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = value;
        }
    }
    return d;
}

/// Raw CMD rows as features.
inline FeatureSet cmd_feature(const RMatrix& d) { return {FeatureKind::CmdRow, d}; }

/// Real-position baseline feature.
inline FeatureSet position_feature(const Scenario& sc, PositionMode mode = PositionMode::Azimuth) {
    FeatureSet f{FeatureKind::Position, RMatrix(static_cast<Eigen::Index>(sc.size()), 2)};
    for (std::size_t n = 0; n < sc.size(); ++n) {
        const auto& u = sc.users[n];
        const auto row = static_cast<Eigen::Index>(n);
        if (mode == PositionMode::Cartesian) {
            f.vectors.row(row) = u.position.transpose();
        } else {
            const double phi = u.azimuth();
            f.vectors(row, 0) = std::cos(phi);
            f.vectors(row, 1) = std::sin(phi);
        }
    }
    return f;
}

/// Neighbor graph diagnostics and the chart itself.
struct ChartResult {
    FeatureSet chart;
    RVector eigenvalues;                                  // generalized, ascending, all of them
    std::vector<std::pair<std::size_t, std::size_t>> bridges;  // edges added to connect components
    RMatrix adjacency;                                    // binary, symmetric
};

namespace detail {

/// Indices of the `k` smallest entries of row i, excluding i; ties by index.
inline std::vector<std::size_t> nearest_neighbors(const RMatrix& d, std::size_t i, std::size_t k) {
    const std::size_t n = static_cast<std::size_t>(d.rows());
    std::vector<std::size_t> idx;
    idx.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
        if (j != i) idx.push_back(j);
    const auto row = static_cast<Eigen::Index>(i);
    auto less = [&](std::size_t a, std::size_t b) {
        const double da = d(row, static_cast<Eigen::Index>(a));
        const double db = d(row, static_cast<Eigen::Index>(b));
        return da < db || (da == db && a < b);
    };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(), less);
    idx.resize(k);
    return idx;
}

inline std::vector<int> connected_components(const RMatrix& adj, int& count) {
    const auto n = adj.rows();
    std::vector<int> label(static_cast<std::size_t>(n), -1);
    count = 0;
    for (Eigen::Index s = 0; s < n; ++s) {
        if (label[static_cast<std::size_t>(s)] >= 0) continue;
        std::queue<Eigen::Index> q;
        q.push(s);
        label[static_cast<std::size_t>(s)] = count;
        while (!q.empty()) {
            const auto v = q.front();
            q.pop();
            for (Eigen::Index w = 0; w < n; ++w) {
                if (adj(v, w) != 0.0 && label[static_cast<std::size_t>(w)] < 0) {
                    label[static_cast<std::size_t>(w)] = count;
                    q.push(w);
                }
            }
        }
        ++count;
    }
    return label;
}

}  // namespace detail

/// Binary symmetric nu-NN graph over a dissimilarity matrix. Disconnected
/// components are joined by the cheapest edge between each component pair.
inline RMatrix knn_graph(const RMatrix& d, int neighbors, std::vector<std::pair<std::size_t, std::size_t>>* bridges) {
    const auto n = d.rows();
    RMatrix adj = RMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (auto j : detail::nearest_neighbors(d, static_cast<std::size_t>(i), static_cast<std::size_t>(neighbors))) {
            adj(i, static_cast<Eigen::Index>(j)) = 1.0;
            adj(static_cast<Eigen::Index>(j), i) = 1.0;
        }
    }
    int components = 0;
    const auto label = detail::connected_components(adj, components);
    if (components > 1) {
        std::vector<std::pair<std::size_t, std::size_t>> added;
        for (int a = 0; a < components; ++a) {
            for (int b = a + 1; b < components; ++b) {
                double best = std::numeric_limits<double>::infinity();
                std::pair<Eigen::Index, Eigen::Index> edge{-1, -1};
                for (Eigen::Index i = 0; i < n; ++i) {
                    if (label[static_cast<std::size_t>(i)] != a) continue;
                    for (Eigen::Index j = 0; j < n; ++j) {
                        if (label[static_cast<std::size_t>(j)] != b) continue;
                        if (d(i, j) < best) {
                            best = d(i, j);
                            edge = {i, j};
                        }
                    }
                }
                adj(edge.first, edge.second) = 1.0;
                adj(edge.second, edge.first) = 1.0;
                added.emplace_back(static_cast<std::size_t>(edge.first), static_cast<std::size_t>(edge.second));
            }
        }
        if (bridges) *bridges = std::move(added);
    }
    return adj;
}

/// Laplacian Eigenmaps chart: solves (Deg - W) f = mu Deg f on the binary
/// nu-NN graph and keeps eigenvectors 2..C+1, each scaled to unit norm with
/// its first non-negligible entry positive.
inline ChartResult laplacian_eigenmaps(const RMatrix& d, int neighbors, int dim) {
    const auto n = d.rows();
    if (d.cols() != n) throw DomainError("laplacian_eigenmaps: dissimilarity matrix must be square");
    if (neighbors < 1 || neighbors >= n) throw DomainError("laplacian_eigenmaps: need 1 <= nu < N");
    if (dim < 1 || dim > n - 2) throw DomainError("laplacian_eigenmaps: need 1 <= C <= N - 2");

    ChartResult out;
    out.adjacency = knn_graph(d, neighbors, &out.bridges);
    const RVector degree = out.adjacency.rowwise().sum();
    const RMatrix laplacian = RMatrix(degree.asDiagonal()) - out.adjacency;

    Eigen::GeneralizedSelfAdjointEigenSolver<RMatrix> solver(laplacian, RMatrix(degree.asDiagonal()));
    if (solver.info() != Eigen::Success)
        throw NumericalError("laplacian_eigenmaps: generalized eigensolver failed (N=" + std::to_string(n) + ")");
    out.eigenvalues = solver.eigenvalues();

    out.chart.kind = FeatureKind::Chart;
    out.chart.vectors.resize(n, dim);
    for (int c = 0; c < dim; ++c) {
        RVector v = solver.eigenvectors().col(c + 1);
        v.normalize();
        const double tol = 1e-10 * v.cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (std::abs(v(i)) > tol) {
                if (v(i) < 0.0) v = -v;
                break;
            }
        }
        out.chart.vectors.col(c) = v;
    }
    return out;
}

/// Trustworthiness of a chart against a reference dissimilarity: penalizes
/// points that are chart neighbors but far apart in the reference ranking.
inline double chart_quality(const FeatureSet& chart, const RMatrix& reference, int neighborhood) {
    const auto n = static_cast<std::size_t>(reference.rows());
    const auto k = static_cast<std::size_t>(neighborhood);
    if (k < 1 || k >= n) throw DomainError("chart_quality: need 1 <= neighborhood < N");
    if (chart.size() != n) throw DomainError("chart_quality: chart and reference sizes differ");
    if (2 * n < 3 * k + 2) throw DomainError("chart_quality: neighborhood too large for N");

    RMatrix emb(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            emb(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                (chart.vectors.row(static_cast<Eigen::Index>(i)) - chart.vectors.row(static_cast<Eigen::Index>(j))).squaredNorm();

    double penalty = 0.0;
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) {
        // rank[j] = position of j in i's reference ordering, 1-based.
        const auto order = detail::nearest_neighbors(reference, i, n - 1);
        for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;
        for (auto j : detail::nearest_neighbors(emb, i, k)) {
            if (rank[j] > k) penalty += static_cast<double>(rank[j] - k);
        }
    }
    const double nd = static_cast<double>(n);
    const double kd = static_cast<double>(k);
    return 1.0 - 2.0 / (nd * kd * (2.0 * nd - 3.0 * kd - 1.0)) * penalty;
}

}  // namespace pilotreuse
