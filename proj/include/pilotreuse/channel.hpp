// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "pilotreuse/scenario.hpp"

namespace pilotreuse {

/// Sector antenna pattern. Angles in radians.
struct AntennaPattern {
    double max_gain_db = 0.0;
    double max_attenuation_db = 30.0;
    double beamwidth_3db = deg_to_rad(65.0);

    static AntennaPattern from(const SystemConfig& cfg) {
        return {cfg.max_gain_db, cfg.max_attenuation_db, cfg.beamwidth_3db()};
    }

    /// Offset from boresight beyond which the attenuation is clipped at max.
    double clip_offset() const { return beamwidth_3db * std::sqrt(max_attenuation_db / 12.0); }
};

/// ULA steering vector, entry m = exp(-j 2 pi m spacing cos(theta)).
inline CVector array_response(double theta, int antennas, double spacing) {
    CVector a(antennas);
    const double step = -kTwoPi * spacing * std::cos(theta);
    for (int m = 0; m < antennas; ++m) a(m) = std::polar(1.0, step * m);
    return a;
}

/// Sector gain in dB for arrival angle `theta`; the offset from `boresight`
/// is wrapped to (-pi, pi].
inline double antenna_gain_db(double theta, double boresight, const AntennaPattern& pattern) {
    const double offset = wrap_to_pi(theta - boresight);
    const double ratio = offset / pattern.beamwidth_3db;
    return pattern.max_gain_db - std::min(12.0 * ratio * ratio, pattern.max_attenuation_db);
}

/// Free-space large-scale gain including the antenna gain.
inline double path_gain(double distance, double wavelength, double gain_db) {
    if (!(distance > 0.0)) throw DomainError("path_gain: distance must be > 0");
    const double ratio = wavelength / (4.0 * kPi * distance);
    return db_to_linear(gain_db) * ratio * ratio;
}

/// Large-scale gain for one path of a UE seen by a sector array.
inline double link_gain(const UserRecord& user, double theta, const SystemConfig& cfg) {
    return path_gain(user.distance, cfg.wavelength, antenna_gain_db(theta, kBroadside, AntennaPattern::from(cfg)));
}

/// One sector channel, the superposition of L paths with uniform AoA over the
/// user's interval and unit-variance complex gains.
inline CVector sample_channel(const UserRecord& user, int sector, const SystemConfig& cfg, RandomStream& rng) {
    const auto& interval = user.aoa[static_cast<std::size_t>(sector)];
    const int m_count = cfg.antennas;
    CVector h = CVector::Zero(m_count);
    for (int l = 0; l < cfg.paths; ++l) {
        const double theta = interval.width() > 0.0 ? rng.uniform(interval.lo, interval.hi) : interval.lo;
        const cplx alpha = rng.complex_normal(1.0);
        const cplx step = std::polar(1.0, -kTwoPi * cfg.antenna_spacing * std::cos(theta));
        cplx coeff = std::sqrt(link_gain(user, theta, cfg)) * alpha;
        for (int m = 0; m < m_count; ++m) {
            h(m) += coeff;
            coeff *= step;
        }
    }
    return h / std::sqrt(static_cast<double>(cfg.paths));
}

/// Compound channel: sector channels stacked in sector order.
inline CVector sample_compound_channel(const UserRecord& user, const SystemConfig& cfg, RandomStream& rng) {
    const int m_count = cfg.antennas;
    CVector h(static_cast<Eigen::Index>(cfg.compound_dim()));
    for (int s = 0; s < cfg.sectors; ++s) h.segment(s * m_count, m_count) = sample_channel(user, s, cfg, rng);
    return h;
}

/// Nodes and weights for averaging over an AoA interval; weights sum to one.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Composite 16-point Gauss-Legendre rule over the interval, split at the
/// points where the antenna gain is not smooth (attenuation clip, back-lobe
/// wrap). About `points` nodes in total.
inline QuadratureRule aoa_quadrature(const AoaInterval& interval, const AntennaPattern& pattern, int points) {
    using Gauss = boost::math::quadrature::gauss<double, 16>;
    constexpr int kPanelNodes = 16;

    std::vector<double> breaks{interval.lo, interval.hi};
    const double clip = pattern.clip_offset();
    for (int k = -2; k <= 2; ++k) {
        const double base = kBroadside + kTwoPi * k;
        for (double b : {base - clip, base + clip, base + kPi}) {
            if (b > interval.lo && b < interval.hi) breaks.push_back(b);
        }
    }
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    const double total = interval.width();
    const int panels_total = std::max(1, (points + kPanelNodes - 1) / kPanelNodes);
    const auto& x = Gauss::abscissa();
    const auto& w = Gauss::weights();

    QuadratureRule rule;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double a = breaks[i];
        const double b = breaks[i + 1];
        const int panels = std::max(1, static_cast<int>(std::lround(panels_total * (b - a) / total)));
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = a + (p + 0.5) * h;
            const double half = 0.5 * h;
            // Boost stores the non-negative half of the symmetric rule.
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double wj = w[j] * half / total;
                if (x[j] == 0.0) {
                    rule.nodes.push_back(mid);
                    rule.weights.push_back(wj);
                } else {
                    rule.nodes.push_back(mid - half * x[j]);
                    rule.weights.push_back(wj);
                    rule.nodes.push_back(mid + half * x[j]);
                    rule.weights.push_back(wj);
                }
            }
        }
    }
    return rule;
}

/// Builds the Hermitian Toeplitz matrix with first column `col`.
inline CMatrix hermitian_toeplitz(const CVector& col) {
    const auto n = col.size();
    CMatrix r(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) r(i, j) = i >= j ? col(i - j) : std::conj(col(j - i));
    }
    return r;
}

/// Sector covariance E[h h^H] averaged over the AoA interval. The ULA makes it
/// Hermitian Toeplitz, so only the first column is integrated.
inline CMatrix analytic_covariance(const UserRecord& user, int sector, const SystemConfig& cfg,
                                   int quadrature_points) {
    if (quadrature_points < 2) throw DomainError("analytic_covariance: quadrature_points must be >= 2");
    const auto& interval = user.aoa[static_cast<std::size_t>(sector)];
    const int m_count = cfg.antennas;
    if (!(interval.width() > 0.0)) {
        const CVector a = array_response(interval.lo, m_count, cfg.antenna_spacing);
        return link_gain(user, interval.lo, cfg) * (a * a.adjoint());
    }
    const auto rule = aoa_quadrature(interval, AntennaPattern::from(cfg), quadrature_points);
    CVector col = CVector::Zero(m_count);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double theta = rule.nodes[q];
        const cplx step = std::polar(1.0, -kTwoPi * cfg.antenna_spacing * std::cos(theta));
        cplx term = rule.weights[q] * link_gain(user, theta, cfg);
        for (int m = 0; m < m_count; ++m) {
            col(m) += term;
            term *= step;
        }
    }
    col(0) = col(0).real();
    return hermitian_toeplitz(col);
}

/// Block-diagonal compound covariance from per-sector blocks.
inline CMatrix compound_covariance(std::span<const CMatrix> blocks) {
    Eigen::Index dim = 0;
    for (const auto& b : blocks) dim += b.rows();
    CMatrix r = CMatrix::Zero(dim, dim);
    Eigen::Index offset = 0;
    for (const auto& b : blocks) {
        r.block(offset, offset, b.rows(), b.cols()) = b;
        offset += b.rows();
    }
    return r;
}

/// Per-UE compound covariances, stored as their S diagonal M x M blocks;
/// off-diagonal sector blocks are identically zero.
class CovarianceSet {
public:
    CovarianceSet() = default;
    CovarianceSet(int antennas, int sectors) : antennas_(antennas), sectors_(sectors) {}

    void add(std::vector<CMatrix> sector_blocks) {
        if (static_cast<int>(sector_blocks.size()) != sectors_)
            throw DomainError("CovarianceSet::add: wrong number of sector blocks");
        for (const auto& b : sector_blocks) {
            if (b.rows() != antennas_ || b.cols() != antennas_)
                throw DomainError("CovarianceSet::add: sector block has wrong dimension");
        }
        blocks_.push_back(std::move(sector_blocks));
    }

    std::size_t size() const { return blocks_.size(); }
    int antennas() const { return antennas_; }
    int sectors() const { return sectors_; }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(antennas_) * sectors_; }

    const CMatrix& block(std::size_t user, int sector) const { return blocks_[user][static_cast<std::size_t>(sector)]; }
    const std::vector<CMatrix>& blocks(std::size_t user) const { return blocks_[user]; }

    CMatrix compound(std::size_t user) const { return compound_covariance(blocks_[user]); }

    double trace(std::size_t user) const {
        double t = 0.0;
        for (const auto& b : blocks_[user]) t += b.trace().real();
        return t;
    }

private:
    int antennas_ = 0;
    int sectors_ = 0;
    std::vector<std::vector<CMatrix>> blocks_;
};

inline std::vector<CMatrix> user_covariance_blocks(const UserRecord& user, const SystemConfig& cfg,
                                                   int quadrature_points) {
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(cfg.sectors));
    for (int s = 0; s < cfg.sectors; ++s) blocks.push_back(analytic_covariance(user, s, cfg, quadrature_points));
    return blocks;
}

/// Analytic covariances of every UE in the scenario.
inline CovarianceSet covariance_set(const Scenario& sc) {
    CovarianceSet set(sc.config.antennas, sc.config.sectors);
    for (const auto& u : sc.users) set.add(user_covariance_blocks(u, sc.config, sc.config.quadrature_points));
    return set;
}

/// Running sample covariance (1/T) sum h h^H.
class CovarianceAccumulator {
public:
    explicit CovarianceAccumulator(Eigen::Index dim) : sum_(CMatrix::Zero(dim, dim)) {}

    void add(const CVector& h) {
        sum_.selfadjointView<Eigen::Lower>().rankUpdate(h);
        ++count_;
    }

    std::size_t count() const { return count_; }

    CMatrix covariance() const {
        if (count_ == 0) throw DomainError("sample_covariance: no samples");
        CMatrix full = sum_.selfadjointView<Eigen::Lower>();
        return hermitian_part(full) / static_cast<double>(count_);
    }

private:
    CMatrix sum_;
    std::size_t count_ = 0;
};

inline CMatrix sample_covariance(std::span<const CVector> samples) {
    if (samples.empty()) throw DomainError("sample_covariance: no samples");
    CovarianceAccumulator acc(samples.front().size());
    for (const auto& h : samples) acc.add(h);
    return acc.covariance();
}

}  // namespace pilotreuse
