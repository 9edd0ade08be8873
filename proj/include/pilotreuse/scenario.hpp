// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "pilotreuse/config.hpp"
#include "pilotreuse/rng.hpp"

namespace pilotreuse {

/// Angle of arrival interval [lo, hi] in radians; not wrapped.
struct AoaInterval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
};

/// Incidence angles are measured from the array axis of each sector's ULA,
/// so a UE on the sector boresight arrives at pi/2 (broadside).
struct UserRecord {
    std::size_t index = 0;
    Eigen::Vector2d position = Eigen::Vector2d::Zero();
    double distance = 0.0;
    std::vector<double> incidence;   // per sector, [0, 2pi)
    std::vector<AoaInterval> aoa;    // per sector

    double azimuth() const { return wrap_to_2pi(std::atan2(position.y(), position.x())); }
};

struct Scenario {
    SystemConfig config;
    std::vector<UserRecord> users;
    std::vector<double> sector_orientations;

    std::size_t size() const { return users.size(); }
};

/// Indices of the active UEs, sorted ascending.
struct ActiveSet {
    std::vector<std::size_t> indices;
    std::size_t size() const { return indices.size(); }
};

/// Array-frame angle that corresponds to the sector boresight.
inline constexpr double kBroadside = kPi / 2.0;

/// Boresight directions that evenly partition the azimuth plane.
inline std::vector<double> sector_orientations(int sectors) {
    std::vector<double> out(static_cast<std::size_t>(sectors));
    for (int s = 0; s < sectors; ++s) out[static_cast<std::size_t>(s)] = kTwoPi * s / sectors;
    return out;
}

/// Incidence angle at a ULA whose boresight points along `orientation`.
inline double incidence_angle(const Eigen::Vector2d& position, double orientation) {
    return wrap_to_2pi(std::atan2(position.y(), position.x()) - orientation + kBroadside);
}

inline UserRecord make_user(std::size_t index, const Eigen::Vector2d& position,
                            const std::vector<double>& orientations, double angular_std) {
    UserRecord u;
    u.index = index;
    u.position = position;
    u.distance = position.norm();
    const double half_width = std::sqrt(3.0) * angular_std;
    for (double orientation : orientations) {
        const double theta = incidence_angle(position, orientation);
        u.incidence.push_back(theta);
        u.aoa.push_back({theta - half_width, theta + half_width});
    }
    return u;
}

/// Places N UEs uniformly over the annulus [min_radius, cell_radius].
inline Scenario build_scenario(const SystemConfig& cfg, RandomStream& rng) {
    validate(cfg);
    Scenario sc;
    sc.config = cfg;
    sc.sector_orientations = sector_orientations(cfg.sectors);
    sc.users.reserve(cfg.users);
    const double r0 = cfg.min_radius * cfg.min_radius;
    const double r1 = cfg.cell_radius * cfg.cell_radius;
    for (std::size_t n = 0; n < cfg.users; ++n) {
        const double radius = std::sqrt(r0 + rng.uniform01() * (r1 - r0));
        const double phi = rng.uniform(0.0, kTwoPi);
        const Eigen::Vector2d pos(radius * std::cos(phi), radius * std::sin(phi));
        sc.users.push_back(make_user(n, pos, sc.sector_orientations, cfg.angular_std()));
    }
    return sc;
}

/// Uniform K-subset of the N users, without replacement.
inline ActiveSet sample_active_set(const Scenario& sc, RandomStream& rng) {
    const std::size_t n = sc.users.size();
    const std::size_t k = sc.config.active_users;
    if (k > n) throw ConfigError("invalid config field 'active_users': K exceeds N");
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    ActiveSet active;
    active.indices.reserve(k);
    std::sample(all.begin(), all.end(), std::back_inserter(active.indices), k, rng.engine());
    return active;
}

}  // namespace pilotreuse
