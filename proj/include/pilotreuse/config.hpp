// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <sstream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "pilotreuse/types.hpp"

namespace pilotreuse {

/// Which geometric quantity the real-position baseline feeds to the assignment.
enum class PositionMode {
    Cartesian,  // (x, y) in meters
    Azimuth,    // (cos phi, sin phi), unit circle
};

/// System parameters. Angles given in degrees here, as in the config file;
/// everything downstream works in radians.
struct SystemConfig {
    std::size_t users = 512;         // N
    std::size_t active_users = 64;   // K
    int sectors = 3;                 // S
    int antennas = 64;               // M, per sector array
    int paths = 200;                 // L
    double antenna_spacing = 0.5;    // wavelengths
    double angular_std_deg = 15.0;   // sigma_theta
    double wavelength = 0.15;        // meters (2 GHz)
    double cell_radius = 500.0;      // meters
    double min_radius = 10.0;        // meters
    double tx_power = 1.0;           // p_u, linear
    double noise_power = 0.0;        // per-antenna sigma_n^2, linear; 0 -> set from snr via with_snr_db
    int pilot_length = 64;           // tau
    int coherence_length = 200;      // Tc, symbols
    double max_gain_db = 0.0;        // G_Amax
    double max_attenuation_db = 30.0;// A_max
    double beamwidth_3db_deg = 65.0; // theta_3dB
    int chart_dim = 2;               // C
    int chart_neighbors = 15;        // nu
    std::uint64_t seed = 1;
    int quadrature_points = 512;
    PositionMode position_mode = PositionMode::Azimuth;
    bool balanced_random = true;

    std::size_t compound_dim() const { return static_cast<std::size_t>(antennas) * sectors; }
    double angular_std() const { return deg_to_rad(angular_std_deg); }
    double beamwidth_3db() const { return deg_to_rad(beamwidth_3db_deg); }
};

/// Free-space gain at the cell edge on a sector boresight. SNR values are
/// referenced to it: snr = p_u * edge_gain / sigma_n^2.
inline double cell_edge_gain(const SystemConfig& cfg) {
    const double ratio = cfg.wavelength / (4.0 * kPi * cfg.cell_radius);
    return db_to_linear(cfg.max_gain_db) * ratio * ratio;
}

inline double noise_power_for_snr(const SystemConfig& cfg, double snr_db) {
    return cfg.tx_power * cell_edge_gain(cfg) / db_to_linear(snr_db);
}

inline double snr_db_of(const SystemConfig& cfg) {
    return 10.0 * std::log10(cfg.tx_power * cell_edge_gain(cfg) / cfg.noise_power);
}

inline SystemConfig with_snr_db(SystemConfig cfg, double snr_db) {
    cfg.noise_power = noise_power_for_snr(cfg, snr_db);
    return cfg;
}

/// Full-scale defaults at 0 dB cell-edge SNR.
inline SystemConfig default_config() { return with_snr_db(SystemConfig{}, 0.0); }

/// Small configuration for CI-speed runs.
inline SystemConfig desk_config() {
    SystemConfig cfg;
    cfg.users = 128;
    cfg.active_users = 16;
    cfg.antennas = 16;
    cfg.sectors = 3;
    cfg.pilot_length = 16;
    cfg.paths = 50;
    return with_snr_db(cfg, 0.0);
}

inline void validate(const SystemConfig& cfg) {
    auto require = [](bool ok, const char* field, const char* rule) {
        if (!ok) throw ConfigError(std::string("invalid config field '") + field + "': " + rule);
    };
    require(cfg.users >= 1, "users", "must be >= 1");
    require(cfg.active_users >= 1 && cfg.active_users <= cfg.users, "active_users", "must satisfy 1 <= K <= N");
    require(cfg.sectors >= 1, "sectors", "must be >= 1");
    require(cfg.antennas >= 1, "antennas", "must be >= 1");
    require(cfg.paths >= 1, "paths", "must be >= 1");
    require(cfg.antenna_spacing > 0.0, "antenna_spacing", "must be > 0");
    require(cfg.angular_std_deg >= 0.0, "angular_std_deg", "must be >= 0");
    require(cfg.wavelength > 0.0, "wavelength", "must be > 0");
    require(cfg.min_radius > 0.0, "min_radius", "must be > 0");
    require(cfg.min_radius < cfg.cell_radius, "min_radius", "must be < cell_radius");
    require(cfg.tx_power > 0.0, "tx_power", "must be > 0");
    require(cfg.noise_power > 0.0, "noise_power", "must be > 0");
    require(cfg.pilot_length >= 1, "pilot_length", "must be >= 1");
    require(cfg.pilot_length <= cfg.coherence_length, "pilot_length", "must be <= coherence_length");
    require(cfg.beamwidth_3db_deg > 0.0, "beamwidth_3db_deg", "must be > 0");
    require(cfg.max_attenuation_db >= 0.0, "max_attenuation_db", "must be >= 0");
    require(cfg.chart_dim >= 1, "chart_dim", "must be >= 1");
    require(cfg.chart_neighbors >= 1, "chart_neighbors", "must be >= 1");
    require(cfg.quadrature_points >= 2, "quadrature_points", "must be >= 2");
}

namespace detail {

template <class T>
T parse_value(const std::string& key, const std::string& text) {
    std::istringstream in(text);
    T value{};
    in >> value;
    if (in.fail() || !(in >> std::ws).eof())
        throw ConfigError("invalid config field '" + key + "': cannot parse '" + text + "'");
    return value;
}

inline bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError("invalid config field '" + key + "': expected boolean, got '" + text + "'");
}

}  // namespace detail

/// Reads the [system] section of an INI tree onto a config. Keys not present
/// keep their defaults. Unless `noise_power` is given explicitly the noise is
/// derived from `snr_db` (default 0 dB) after all geometry keys are read.
inline SystemConfig parse_system_config(const boost::property_tree::ptree& section,
                                        SystemConfig cfg = SystemConfig{}) {
    double snr_db = 0.0;
    bool explicit_noise = false;
    for (const auto& [key, node] : section) {
        const std::string v = node.get_value<std::string>();
        using detail::parse_value;
        if (key == "users") cfg.users = parse_value<std::size_t>(key, v);
        else if (key == "active_users") cfg.active_users = parse_value<std::size_t>(key, v);
        else if (key == "sectors") cfg.sectors = parse_value<int>(key, v);
        else if (key == "antennas") cfg.antennas = parse_value<int>(key, v);
        else if (key == "paths") cfg.paths = parse_value<int>(key, v);
        else if (key == "antenna_spacing") cfg.antenna_spacing = parse_value<double>(key, v);
        else if (key == "angular_std_deg") cfg.angular_std_deg = parse_value<double>(key, v);
        else if (key == "wavelength") cfg.wavelength = parse_value<double>(key, v);
        else if (key == "cell_radius") cfg.cell_radius = parse_value<double>(key, v);
        else if (key == "min_radius") cfg.min_radius = parse_value<double>(key, v);
        else if (key == "tx_power") cfg.tx_power = parse_value<double>(key, v);
        else if (key == "noise_power") {
            cfg.noise_power = parse_value<double>(key, v);
            explicit_noise = true;
        } else if (key == "snr_db") snr_db = parse_value<double>(key, v);
        else if (key == "pilot_length") cfg.pilot_length = parse_value<int>(key, v);
        else if (key == "coherence_length") cfg.coherence_length = parse_value<int>(key, v);
        else if (key == "max_gain_db") cfg.max_gain_db = parse_value<double>(key, v);
        else if (key == "max_attenuation_db") cfg.max_attenuation_db = parse_value<double>(key, v);
        else if (key == "beamwidth_3db_deg") cfg.beamwidth_3db_deg = parse_value<double>(key, v);
        else if (key == "chart_dim") cfg.chart_dim = parse_value<int>(key, v);
        else if (key == "chart_neighbors") cfg.chart_neighbors = parse_value<int>(key, v);
        else if (key == "seed") cfg.seed = parse_value<std::uint64_t>(key, v);
        else if (key == "quadrature_points") cfg.quadrature_points = parse_value<int>(key, v);
        else if (key == "balanced_random") cfg.balanced_random = detail::parse_bool(key, v);
        else if (key == "position_feature") {
            if (v == "cartesian") cfg.position_mode = PositionMode::Cartesian;
            else if (v == "azimuth") cfg.position_mode = PositionMode::Azimuth;
            else throw ConfigError("invalid config field 'position_feature': expected cartesian|azimuth");
        } else {
            throw ConfigError("unknown config field '" + key + "' in [system]");
        }
    }
    if (!explicit_noise) cfg = with_snr_db(cfg, snr_db);
    return cfg;
}

inline boost::property_tree::ptree read_ini_file(const std::string& path) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(path, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("cannot read config '" + path + "': " + e.what());
    }
    return tree;
}

inline SystemConfig load_system_config(const std::string& path) {
    const auto tree = read_ini_file(path);
    const auto section = tree.get_child_optional("system");
    SystemConfig cfg = section ? parse_system_config(*section) : default_config();
    validate(cfg);
    return cfg;
}

inline const char* to_string(PositionMode mode) {
    return mode == PositionMode::Cartesian ? "cartesian" : "azimuth";
}

}  // namespace pilotreuse
