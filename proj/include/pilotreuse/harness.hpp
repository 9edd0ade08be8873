// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pilotreuse/io.hpp"
#include "pilotreuse/metrics.hpp"
#include "pilotreuse/phy.hpp"

namespace pilotreuse {

enum class SweepAxis { SnrDb, Antennas, PilotLength };

inline const char* to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::SnrDb: return "snr_db";
        case SweepAxis::Antennas: return "antennas";
        case SweepAxis::PilotLength: return "pilot_length";
    }
    return "?";
}

struct TrialCounts {
    std::size_t scenarios = 1;
    std::size_t activity_draws = 50;
    std::size_t channel_draws = 200;
    std::size_t symbols = 8;  // QPSK data symbols per channel draw
};

struct ExperimentPlan {
    SweepAxis axis = SweepAxis::SnrDb;
    std::vector<double> values{0.0};
    std::vector<Method> methods{Method::PerfectCsi, Method::NnPosition, Method::NnChart,
                                Method::NnCmd,      Method::Random,     Method::Sgps};
    TrialCounts trials;
    SystemConfig base = desk_config();
    double snr_db = 0.0;  // cell-edge SNR when the sweep axis is not SNR
    std::uint64_t seed = 1;
    int workers = 1;
};

/// SER and rate statistics for one (method, axis value).
struct MethodPoint {
    Method method = Method::Random;
    double axis_value = 0.0;
    std::uint64_t symbol_errors = 0;
    std::uint64_t symbols = 0;
    double ser = 0.0;
    Interval ser_ci;
    double sum_rate = 0.0;      // mean over activity draws of sum_k R_ach,k
    double net_sum_rate = 0.0;  // (1 - tau/Tc) * sum_rate
    int pilot_length = 0;
    int coherence_length = 0;
    std::vector<double> rates;  // per (scenario, activity draw, active UE), in that order
    std::vector<std::size_t> rate_ue;
    std::vector<std::size_t> rate_scenario;
    std::vector<std::size_t> rate_activity;
};

struct MetricsReport {
    SweepAxis axis = SweepAxis::SnrDb;
    std::vector<MethodPoint> points;  // method-major, axis values ascending
    nlohmann::ordered_json metadata;
    std::vector<std::string> log;

    const MethodPoint& at(Method m, double axis_value) const {
        for (const auto& p : points)
            if (p.method == m && p.axis_value == axis_value) return p;
        throw DomainError(std::string("no report row for ") + to_string(m));
    }
};

inline SystemConfig config_for(const ExperimentPlan& plan, double value) {
    SystemConfig cfg = plan.base;
    switch (plan.axis) {
        case SweepAxis::SnrDb: return with_snr_db(cfg, value);
        case SweepAxis::Antennas: cfg.antennas = static_cast<int>(std::lround(value)); break;
        case SweepAxis::PilotLength: cfg.pilot_length = static_cast<int>(std::lround(value)); break;
    }
    return with_snr_db(cfg, plan.snr_db);
}

inline void validate(const ExperimentPlan& plan) {
    auto fail = [](const std::string& msg) { throw ConfigError("invalid experiment plan: " + msg); };
    if (plan.values.empty()) fail("no axis values");
    for (std::size_t i = 1; i < plan.values.size(); ++i)
        if (!(plan.values[i] > plan.values[i - 1])) fail("axis values must be strictly increasing");
    if (plan.methods.empty()) fail("no methods");
    for (auto m : plan.methods)
        if (m == Method::BruteForce) fail("BRUTE_FORCE is an oracle, not an experiment method");
    const auto& t = plan.trials;
    if (t.scenarios < 1 || t.activity_draws < 1 || t.channel_draws < 1 || t.symbols < 1)
        fail("all trial counts must be >= 1");
    if (plan.workers < 1) fail("workers must be >= 1");
    if (plan.axis != SweepAxis::SnrDb) {
        for (double v : plan.values)
            if (v != std::round(v) || v < 1) fail(std::string(to_string(plan.axis)) + " values must be positive integers");
    }
    for (double v : plan.values) {
        SystemConfig cfg = config_for(plan, v);
        validate(cfg);
        if (cfg.users < 3) fail("need N >= 3 users for feature extraction");
        if (std::find(plan.methods.begin(), plan.methods.end(), Method::NnChart) != plan.methods.end()) {
            if (cfg.chart_neighbors >= static_cast<int>(cfg.users)) fail("chart_neighbors must be < N");
            if (cfg.chart_dim > static_cast<int>(cfg.users) - 2) fail("chart_dim must be <= N - 2");
        }
    }
}

namespace detail {

inline bool needs_dissimilarity(const std::vector<Method>& methods) {
    for (auto m : methods)
        if (m == Method::NnChart || m == Method::NnCmd || m == Method::Sgps) return true;
    return false;
}

/// Per-scenario state shared read-only by all trial tasks.
struct ScenarioContext {
    SystemConfig cfg;
    Scenario scenario;
    CovarianceSet covs;
    PilotBook book;
    std::vector<PilotAssignment> assignments;  // parallel to plan.methods; empty for PERFECT_CSI
};

struct MethodTally {
    std::uint64_t errors = 0;
    std::uint64_t symbols = 0;
    std::vector<double> rate;  // per active UE, mean log2(1 + gamma)
    std::size_t regularized = 0;
    double min_rcond = 1.0;
};

struct TaskResult {
    std::vector<std::size_t> active;
    std::vector<MethodTally> tallies;  // parallel to plan.methods
};

/// Estimation state for one method under one activity pattern.
struct MethodFilters {
    bool perfect = false;
    CMatrix psi;                                  // K x tau
    std::vector<std::vector<LmmseFilter>> blocks; // [active i][sector]
    CMatrix error_sum;                            // MS x MS, block diagonal
};

inline MethodFilters prepare_filters(const ScenarioContext& ctx, const PilotAssignment* assignment,
                                     const ActiveSet& active, MethodTally& tally) {
    const auto& cfg = ctx.cfg;
    const Eigen::Index dim = static_cast<Eigen::Index>(cfg.compound_dim());
    MethodFilters f;
    f.error_sum = CMatrix::Zero(dim, dim);
    if (!assignment) {
        f.perfect = true;
        return f;
    }
    f.psi = pilot_signal_matrix(ctx.book, *assignment, active, cfg.tx_power);
    const auto sets = copilot_sets(*assignment, active);
    f.blocks.resize(active.size());
    const int m = cfg.antennas;
    for (std::size_t i = 0; i < active.size(); ++i) {
        const auto k = active.indices[i];
        for (int s = 0; s < cfg.sectors; ++s) {
            std::vector<CMatrix> interferers;
            for (auto j : sets.interferers[i]) interferers.push_back(ctx.covs.block(j, s));
            auto filter = lmmse_filter(ctx.covs.block(k, s), interferers, cfg.tx_power, cfg.pilot_length,
                                       cfg.noise_power);
            tally.regularized += filter.regularized ? 1 : 0;
            tally.min_rcond = std::min(tally.min_rcond, filter.rcond);
            f.error_sum.block(s * m, s * m, m, m) += filter.error_cov;
            f.blocks[i].push_back(std::move(filter));
        }
    }
    return f;
}

inline TaskResult run_activity_draw(const ExperimentPlan& plan, const ScenarioContext& ctx, std::size_t scenario_index,
                                    std::size_t draw) {
    const auto& cfg = ctx.cfg;
    const std::size_t method_count = plan.methods.size();
    RandomStream activity_rng(plan.seed, StreamTag::Activity, {scenario_index, draw});
    const ActiveSet active = sample_active_set(ctx.scenario, activity_rng);
    const auto k_count = static_cast<Eigen::Index>(active.size());
    const auto dim = static_cast<Eigen::Index>(cfg.compound_dim());
    const int m = cfg.antennas;

    TaskResult result;
    result.active = active.indices;
    result.tallies.resize(method_count);
    std::vector<MethodFilters> filters;
    filters.reserve(method_count);
    for (std::size_t mi = 0; mi < method_count; ++mi) {
        const auto* a = plan.methods[mi] == Method::PerfectCsi ? nullptr : &ctx.assignments[mi];
        filters.push_back(prepare_filters(ctx, a, active, result.tallies[mi]));
        result.tallies[mi].rate.assign(active.size(), 0.0);
    }

    const auto qpsk = Constellation::qpsk();
    const double amplitude = std::sqrt(cfg.tx_power);
    const auto symbols = static_cast<Eigen::Index>(plan.trials.symbols);

    for (std::size_t c = 0; c < plan.trials.channel_draws; ++c) {
        // Channels, noise and data are common to all methods.
        RandomStream rng(plan.seed, StreamTag::Channel, {scenario_index, draw, c});
        CMatrix h(dim, k_count);
        for (Eigen::Index i = 0; i < k_count; ++i)
            h.col(i) = sample_compound_channel(ctx.scenario.users[active.indices[static_cast<std::size_t>(i)]], cfg, rng);
        const CMatrix pilot_noise = complex_noise(dim, cfg.pilot_length, cfg.noise_power, rng);
        std::vector<int> tx(static_cast<std::size_t>(k_count * symbols));
        for (auto& x : tx) x = static_cast<int>(rng.index(qpsk.points.size()));
        CMatrix sent(k_count, symbols);
        for (Eigen::Index t = 0; t < symbols; ++t)
            for (Eigen::Index i = 0; i < k_count; ++i)
                sent(i, t) = amplitude * qpsk.points[static_cast<std::size_t>(tx[static_cast<std::size_t>(t * k_count + i)])];
        const CMatrix received = h * sent + complex_noise(dim, symbols, cfg.noise_power, rng);

        for (std::size_t mi = 0; mi < method_count; ++mi) {
            const auto& f = filters[mi];
            auto& tally = result.tallies[mi];
            CMatrix estimates;
            if (f.perfect) {
                estimates = h;
            } else {
                const CMatrix y = pilot_rx(h, f.psi, pilot_noise);
                estimates.resize(dim, k_count);
                for (Eigen::Index i = 0; i < k_count; ++i) {
                    const CVector yk = correlate(y, f.psi.row(i).transpose(), cfg.tx_power, cfg.pilot_length);
                    for (int s = 0; s < cfg.sectors; ++s)
                        estimates.col(i).segment(s * m, m) =
                            f.blocks[static_cast<std::size_t>(i)][static_cast<std::size_t>(s)].gain * yk.segment(s * m, m);
                }
            }
            const auto combiner = lmmse_combiner(estimates, f.error_sum, cfg.tx_power, cfg.noise_power);
            tally.regularized += combiner.regularized ? 1 : 0;
            for (Eigen::Index i = 0; i < k_count; ++i) {
                const double gamma =
                    instantaneous_sinr(i, combiner.weights, estimates, f.error_sum, cfg.tx_power, cfg.noise_power);
                tally.rate[static_cast<std::size_t>(i)] += std::log2(1.0 + gamma);
            }
            for (Eigen::Index t = 0; t < symbols; ++t) {
                const auto det = detect(combiner.weights, received.col(t), qpsk);
                for (Eigen::Index i = 0; i < k_count; ++i)
                    if (det.decisions[static_cast<std::size_t>(i)] != tx[static_cast<std::size_t>(t * k_count + i)])
                        ++tally.errors;
                tally.symbols += static_cast<std::uint64_t>(k_count);
            }
        }
    }
    for (auto& t : result.tallies)
        for (auto& r : t.rate) r /= static_cast<double>(plan.trials.channel_draws);
    return result;
}

inline ScenarioContext prepare_scenario(const ExperimentPlan& plan, const SystemConfig& cfg, std::size_t scenario_index,
                                        std::vector<std::string>& log) {
    ScenarioContext ctx;
    ctx.cfg = cfg;
    RandomStream scenario_rng(plan.seed, StreamTag::Scenario, {scenario_index});
    ctx.scenario = build_scenario(cfg, scenario_rng);
    ctx.covs = covariance_set(ctx.scenario);
    ctx.book = build_pilot_book(cfg.pilot_length);
    RMatrix d;
    if (needs_dissimilarity(plan.methods)) d = dissimilarity_matrix(ctx.covs);

    ctx.assignments.resize(plan.methods.size());
    for (std::size_t mi = 0; mi < plan.methods.size(); ++mi) {
        const Method method = plan.methods[mi];
        RandomStream rng(plan.seed, StreamTag::Assignment, {scenario_index, static_cast<std::uint64_t>(method)});
        PilotAssignment a;
        switch (method) {
            case Method::NnChart: {
                const auto chart = laplacian_eigenmaps(d, cfg.chart_neighbors, cfg.chart_dim);
                for (const auto& [i, j] : chart.bridges)
                    log.push_back("scenario " + std::to_string(scenario_index) + ": chart graph bridged " +
                                  std::to_string(i) + "-" + std::to_string(j));
                a = nearest_neighbor_assignment(chart.chart, cfg.pilot_length, rng);
                break;
            }
            case Method::NnCmd: a = nearest_neighbor_assignment(cmd_feature(d), cfg.pilot_length, rng); break;
            case Method::NnPosition:
                a = nearest_neighbor_assignment(position_feature(ctx.scenario, cfg.position_mode), cfg.pilot_length, rng);
                break;
            case Method::Random: a = random_assignment(cfg.users, cfg.pilot_length, rng, cfg.balanced_random); break;
            case Method::Sgps: a = sgps_assignment(d, cfg.pilot_length); break;
            case Method::PerfectCsi: continue;
            case Method::BruteForce: throw ConfigError("BRUTE_FORCE is not an experiment method");
        }
        a.seed = plan.seed;
        ctx.assignments[mi] = std::move(a);
    }
    return ctx;
}

template <class Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
    const auto threads = static_cast<std::size_t>(std::max(1, workers));
    if (threads == 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(threads, count); ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

inline std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

inline std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const SystemConfig& cfg) {
    return {{"users", cfg.users},
            {"active_users", cfg.active_users},
            {"sectors", cfg.sectors},
            {"antennas", cfg.antennas},
            {"paths", cfg.paths},
            {"antenna_spacing", cfg.antenna_spacing},
            {"angular_std_deg", cfg.angular_std_deg},
            {"wavelength", cfg.wavelength},
            {"cell_radius", cfg.cell_radius},
            {"min_radius", cfg.min_radius},
            {"tx_power", cfg.tx_power},
            {"noise_power", cfg.noise_power},
            {"pilot_length", cfg.pilot_length},
            {"coherence_length", cfg.coherence_length},
            {"max_gain_db", cfg.max_gain_db},
            {"max_attenuation_db", cfg.max_attenuation_db},
            {"beamwidth_3db_deg", cfg.beamwidth_3db_deg},
            {"chart_dim", cfg.chart_dim},
            {"chart_neighbors", cfg.chart_neighbors},
            {"seed", cfg.seed},
            {"quadrature_points", cfg.quadrature_points},
            {"position_feature", to_string(cfg.position_mode)},
            {"balanced_random", cfg.balanced_random}};
}

inline nlohmann::ordered_json to_json(const ExperimentPlan& plan) {
    nlohmann::ordered_json methods = nlohmann::ordered_json::array();
    for (auto m : plan.methods) methods.push_back(to_string(m));
    return {{"axis", to_string(plan.axis)},
            {"values", plan.values},
            {"methods", methods},
            {"scenarios", plan.trials.scenarios},
            {"activity_draws", plan.trials.activity_draws},
            {"channel_draws", plan.trials.channel_draws},
            {"symbols", plan.trials.symbols},
            {"snr_db", plan.snr_db},
            {"seed", plan.seed}};
}

/// Runs the full sweep. Assignments are fixed per scenario over all N UEs;
/// activity and channel draws use substreams keyed by their indices, so the
/// report does not depend on the worker count.
inline MetricsReport run_experiment(const ExperimentPlan& plan) {
    validate(plan);
    MetricsReport report;
    report.axis = plan.axis;
    const std::string started = detail::utc_now();
    const std::size_t method_count = plan.methods.size();

    // [axis][method] accumulators
    std::vector<std::vector<MethodPoint>> grid(plan.values.size(), std::vector<MethodPoint>(method_count));
    std::vector<std::vector<double>> sum_rate_total(plan.values.size(), std::vector<double>(method_count, 0.0));
    std::vector<std::vector<std::size_t>> regularized(plan.values.size(), std::vector<std::size_t>(method_count, 0));

    for (std::size_t a = 0; a < plan.values.size(); ++a) {
        const SystemConfig cfg = config_for(plan, plan.values[a]);
        for (std::size_t s = 0; s < plan.trials.scenarios; ++s) {
            const auto ctx = detail::prepare_scenario(plan, cfg, s, report.log);
            if (a == 0 && s == 0 && !ctx.book.binary)
                report.log.push_back("pilot_length " + std::to_string(cfg.pilot_length) +
                                     " is not a power of two: using the DFT pilot book");
            std::vector<detail::TaskResult> results(plan.trials.activity_draws);
            detail::parallel_for(results.size(), plan.workers,
                                 [&](std::size_t t) { results[t] = detail::run_activity_draw(plan, ctx, s, t); });
            for (std::size_t t = 0; t < results.size(); ++t) {
                for (std::size_t mi = 0; mi < method_count; ++mi) {
                    const auto& tally = results[t].tallies[mi];
                    auto& point = grid[a][mi];
                    point.symbol_errors += tally.errors;
                    point.symbols += tally.symbols;
                    regularized[a][mi] += tally.regularized;
                    double sum = 0.0;
                    for (std::size_t i = 0; i < tally.rate.size(); ++i) {
                        point.rates.push_back(tally.rate[i]);
                        point.rate_ue.push_back(results[t].active[i]);
                        point.rate_scenario.push_back(s);
                        point.rate_activity.push_back(t);
                        sum += tally.rate[i];
                    }
                    sum_rate_total[a][mi] += sum;
                }
            }
        }
        for (std::size_t mi = 0; mi < method_count; ++mi) {
            auto& p = grid[a][mi];
            p.method = plan.methods[mi];
            p.axis_value = plan.values[a];
            p.pilot_length = cfg.pilot_length;
            p.coherence_length = cfg.coherence_length;
            p.ser = static_cast<double>(p.symbol_errors) / static_cast<double>(p.symbols);
            p.ser_ci = wilson_interval(p.symbol_errors, p.symbols);
            p.sum_rate = sum_rate_total[a][mi] /
                         static_cast<double>(plan.trials.scenarios * plan.trials.activity_draws);
            p.net_sum_rate = (1.0 - static_cast<double>(cfg.pilot_length) / cfg.coherence_length) * p.sum_rate;
            if (regularized[a][mi] > 0)
                report.log.push_back(std::string(to_string(p.method)) + " at " + to_string(plan.axis) + "=" +
                                     std::to_string(plan.values[a]) + ": " + std::to_string(regularized[a][mi]) +
                                     " solves needed a ridge (noise_power == 0)");
        }
    }
    for (std::size_t mi = 0; mi < method_count; ++mi)
        for (std::size_t a = 0; a < plan.values.size(); ++a) report.points.push_back(std::move(grid[a][mi]));

    const auto plan_json = to_json(plan);
    const auto cfg_json = to_json(plan.base);
    report.metadata = {{"plan", plan_json},
                       {"config", cfg_json},
                       {"config_hash", detail::fnv1a(cfg_json.dump() + plan_json.dump())},
                       {"snr_reference", "cell-edge boresight free-space gain"},
                       {"workers", plan.workers},
                       {"started_utc", started},
                       {"finished_utc", detail::utc_now()}};
    return report;
}

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

}  // namespace detail

/// method,axis_name,axis_value,ser,ser_ci_lo,ser_ci_hi,sum_rate,net_sum_rate,trials
/// (trials = number of detected symbols behind the SER estimate).
inline void write_summary_csv(std::ostream& os, const MetricsReport& report) {
    os << "method,axis_name,axis_value,ser,ser_ci_lo,ser_ci_hi,sum_rate,net_sum_rate,trials\n";
    for (const auto& p : report.points) {
        using detail::fmt;
        os << to_string(p.method) << ',' << to_string(report.axis) << ',' << fmt(p.axis_value) << ',' << fmt(p.ser)
           << ',' << fmt(p.ser_ci.lo) << ',' << fmt(p.ser_ci.hi) << ',' << fmt(p.sum_rate) << ','
           << fmt(p.net_sum_rate) << ',' << p.symbols << '\n';
    }
}

/// method,axis_name,axis_value,scenario,activity_draw,ue_index,rate,net_rate
inline void write_rates_csv(std::ostream& os, const MetricsReport& report) {
    os << "method,axis_name,axis_value,scenario,activity_draw,ue_index,rate,net_rate\n";
    for (const auto& p : report.points) {
        const double prelog = 1.0 - static_cast<double>(p.pilot_length) / p.coherence_length;
        for (std::size_t i = 0; i < p.rates.size(); ++i) {
            using detail::fmt;
            os << to_string(p.method) << ',' << to_string(report.axis) << ',' << fmt(p.axis_value) << ','
               << p.rate_scenario[i] << ',' << p.rate_activity[i] << ',' << p.rate_ue[i] << ',' << fmt(p.rates[i])
               << ',' << fmt(prelog * p.rates[i]) << '\n';
        }
    }
}

/// Writes summary.csv, rates.csv, metadata.json and run_log.txt into `dir`.
inline void emit_report(const MetricsReport& report, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
    const std::filesystem::path base(dir);
    write_file((base / "summary.csv").string(), write_summary_csv, report);
    write_file((base / "rates.csv").string(), write_rates_csv, report);
    write_file((base / "metadata.json").string(),
               [](std::ostream& os, const MetricsReport& r) { os << r.metadata.dump(2) << '\n'; }, report);
    write_file((base / "run_log.txt").string(),
               [](std::ostream& os, const MetricsReport& r) {
                   for (const auto& line : r.log) os << line << '\n';
               },
               report);
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace detail

/// Parses the [experiment] section; [system] supplies the base config.
inline ExperimentPlan parse_plan(const boost::property_tree::ptree& tree) {
    ExperimentPlan plan;
    const auto system = tree.get_child_optional("system");
    plan.base = system ? parse_system_config(*system) : default_config();
    plan.seed = plan.base.seed;
    if (const auto exp = tree.get_child_optional("experiment")) {
        for (const auto& [key, node] : *exp) {
            const std::string v = node.get_value<std::string>();
            using detail::parse_value;
            if (key == "axis") {
                if (v == "snr_db") plan.axis = SweepAxis::SnrDb;
                else if (v == "antennas") plan.axis = SweepAxis::Antennas;
                else if (v == "pilot_length") plan.axis = SweepAxis::PilotLength;
                else throw ConfigError("invalid experiment field 'axis': expected snr_db|antennas|pilot_length");
            } else if (key == "values") {
                plan.values.clear();
                for (const auto& item : detail::split_list(v)) plan.values.push_back(parse_value<double>(key, item));
            } else if (key == "methods") {
                plan.methods.clear();
                for (const auto& item : detail::split_list(v)) {
                    const auto m = parse_method(item);
                    if (!m) throw ConfigError("invalid experiment field 'methods': unknown method '" + item + "'");
                    plan.methods.push_back(*m);
                }
            } else if (key == "scenarios") plan.trials.scenarios = parse_value<std::size_t>(key, v);
            else if (key == "activity_draws") plan.trials.activity_draws = parse_value<std::size_t>(key, v);
            else if (key == "channel_draws") plan.trials.channel_draws = parse_value<std::size_t>(key, v);
            else if (key == "symbols") plan.trials.symbols = parse_value<std::size_t>(key, v);
            else if (key == "snr_db") plan.snr_db = parse_value<double>(key, v);
            else if (key == "workers") plan.workers = parse_value<int>(key, v);
            else throw ConfigError("unknown config field '" + key + "' in [experiment]");
        }
    }
    return plan;
}

inline ExperimentPlan load_plan(const std::string& path) {
    auto plan = parse_plan(read_ini_file(path));
    validate(plan);
    return plan;
}

}  // namespace pilotreuse
