#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "alertzone/bench/config.hpp"
#include "alertzone/bench/workload.hpp"
#include "alertzone/dynamics/lazy_chain.hpp"
#include "alertzone/encoding/baselines.hpp"
#include "alertzone/encoding/optimizers.hpp"
#include "alertzone/hve/hve.hpp"
#include "alertzone/tokens/minimize.hpp"

namespace alertzone::bench {

struct TrialResult {
    std::string algorithm;
    std::size_t n = 0;
    int depth = 0;
    double a = 0.0;
    double b = 0.0;
    double fraction = 0.0;
    double noise = 0.0;
    std::size_t trial = 0;
    std::uint64_t pairing_cost = 0;
    std::uint64_t baseline_cost = 0;
    double improvement_pct = 0.0;
    double wall_ms = 0.0;
    std::uint64_t seed = 0;
};

struct ExperimentReport {
    std::vector<TrialResult> rows;
    std::vector<std::string> failures;  // one line per failed trial
};

inline double improvement_percent(std::uint64_t cost, std::uint64_t baseline) {
    if (baseline == 0) return 0.0;
    return (static_cast<double>(baseline) - static_cast<double>(cost)) / static_cast<double>(baseline) * 100.0;
}

// Stream identifiers under a trial seed.
namespace stream {
inline constexpr std::uint64_t probabilities = 0;
inline constexpr std::uint64_t noise = 1;
inline constexpr std::uint64_t encoder = 2;
inline constexpr std::uint64_t zones = 3;
inline constexpr std::uint64_t spot = 4;
inline constexpr std::uint64_t evolution = 5;
inline constexpr std::uint64_t walks = 6;
}  // namespace stream

inline std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t trial) { return derive_seed(cfg.seed, {trial}); }

inline GridEncoding encode(Algorithm algorithm, const Grid& grid, int depth, std::uint64_t rng_seed) {
    switch (algorithm) {
        case Algorithm::GO: {
            GoOptions options;
            options.depth = depth;
            options.rng_seed = rng_seed;
            return gray_optimizer(grid, options);
        }
        case Algorithm::MSGO: return msgo(grid, depth, rng_seed);
        case Algorithm::SGO: return sgo(grid);
        case Algorithm::HGE: return hge_baseline(grid);
        case Algorithm::RANDOM: return random_baseline(grid, rng_seed);
    }
    throw std::logic_error("unknown algorithm");
}

inline std::uint64_t zone_cost(const AlertZone& zone, const GridEncoding& enc) { return pairing_cost(minimize(zone, enc)); }

/// Checks, for a few cells, that the minimized cover and an HVE evaluation
/// of its tokens both agree with zone membership. Throws on disagreement.
inline void spot_check(const AlertZone& zone, const GridEncoding& enc, std::size_t cells, std::uint64_t rng_seed) {
    if (cells == 0) return;
    using namespace alertzone::hve;
    const TokenSet ts = minimize(zone, enc);
    SplitMix64 rng(rng_seed);
    const ReferenceHve scheme{ReferenceGroup(GroupParams::generate(24, rng()))};
    const auto keys = scheme.setup(enc.width(), rng);
    const MessageSpace<ReferenceGroup> messages(scheme.group(), 1, rng());
    std::vector<Token<ReferenceGroup>> tokens;
    tokens.reserve(ts.patterns.size());
    for (const Pattern& p : ts.patterns) tokens.push_back(scheme.gen_token(keys.sk, p, rng));
    for (std::size_t i = 0; i < cells; ++i) {
        // alternate between members and arbitrary cells
        const auto cell = i % 2 == 0 ? zone.cells()[uniform_below(rng, zone.size())]
                                     : static_cast<std::uint32_t>(uniform_below(rng, enc.cell_count()));
        const Codeword w = enc.codeword(cell);
        const bool member = zone.contains(cell);
        if (std::binary_search(ts.covered.begin(), ts.covered.end(), w.bits) != member) {
            throw std::runtime_error("cover disagrees with zone membership at cell " + std::to_string(cell));
        }
        const auto c = scheme.encrypt(keys.pk, w, messages.message(0), rng);
        bool hit = false;
        for (const auto& tk : tokens) {
            if (scheme.query(c, tk, messages).matched()) {
                hit = true;
                break;
            }
        }
        if (hit != member) throw std::runtime_error("HVE query disagrees with zone membership at cell " + std::to_string(cell));
    }
}

namespace detail {

inline TrialResult base_row(const ExperimentConfig& cfg, std::size_t trial, double fraction) {
    TrialResult r;
    r.algorithm = to_string(cfg.algorithm);
    r.n = cfg.n;
    r.depth = cfg.depth;
    r.a = cfg.a;
    r.b = cfg.b;
    r.fraction = fraction;
    r.noise = cfg.noise;
    r.trial = trial;
    r.seed = trial_seed(cfg, trial);
    return r;
}

inline Grid trial_grid(const ExperimentConfig& cfg, std::uint64_t seed) {
    const Grid geometry = Grid::lattice(cfg.n);
    SigmoidModel model{cfg.a, cfg.b, derive_seed(seed, {stream::probabilities}), cfg.hotspot};
    return geometry.with_probabilities(gen_probabilities(geometry, model));
}

template <class Clock = std::chrono::steady_clock>
double elapsed_ms(typename Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

/// Runs body(trial) for every trial, isolating failures.
inline void for_each_trial(const ExperimentConfig& cfg, ExperimentReport& report,
                           const std::function<void(std::size_t)>& body) {
    for (std::size_t t = 0; t < cfg.trials; ++t) {
        try {
            body(t);
        } catch (const std::exception& e) {
            report.failures.push_back("trial " + std::to_string(t) + ": " + e.what());
        }
    }
}

}  // namespace detail

/// Static comparison against HGE on the same zones. One row per
/// (trial, fraction); costs are summed over zones_per_fraction zones.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;
    detail::for_each_trial(cfg, report, [&](std::size_t t) {
        const std::uint64_t seed = trial_seed(cfg, t);
        const Grid grid = detail::trial_grid(cfg, seed);
        const Grid seen = grid.with_probabilities(add_noise(grid.probabilities(), cfg.noise, derive_seed(seed, {stream::noise})));
        const auto start = std::chrono::steady_clock::now();
        const GridEncoding enc = encode(cfg.algorithm, seen, cfg.depth, derive_seed(seed, {stream::encoder}));
        const double wall = cfg.timing ? detail::elapsed_ms(start) : 0.0;
        const GridEncoding baseline = hge_baseline(grid);
        std::vector<TrialResult> rows;
        for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
            TrialResult row = detail::base_row(cfg, t, cfg.fractions[fi]);
            for (std::size_t z = 0; z < cfg.zones_per_fraction; ++z) {
                const AlertZone zone =
                    sample_zone(grid.probabilities(), cfg.fractions[fi], derive_seed(seed, {stream::zones, fi, z}), cfg.sampling);
                row.pairing_cost += zone_cost(zone, enc);
                row.baseline_cost += zone_cost(zone, baseline);
                if (fi == 0 && z == 0) spot_check(zone, enc, cfg.spot_checks, derive_seed(seed, {stream::spot}));
            }
            row.improvement_pct = improvement_percent(row.pairing_cost, row.baseline_cost);
            row.wall_ms = wall;
            rows.push_back(row);
        }
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    });
    return report;
}

/// GO seeded at one cell with depth 1..k (or the given depths), leftover
/// cells placed randomly; compared against HGE on the same zones.
inline ExperimentReport run_depth_sweep(ExperimentConfig cfg, std::vector<int> depths = {}) {
    cfg.algorithm = Algorithm::GO;
    cfg.validate();
    const int k = codeword_width_for(cfg.n);
    if (depths.empty()) {
        for (int d = 1; d <= k; ++d) depths.push_back(d);
    }
    for (int d : depths) {
        if (d < 1 || d > k) throw ConfigError("depth " + std::to_string(d) + " outside [1, " + std::to_string(k) + "]");
    }
    ExperimentReport report;
    detail::for_each_trial(cfg, report, [&](std::size_t t) {
        const std::uint64_t seed = trial_seed(cfg, t);
        const Grid grid = detail::trial_grid(cfg, seed);
        const GridEncoding baseline = hge_baseline(grid);
        std::vector<std::vector<AlertZone>> zones_by_fraction;
        std::vector<std::vector<std::uint64_t>> baseline_costs;
        for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
            zones_by_fraction.emplace_back();
            baseline_costs.emplace_back();
            for (std::size_t z = 0; z < cfg.zones_per_fraction; ++z) {
                zones_by_fraction.back().push_back(
                    sample_zone(grid.probabilities(), cfg.fractions[fi], derive_seed(seed, {stream::zones, fi, z}), cfg.sampling));
                baseline_costs.back().push_back(zone_cost(zones_by_fraction.back().back(), baseline));
            }
        }
        std::vector<TrialResult> rows;
        for (int d : depths) {
            const auto start = std::chrono::steady_clock::now();
            const GridEncoding enc = encode(Algorithm::GO, grid, d, derive_seed(seed, {stream::encoder}));
            const double wall = cfg.timing ? detail::elapsed_ms(start) : 0.0;
            for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
                TrialResult row = detail::base_row(cfg, t, cfg.fractions[fi]);
                row.depth = d;
                for (std::size_t z = 0; z < cfg.zones_per_fraction; ++z) {
                    row.pairing_cost += zone_cost(zones_by_fraction[fi][z], enc);
                    row.baseline_cost += baseline_costs[fi][z];
                }
                row.improvement_pct = improvement_percent(row.pairing_cost, row.baseline_cost);
                row.wall_ms = wall;
                rows.push_back(row);
            }
        }
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    });
    return report;
}

/// Encoder wall time per trial (always measured), plus costs on one zone
/// at the first fraction.
inline ExperimentReport run_timing(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;
    detail::for_each_trial(cfg, report, [&](std::size_t t) {
        const std::uint64_t seed = trial_seed(cfg, t);
        const Grid grid = detail::trial_grid(cfg, seed);
        const auto start = std::chrono::steady_clock::now();
        const GridEncoding enc = encode(cfg.algorithm, grid, cfg.depth, derive_seed(seed, {stream::encoder}));
        const double wall = detail::elapsed_ms(start);
        TrialResult row = detail::base_row(cfg, t, cfg.fractions.front());
        const AlertZone zone =
            sample_zone(grid.probabilities(), cfg.fractions.front(), derive_seed(seed, {stream::zones, 0, 0}), cfg.sampling);
        row.pairing_cost = zone_cost(zone, enc);
        row.baseline_cost = zone_cost(zone, hge_baseline(grid));
        row.improvement_pct = improvement_percent(row.pairing_cost, row.baseline_cost);
        row.wall_ms = wall;
        report.rows.push_back(row);
    });
    return report;
}

/// Static versus marginal-fed encoding under uniform zone evolution.
/// Per (trial, fraction): the static encoding uses the initial
/// probabilities; the zone starts as a weighted sample at that fraction and
/// takes evolve_steps uniform steps (n by default); Monte Carlo walks from the current
/// zone give cell marginals for the dynamic encoding; both encodings are
/// then scored on the next workload_zones zones of the same evolution.
/// pairing_cost is the dynamic total, baseline_cost the static total.
inline ExperimentReport run_dynamic(const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;
    const auto& dyn = cfg.dynamics;
    detail::for_each_trial(cfg, report, [&](std::size_t t) {
        const std::uint64_t seed = trial_seed(cfg, t);
        const Grid grid = detail::trial_grid(cfg, seed);
        const GridEncoding fixed = encode(cfg.algorithm, grid, cfg.depth, derive_seed(seed, {stream::encoder}));
        const LazyChain drift(grid, RowModel::uniform);
        const LazyChain estimator(grid, RowModel::uniform, dyn.alpha);
        std::vector<TrialResult> rows;
        for (std::size_t fi = 0; fi < cfg.fractions.size(); ++fi) {
            TrialResult row = detail::base_row(cfg, t, cfg.fractions[fi]);
            const AlertZone first =
                sample_zone(grid.probabilities(), cfg.fractions[fi], derive_seed(seed, {stream::zones, fi}), cfg.sampling);
            ZoneState state(grid.size());
            for (std::uint32_t c : first.cells()) state.set(c, true);
            SplitMix64 rng(derive_seed(seed, {stream::evolution, fi}));
            evolve(drift, state, dyn.evolve_steps.value_or(cfg.n), rng);

            double wall = 0.0;
            std::uint64_t encodings = 0;
            auto reencode = [&] {
                const auto start = std::chrono::steady_clock::now();
                const auto m = monte_carlo_marginals(estimator, state, dyn.walks, dyn.c,
                                                     derive_seed(seed, {stream::walks, fi, encodings++}));
                GridEncoding enc = encode(cfg.algorithm, grid.with_probabilities(m), cfg.depth, derive_seed(seed, {stream::encoder}));
                if (cfg.timing) wall += detail::elapsed_ms(start);
                return enc;
            };
            GridEncoding adaptive = reencode();
            for (std::uint64_t w = 0; w < dyn.workload_zones; ++w) {
                if (dyn.reencode_interval > 0 && w > 0 && w % dyn.reencode_interval == 0) adaptive = reencode();
                drift.step(state, rng);
                if (state.empty()) continue;
                const AlertZone zone(state.member_ids());
                row.pairing_cost += zone_cost(zone, adaptive);
                row.baseline_cost += zone_cost(zone, fixed);
                if (w == 0 && fi == 0) spot_check(zone, adaptive, cfg.spot_checks, derive_seed(seed, {stream::spot}));
            }
            row.improvement_pct = improvement_percent(row.pairing_cost, row.baseline_cost);
            row.wall_ms = wall;
            rows.push_back(row);
        }
        report.rows.insert(report.rows.end(), rows.begin(), rows.end());
    });
    return report;
}

inline const char* kCsvHeader =
    "algorithm,n,depth,a,b,fraction,noise,trial,pairing_cost,baseline_cost,improvement_pct,wall_ms,seed";

inline std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

/// Rows sorted by (algorithm, depth, fraction, noise, trial).
inline void write_csv(std::ostream& out, std::vector<TrialResult> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const TrialResult& x, const TrialResult& y) {
        return std::tie(x.algorithm, x.depth, x.fraction, x.noise, x.trial) <
               std::tie(y.algorithm, y.depth, y.fraction, y.noise, y.trial);
    });
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        char wall[32];
        std::snprintf(wall, sizeof wall, "%.3f", r.wall_ms);
        out << r.algorithm << ',' << r.n << ',' << r.depth << ',' << format_number(r.a) << ',' << format_number(r.b) << ','
            << format_number(r.fraction) << ',' << format_number(r.noise) << ',' << r.trial << ',' << r.pairing_cost << ','
            << r.baseline_cost << ',' << format_number(r.improvement_pct) << ',' << wall << ',' << r.seed << '\n';
    }
}

/// Mean improvement over the rows matching the filter.
inline double mean_improvement(const std::vector<TrialResult>& rows, const std::function<bool(const TrialResult&)>& keep) {
    double total = 0.0;
    std::size_t count = 0;
    for (const auto& r : rows) {
        if (!keep(r)) continue;
        total += r.improvement_pct;
        ++count;
    }
    if (count == 0) throw std::invalid_argument("no rows to average");
    return total / static_cast<double>(count);
}

/// Mean improvement by alert fraction, ascending.
inline std::map<double, double> mean_by_fraction(const std::vector<TrialResult>& rows) {
    std::map<double, std::pair<double, std::size_t>> acc;
    for (const auto& r : rows) {
        acc[r.fraction].first += r.improvement_pct;
        ++acc[r.fraction].second;
    }
    std::map<double, double> out;
    for (const auto& [f, s] : acc) out[f] = s.first / static_cast<double>(s.second);
    return out;
}

}  // namespace alertzone::bench
