#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "alertzone/bench/workload.hpp"
#include "alertzone/encoding/encoding.hpp"

namespace alertzone::bench {

enum class Algorithm { GO, MSGO, SGO, HGE, RANDOM };

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::GO: return "GO";
        case Algorithm::MSGO: return "MSGO";
        case Algorithm::SGO: return "SGO";
        case Algorithm::HGE: return "HGE";
        case Algorithm::RANDOM: return "RANDOM";
    }
    return "?";
}

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Algorithm parse_algorithm(const std::string& name) {
    for (Algorithm a : {Algorithm::GO, Algorithm::MSGO, Algorithm::SGO, Algorithm::HGE, Algorithm::RANDOM}) {
        if (to_string(a) == name) return a;
    }
    throw ConfigError("unknown algorithm '" + name + "' (expected GO, MSGO, SGO, HGE or RANDOM)");
}

struct DynamicsConfig {
    double alpha = 0.85;
    double c = 0.6;
    std::uint64_t walks = 100000;
    std::optional<std::uint64_t> evolve_steps;  // uniform steps before re-encoding; default n
    std::uint64_t workload_zones = 10;  // later zones the two encodings are scored on
    std::uint64_t reencode_interval = 0;  // 0: encode once; otherwise every this many workload zones
};

struct ExperimentConfig {
    std::size_t n = 100;
    Algorithm algorithm = Algorithm::GO;
    int depth = 0;  // 0: full depth for GO; MSGO needs an explicit depth
    double a = 0.75;
    double b = 10.0;
    std::vector<double> fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    double noise = 0.0;
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    std::size_t zones_per_fraction = 1;
    Sampling sampling = Sampling::weighted;
    std::optional<Point> hotspot;
    bool timing = false;  // wall_ms stays 0 otherwise so CSVs are reproducible
    std::size_t spot_checks = 4;  // cells per trial checked for cover exactness and HVE round-trip
    DynamicsConfig dynamics;

    void validate() const {
        if (n < 2) throw ConfigError("n must be at least 2");
        if (n > (std::size_t{1} << 24)) throw ConfigError("n is too large");
        if (depth < 0) throw ConfigError("depth must be non-negative");
        const int k = codeword_width_for(n);
        if (depth > k) throw ConfigError("depth exceeds codeword width " + std::to_string(k));
        if (algorithm == Algorithm::MSGO && depth == 0) throw ConfigError("MSGO needs depth >= 1");
        if (!(b >= 0.0)) throw ConfigError("b must be non-negative");
        if (!(a == a)) throw ConfigError("a must be a number");
        if (fractions.empty()) throw ConfigError("fractions must not be empty");
        for (double f : fractions) {
            if (!(f > 0.0 && f <= 1.0)) throw ConfigError("each fraction must lie in (0, 1]");
            if (std::ceil(f * static_cast<double>(n) - 1e-9) < 1.0) throw ConfigError("a fraction selects no cells");
        }
        if (!(noise >= 0.0 && noise <= 1.0)) throw ConfigError("noise must lie in [0, 1]");
        if (trials < 1) throw ConfigError("trials must be at least 1");
        if (zones_per_fraction < 1) throw ConfigError("zones_per_fraction must be at least 1");
        if (!(dynamics.alpha > 0.0 && dynamics.alpha <= 1.0)) throw ConfigError("dynamics.alpha must lie in (0, 1]");
        if (!(dynamics.c > 0.0 && dynamics.c < 1.0)) throw ConfigError("dynamics.c must lie in (0, 1)");
        if (dynamics.walks < 1) throw ConfigError("dynamics.walks must be at least 1");
        if (dynamics.workload_zones < 1) throw ConfigError("dynamics.workload_zones must be at least 1");
    }
};

namespace detail {

template <class T>
void read_field(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known, const std::string& where) {
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* k : known) ok |= item.key() == k;
        if (!ok) throw ConfigError("unknown field '" + where + item.key() + "'");
    }
}

}  // namespace detail

/// Schema: every field optional, defaults as in ExperimentConfig.
///   n, algorithm, depth, a, b, fractions[], noise, trials, seed,
///   zones_per_fraction, sampling ("weighted"|"uniform"), hotspot {x, y},
///   timing, spot_checks,
///   dynamics {alpha, c, walks, evolve_steps, workload_zones, reencode_interval}
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    detail::reject_unknown(j,
                           {"n", "algorithm", "depth", "a", "b", "fractions", "noise", "trials", "seed",
                            "zones_per_fraction", "sampling", "hotspot", "timing", "spot_checks", "dynamics"},
                           "");
    ExperimentConfig cfg;
    detail::read_field(j, "n", cfg.n);
    if (j.contains("algorithm")) {
        std::string name;
        detail::read_field(j, "algorithm", name);
        cfg.algorithm = parse_algorithm(name);
    }
    detail::read_field(j, "depth", cfg.depth);
    detail::read_field(j, "a", cfg.a);
    detail::read_field(j, "b", cfg.b);
    detail::read_field(j, "fractions", cfg.fractions);
    detail::read_field(j, "noise", cfg.noise);
    detail::read_field(j, "trials", cfg.trials);
    detail::read_field(j, "seed", cfg.seed);
    detail::read_field(j, "zones_per_fraction", cfg.zones_per_fraction);
    if (j.contains("sampling")) {
        std::string s;
        detail::read_field(j, "sampling", s);
        if (s == "weighted") cfg.sampling = Sampling::weighted;
        else if (s == "uniform") cfg.sampling = Sampling::uniform;
        else throw ConfigError("sampling must be 'weighted' or 'uniform'");
    }
    if (j.contains("hotspot")) {
        const auto& h = j.at("hotspot");
        if (!h.is_object()) throw ConfigError("hotspot must be an object {x, y}");
        detail::reject_unknown(h, {"x", "y"}, "hotspot.");
        Point p;
        detail::read_field(h, "x", p.x);
        detail::read_field(h, "y", p.y);
        cfg.hotspot = p;
    }
    detail::read_field(j, "timing", cfg.timing);
    detail::read_field(j, "spot_checks", cfg.spot_checks);
    if (j.contains("dynamics")) {
        const auto& d = j.at("dynamics");
        if (!d.is_object()) throw ConfigError("dynamics must be an object");
        detail::reject_unknown(d, {"alpha", "c", "walks", "evolve_steps", "workload_zones", "reencode_interval"},
                               "dynamics.");
        detail::read_field(d, "alpha", cfg.dynamics.alpha);
        detail::read_field(d, "c", cfg.dynamics.c);
        detail::read_field(d, "walks", cfg.dynamics.walks);
        if (d.contains("evolve_steps")) {
            std::uint64_t steps = 0;
            detail::read_field(d, "evolve_steps", steps);
            cfg.dynamics.evolve_steps = steps;
        }
        detail::read_field(d, "workload_zones", cfg.dynamics.workload_zones);
        detail::read_field(d, "reencode_interval", cfg.dynamics.reencode_interval);
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

}  // namespace alertzone::bench
