#pragma once

// Synthetic workloads: per-cell alert probabilities, alert-zone sampling and
// probability noise.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "alertzone/core/random.hpp"
#include "alertzone/encoding/grid.hpp"
#include "alertzone/tokens/minimize.hpp"

namespace alertzone::bench {

inline double sigmoid(double x, double a, double b) { return 1.0 / (1.0 + std::exp(-b * (x - a))); }

struct Point {
    double x = 0.5;
    double y = 0.5;
};

struct SigmoidModel {
    double a = 0.75;
    double b = 10.0;
    std::uint64_t rng_seed = 0;
    // When set, x is the cell's closeness to this point (1 at the point,
    // 0 at the farthest corner) instead of an independent uniform draw.
    std::optional<Point> hotspot;
};

/// p(v) = S(x) per cell. Outputs lie in [0, 1]; they only reach the ends
/// when b is large enough to saturate the double.
inline std::vector<double> gen_probabilities(const Grid& geometry, const SigmoidModel& model) {
    std::vector<double> p(geometry.size());
    SplitMix64 rng(model.rng_seed);
    double far = 0.0;
    if (model.hotspot) {
        for (const Cell& c : geometry.cells()) far = std::max(far, std::hypot(c.x - model.hotspot->x, c.y - model.hotspot->y));
        if (far == 0.0) far = 1.0;
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        double x = 0.0;
        if (model.hotspot) {
            const Cell& c = geometry.cell(i);
            x = 1.0 - std::hypot(c.x - model.hotspot->x, c.y - model.hotspot->y) / far;
        } else {
            x = uniform01(rng);
        }
        p[i] = sigmoid(x, model.a, model.b);
    }
    return p;
}

inline std::vector<double> gen_probabilities(std::size_t n, const SigmoidModel& model) {
    if (n < 1) throw std::invalid_argument("grid needs at least one cell");
    return gen_probabilities(Grid::lattice(n), model);
}

enum class Sampling { weighted, uniform };

/// Number of cells in a zone covering `fraction` of n cells.
inline std::size_t zone_cell_count(std::size_t n, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("alert fraction must lie in (0, 1]");
    const auto m = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
    if (m == 0) throw std::invalid_argument("alert fraction selects no cells");
    return std::min(m, n);
}

/// Draws ceil(fraction * n) distinct cells. Weighted sampling without
/// replacement uses exponential keys log(u) / w; zero-weight cells are only
/// taken once every positive-weight cell is in, in random order.
inline AlertZone sample_zone(const std::vector<double>& p, double fraction, std::uint64_t rng_seed,
                             Sampling sampling = Sampling::weighted) {
    const std::size_t m = zone_cell_count(p.size(), fraction);
    SplitMix64 rng(rng_seed);
    struct Key {
        double primary;
        double secondary;
        std::uint32_t cell;
    };
    std::vector<Key> keys(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double u = uniform01(rng);
        const double v = uniform01(rng);
        const double log_u = std::log(std::max(u, std::numeric_limits<double>::min()));
        double primary = log_u;
        if (sampling == Sampling::weighted) {
            primary = p[i] > 0.0 ? log_u / p[i] : -std::numeric_limits<double>::infinity();
        }
        keys[i] = {primary, v, static_cast<std::uint32_t>(i)};
    }
    std::partial_sort(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(m), keys.end(),
                      [](const Key& a, const Key& b) {
                          if (a.primary != b.primary) return a.primary > b.primary;
                          if (a.secondary != b.secondary) return a.secondary > b.secondary;
                          return a.cell < b.cell;
                      });
    std::vector<std::uint32_t> cells;
    cells.reserve(m);
    for (std::size_t i = 0; i < m; ++i) cells.push_back(keys[i].cell);
    return AlertZone(std::move(cells));
}

/// p' = (p + U[0, u]) mod 1, independently per cell.
inline std::vector<double> add_noise(const std::vector<double>& p, double u, std::uint64_t rng_seed) {
    if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("noise level must lie in [0, 1]");
    if (u == 0.0) return p;
    SplitMix64 rng(rng_seed);
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double shifted = std::fmod(p[i] + u * uniform01(rng), 1.0);
        out[i] = std::clamp(shifted, 0.0, 1.0);
    }
    return out;
}

}  // namespace alertzone::bench
