#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace alertzone {

/// Probability held as its natural log; p = 0 maps to -infinity. Products
/// of many small cell probabilities stay ordered instead of underflowing.
struct LogProb {
    double value = 0.0;

    static LogProb from_prob(double p) {
        if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability outside [0,1]");
        return {p == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(p)};
    }
    static LogProb one() { return {0.0}; }
    static LogProb zero() { return {-std::numeric_limits<double>::infinity()}; }

    [[nodiscard]] double prob() const { return std::exp(value); }
    [[nodiscard]] bool is_zero() const { return std::isinf(value); }

    friend LogProb operator*(LogProb a, LogProb b) { return {a.value + b.value}; }
    LogProb& operator*=(LogProb other) {
        value += other.value;
        return *this;
    }
    friend bool operator==(LogProb a, LogProb b) { return a.value == b.value; }
    friend bool operator<(LogProb a, LogProb b) { return a.value < b.value; }
    friend bool operator>(LogProb a, LogProb b) { return a.value > b.value; }
};

struct Cell {
    std::uint32_t id = 0;
    double x = 0.0;  // centre in the unit square
    double y = 0.0;
    double p = 0.0;  // probability of joining an alert zone
};

/// Partition of the unit square into n cells with dense ids [0, n).
class Grid {
public:
    Grid() = default;

    explicit Grid(std::vector<Cell> cells) : cells_(std::move(cells)) { validate(); }

    /// Near-square lattice: ceil(sqrt(n)) columns, row-major ids, row 0 at
    /// the top (north). Probabilities default to zero.
    static Grid lattice(std::size_t n, const std::vector<double>& probabilities = {}) {
        if (n == 0) throw std::invalid_argument("grid needs at least one cell");
        if (!probabilities.empty() && probabilities.size() != n) {
            throw std::invalid_argument("probability vector length does not match cell count");
        }
        auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
        while (cols * cols < n) ++cols;
        const std::size_t rows = (n + cols - 1) / cols;
        std::vector<Cell> cells(n);
        for (std::size_t id = 0; id < n; ++id) {
            const std::size_t r = id / cols;
            const std::size_t c = id % cols;
            cells[id] = Cell{static_cast<std::uint32_t>(id), (static_cast<double>(c) + 0.5) / static_cast<double>(cols),
                             (static_cast<double>(r) + 0.5) / static_cast<double>(rows),
                             probabilities.empty() ? 0.0 : probabilities[id]};
        }
        return Grid(std::move(cells));
    }

    [[nodiscard]] std::size_t size() const { return cells_.size(); }
    [[nodiscard]] const std::vector<Cell>& cells() const { return cells_; }
    [[nodiscard]] const Cell& cell(std::size_t id) const { return cells_.at(id); }

    [[nodiscard]] std::vector<double> probabilities() const {
        std::vector<double> out;
        out.reserve(cells_.size());
        for (const Cell& c : cells_) out.push_back(c.p);
        return out;
    }

    /// Same geometry, new probabilities.
    [[nodiscard]] Grid with_probabilities(const std::vector<double>& p) const {
        if (p.size() != cells_.size()) throw std::invalid_argument("probability vector length does not match cell count");
        std::vector<Cell> cells = cells_;
        for (std::size_t i = 0; i < cells.size(); ++i) cells[i].p = p[i];
        return Grid(std::move(cells));
    }

private:
    void validate() const {
        if (cells_.empty()) throw std::invalid_argument("grid needs at least one cell");
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            const Cell& c = cells_[i];
            if (c.id != i) throw std::invalid_argument("cell ids must be dense and ordered; got " + std::to_string(c.id));
            if (!(c.p >= 0.0 && c.p <= 1.0)) {
                throw std::invalid_argument("cell " + std::to_string(i) + " probability outside [0,1]");
            }
        }
    }

    std::vector<Cell> cells_;
};

}  // namespace alertzone
