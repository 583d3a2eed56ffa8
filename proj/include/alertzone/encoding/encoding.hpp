#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "alertzone/gray/codeword.hpp"

namespace alertzone {

/// Bijection between the n grid cells and n of the 2^k codewords. The
/// remaining 2^k - n codewords are dummies (no cell).
class GridEncoding {
public:
    GridEncoding() = default;

    GridEncoding(int k, std::vector<std::uint32_t> forward) : k_(k), forward_(std::move(forward)) {
        if (k < 1 || k > kMaxCodewordWidth) throw std::invalid_argument("encoding width out of range");
        if (forward_.empty()) throw std::invalid_argument("encoding needs at least one cell");
        const std::size_t space = std::size_t{1} << k;
        if (forward_.size() > space) throw std::invalid_argument("more cells than codewords");
        reverse_.assign(space, kNoCell);
        for (std::size_t cell = 0; cell < forward_.size(); ++cell) {
            const std::uint32_t c = forward_[cell];
            if (c >= space) throw std::invalid_argument("codeword outside 2^k space");
            if (reverse_[c] != kNoCell) throw std::invalid_argument("two cells share codeword " + std::to_string(c));
            reverse_[c] = static_cast<std::int64_t>(cell);
        }
    }

    [[nodiscard]] int width() const { return k_; }
    [[nodiscard]] std::size_t cell_count() const { return forward_.size(); }
    [[nodiscard]] std::size_t space_size() const { return reverse_.size(); }
    [[nodiscard]] std::size_t dummy_count() const { return space_size() - cell_count(); }

    [[nodiscard]] Codeword codeword(std::size_t cell) const { return Codeword(forward_.at(cell), k_); }
    [[nodiscard]] std::optional<std::size_t> cell_at(std::uint32_t codeword) const {
        const std::int64_t c = reverse_.at(codeword);
        if (c == kNoCell) return std::nullopt;
        return static_cast<std::size_t>(c);
    }
    [[nodiscard]] bool is_dummy(std::uint32_t codeword) const { return reverse_.at(codeword) == kNoCell; }
    [[nodiscard]] const std::vector<std::uint32_t>& forward() const { return forward_; }

    friend bool operator==(const GridEncoding& a, const GridEncoding& b) {
        return a.k_ == b.k_ && a.forward_ == b.forward_;
    }

private:
    static constexpr std::int64_t kNoCell = -1;

    int k_ = 0;
    std::vector<std::uint32_t> forward_;
    std::vector<std::int64_t> reverse_;
};

/// Provenance carried in the encoding file header.
struct EncodingHeader {
    std::size_t n = 0;
    int k = 0;
    std::string algorithm;
    std::map<std::string, std::string> params;
    std::uint64_t rng_seed = 0;
};

// File format: one header line
//   # n=<n> k=<k> algorithm=<name> rng_seed=<seed> [param.<key>=<value> ...]
// followed by one `cell_id<TAB>codeword_msb_first` line per cell.
inline void write_encoding(std::ostream& out, const GridEncoding& enc, EncodingHeader header) {
    header.n = enc.cell_count();
    header.k = enc.width();
    out << "# n=" << header.n << " k=" << header.k << " algorithm=" << header.algorithm
        << " rng_seed=" << header.rng_seed;
    for (const auto& [key, value] : header.params) out << " param." << key << '=' << value;
    out << '\n';
    for (std::size_t cell = 0; cell < enc.cell_count(); ++cell) {
        out << cell << '\t' << enc.codeword(cell).to_string() << '\n';
    }
}

inline GridEncoding read_encoding(std::istream& in, EncodingHeader* header_out = nullptr) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) throw std::runtime_error("encoding file: missing header line");
    EncodingHeader header;
    std::istringstream fields(line.substr(2));
    std::string field;
    while (fields >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) throw std::runtime_error("encoding file: malformed header field '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "n") header.n = std::stoull(value);
        else if (key == "k") header.k = std::stoi(value);
        else if (key == "algorithm") header.algorithm = value;
        else if (key == "rng_seed") header.rng_seed = std::stoull(value);
        else if (key.rfind("param.", 0) == 0) header.params[key.substr(6)] = value;
        else throw std::runtime_error("encoding file: unknown header field '" + key + "'");
    }
    if (header.n == 0 || header.k < 1) throw std::runtime_error("encoding file: header lacks n or k");
    std::vector<std::uint32_t> forward(header.n);
    std::vector<bool> seen(header.n, false);
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw std::runtime_error("encoding file: expected cell_id<TAB>codeword");
        const std::size_t cell = std::stoull(line.substr(0, tab));
        const Codeword cw = Codeword::parse(line.substr(tab + 1));
        if (cell >= header.n || seen[cell]) throw std::runtime_error("encoding file: bad or repeated cell id");
        if (cw.width != header.k) throw std::runtime_error("encoding file: codeword width differs from header k");
        forward[cell] = cw.bits;
        seen[cell] = true;
        ++rows;
    }
    if (rows != header.n) throw std::runtime_error("encoding file: row count differs from header n");
    if (header_out != nullptr) *header_out = header;
    return GridEncoding(header.k, std::move(forward));
}

}  // namespace alertzone
