#ifndef LRA_RELATION_MATRIX_HPP
#define LRA_RELATION_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lra/error.hpp"
#include "lra/linalg.hpp"
#include "lra/pattern.hpp"
#include "lra/word_pair.hpp"

namespace lra {

enum class Orientation { left_first, right_first };

inline const char* to_string(Orientation o) { return o == Orientation::left_first ? "left_first" : "right_first"; }

struct ColumnKey {
    Pattern pattern;
    Orientation orientation = Orientation::left_first;

    friend bool operator==(const ColumnKey&, const ColumnKey&) = default;
};

/// Pair-by-pattern matrix. Pattern p owns columns 2p ("word1 P word2") and
/// 2p+1 ("word2 P word1"), so reversing a pair maps column j to j^1.
class SparseRelationMatrix {
public:
    SparseRelationMatrix() = default;
    SparseRelationMatrix(std::vector<WordPair> rows, std::vector<ColumnKey> columns, SparseRows cells, bool weighted)
        : rows_(std::move(rows)), columns_(std::move(columns)), cells_(std::move(cells)), weighted_(weighted) {
        if (rows_.size() != cells_.rows() || columns_.size() != cells_.cols())
            throw std::invalid_argument("matrix labels do not match cell dimensions");
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (!row_index_.emplace(rows_[i], i).second) throw std::invalid_argument("duplicate row " + rows_[i].str());
    }

    std::size_t m() const { return rows_.size(); }
    std::size_t n() const { return columns_.size(); }
    std::size_t nnz() const { return cells_.nnz(); }
    bool weighted() const { return weighted_; }

    /// Percentage of nonzero cells.
    double density() const {
        const double total = static_cast<double>(m()) * static_cast<double>(n());
        return total == 0.0 ? 0.0 : 100.0 * static_cast<double>(nnz()) / total;
    }

    const std::vector<WordPair>& row_pairs() const { return rows_; }
    const std::vector<ColumnKey>& columns() const { return columns_; }
    const SparseRows& cells() const { return cells_; }
    std::span<const SparseEntry> row(std::size_t i) const { return cells_.row(i); }

    std::optional<std::size_t> row_of(const WordPair& p) const {
        const auto it = row_index_.find(p);
        if (it == row_index_.end()) return std::nullopt;
        return it->second;
    }

    double at(std::size_t r, std::size_t c) const {
        for (const auto& e : cells_.row(r))
            if (e.col == c) return e.value;
        return 0.0;
    }

private:
    std::vector<WordPair> rows_;
    std::unordered_map<WordPair, std::size_t, WordPairHash> row_index_;
    std::vector<ColumnKey> columns_;
    SparseRows cells_;
    bool weighted_ = false;
};

inline std::vector<ColumnKey> columns_for(std::span<const Pattern> patterns) {
    std::vector<ColumnKey> cols;
    cols.reserve(2 * patterns.size());
    for (const auto& p : patterns) {
        cols.push_back({p, Orientation::left_first});
        cols.push_back({p, Orientation::right_first});
    }
    return cols;
}

/// Raw frequency matrix. Every pair with phrases contributes a row for A:B
/// and one for B:A (shared when both are listed). Cell (i, j) counts the
/// phrases of pair i that match column j's pattern in column j's
/// orientation. Rows that end up all zero are dropped.
inline SparseRelationMatrix build_matrix(std::span<const PairPhrases> groups, std::span<const Pattern> patterns,
                                         std::size_t threads = 1) {
    if (patterns.empty()) throw Error("empty matrix: no patterns selected");
    std::map<Pattern, std::uint32_t> pattern_index;
    for (std::size_t i = 0; i < patterns.size(); ++i) pattern_index.emplace(patterns[i], static_cast<std::uint32_t>(i));

    // Cells for the A:B orientation of each group.
    std::vector<std::vector<SparseEntry>> forward(groups.size());
    parallel_for(groups.size(), threads, [&](std::size_t g) {
        std::map<std::uint32_t, double> counts;
        for (const auto& ph : groups[g].phrases) {
            const bool left_first = ph.pair == groups[g].pair ? ph.left_first : !ph.left_first;
            for (const auto& p : patterns_from_phrase(ph)) {
                const auto it = pattern_index.find(p);
                if (it == pattern_index.end()) continue;
                counts[2 * it->second + (left_first ? 0u : 1u)] += 1.0;
            }
        }
        for (const auto& [c, v] : counts) forward[g].push_back({c, v});
    });

    std::vector<WordPair> rows;
    SparseRows cells(2 * patterns.size());
    std::unordered_map<WordPair, std::size_t, WordPairHash> seen;
    const auto add = [&](const WordPair& p, std::vector<SparseEntry> entries) {
        if (entries.empty() || seen.contains(p)) return;
        seen.emplace(p, rows.size());
        rows.push_back(p);
        cells.add_row(std::move(entries));
    };
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (forward[g].empty()) continue;
        std::vector<SparseEntry> swapped;
        swapped.reserve(forward[g].size());
        for (const auto& e : forward[g]) swapped.push_back({e.col ^ 1u, e.value});
        std::sort(swapped.begin(), swapped.end(), [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });
        add(groups[g].pair, forward[g]);
        add(groups[g].pair.reversed(), std::move(swapped));
    }
    if (rows.empty()) throw Error("empty matrix: no word pair matched any selected pattern");
    return SparseRelationMatrix(std::move(rows), columns_for(patterns), std::move(cells), false);
}

/// Weights below this are rounding residue of a maximum-entropy column.
inline constexpr double entropy_weight_snap = 1e-12;

struct ColumnWeights {
    std::vector<double> entropy;
    std::vector<double> weight;
};

/// Entropy H_j of each column's normalized distribution and the weight
/// w_j = 1 - H_j / log(m). All-zero columns get weight 0. Natural log.
inline ColumnWeights column_entropy_weights(const SparseRows& x) {
    const std::size_t m = x.rows();
    if (m < 2) throw Error("log-entropy weighting needs at least 2 rows");
    std::vector<double> sums(x.cols(), 0.0);
    for (std::size_t r = 0; r < m; ++r)
        for (const auto& e : x.row(r)) {
            if (!(e.value >= 0.0) || !std::isfinite(e.value)) throw Error("raw matrix cells must be finite and nonnegative");
            sums[e.col] += e.value;
        }
    ColumnWeights cw{std::vector<double>(x.cols(), 0.0), std::vector<double>(x.cols(), 0.0)};
    for (std::size_t r = 0; r < m; ++r)
        for (const auto& e : x.row(r)) {
            const double p = e.value / sums[e.col];
            if (p > 0.0) cw.entropy[e.col] -= p * std::log(p);
        }
    const double log_m = std::log(static_cast<double>(m));
    for (std::size_t j = 0; j < x.cols(); ++j) {
        if (sums[j] == 0.0) continue;
        const double w = 1.0 - cw.entropy[j] / log_m;
        // A uniform column has H_j = log(m) exactly; rounding leaves ~1e-16.
        cw.weight[j] = w < entropy_weight_snap ? 0.0 : std::min(w, 1.0);
    }
    return cw;
}

/// Replaces every cell x_ij by w_j * log(x_ij + 1).
inline std::pair<SparseRelationMatrix, ColumnWeights> log_entropy_transform(const SparseRelationMatrix& raw) {
    if (raw.weighted()) throw std::invalid_argument("log_entropy_transform expects a raw frequency matrix");
    if (raw.m() < 2) throw Error("log-entropy weighting needs at least 2 rows (log(m) degenerate)");
    ColumnWeights cw = column_entropy_weights(raw.cells());
    SparseRows out(raw.n());
    for (std::size_t r = 0; r < raw.m(); ++r) {
        std::vector<SparseEntry> row;
        for (const auto& e : raw.row(r)) {
            const double v = cw.weight[e.col] * std::log(e.value + 1.0);
            if (v != 0.0) row.push_back({e.col, v});
        }
        out.add_row(std::move(row));
    }
    return {SparseRelationMatrix(raw.row_pairs(), raw.columns(), std::move(out), true), std::move(cw)};
}

} // namespace lra

#endif
