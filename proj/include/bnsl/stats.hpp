// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef BNSL_STATS_HPP
#define BNSL_STATS_HPP

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bnsl/common.hpp"
#include "bnsl/types.hpp"

namespace bnsl {

// Complete-data table of 0-based state indices, one row per record. Row
// storage is flat and row-major. No missing values.
class Dataset {
public:
    Dataset() = default;

    explicit Dataset(std::vector<int> cards) : Dataset(std::move(cards), {}, {}) {}

    Dataset(std::vector<int> cards, const std::vector<std::vector<int>>& rows,
            std::vector<std::string> names = {})
        : cards_(std::move(cards)), names_(std::move(names)) {
        for (int c : cards_)
            if (c < 2) throw DataError("Dataset: cardinality must be >= 2");
        if (names_.empty()) {
            for (std::size_t i = 0; i < cards_.size(); ++i) names_.push_back("x" + std::to_string(i + 1));
        }
        if (names_.size() != cards_.size()) throw DataError("Dataset: names/cards length mismatch");
        for (const auto& row : rows) append_row(row);
    }

    int num_vars() const { return static_cast<int>(cards_.size()); }
    long long num_rows() const { return num_rows_; }
    const std::vector<int>& cards() const { return cards_; }
    const std::vector<std::string>& names() const { return names_; }

    int operator()(long long row, int var) const {
        return values_[static_cast<std::size_t>(row) * cards_.size() + static_cast<std::size_t>(var)];
    }

    void append_row(std::span<const int> row) {
        if (static_cast<int>(row.size()) != num_vars()) throw DataError("Dataset: row width mismatch");
        for (int i = 0; i < num_vars(); ++i) {
            if (row[i] < 0 || row[i] >= cards_[static_cast<std::size_t>(i)]) {
                throw DataError("Dataset: state index out of range in column " + names_[i]);
            }
        }
        values_.insert(values_.end(), row.begin(), row.end());
        ++num_rows_;
    }

    bool operator==(const Dataset& other) const = default;

private:
    std::vector<int> cards_;
    std::vector<std::string> names_;
    std::vector<int> values_;
    long long num_rows_ = 0;
};

// FNV-1a over cardinalities and cell values; used for the experiment run log.
inline std::uint64_t dataset_hash(const Dataset& data) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t x) {
        for (int b = 0; b < 8; ++b) {
            h ^= (x >> (8 * b)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    mix(static_cast<std::uint64_t>(data.num_rows()));
    for (int c : data.cards()) mix(static_cast<std::uint64_t>(c));
    for (long long t = 0; t < data.num_rows(); ++t)
        for (int i = 0; i < data.num_vars(); ++i) mix(static_cast<std::uint64_t>(data(t, i)));
    return h;
}

// Contingency counts for one (child, parent-set) family: n_jk is q-by-r
// row-major, n_j holds the row sums.
struct FamilyStats {
    int child = 0;
    int r = 0;
    int q = 0;
    std::vector<long long> n_jk;
    std::vector<long long> n_j;

    long long n(int j, int k) const { return n_jk[static_cast<std::size_t>(j) * r + k]; }
    long long row_total(int j) const { return n_j[static_cast<std::size_t>(j)]; }
};

// Exact contingency counts of the dataset for one family. Deterministic and
// independent of row order.
inline FamilyStats count_family(const Dataset& data, int child, std::span<const int> parents) {
    const int n_vars = data.num_vars();
    if (child < 0 || child >= n_vars) throw DataError("count_family: child index out of range");
    std::vector<int> parent_cards;
    parent_cards.reserve(parents.size());
    for (int p : parents) {
        if (p < 0 || p >= n_vars) throw DataError("count_family: parent index out of range");
        if (p == child) throw DataError("count_family: child cannot be its own parent");
        parent_cards.push_back(data.cards()[static_cast<std::size_t>(p)]);
    }

    FamilyStats st;
    st.child = child;
    st.r = data.cards()[static_cast<std::size_t>(child)];
    const long long q = parent_config_count(parent_cards);
    if (q * st.r > (1LL << 26)) throw CapacityError("count_family: contingency table too large");
    st.q = static_cast<int>(q);
    st.n_jk.assign(static_cast<std::size_t>(q) * st.r, 0);
    st.n_j.assign(static_cast<std::size_t>(q), 0);

    std::vector<int> states(parents.size());
    for (long long t = 0; t < data.num_rows(); ++t) {
        for (std::size_t u = 0; u < parents.size(); ++u) states[u] = data(t, parents[u]);
        const int j = parent_config_index(states, parent_cards);
        ++st.n_jk[static_cast<std::size_t>(j) * st.r + data(t, child)];
        ++st.n_j[static_cast<std::size_t>(j)];
    }
    return st;
}

// Counts for every family of a structure, child order 0..N-1.
inline std::vector<FamilyStats> all_family_stats(const Dataset& data, const Dag& g) {
    if (g.num_vars() != data.num_vars()) throw DataError("all_family_stats: dag/data size mismatch");
    std::vector<FamilyStats> out;
    out.reserve(static_cast<std::size_t>(g.num_vars()));
    for (int i = 0; i < g.num_vars(); ++i) out.push_back(count_family(data, i, g.parents(i)));
    return out;
}

// Data CSV: header row of variable names, body rows of 0-based integer state
// indices, comma separated, no quoting. Out-of-range or missing cells are
// rejected, never imputed.
inline void write_csv(std::ostream& os, const Dataset& data) {
    for (int i = 0; i < data.num_vars(); ++i) os << (i ? "," : "") << data.names()[static_cast<std::size_t>(i)];
    os << '\n';
    for (long long t = 0; t < data.num_rows(); ++t) {
        for (int i = 0; i < data.num_vars(); ++i) os << (i ? "," : "") << data(t, i);
        os << '\n';
    }
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

inline int parse_state(const std::string& cell, long long line_no) {
    if (cell.empty()) throw DataError("CSV: missing value at line " + std::to_string(line_no));
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(cell, &pos);
    } catch (const std::exception&) {
        throw DataError("CSV: non-integer cell '" + cell + "' at line " + std::to_string(line_no));
    }
    if (pos != cell.size()) {
        throw DataError("CSV: non-integer cell '" + cell + "' at line " + std::to_string(line_no));
    }
    if (v < 0) throw DataError("CSV: negative state at line " + std::to_string(line_no));
    return v;
}

}  // namespace detail

// Reads the Data CSV format. When cards are not supplied they are inferred
// as max observed state + 1 (and at least 2 per the type invariant).
inline Dataset read_csv(std::istream& is, const std::vector<int>* cards = nullptr) {
    std::string line;
    if (!std::getline(is, line)) throw DataError("CSV: missing header row");
    const std::vector<std::string> names = detail::split_csv_line(line);
    const int n_vars = static_cast<int>(names.size());
    for (const auto& nm : names)
        if (nm.empty()) throw DataError("CSV: empty variable name in header");

    std::vector<std::vector<int>> rows;
    long long line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto cells = detail::split_csv_line(line);
        if (static_cast<int>(cells.size()) != n_vars) {
            throw DataError("CSV: expected " + std::to_string(n_vars) + " cells at line " +
                            std::to_string(line_no) + ", got " + std::to_string(cells.size()));
        }
        std::vector<int> row(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) row[i] = detail::parse_state(cells[i], line_no);
        rows.push_back(std::move(row));
    }

    std::vector<int> cs;
    if (cards) {
        if (static_cast<int>(cards->size()) != n_vars) throw DataError("CSV: cards/header width mismatch");
        cs = *cards;
    } else {
        cs.assign(static_cast<std::size_t>(n_vars), 2);
        for (const auto& row : rows)
            for (int i = 0; i < n_vars; ++i) cs[i] = std::max(cs[i], row[static_cast<std::size_t>(i)] + 1);
    }
    return Dataset(std::move(cs), rows, names);
}

}  // namespace bnsl

#endif  // BNSL_STATS_HPP
