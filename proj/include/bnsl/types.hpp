// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef BNSL_TYPES_HPP
#define BNSL_TYPES_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "bnsl/common.hpp"

namespace bnsl {

// A discrete variable: name plus number of states. States are 0-based
// indices 0..cardinality-1 throughout.
struct VariableSpec {
    std::string name;
    int cardinality = 2;
};

// Directed graph over n variables stored as per-node parent sets. Parent
// lists are kept sorted ascending and duplicate-free; self-parents are
// rejected. Cyclic graphs are representable (see is_acyclic), but scoring
// and search only accept acyclic ones.
class Dag {
public:
    Dag() = default;

    explicit Dag(int n) : n_(check_n(n)), parents_(static_cast<std::size_t>(n)) {}

    Dag(int n, std::vector<std::vector<int>> parent_sets)
        : n_(check_n(n)), parents_(std::move(parent_sets)) {
        if (static_cast<int>(parents_.size()) != n_) {
            throw DataError("Dag: parent_sets size does not match variable count");
        }
        for (int i = 0; i < n_; ++i) {
            const auto& ps = parents_[i];
            for (std::size_t t = 0; t < ps.size(); ++t) {
                if (ps[t] < 0 || ps[t] >= n_) throw DataError("Dag: parent index out of range");
                if (ps[t] == i) throw DataError("Dag: self-parent");
                if (t > 0 && ps[t] <= ps[t - 1]) {
                    throw DataError("Dag: parent list must be sorted ascending without duplicates");
                }
            }
        }
    }

    static Dag from_arcs(int n, const std::vector<std::pair<int, int>>& arcs) {
        std::vector<std::vector<int>> ps(static_cast<std::size_t>(check_n(n)));
        for (const auto& [from, to] : arcs) {
            if (to < 0 || to >= n) throw DataError("Dag: arc endpoint out of range");
            ps[to].push_back(from);
        }
        for (auto& p : ps) std::sort(p.begin(), p.end());
        return Dag(n, std::move(ps));
    }

    int num_vars() const { return n_; }

    const std::vector<int>& parents(int i) const { return parents_.at(static_cast<std::size_t>(i)); }

    bool has_arc(int from, int to) const {
        const auto& ps = parents(to);
        return std::binary_search(ps.begin(), ps.end(), from);
    }

    int arc_count() const {
        int c = 0;
        for (const auto& ps : parents_) c += static_cast<int>(ps.size());
        return c;
    }

    std::vector<std::pair<int, int>> arcs() const {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < n_; ++i)
            for (int p : parents_[i]) out.emplace_back(p, i);
        return out;
    }

    // Adjacency bitmask over row-major ordered pairs (i, j), i != j: pair
    // index p counts pairs (0,1), (0,2), ..., (1,0), (1,2), ... and bit p of
    // the mask is set when arc i -> j is present. Masks require n <= 8.
    std::uint64_t adjacency_mask() const {
        if (n_ > 8) throw CapacityError("Dag::adjacency_mask: supports at most 8 variables");
        std::uint64_t m = 0;
        for (int j = 0; j < n_; ++j)
            for (int i : parents_[j]) m |= std::uint64_t{1} << pair_index(i, j, n_);
        return m;
    }

    static Dag from_adjacency_mask(int n, std::uint64_t mask) {
        if (n > 8) throw CapacityError("Dag::from_adjacency_mask: supports at most 8 variables");
        Dag g(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j && (mask >> pair_index(i, j, n) & 1)) g.parents_[j].push_back(i);
        return g;
    }

    static int pair_index(int from, int to, int n) {
        return from * (n - 1) + (to > from ? to - 1 : to);
    }

    bool operator==(const Dag& other) const = default;

private:
    static int check_n(int n) {
        if (n < 0) throw DataError("Dag: negative variable count");
        return n;
    }

    int n_ = 0;
    std::vector<std::vector<int>> parents_;
};

// Topological order, or nullopt when the graph has a cycle.
inline std::optional<std::vector<int>> topological_order(const Dag& g) {
    const int n = g.num_vars();
    std::vector<int> remaining_parents(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) remaining_parents[i] = static_cast<int>(g.parents(i).size());

    std::vector<std::vector<int>> children(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (int p : g.parents(i)) children[p].push_back(i);

    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    std::vector<int> frontier;
    for (int i = 0; i < n; ++i)
        if (remaining_parents[i] == 0) frontier.push_back(i);
    while (!frontier.empty()) {
        int v = frontier.back();
        frontier.pop_back();
        order.push_back(v);
        for (int c : children[v])
            if (--remaining_parents[c] == 0) frontier.push_back(c);
    }
    if (static_cast<int>(order.size()) != n) return std::nullopt;
    return order;
}

inline bool is_acyclic(const Dag& g) { return topological_order(g).has_value(); }

// Mixed-radix encoding of a parent-state assignment into the configuration
// index j, first parent most significant. Empty assignments map to 0.
inline int parent_config_index(std::span<const int> parent_states, std::span<const int> parent_cards) {
    if (parent_states.size() != parent_cards.size()) {
        throw DataError("parent_config_index: states/cards length mismatch");
    }
    long long j = 0;
    for (std::size_t t = 0; t < parent_states.size(); ++t) {
        if (parent_cards[t] < 1) throw DataError("parent_config_index: cardinality must be >= 1");
        if (parent_states[t] < 0 || parent_states[t] >= parent_cards[t]) {
            throw DataError("parent_config_index: state out of range");
        }
        j = j * parent_cards[t] + parent_states[t];
        if (j > (1LL << 62)) throw CapacityError("parent_config_index: configuration index overflow");
    }
    return static_cast<int>(j);
}

// q_i = product of the parents' cardinalities (1 for the empty parent set).
inline long long parent_config_count(std::span<const int> parent_cards) {
    long long q = 1;
    for (int c : parent_cards) {
        if (c < 1) throw DataError("parent_config_count: cardinality must be >= 1");
        q *= c;
        if (q > (1LL << 31)) throw CapacityError("parent_config_count: configuration count overflow");
    }
    return q;
}

inline long long family_config_count(const Dag& g, std::span<const int> cards, int child) {
    std::vector<int> pc;
    for (int p : g.parents(child)) pc.push_back(cards[static_cast<std::size_t>(p)]);
    return parent_config_count(pc);
}

// Free-parameter count k(g) = sum_i q_i (r_i - 1).
inline long long num_parameters(const Dag& g, std::span<const int> cards) {
    if (static_cast<int>(cards.size()) != g.num_vars()) {
        throw DataError("num_parameters: cards size does not match dag");
    }
    long long k = 0;
    for (int i = 0; i < g.num_vars(); ++i) {
        k += family_config_count(g, cards, i) * (cards[static_cast<std::size_t>(i)] - 1);
    }
    return k;
}

// Markov equivalence by the Verma-Pearl criterion: identical undirected
// skeletons and identical v-structure sets (a -> c <- b with a, b
// non-adjacent).
inline bool markov_equivalent(const Dag& g1, const Dag& g2) {
    if (g1.num_vars() != g2.num_vars()) {
        throw DataError("markov_equivalent: variable counts differ");
    }
    const int n = g1.num_vars();

    auto skeleton = [n](const Dag& g) {
        std::set<std::pair<int, int>> edges;
        for (int j = 0; j < n; ++j)
            for (int i : g.parents(j)) edges.emplace(std::min(i, j), std::max(i, j));
        return edges;
    };
    auto v_structures = [n](const Dag& g) {
        std::set<std::tuple<int, int, int>> vs;
        for (int c = 0; c < n; ++c) {
            const auto& ps = g.parents(c);
            for (std::size_t a = 0; a < ps.size(); ++a)
                for (std::size_t b = a + 1; b < ps.size(); ++b) {
                    const int u = ps[a], w = ps[b];
                    if (!g.has_arc(u, w) && !g.has_arc(w, u)) vs.emplace(u, w, c);
                }
        }
        return vs;
    };

    return skeleton(g1) == skeleton(g2) && v_structures(g1) == v_structures(g2);
}

// Conditional probability table for one variable: q rows (one per parent
// configuration, ordered by parent_config_index) of r state probabilities.
struct Cpt {
    int child = 0;
    Table table;

    void validate() const {
        for (int j = 0; j < table.q; ++j) {
            double s = 0.0;
            for (int k = 0; k < table.r; ++k) {
                const double p = table(j, k);
                if (p < 0.0 || p > 1.0) throw DataError("Cpt: probability outside [0, 1]");
                s += p;
            }
            if (std::abs(s - 1.0) > 1e-12) throw DataError("Cpt: row does not sum to 1");
        }
    }
};

// A Bayesian network: variables, structure, and (optionally) one CPT per
// variable aligned with the structure. Immutable after construction.
struct Network {
    std::vector<VariableSpec> variables;
    Dag dag;
    std::optional<std::vector<Cpt>> cpts;

    int num_vars() const { return static_cast<int>(variables.size()); }

    std::vector<int> cards() const {
        std::vector<int> c;
        c.reserve(variables.size());
        for (const auto& v : variables) c.push_back(v.cardinality);
        return c;
    }

    void validate() const {
        if (num_vars() != dag.num_vars()) throw DataError("Network: dag size does not match variables");
        std::set<std::string> names;
        for (const auto& v : variables) {
            if (v.name.empty()) throw DataError("Network: empty variable name");
            if (v.cardinality < 2) throw DataError("Network: cardinality must be >= 2");
            if (!names.insert(v.name).second) throw DataError("Network: duplicate variable name: " + v.name);
        }
        if (cpts) {
            if (static_cast<int>(cpts->size()) != num_vars()) {
                throw DataError("Network: need one CPT per variable");
            }
            const auto cs = cards();
            for (int i = 0; i < num_vars(); ++i) {
                const Cpt& c = (*cpts)[static_cast<std::size_t>(i)];
                if (c.child != i) throw DataError("Network: CPT child index misaligned");
                if (c.table.r != cs[static_cast<std::size_t>(i)]) {
                    throw DataError("Network: CPT column count does not match cardinality");
                }
                if (c.table.q != family_config_count(dag, cs, i)) {
                    throw DataError("Network: CPT row count does not match parent configurations");
                }
                c.validate();
            }
        }
    }
};

enum class ScoreKind { Ml, Bde, Bdeu, Bic, NipBic };

inline const char* to_string(ScoreKind k) {
    switch (k) {
        case ScoreKind::Ml: return "ml";
        case ScoreKind::Bde: return "bde";
        case ScoreKind::Bdeu: return "bdeu";
        case ScoreKind::Bic: return "bic";
        case ScoreKind::NipBic: return "nip-bic";
    }
    throw DataError("unknown score kind");
}

inline ScoreKind score_kind_from_string(const std::string& s) {
    if (s == "ml") return ScoreKind::Ml;
    if (s == "bde") return ScoreKind::Bde;
    if (s == "bdeu") return ScoreKind::Bdeu;
    if (s == "bic") return ScoreKind::Bic;
    if (s == "nip-bic" || s == "nip_bic") return ScoreKind::NipBic;
    throw DataError("unknown score kind: " + s);
}

// Which score to evaluate and with what prior weight. The hypothetical
// network (prior knowledge g^h, with CPTs) is required exactly for BDe.
// ML uses a constant per-cell pseudocount instead of an ESS.
struct ScoreSpec {
    ScoreKind kind = ScoreKind::Bdeu;
    double alpha = 1.0;
    std::shared_ptr<const Network> hypothetical;
    double ml_pseudocount = 1.0;

    void validate() const {
        const bool needs_alpha =
            kind == ScoreKind::Bdeu || kind == ScoreKind::Bde || kind == ScoreKind::NipBic;
        if (needs_alpha && !(alpha > 0.0)) {
            throw DataError("ScoreSpec: alpha must be positive for BDe/BDeu/NIP-BIC");
        }
        if ((kind == ScoreKind::Bde) != static_cast<bool>(hypothetical)) {
            throw DataError("ScoreSpec: hypothetical network required exactly for BDe");
        }
        if (kind == ScoreKind::Ml && !(ml_pseudocount > 0.0)) {
            throw DataError("ScoreSpec: ML pseudocount must be positive");
        }
        if (hypothetical) {
            hypothetical->validate();
            if (!hypothetical->cpts) throw DataError("ScoreSpec: hypothetical network needs CPTs");
        }
    }
};

}  // namespace bnsl

#endif  // BNSL_TYPES_HPP
