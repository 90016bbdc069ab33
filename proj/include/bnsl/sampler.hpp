// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef BNSL_SAMPLER_HPP
#define BNSL_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "bnsl/common.hpp"
#include "bnsl/stats.hpp"
#include "bnsl/types.hpp"

namespace bnsl {

// SplitMix64 finalizer, used only to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Stream seed for work unit `index` under a master seed: splitmix64 of the
// XOR. Keeps repetitions reproducible independently of scheduling.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(master_seed ^ index);
}

// Seeded generator with platform-independent output: the fully specified
// std::mt19937_64 engine, with uniform doubles built from the top 53 bits
// (never via distribution classes, whose output is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

// Ancestral sampling: n i.i.d. rows, each drawn variable-by-variable in
// topological order conditioned on the already-sampled parents.
inline Dataset sample(const Network& net, long long n, std::uint64_t seed) {
    net.validate();
    if (!net.cpts) throw DataError("sample: network has no CPTs");
    if (n < 0) throw DataError("sample: negative sample count");
    const auto order = topological_order(net.dag);
    if (!order) throw DataError("sample: network structure has a cycle");
    const auto cards = net.cards();

    std::vector<std::string> names;
    for (const auto& v : net.variables) names.push_back(v.name);
    Dataset data(cards, names);

    Rng rng(seed);
    std::vector<int> row(static_cast<std::size_t>(net.num_vars()));
    std::vector<int> parent_states, parent_cards;
    for (long long t = 0; t < n; ++t) {
        for (int i : *order) {
            parent_states.clear();
            parent_cards.clear();
            for (int p : net.dag.parents(i)) {
                parent_states.push_back(row[static_cast<std::size_t>(p)]);
                parent_cards.push_back(cards[static_cast<std::size_t>(p)]);
            }
            const int j = parent_config_index(parent_states, parent_cards);
            const Table& cpt = (*net.cpts)[static_cast<std::size_t>(i)].table;
            const double u = rng.uniform01();
            double acc = 0.0;
            int k = cpt.r - 1;  // fall through to the last state on rounding
            for (int s = 0; s < cpt.r; ++s) {
                acc += cpt(j, s);
                if (u < acc) {
                    k = s;
                    break;
                }
            }
            row[static_cast<std::size_t>(i)] = k;
        }
        data.append_row(row);
    }
    return data;
}

// The five skewness-graded generator presets. All share one 5-node binary
// structure; only the conditional skew delta differs per node.
enum class PresetId { G1, G2, G3, G4, G5 };

inline const char* to_string(PresetId id) {
    switch (id) {
        case PresetId::G1: return "g1";
        case PresetId::G2: return "g2";
        case PresetId::G3: return "g3";
        case PresetId::G4: return "g4";
        case PresetId::G5: return "g5";
    }
    throw DataError("unknown preset id");
}

inline std::optional<PresetId> parse_preset_id(std::string_view s) {
    if (s == "g1") return PresetId::G1;
    if (s == "g2") return PresetId::G2;
    if (s == "g3") return PresetId::G3;
    if (s == "g4") return PresetId::G4;
    if (s == "g5") return PresetId::G5;
    return std::nullopt;
}

struct GeneratorPreset {
    PresetId id = PresetId::G1;
    std::vector<double> node_skew;  // delta_i per node, conditional rows are 0.5 +/- delta_i
};

inline GeneratorPreset preset(PresetId id) {
    GeneratorPreset p;
    p.id = id;
    switch (id) {
        case PresetId::G1: p.node_skew.assign(5, 0.4); break;
        case PresetId::G2: p.node_skew.assign(5, 0.25); break;
        case PresetId::G3: p.node_skew.assign(5, 0.1); break;
        case PresetId::G4: p.node_skew.assign(5, 0.02); break;
        case PresetId::G5:
            for (int i = 0; i < 5; ++i) p.node_skew.push_back(i % 2 == 0 ? 0.4 : 0.02);
            break;
    }
    return p;
}

// Preset structure: x1->x2, x1->x3, x2->x4, x3->x4, x4->x5 over binary
// variables. The root is uniform; each conditional row alternates
// (0.5+delta, 0.5-delta) / (0.5-delta, 0.5+delta) across parent
// configurations j = 0, 1, 2, ...
inline Network preset_network(PresetId id) {
    const GeneratorPreset p = preset(id);
    Network net;
    for (int i = 0; i < 5; ++i) net.variables.push_back({"x" + std::to_string(i + 1), 2});
    net.dag = Dag::from_arcs(5, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}});
    const auto cards = net.cards();

    std::vector<Cpt> cpts;
    for (int i = 0; i < 5; ++i) {
        const int q = static_cast<int>(family_config_count(net.dag, cards, i));
        Cpt c;
        c.child = i;
        c.table = Table(q, 2);
        const double d = p.node_skew[static_cast<std::size_t>(i)];
        for (int j = 0; j < q; ++j) {
            if (net.dag.parents(i).empty()) {
                c.table(j, 0) = 0.5;
                c.table(j, 1) = 0.5;
            } else {
                c.table(j, 0) = j % 2 == 0 ? 0.5 + d : 0.5 - d;
                c.table(j, 1) = 1.0 - c.table(j, 0);
            }
        }
        cpts.push_back(std::move(c));
    }
    net.cpts = std::move(cpts);
    net.validate();
    return net;
}

}  // namespace bnsl

#endif  // BNSL_SAMPLER_HPP
