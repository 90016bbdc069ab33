// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef BNSL_IO_HPP
#define BNSL_IO_HPP

#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "bnsl/common.hpp"
#include "bnsl/experiment.hpp"
#include "bnsl/sampler.hpp"
#include "bnsl/search.hpp"
#include "bnsl/stats.hpp"
#include "bnsl/types.hpp"

namespace bnsl {

// Network JSON:
// {"variables": [{"name": ..., "cardinality": ...}, ...],
//  "parents":   [[...], ...],
//  "cpts":      [[row, row, ...], ...]}   (optional)
// CPT rows are ordered by parent_config_index, row entries by state index.
inline nlohmann::json network_to_json(const Network& net) {
    nlohmann::json j;
    j["variables"] = nlohmann::json::array();
    for (const auto& v : net.variables) {
        j["variables"].push_back({{"name", v.name}, {"cardinality", v.cardinality}});
    }
    j["parents"] = nlohmann::json::array();
    for (int i = 0; i < net.num_vars(); ++i) j["parents"].push_back(net.dag.parents(i));
    if (net.cpts) {
        j["cpts"] = nlohmann::json::array();
        for (const auto& c : net.cpts.value()) {
            nlohmann::json rows = nlohmann::json::array();
            for (int row = 0; row < c.table.q; ++row) {
                nlohmann::json vals = nlohmann::json::array();
                for (int k = 0; k < c.table.r; ++k) vals.push_back(c.table(row, k));
                rows.push_back(std::move(vals));
            }
            j["cpts"].push_back(std::move(rows));
        }
    }
    return j;
}

inline Network network_from_json(const nlohmann::json& j) {
    try {
        Network net;
        for (const auto& v : j.at("variables")) {
            net.variables.push_back({v.at("name").get<std::string>(), v.at("cardinality").get<int>()});
        }
        const int n = net.num_vars();
        std::vector<std::vector<int>> parents;
        for (const auto& p : j.at("parents")) parents.push_back(p.get<std::vector<int>>());
        net.dag = Dag(n, std::move(parents));
        if (j.contains("cpts")) {
            std::vector<Cpt> cpts;
            int child = 0;
            for (const auto& rows : j.at("cpts")) {
                Cpt c;
                c.child = child++;
                const int q = static_cast<int>(rows.size());
                const int r = q > 0 ? static_cast<int>(rows.at(0).size()) : 0;
                c.table = Table(q, r);
                for (int row = 0; row < q; ++row) {
                    const auto& vals = rows.at(static_cast<std::size_t>(row));
                    if (static_cast<int>(vals.size()) != r) throw DataError("Network JSON: ragged CPT rows");
                    for (int k = 0; k < r; ++k) c.table(row, k) = vals.at(static_cast<std::size_t>(k)).get<double>();
                }
                cpts.push_back(std::move(c));
            }
            net.cpts = std::move(cpts);
        }
        net.validate();
        return net;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("Network JSON: ") + e.what());
    }
}

inline Network read_network_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open network file: " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("cannot parse network file " + path + ": " + e.what());
    }
    return network_from_json(j);
}

inline void write_network_file(const std::string& path, const Network& net) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open output file: " + path);
    os << network_to_json(net).dump(2) << '\n';
}

// Search result JSON: {"best": parent lists, "score": float,
// "ties": [parent lists], "examined": int}.
inline nlohmann::json search_result_to_json(const SearchResult& res) {
    auto adjacency = [](const Dag& g) {
        nlohmann::json lists = nlohmann::json::array();
        for (int i = 0; i < g.num_vars(); ++i) lists.push_back(g.parents(i));
        return lists;
    };
    nlohmann::json j;
    j["best"] = adjacency(res.best);
    j["score"] = res.best_score;
    j["ties"] = nlohmann::json::array();
    for (const auto& g : res.ties) j["ties"].push_back(adjacency(g));
    j["examined"] = res.examined;
    return j;
}

// Experiment config JSON: field names match ExperimentConfig. Score entries
// are {"kind": "ml"|"bde"|"bdeu"|"bic"|"nip-bic", "alpha": ...,
// "ml_pseudocount": ..., "hypothetical": <network file path>}.
inline ScoreSpec score_spec_from_json(const nlohmann::json& j) {
    ScoreSpec spec;
    spec.kind = score_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("alpha")) spec.alpha = j.at("alpha").get<double>();
    if (j.contains("ml_pseudocount")) spec.ml_pseudocount = j.at("ml_pseudocount").get<double>();
    if (j.contains("hypothetical")) {
        spec.hypothetical = std::make_shared<Network>(
            read_network_file(j.at("hypothetical").get<std::string>()));
    }
    spec.validate();
    return spec;
}

inline nlohmann::json score_spec_to_json(const ScoreSpec& spec) {
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    if (spec.kind == ScoreKind::Bde || spec.kind == ScoreKind::Bdeu || spec.kind == ScoreKind::NipBic) {
        j["alpha"] = spec.alpha;
    }
    if (spec.kind == ScoreKind::Ml) j["ml_pseudocount"] = spec.ml_pseudocount;
    return j;
}

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    try {
        ExperimentConfig cfg;
        if (j.contains("generator")) cfg.generator = j.at("generator").get<std::string>();
        if (j.contains("sample_sizes")) cfg.sample_sizes = j.at("sample_sizes").get<std::vector<long long>>();
        if (j.contains("scores")) {
            cfg.scores.clear();
            for (const auto& s : j.at("scores")) cfg.scores.push_back(score_spec_from_json(s));
        }
        if (j.contains("repetitions")) cfg.repetitions = j.at("repetitions").get<int>();
        if (j.contains("master_seed")) cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("recovery_metric")) {
            cfg.recovery_metric = recovery_metric_from_string(j.at("recovery_metric").get<std::string>());
        }
        cfg.validate();
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("experiment config JSON: ") + e.what());
    }
}

inline ExperimentConfig read_experiment_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("cannot parse config file " + path + ": " + e.what());
    }
    return experiment_config_from_json(j);
}

// A generator reference is either a preset id (g1..g5) or a network file path.
inline Network resolve_generator(const std::string& ref) {
    if (auto id = parse_preset_id(ref)) return preset_network(*id);
    return read_network_file(ref);
}

inline Dataset read_dataset_file(const std::string& path, const std::vector<int>* cards = nullptr) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open data file: " + path);
    return read_csv(is, cards);
}

inline void write_dataset_file(const std::string& path, const Dataset& data) {
    std::ofstream os(path);
    if (!os) throw DataError("cannot open output file: " + path);
    write_csv(os, data);
}

}  // namespace bnsl

#endif  // BNSL_IO_HPP
