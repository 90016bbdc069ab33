// Apache License, Version 2.0, refer to LICENSE.txt
//
// Command-line frontend: sampling, scoring, exact search, asymptotics
// sweeps, and the full experiment protocol. stdout carries the payload,
// stderr the diagnostics. Exit codes: 0 success, 1 usage error, 2
// data/format error, 3 capacity error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bnsl/bnsl.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCapacity = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("cannot parse number '" + item + "' in list '" + s + "'");
        }
    }
    if (out.empty()) throw UsageError("empty list: '" + s + "'");
    return out;
}

std::vector<long long> parse_int_list(const std::string& s) {
    std::vector<long long> out;
    for (double v : parse_double_list(s)) {
        const auto i = static_cast<long long>(v);
        if (static_cast<double>(i) != v) throw UsageError("expected integer list, got '" + s + "'");
        out.push_back(i);
    }
    return out;
}

// Output sink honoring the "-" = stdout convention.
class OutFile {
public:
    explicit OutFile(const std::string& path) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw bnsl::DataError("cannot open output file: " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

bnsl::Network load_network(const std::string& network_path, const std::string& preset_id) {
    if (!preset_id.empty()) {
        const auto id = bnsl::parse_preset_id(preset_id);
        if (!id) throw UsageError("unknown preset '" + preset_id + "' (expected g1..g5)");
        return bnsl::preset_network(*id);
    }
    return bnsl::read_network_file(network_path);
}

struct ScoreFlags {
    std::string score;
    double alpha = 0.0;
    bool has_alpha = false;
    double ml_pseudocount = 1.0;
    std::string hypothetical_path;

    bnsl::ScoreSpec build() const {
        bnsl::ScoreSpec spec;
        spec.kind = bnsl::score_kind_from_string(score);
        spec.ml_pseudocount = ml_pseudocount;
        switch (spec.kind) {
            case bnsl::ScoreKind::Bdeu:
            case bnsl::ScoreKind::Bde:
                if (!has_alpha) throw UsageError("--alpha is required for --score " + score);
                spec.alpha = alpha;
                break;
            case bnsl::ScoreKind::NipBic:
                spec.alpha = has_alpha ? alpha : 1.0;  // recommended default ESS
                break;
            case bnsl::ScoreKind::Ml:
            case bnsl::ScoreKind::Bic:
                break;
        }
        if (spec.kind == bnsl::ScoreKind::Bde) {
            if (hypothetical_path.empty()) {
                throw UsageError("--hypothetical is required for --score bde");
            }
            spec.hypothetical =
                std::make_shared<bnsl::Network>(bnsl::read_network_file(hypothetical_path));
        } else if (!hypothetical_path.empty()) {
            throw UsageError("--hypothetical is only valid with --score bde");
        }
        spec.validate();
        return spec;
    }
};

void add_score_flags(CLI::App* cmd, ScoreFlags& f) {
    cmd->add_option("--score", f.score, "Score: ml|bde|bdeu|bic|nip-bic")
        ->required()
        ->check(CLI::IsMember({"ml", "bde", "bdeu", "bic", "nip-bic"}));
    cmd->add_option("--alpha", f.alpha, "Equivalent sample size (ESS)")
        ->each([&f](const std::string&) { f.has_alpha = true; });
    cmd->add_option("--ml-pseudocount", f.ml_pseudocount, "Per-cell pseudocount for --score ml");
    cmd->add_option("--hypothetical", f.hypothetical_path,
                    "Hypothetical network JSON (required for --score bde)");
}

double display_log(double nat_log, bool log10_out) {
    return log10_out ? nat_log / std::numbers::ln10 : nat_log;
}

int run(int argc, char** argv) {
    CLI::App app{"Score-based Bayesian network structure learning"};
    app.require_subcommand(1);

    // ---- sample ----
    auto* sample_cmd = app.add_subcommand("sample", "Draw a dataset from a network with CPTs");
    std::string s_network, s_preset, s_out;
    long long s_n = 0;
    std::uint64_t s_seed = 0;
    auto* s_net_opt = sample_cmd->add_option("--network", s_network, "Network JSON file");
    sample_cmd->add_option("--preset", s_preset, "Generator preset g1..g5")->excludes(s_net_opt);
    sample_cmd->add_option("--n", s_n, "Number of rows")->required();
    sample_cmd->add_option("--seed", s_seed, "RNG seed")->required();
    sample_cmd->add_option("--out", s_out, "Output CSV file ('-' for stdout)")->required();

    // ---- score ----
    auto* score_cmd = app.add_subcommand("score", "Score a structure on a dataset");
    std::string sc_data, sc_network;
    ScoreFlags sc_flags;
    bool sc_decompose = false, sc_log10 = false;
    score_cmd->add_option("--data", sc_data, "Data CSV file")->required();
    score_cmd->add_option("--network", sc_network, "Network JSON file (structure to score)")->required();
    add_score_flags(score_cmd, sc_flags);
    score_cmd->add_flag("--decompose", sc_decompose,
                        "Also print the prior/likelihood split (bdeu only)");
    score_cmd->add_flag("--log10", sc_log10, "Print base-10 logs instead of natural logs");

    // ---- search ----
    auto* search_cmd = app.add_subcommand("search", "Exact exhaustive structure search");
    std::string se_data, se_cards, se_out;
    ScoreFlags se_flags;
    int se_top = 0, se_jobs = 1;
    search_cmd->add_option("--data", se_data, "Data CSV file")->required();
    search_cmd->add_option("--cards", se_cards, "Comma-separated cardinalities")->required();
    add_score_flags(search_cmd, se_flags);
    search_cmd->add_option("--top", se_top, "Also report the top K structures");
    search_cmd->add_option("--out", se_out, "Output JSON file ('-' for stdout)")->required();
    search_cmd->add_option("--jobs", se_jobs, "Worker count hint (never changes output)");

    // ---- asymptotics ----
    auto* asym_cmd = app.add_subcommand("asymptotics", "Exact-vs-approximate score decomposition sweep");
    std::string a_network, a_preset, a_data, a_ns, a_alphas, a_out;
    std::uint64_t a_seed = 0;
    auto* a_net_opt = asym_cmd->add_option("--network", a_network, "Network JSON file");
    asym_cmd->add_option("--preset", a_preset, "Generator preset g1..g5")->excludes(a_net_opt);
    auto* a_data_opt = asym_cmd->add_option("--data", a_data, "Data CSV file");
    auto* a_gen_opt = asym_cmd->add_option("--generate-n", a_ns,
                                           "Comma-separated sample sizes to generate")
                          ->excludes(a_data_opt);
    asym_cmd->add_option("--seed", a_seed, "RNG seed for --generate-n")->needs(a_gen_opt);
    asym_cmd->add_option("--alphas", a_alphas, "Comma-separated ESS grid")->required();
    asym_cmd->add_option("--out", a_out, "Output CSV file ('-' for stdout)")->required();

    // ---- experiment ----
    auto* exp_cmd = app.add_subcommand("experiment", "Run the sample/search/count protocol");
    std::string e_config, e_out, e_format = "csv", e_log;
    int e_jobs = 1;
    exp_cmd->add_option("--config", e_config, "Experiment config JSON")->required();
    exp_cmd->add_option("--out", e_out, "Output report file ('-' for stdout)")->required();
    exp_cmd->add_option("--format", e_format, "Report format")
        ->check(CLI::IsMember({"csv", "markdown"}));
    exp_cmd->add_option("--jobs", e_jobs, "Worker count hint (never changes output)");
    exp_cmd->add_option("--log", e_log, "Write the run log to this file instead of stderr");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\nRun with --help for usage.\n";
        return kExitUsage;
    }

    try {
        if (*sample_cmd) {
            if (s_network.empty() && s_preset.empty()) {
                throw UsageError("sample: provide --network or --preset");
            }
            const bnsl::Network net = load_network(s_network, s_preset);
            const bnsl::Dataset data = bnsl::sample(net, s_n, s_seed);
            OutFile out(s_out);
            bnsl::write_csv(out.stream(), data);
        } else if (*score_cmd) {
            const bnsl::Network net = bnsl::read_network_file(sc_network);
            const auto cards = net.cards();
            const bnsl::Dataset data = bnsl::read_dataset_file(sc_data, &cards);
            const bnsl::ScoreSpec spec = sc_flags.build();
            if (sc_decompose && spec.kind != bnsl::ScoreKind::Bdeu) {
                throw UsageError("--decompose is only defined for --score bdeu");
            }
            const double total = bnsl::score_structure(data, net.dag, spec).total;
            if (sc_decompose) {
                const double prior = bnsl::prior_term_exact(net.dag, cards, spec.alpha);
                const auto stats = bnsl::all_family_stats(data, net.dag);
                const double lik = bnsl::likelihood_term_exact(stats, spec.alpha);
                std::cout << "prior " << bnsl::format_g12(display_log(prior, sc_log10)) << '\n';
                std::cout << "likelihood " << bnsl::format_g12(display_log(lik, sc_log10)) << '\n';
                std::cout << "total " << bnsl::format_g12(display_log(total, sc_log10)) << '\n';
            } else {
                std::cout << bnsl::format_g12(display_log(total, sc_log10)) << '\n';
            }
        } else if (*search_cmd) {
            const auto cards_ll = parse_int_list(se_cards);
            std::vector<int> cards;
            for (long long c : cards_ll) cards.push_back(static_cast<int>(c));
            const bnsl::Dataset data = bnsl::read_dataset_file(se_data, &cards);
            const bnsl::ScoreSpec spec = se_flags.build();
            const bnsl::SearchResult res = bnsl::exhaustive_search(data, spec, se_jobs);
            nlohmann::json j = bnsl::search_result_to_json(res);
            if (se_top > 0) {
                j["top"] = nlohmann::json::array();
                for (const auto& [dag, score] : bnsl::top_k(data, spec, se_top, se_jobs)) {
                    nlohmann::json lists = nlohmann::json::array();
                    for (int i = 0; i < dag.num_vars(); ++i) lists.push_back(dag.parents(i));
                    j["top"].push_back({{"dag", std::move(lists)}, {"score", score}});
                }
            }
            OutFile out(se_out);
            out.stream() << j.dump(2) << '\n';
        } else if (*asym_cmd) {
            if (a_network.empty() && a_preset.empty()) {
                throw UsageError("asymptotics: provide --network or --preset");
            }
            const bnsl::Network net = load_network(a_network, a_preset);
            const auto alphas = parse_double_list(a_alphas);
            std::vector<bnsl::DecompositionReport> reports;
            if (!a_data.empty()) {
                const auto cards = net.cards();
                const bnsl::Dataset data = bnsl::read_dataset_file(a_data, &cards);
                reports = bnsl::sweep(net.dag, cards, data, alphas);
            } else if (!a_ns.empty()) {
                reports = bnsl::sweep(net, alphas, parse_int_list(a_ns), a_seed);
            } else {
                throw UsageError("asymptotics: provide --data or --generate-n");
            }
            OutFile out(a_out);
            bnsl::write_sweep_csv(out.stream(), reports);
        } else if (*exp_cmd) {
            const bnsl::ExperimentConfig cfg = bnsl::read_experiment_config(e_config);
            const bnsl::Network gen = bnsl::resolve_generator(cfg.generator);
            const bnsl::ExperimentReport report = bnsl::run_experiment(cfg, gen, e_jobs);
            const auto format =
                e_format == "markdown" ? bnsl::ReportFormat::Markdown : bnsl::ReportFormat::Csv;
            OutFile out(e_out);
            out.stream() << bnsl::render_report(report, format);
            if (e_log.empty()) {
                for (const auto& line : report.log_lines) std::cerr << line << '\n';
            } else {
                std::ofstream log(e_log);
                if (!log) throw bnsl::DataError("cannot open log file: " + e_log);
                for (const auto& line : report.log_lines) log << line << '\n';
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const bnsl::CapacityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const bnsl::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
