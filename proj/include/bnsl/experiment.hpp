// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef BNSL_EXPERIMENT_HPP
#define BNSL_EXPERIMENT_HPP

#include <cstdint>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bnsl/common.hpp"
#include "bnsl/sampler.hpp"
#include "bnsl/search.hpp"
#include "bnsl/stats.hpp"
#include "bnsl/types.hpp"

namespace bnsl {

enum class RecoveryMetric { ExactDag, EquivalenceClass, Both };

inline const char* to_string(RecoveryMetric m) {
    switch (m) {
        case RecoveryMetric::ExactDag: return "exact_dag";
        case RecoveryMetric::EquivalenceClass: return "equivalence_class";
        case RecoveryMetric::Both: return "both";
    }
    throw DataError("unknown recovery metric");
}

inline RecoveryMetric recovery_metric_from_string(const std::string& s) {
    if (s == "exact_dag") return RecoveryMetric::ExactDag;
    if (s == "equivalence_class") return RecoveryMetric::EquivalenceClass;
    if (s == "both") return RecoveryMetric::Both;
    throw DataError("unknown recovery metric: " + s);
}

// The score grid of the reference protocol: ML with pseudocount 1, BDeu and
// NIP-BIC at alpha in {0.01, 0.1, 1, 10, 100}, and BIC.
inline std::vector<ScoreSpec> default_score_grid() {
    std::vector<ScoreSpec> out;
    ScoreSpec ml;
    ml.kind = ScoreKind::Ml;
    ml.ml_pseudocount = 1.0;
    out.push_back(ml);
    for (double a : {0.01, 0.1, 1.0, 10.0, 100.0}) {
        ScoreSpec s;
        s.kind = ScoreKind::Bdeu;
        s.alpha = a;
        out.push_back(s);
    }
    ScoreSpec bic;
    bic.kind = ScoreKind::Bic;
    out.push_back(bic);
    for (double a : {0.01, 0.1, 1.0, 10.0, 100.0}) {
        ScoreSpec s;
        s.kind = ScoreKind::NipBic;
        s.alpha = a;
        out.push_back(s);
    }
    return out;
}

struct ExperimentConfig {
    std::string generator = "g1";  // preset id or network JSON path
    std::vector<long long> sample_sizes = {50, 100, 200, 500, 1000};
    std::vector<ScoreSpec> scores = default_score_grid();
    int repetitions = 100;
    std::uint64_t master_seed = 0;
    RecoveryMetric recovery_metric = RecoveryMetric::Both;

    void validate() const {
        if (repetitions < 1) throw DataError("ExperimentConfig: repetitions must be >= 1");
        if (sample_sizes.empty()) throw DataError("ExperimentConfig: no sample sizes");
        for (long long n : sample_sizes)
            if (n < 1) throw DataError("ExperimentConfig: sample sizes must be >= 1");
        if (scores.empty()) throw DataError("ExperimentConfig: no scores");
        for (const auto& s : scores) s.validate();
    }
};

struct ArcDiff {
    int extra = 0;    // arcs in the estimate but not the truth ("+")
    int missing = 0;  // arcs in the truth but not the estimate ("-")
};

// Directed arc comparison; a reversed arc counts as one extra plus one
// missing. The equivalence-class recovery metric covers the undirected view.
inline ArcDiff arc_diff(const Dag& estimated, const Dag& truth) {
    if (estimated.num_vars() != truth.num_vars()) throw DataError("arc_diff: variable counts differ");
    ArcDiff d;
    for (const auto& [from, to] : estimated.arcs())
        if (!truth.has_arc(from, to)) ++d.extra;
    for (const auto& [from, to] : truth.arcs())
        if (!estimated.has_arc(from, to)) ++d.missing;
    return d;
}

// Accumulated totals for one (score, n) cell across repetitions.
struct ExperimentCell {
    long long extra_total = 0;
    long long missing_total = 0;
    int correct_exact = 0;
    int correct_class = 0;
    int multi_tie_reps = 0;  // repetitions whose tie set had more than one member
};

inline std::string score_label(const ScoreSpec& spec) {
    switch (spec.kind) {
        case ScoreKind::Ml: return "ML";
        case ScoreKind::Bic: return "BIC";
        case ScoreKind::Bde: return "BDe(a=" + format_g12(spec.alpha) + ")";
        case ScoreKind::Bdeu: return "BDeu(a=" + format_g12(spec.alpha) + ")";
        case ScoreKind::NipBic: return "NIP-BIC(a=" + format_g12(spec.alpha) + ")";
    }
    throw DataError("unknown score kind");
}

struct ExperimentReport {
    std::string generator_label;
    Dag truth;
    std::vector<long long> sample_sizes;
    std::vector<ScoreSpec> scores;
    int repetitions = 0;
    std::uint64_t master_seed = 0;
    RecoveryMetric recovery_metric = RecoveryMetric::Both;
    std::vector<std::vector<ExperimentCell>> cells;  // [score index][sample-size index]
    std::vector<std::string> log_lines;              // master seed, per-(rep, n) dataset hashes

    double tie_rate(std::size_t score_idx, std::size_t n_idx) const {
        return static_cast<double>(cells[score_idx][n_idx].multi_tie_reps) / repetitions;
    }
};

namespace detail {

struct RepetitionOutcome {
    std::vector<std::uint64_t> data_hashes;           // per sample size
    std::vector<std::vector<ArcDiff>> diffs;          // [n][score]
    std::vector<std::vector<bool>> exact, cls, tied;  // [n][score]
};

inline RepetitionOutcome run_repetition(const ExperimentConfig& cfg, const Network& generator,
                                        int rep) {
    RepetitionOutcome out;
    const std::size_t n_sizes = cfg.sample_sizes.size();
    out.diffs.resize(n_sizes);
    out.exact.resize(n_sizes);
    out.cls.resize(n_sizes);
    out.tied.resize(n_sizes);
    for (std::size_t ni = 0; ni < n_sizes; ++ni) {
        const std::uint64_t stream =
            static_cast<std::uint64_t>(rep) * n_sizes + static_cast<std::uint64_t>(ni);
        const Dataset data = sample(generator, cfg.sample_sizes[ni], derive_seed(cfg.master_seed, stream));
        out.data_hashes.push_back(dataset_hash(data));
        // Paired design: every score sees this same dataset.
        for (const auto& spec : cfg.scores) {
            const SearchResult res = exhaustive_search(data, spec);
            out.diffs[ni].push_back(arc_diff(res.best, generator.dag));
            out.exact[ni].push_back(res.best == generator.dag);
            out.cls[ni].push_back(markov_equivalent(res.best, generator.dag));
            out.tied[ni].push_back(res.ties.size() > 1);
        }
    }
    return out;
}

}  // namespace detail

// The end-to-end protocol: per repetition and sample size, draw one dataset
// with a seed derived from (master seed, repetition, size index), search it
// under every score, and accumulate arc differences and recovery counts.
// Output is deterministic in the config alone; `jobs` only distributes
// repetitions across threads.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg, const Network& generator,
                                       int jobs = 1) {
    cfg.validate();
    generator.validate();
    if (!generator.cpts) throw DataError("run_experiment: generator network needs CPTs");

    const std::size_t n_scores = cfg.scores.size();
    const std::size_t n_sizes = cfg.sample_sizes.size();

    std::vector<detail::RepetitionOutcome> outcomes(static_cast<std::size_t>(cfg.repetitions));
    jobs = std::max(1, std::min(jobs, cfg.repetitions));
    if (jobs == 1) {
        for (int rep = 0; rep < cfg.repetitions; ++rep)
            outcomes[static_cast<std::size_t>(rep)] = detail::run_repetition(cfg, generator, rep);
    } else {
        std::vector<std::thread> threads;
        for (int w = 0; w < jobs; ++w) {
            threads.emplace_back([&, w] {
                for (int rep = w; rep < cfg.repetitions; rep += jobs)
                    outcomes[static_cast<std::size_t>(rep)] = detail::run_repetition(cfg, generator, rep);
            });
        }
        for (auto& t : threads) t.join();
    }

    ExperimentReport rep;
    rep.generator_label = cfg.generator;
    rep.truth = generator.dag;
    rep.sample_sizes = cfg.sample_sizes;
    rep.scores = cfg.scores;
    rep.repetitions = cfg.repetitions;
    rep.master_seed = cfg.master_seed;
    rep.recovery_metric = cfg.recovery_metric;
    rep.cells.assign(n_scores, std::vector<ExperimentCell>(n_sizes));
    rep.log_lines.push_back("master_seed=" + std::to_string(cfg.master_seed));

    for (int r = 0; r < cfg.repetitions; ++r) {
        const auto& oc = outcomes[static_cast<std::size_t>(r)];
        for (std::size_t ni = 0; ni < n_sizes; ++ni) {
            std::ostringstream line;
            line << "rep=" << r << " n=" << cfg.sample_sizes[ni] << " dataset_hash=" << std::hex
                 << oc.data_hashes[ni];
            rep.log_lines.push_back(line.str());
            for (std::size_t si = 0; si < n_scores; ++si) {
                ExperimentCell& cell = rep.cells[si][ni];
                cell.extra_total += oc.diffs[ni][si].extra;
                cell.missing_total += oc.diffs[ni][si].missing;
                cell.correct_exact += oc.exact[ni][si] ? 1 : 0;
                cell.correct_class += oc.cls[ni][si] ? 1 : 0;
                cell.multi_tie_reps += oc.tied[ni][si] ? 1 : 0;
            }
        }
    }
    return rep;
}

enum class ReportFormat { Csv, Markdown };

namespace detail {

inline int correct_of(const ExperimentCell& c, RecoveryMetric m) {
    return m == RecoveryMetric::EquivalenceClass ? c.correct_class : c.correct_exact;
}

inline std::string render_table(const ExperimentReport& rep, ReportFormat format,
                                RecoveryMetric metric) {
    std::ostringstream os;
    const std::size_t n_scores = rep.scores.size();
    if (format == ReportFormat::Csv) {
        os << "generator,n";
        for (const auto& s : rep.scores) {
            const std::string l = score_label(s);
            os << ',' << l << "+," << l << "-," << l << "O";
        }
        os << '\n';
        for (std::size_t ni = 0; ni < rep.sample_sizes.size(); ++ni) {
            os << rep.generator_label << ',' << rep.sample_sizes[ni];
            for (std::size_t si = 0; si < n_scores; ++si) {
                const auto& c = rep.cells[si][ni];
                os << ',' << c.extra_total << ',' << c.missing_total << ','
                   << correct_of(c, metric);
            }
            os << '\n';
        }
    } else {
        os << "### generator " << rep.generator_label << ", " << rep.repetitions
           << " repetitions, recovery metric " << to_string(metric) << "\n\n";
        os << "| n |";
        for (const auto& s : rep.scores) {
            const std::string l = score_label(s);
            os << ' ' << l << " + | " << l << " - | " << l << " O |";
        }
        os << '\n';
        os << "| --- |";
        for (std::size_t si = 0; si < n_scores; ++si) os << " --- | --- | --- |";
        os << '\n';
        for (std::size_t ni = 0; ni < rep.sample_sizes.size(); ++ni) {
            os << "| " << rep.sample_sizes[ni] << " |";
            for (std::size_t si = 0; si < n_scores; ++si) {
                const auto& c = rep.cells[si][ni];
                os << ' ' << c.extra_total << " | " << c.missing_total << " | "
                   << correct_of(c, metric) << " |";
            }
            os << '\n';
        }
    }
    return os.str();
}

}  // namespace detail

// Tables-style rendering: one row per (generator, n), a (+, -, O) column
// triplet per score. With the `both` metric two tables are emitted, one per
// recovery reading, separated by a blank line.
inline std::string render_report(const ExperimentReport& rep, ReportFormat format) {
    if (rep.recovery_metric != RecoveryMetric::Both) {
        return detail::render_table(rep, format, rep.recovery_metric);
    }
    return detail::render_table(rep, format, RecoveryMetric::ExactDag) + "\n" +
           detail::render_table(rep, format, RecoveryMetric::EquivalenceClass);
}

}  // namespace bnsl

#endif  // BNSL_EXPERIMENT_HPP
