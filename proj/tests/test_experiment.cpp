// Apache License, Version 2.0, refer to LICENSE.txt

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "bnsl/experiment.hpp"
#include "bnsl/sampler.hpp"

using namespace bnsl;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.generator = "g1";
    cfg.sample_sizes = {50, 100};
    cfg.scores.clear();
    ScoreSpec bdeu;
    bdeu.kind = ScoreKind::Bdeu;
    bdeu.alpha = 1.0;
    cfg.scores.push_back(bdeu);
    ScoreSpec bic;
    bic.kind = ScoreKind::Bic;
    cfg.scores.push_back(bic);
    cfg.repetitions = 4;
    cfg.master_seed = 20240817;
    cfg.recovery_metric = RecoveryMetric::Both;
    return cfg;
}

int count_lines(const std::string& s) {
    return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("arc_diff examples") {
    const Dag truth = Dag::from_arcs(5, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}});
    const ArcDiff same = arc_diff(truth, truth);
    CHECK(same.extra == 0);
    CHECK(same.missing == 0);

    const ArcDiff none = arc_diff(Dag(5), truth);
    CHECK(none.extra == 0);
    CHECK(none.missing == 5);

    const ArcDiff rev = arc_diff(Dag::from_arcs(2, {{1, 0}}), Dag::from_arcs(2, {{0, 1}}));
    CHECK(rev.extra == 1);
    CHECK(rev.missing == 1);

    CHECK_THROWS_AS(arc_diff(Dag(2), Dag(3)), DataError);
}

TEST_CASE("single repetition totals equal that repetition's arc diff") {
    ExperimentConfig cfg = small_config();
    cfg.repetitions = 1;
    cfg.sample_sizes = {50};
    cfg.scores.resize(1);  // BDeu alpha = 1 only
    const Network gen = preset_network(PresetId::G1);
    const ExperimentReport rep = run_experiment(cfg, gen);

    // Reproduce the single repetition by hand.
    const Dataset data = sample(gen, 50, derive_seed(cfg.master_seed, 0));
    const SearchResult res = exhaustive_search(data, cfg.scores[0]);
    const ArcDiff d = arc_diff(res.best, gen.dag);

    REQUIRE(rep.cells.size() == 1);
    REQUIRE(rep.cells[0].size() == 1);
    CHECK(rep.cells[0][0].extra_total == d.extra);
    CHECK(rep.cells[0][0].missing_total == d.missing);
    CHECK(rep.cells[0][0].correct_exact == (res.best == gen.dag ? 1 : 0));
    CHECK(rep.cells[0][0].correct_class == (markov_equivalent(res.best, gen.dag) ? 1 : 0));
}

TEST_CASE("experiment determinism across worker counts") {
    const ExperimentConfig cfg = small_config();
    const Network gen = preset_network(PresetId::G1);
    const ExperimentReport a = run_experiment(cfg, gen, 1);
    const ExperimentReport b = run_experiment(cfg, gen, 4);

    CHECK(render_report(a, ReportFormat::Csv) == render_report(b, ReportFormat::Csv));
    CHECK(render_report(a, ReportFormat::Markdown) == render_report(b, ReportFormat::Markdown));
    CHECK(a.log_lines == b.log_lines);
}

TEST_CASE("experiment bookkeeping invariants") {
    const ExperimentConfig cfg = small_config();
    const Network gen = preset_network(PresetId::G1);
    const ExperimentReport rep = run_experiment(cfg, gen);

    for (std::size_t si = 0; si < cfg.scores.size(); ++si) {
        for (std::size_t ni = 0; ni < cfg.sample_sizes.size(); ++ni) {
            const ExperimentCell& c = rep.cells[si][ni];
            CHECK(c.correct_exact >= 0);
            CHECK(c.correct_exact <= cfg.repetitions);
            CHECK(c.correct_class >= c.correct_exact);  // class match is implied by exact match
            CHECK(c.missing_total <= cfg.repetitions * gen.dag.arc_count());
            CHECK(c.extra_total <= cfg.repetitions * 10);  // at most N(N-1)/2 arcs in a DAG
            CHECK(rep.tie_rate(si, ni) >= 0.0);
            CHECK(rep.tie_rate(si, ni) <= 1.0);
        }
    }

    // One hash line per (repetition, n) plus the master-seed line; the
    // paired design gives every score the same dataset, so hashes do not
    // depend on the score list.
    CHECK(rep.log_lines.size() == 1 + cfg.sample_sizes.size() * static_cast<std::size_t>(cfg.repetitions));
    ExperimentConfig one_score = cfg;
    one_score.scores.resize(1);
    const ExperimentReport rep1 = run_experiment(one_score, gen);
    CHECK(rep.log_lines == rep1.log_lines);
}

TEST_CASE("render layout") {
    ExperimentConfig cfg = small_config();
    cfg.recovery_metric = RecoveryMetric::ExactDag;
    const Network gen = preset_network(PresetId::G1);
    const ExperimentReport rep = run_experiment(cfg, gen);

    const std::string csv = render_report(rep, ReportFormat::Csv);
    std::istringstream is(csv);
    std::string header;
    std::getline(is, header);
    // generator,n + one (+,-,O) triplet per score.
    CHECK(std::count(header.begin(), header.end(), ',') ==
          1 + 3 * static_cast<long>(cfg.scores.size()));
    CHECK(header.rfind("generator,n,", 0) == 0);
    int rows = 0;
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) {
            CHECK(std::count(line.begin(), line.end(), ',') ==
                  1 + 3 * static_cast<long>(cfg.scores.size()));
            CHECK(line.rfind("g1,", 0) == 0);
            ++rows;
        }
    CHECK(rows == static_cast<int>(cfg.sample_sizes.size()));

    // Markdown column count is 1 + 3 * cells.
    const std::string md = render_report(rep, ReportFormat::Markdown);
    std::istringstream mis(md);
    std::string title, blank, head;
    std::getline(mis, title);
    std::getline(mis, blank);
    std::getline(mis, head);
    CHECK(std::count(head.begin(), head.end(), '|') ==
          static_cast<long>(1 + 3 * cfg.scores.size()) + 1);

    // The `both` metric renders two tables.
    ExperimentConfig both_cfg = small_config();
    const ExperimentReport both = run_experiment(both_cfg, gen);
    const std::string both_csv = render_report(both, ReportFormat::Csv);
    CHECK(count_lines(both_csv) == 2 * (1 + static_cast<int>(cfg.sample_sizes.size())) + 1);
}

TEST_CASE("empty report renders header-only output") {
    ExperimentReport rep;
    rep.generator_label = "g1";
    rep.recovery_metric = RecoveryMetric::ExactDag;
    ScoreSpec bdeu;
    bdeu.kind = ScoreKind::Bdeu;
    bdeu.alpha = 1.0;
    rep.scores = {bdeu};
    rep.cells.assign(1, {});
    const std::string csv = render_report(rep, ReportFormat::Csv);
    CHECK(count_lines(csv) == 1);
    CHECK(csv.rfind("generator,n,BDeu(a=1)+,BDeu(a=1)-,BDeu(a=1)O", 0) == 0);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg = small_config();
    cfg.repetitions = 0;
    CHECK_THROWS_AS(cfg.validate(), DataError);
    cfg = small_config();
    cfg.sample_sizes = {};
    CHECK_THROWS_AS(cfg.validate(), DataError);
    cfg = small_config();
    cfg.sample_sizes = {0};
    CHECK_THROWS_AS(cfg.validate(), DataError);
    cfg = small_config();
    cfg.scores.clear();
    CHECK_THROWS_AS(cfg.validate(), DataError);
}

TEST_CASE("default score grid matches the reference protocol") {
    const auto grid = default_score_grid();
    REQUIRE(grid.size() == 12);  // ML + 5 BDeu + BIC + 5 NIP-BIC
    CHECK(grid[0].kind == ScoreKind::Ml);
    CHECK(grid[6].kind == ScoreKind::Bic);
    CHECK(score_label(grid[1]) == "BDeu(a=0.01)");
    CHECK(score_label(grid[11]) == "NIP-BIC(a=100)");
}
