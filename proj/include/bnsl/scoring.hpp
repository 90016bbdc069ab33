// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef BNSL_SCORING_HPP
#define BNSL_SCORING_HPP

#include <cmath>
#include <span>
#include <vector>

#include "bnsl/common.hpp"
#include "bnsl/stats.hpp"
#include "bnsl/types.hpp"

namespace bnsl {

// BDeu hyperparameters: the constant matrix alpha / (r * q).
inline Table bdeu_hyperparams(double alpha, int r, int q) {
    if (!(alpha > 0.0)) throw DataError("bdeu_hyperparams: alpha must be positive");
    return Table(q, r, alpha / (static_cast<double>(r) * static_cast<double>(q)));
}

// ML (Cooper-Herskovits) hyperparameters: the same pseudocount in every cell.
inline Table ml_hyperparams(double pseudocount, int r, int q) {
    if (!(pseudocount > 0.0)) throw DataError("ml_hyperparams: pseudocount must be positive");
    return Table(q, r, pseudocount);
}

// Exact joint distribution of a network with full CPTs, indexed by the
// mixed-radix encoding of the full assignment (variable 0 most significant).
// State spaces are capped at 2^22 cells.
inline std::vector<double> joint_distribution(const Network& net) {
    net.validate();
    if (!net.cpts) throw DataError("joint_distribution: network has no CPTs");
    const auto cards = net.cards();
    long long total = 1;
    for (int c : cards) {
        total *= c;
        if (total > (1LL << 22)) throw CapacityError("joint_distribution: state space exceeds 2^22");
    }

    const int n = net.num_vars();
    std::vector<double> joint(static_cast<std::size_t>(total));
    std::vector<int> states(static_cast<std::size_t>(n), 0);
    std::vector<int> parent_states;
    for (long long cell = 0; cell < total; ++cell) {
        double p = 1.0;
        for (int i = 0; i < n; ++i) {
            const auto& ps = net.dag.parents(i);
            parent_states.clear();
            std::vector<int> parent_cards;
            for (int u : ps) {
                parent_states.push_back(states[static_cast<std::size_t>(u)]);
                parent_cards.push_back(cards[static_cast<std::size_t>(u)]);
            }
            const int j = parent_config_index(parent_states, parent_cards);
            p *= (*net.cpts)[static_cast<std::size_t>(i)].table(j, states[static_cast<std::size_t>(i)]);
        }
        joint[static_cast<std::size_t>(cell)] = p;
        for (int i = n - 1; i >= 0; --i) {  // odometer
            if (++states[static_cast<std::size_t>(i)] < cards[static_cast<std::size_t>(i)]) break;
            states[static_cast<std::size_t>(i)] = 0;
        }
    }
    return joint;
}

// BDe hyperparameters alpha_jk = alpha * p(x_child = k, parents = j | g^h),
// with the joint computed by exact summation over all full assignments of
// the hypothetical network. A zero cell means the hypothetical prior is
// degenerate for this family and is rejected.
inline Table bde_hyperparams(const Network& hypothetical, double alpha, int child,
                             std::span<const int> parents) {
    if (!(alpha > 0.0)) throw DataError("bde_hyperparams: alpha must be positive");
    if (!hypothetical.cpts) throw DataError("bde_hyperparams: hypothetical network needs CPTs");
    const auto cards = hypothetical.cards();
    const int n = hypothetical.num_vars();
    if (child < 0 || child >= n) throw DataError("bde_hyperparams: child index out of range");

    std::vector<int> parent_cards;
    for (int p : parents) {
        if (p < 0 || p >= n || p == child) throw DataError("bde_hyperparams: bad parent index");
        parent_cards.push_back(cards[static_cast<std::size_t>(p)]);
    }
    const int q = static_cast<int>(parent_config_count(parent_cards));
    const int r = cards[static_cast<std::size_t>(child)];

    const std::vector<double> joint = joint_distribution(hypothetical);
    Table a(q, r, 0.0);
    std::vector<int> states(static_cast<std::size_t>(n), 0);
    std::vector<int> parent_states(parents.size());
    for (double p : joint) {
        for (std::size_t u = 0; u < parents.size(); ++u) {
            parent_states[u] = states[static_cast<std::size_t>(parents[u])];
        }
        const int j = parent_config_index(parent_states, parent_cards);
        a(j, states[static_cast<std::size_t>(child)]) += alpha * p;
        for (int i = n - 1; i >= 0; --i) {
            if (++states[static_cast<std::size_t>(i)] < cards[static_cast<std::size_t>(i)]) break;
            states[static_cast<std::size_t>(i)] = 0;
        }
    }
    for (double v : a.v) {
        if (!(v > 0.0)) {
            throw DataError("bde_hyperparams: hypothetical network puts zero mass on a family cell");
        }
    }
    return a;
}

namespace detail {

inline void check_hyper(const FamilyStats& st, const Table& a, const char* who) {
    if (a.q != st.q || a.r != st.r) throw DataError(std::string(who) + ": hyperparameter shape mismatch");
    for (double v : a.v)
        if (!(v > 0.0)) throw DataError(std::string(who) + ": non-positive hyperparameter");
}

}  // namespace detail

// EAP parameter estimates theta_jk = (alpha_jk + n_jk) / (alpha_j + n_j).
// Rows sum to one by construction.
inline Table eap_estimate(const FamilyStats& st, const Table& alpha) {
    detail::check_hyper(st, alpha, "eap_estimate");
    Table theta(st.q, st.r);
    for (int j = 0; j < st.q; ++j) {
        double denom = 0.0;
        for (int k = 0; k < st.r; ++k) denom += alpha(j, k) + static_cast<double>(st.n(j, k));
        for (int k = 0; k < st.r; ++k) {
            theta(j, k) = (alpha(j, k) + static_cast<double>(st.n(j, k))) / denom;
        }
    }
    return theta;
}

// Per-family log marginal likelihood: the family's factor of the
// Dirichlet-multinomial product, in natural log.
inline double log_ml_family(const FamilyStats& st, const Table& alpha) {
    detail::check_hyper(st, alpha, "log_ml_family");
    double s = 0.0;
    for (int j = 0; j < st.q; ++j) {
        const double a_j = alpha.row_sum(j);
        s += log_gamma(a_j) - log_gamma(a_j + static_cast<double>(st.row_total(j)));
        for (int k = 0; k < st.r; ++k) {
            s += log_gamma(alpha(j, k) + static_cast<double>(st.n(j, k))) - log_gamma(alpha(j, k));
        }
    }
    return s;
}

// Family share of BIC: maximized log likelihood (0 log 0 = 0) minus
// (1/2) q (r - 1) log n. The penalty uses the total sample size n.
inline double log_bic_family(const FamilyStats& st, long long n) {
    if (n < 1) throw DataError("log_bic_family: sample size must be >= 1");
    double ll = 0.0;
    for (int j = 0; j < st.q; ++j) {
        const auto nj = static_cast<double>(st.row_total(j));
        for (int k = 0; k < st.r; ++k) {
            const auto njk = static_cast<double>(st.n(j, k));
            if (njk > 0.0) ll += njk * std::log(njk / nj);
        }
    }
    return ll - 0.5 * static_cast<double>(st.q) * (st.r - 1) * std::log(static_cast<double>(n));
}

// Family share of NIP-BIC: EAP posterior term with BDeu hyperparameters
// alpha/(r q), minus (1/2) q (r - 1) log(alpha + n).
inline double log_nip_bic_family(const FamilyStats& st, double alpha, long long n) {
    if (!(alpha > 0.0)) throw DataError("log_nip_bic_family: alpha must be positive");
    const double a_jk = alpha / (static_cast<double>(st.r) * static_cast<double>(st.q));
    const double a_j = alpha / static_cast<double>(st.q);
    double post = 0.0;
    for (int j = 0; j < st.q; ++j) {
        const double denom = a_j + static_cast<double>(st.row_total(j));
        for (int k = 0; k < st.r; ++k) {
            const double c = a_jk + static_cast<double>(st.n(j, k));
            post += c * std::log(c / denom);
        }
    }
    return post - 0.5 * static_cast<double>(st.q) * (st.r - 1) *
                      std::log(alpha + static_cast<double>(n));
}

inline double log_bic(std::span<const FamilyStats> stats, long long n) {
    double s = 0.0;
    for (const auto& st : stats) s += log_bic_family(st, n);
    return s;
}

inline double log_nip_bic(std::span<const FamilyStats> stats, double alpha, long long n) {
    double s = 0.0;
    for (const auto& st : stats) s += log_nip_bic_family(st, alpha, n);
    return s;
}

// One family under a ScoreSpec. This is the quantity cached by the search.
inline double score_family(const Dataset& data, int child, std::span<const int> parents,
                           const ScoreSpec& spec) {
    const FamilyStats st = count_family(data, child, parents);
    switch (spec.kind) {
        case ScoreKind::Ml:
            return log_ml_family(st, ml_hyperparams(spec.ml_pseudocount, st.r, st.q));
        case ScoreKind::Bdeu:
            return log_ml_family(st, bdeu_hyperparams(spec.alpha, st.r, st.q));
        case ScoreKind::Bde:
            return log_ml_family(st, bde_hyperparams(*spec.hypothetical, spec.alpha, child, parents));
        case ScoreKind::Bic:
            return log_bic_family(st, data.num_rows());
        case ScoreKind::NipBic:
            return log_nip_bic_family(st, spec.alpha, data.num_rows());
    }
    throw DataError("score_family: unknown score kind");
}

struct FamilyScore {
    int child = 0;
    std::vector<int> parents;
    double log_score = 0.0;
};

struct StructureScore {
    double total = 0.0;
    std::vector<FamilyScore> families;
};

// Decomposable structure score: the sum of per-family scores over the DAG.
inline StructureScore score_structure(const Dataset& data, const Dag& dag, const ScoreSpec& spec) {
    spec.validate();
    if (dag.num_vars() != data.num_vars()) throw DataError("score_structure: dag/data size mismatch");
    if (!is_acyclic(dag)) throw DataError("score_structure: structure has a cycle");
    if (spec.hypothetical && spec.hypothetical->cards() != data.cards()) {
        throw DataError("score_structure: hypothetical network cardinalities do not match data");
    }
    StructureScore out;
    for (int i = 0; i < dag.num_vars(); ++i) {
        FamilyScore f;
        f.child = i;
        f.parents = dag.parents(i);
        f.log_score = score_family(data, i, f.parents, spec);
        out.total += f.log_score;
        out.families.push_back(std::move(f));
    }
    return out;
}

// Empirical-Bayes ESS selection: the grid member maximizing the BDeu score
// of the given structure, ties broken toward the smallest alpha.
inline double select_alpha_empirical_bayes(const Dataset& data, const Dag& dag,
                                           std::span<const double> alpha_grid) {
    if (alpha_grid.empty()) throw DataError("select_alpha_empirical_bayes: empty grid");
    double best_alpha = 0.0;
    double best_score = 0.0;
    bool have = false;
    for (double a : alpha_grid) {
        ScoreSpec spec;
        spec.kind = ScoreKind::Bdeu;
        spec.alpha = a;
        const double s = score_structure(data, dag, spec).total;
        if (!have || s > best_score || (s == best_score && a < best_alpha)) {
            best_alpha = a;
            best_score = s;
            have = true;
        }
    }
    return best_alpha;
}

}  // namespace bnsl

#endif  // BNSL_SCORING_HPP
