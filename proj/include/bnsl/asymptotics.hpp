// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef BNSL_ASYMPTOTICS_HPP
#define BNSL_ASYMPTOTICS_HPP

#include <cmath>
#include <numbers>
#include <ostream>
#include <span>
#include <vector>

#include "bnsl/common.hpp"
#include "bnsl/sampler.hpp"
#include "bnsl/scoring.hpp"
#include "bnsl/stats.hpp"
#include "bnsl/types.hpp"

namespace bnsl {

// Which side of the hyperparameter-magnitude split the whole structure sits
// on: alpha_jk >= 1 for every family (alpha >= r_i q_i for all i), < 1 for
// every family, or mixed.
enum class HyperRegime { Small, Large, Mixed };

inline const char* to_string(HyperRegime r) {
    switch (r) {
        case HyperRegime::Small: return "small";
        case HyperRegime::Large: return "large";
        case HyperRegime::Mixed: return "mixed";
    }
    throw DataError("unknown regime");
}

namespace detail {

inline void check_cards(const Dag& g, std::span<const int> cards, const char* who) {
    if (static_cast<int>(cards.size()) != g.num_vars()) {
        throw DataError(std::string(who) + ": cards size does not match dag");
    }
}

}  // namespace detail

// Data-independent prior term of log-BDeu:
// sum_{i,j} [log Gamma(alpha_ij) - sum_k log Gamma(alpha_ijk)].
inline double prior_term_exact(const Dag& g, std::span<const int> cards, double alpha) {
    detail::check_cards(g, cards, "prior_term_exact");
    if (!(alpha > 0.0)) throw DataError("prior_term_exact: alpha must be positive");
    double s = 0.0;
    for (int i = 0; i < g.num_vars(); ++i) {
        const double q = static_cast<double>(family_config_count(g, cards, i));
        const double r = cards[static_cast<std::size_t>(i)];
        s += q * (log_gamma(alpha / q) - r * log_gamma(alpha / (r * q)));
    }
    return s;
}

// Small-hyperparameter closed form of the prior term:
// sum_i q_i (r_i - 1) log(alpha / (r_i q_i)). Intended for alpha < r_i q_i.
inline double prior_term_approx_small(const Dag& g, std::span<const int> cards, double alpha) {
    detail::check_cards(g, cards, "prior_term_approx_small");
    if (!(alpha > 0.0)) throw DataError("prior_term_approx_small: alpha must be positive");
    double s = 0.0;
    for (int i = 0; i < g.num_vars(); ++i) {
        const double q = static_cast<double>(family_config_count(g, cards, i));
        const double r = cards[static_cast<std::size_t>(i)];
        s += q * (r - 1.0) * std::log(alpha / (r * q));
    }
    return s;
}

// Large-hyperparameter closed form of the prior term:
// sum_i alpha log r_i + (1/2) sum_i q_i (r_i - 1) log(alpha / (2 pi r_i q_i)).
inline double prior_term_approx_large(const Dag& g, std::span<const int> cards, double alpha) {
    detail::check_cards(g, cards, "prior_term_approx_large");
    if (!(alpha > 0.0)) throw DataError("prior_term_approx_large: alpha must be positive");
    double s = 0.0;
    for (int i = 0; i < g.num_vars(); ++i) {
        const double q = static_cast<double>(family_config_count(g, cards, i));
        const double r = cards[static_cast<std::size_t>(i)];
        s += alpha * std::log(r) +
             0.5 * q * (r - 1.0) * std::log(alpha / (2.0 * std::numbers::pi * r * q));
    }
    return s;
}

// Data-dependent likelihood term of log-BDeu:
// sum_{i,j} [sum_k log Gamma(alpha_ijk + n_ijk) - log Gamma(alpha_ij + n_ij)].
// Identically equals log-BDeu minus the prior term.
inline double likelihood_term_exact(std::span<const FamilyStats> stats, double alpha) {
    if (!(alpha > 0.0)) throw DataError("likelihood_term_exact: alpha must be positive");
    double s = 0.0;
    for (const auto& st : stats) {
        const double a_jk = alpha / (static_cast<double>(st.r) * static_cast<double>(st.q));
        const double a_j = alpha / static_cast<double>(st.q);
        for (int j = 0; j < st.q; ++j) {
            for (int k = 0; k < st.r; ++k) {
                s += log_gamma(a_jk + static_cast<double>(st.n(j, k)));
            }
            s -= log_gamma(a_j + static_cast<double>(st.row_total(j)));
        }
    }
    return s;
}

// EAP log-posterior over all families with hyperparameter tables given
// explicitly; the shared building block of every approximation below.
inline double eap_log_posterior(std::span<const FamilyStats> stats, std::span<const Table> alphas) {
    if (stats.size() != alphas.size()) throw DataError("eap_log_posterior: stats/alphas mismatch");
    double s = 0.0;
    for (std::size_t f = 0; f < stats.size(); ++f) {
        const auto& st = stats[f];
        const auto& a = alphas[f];
        detail::check_hyper(st, a, "eap_log_posterior");
        for (int j = 0; j < st.q; ++j) {
            const double denom = a.row_sum(j) + static_cast<double>(st.row_total(j));
            for (int k = 0; k < st.r; ++k) {
                const double c = a(j, k) + static_cast<double>(st.n(j, k));
                s += c * std::log(c / denom);
            }
        }
    }
    return s;
}

namespace detail {

inline std::vector<Table> bdeu_tables(std::span<const FamilyStats> stats, double alpha) {
    std::vector<Table> out;
    out.reserve(stats.size());
    for (const auto& st : stats) out.push_back(bdeu_hyperparams(alpha, st.r, st.q));
    return out;
}

}  // namespace detail

// Stirling-range approximation of the likelihood term: the EAP posterior
// minus the penalty (1/2) sum_{i,j} (r_i-1)/r_i sum_k log((alpha_ijk + n_ijk) / 2 pi).
// Both terms are reported separately; the approximation is their difference.
struct LikelihoodApprox {
    double posterior = 0.0;
    double penalty = 0.0;
    double value() const { return posterior - penalty; }
};

inline LikelihoodApprox likelihood_term_approx(std::span<const FamilyStats> stats, double alpha) {
    if (!(alpha > 0.0)) throw DataError("likelihood_term_approx: alpha must be positive");
    const auto tables = detail::bdeu_tables(stats, alpha);
    LikelihoodApprox out;
    out.posterior = eap_log_posterior(stats, tables);
    for (const auto& st : stats) {
        const double a_jk = alpha / (static_cast<double>(st.r) * static_cast<double>(st.q));
        const double w = (st.r - 1.0) / st.r;
        for (int j = 0; j < st.q; ++j)
            for (int k = 0; k < st.r; ++k) {
                out.penalty += 0.5 * w *
                               std::log((a_jk + static_cast<double>(st.n(j, k))) /
                                        (2.0 * std::numbers::pi));
            }
    }
    return out;
}

// Large-sample approximation of log-BDe for general hyperparameter tables:
// EAP posterior minus (1/2) sum (r_i-1)/r_i log(1 + n_ijk / alpha_ijk). The
// additive constant of the underlying expansion is reported as zero.
inline double ueno2010_approx(std::span<const FamilyStats> stats, std::span<const Table> alphas) {
    double s = eap_log_posterior(stats, alphas);
    for (std::size_t f = 0; f < stats.size(); ++f) {
        const auto& st = stats[f];
        const auto& a = alphas[f];
        const double w = (st.r - 1.0) / st.r;
        for (int j = 0; j < st.q; ++j)
            for (int k = 0; k < st.r; ++k) {
                s -= 0.5 * w * std::log1p(static_cast<double>(st.n(j, k)) / a(j, k));
            }
    }
    return s;
}

inline double ueno2010_approx(std::span<const FamilyStats> stats, double alpha) {
    const auto tables = detail::bdeu_tables(stats, alpha);
    return ueno2010_approx(stats, tables);
}

// The two large-sample closed forms of log-BDeu, evaluated jointly with the
// regime their preconditions ask for. A zero-count cell would make the
// second form's log(n_ijk / .) blow up; such cells contribute with n_ijk
// replaced by alpha_ijk (restoring the numerator term the large-n derivation
// drops) and are flagged.
struct BdeuApprox {
    double eq8 = 0.0;
    double eq9 = 0.0;
    HyperRegime regime = HyperRegime::Mixed;
    bool zero_cells = false;
};

inline BdeuApprox bdeu_approx(std::span<const FamilyStats> stats, const Dag& g,
                              std::span<const int> cards, double alpha) {
    detail::check_cards(g, cards, "bdeu_approx");
    if (!(alpha > 0.0)) throw DataError("bdeu_approx: alpha must be positive");

    BdeuApprox out;
    bool all_large = true, all_small = true;
    double sum_log_r = 0.0;
    for (int i = 0; i < g.num_vars(); ++i) {
        const double rq = static_cast<double>(family_config_count(g, cards, i)) *
                          cards[static_cast<std::size_t>(i)];
        (alpha >= rq ? all_small : all_large) = false;
        sum_log_r += std::log(static_cast<double>(cards[static_cast<std::size_t>(i)]));
    }
    out.regime = all_large ? HyperRegime::Large : all_small ? HyperRegime::Small : HyperRegime::Mixed;

    const auto tables = detail::bdeu_tables(stats, alpha);
    const double posterior = eap_log_posterior(stats, tables);

    double pen8 = 0.0, pen9 = 0.0;
    for (const auto& st : stats) {
        const double a_jk = alpha / (static_cast<double>(st.r) * static_cast<double>(st.q));
        const double w = (st.r - 1.0) / st.r;
        for (int j = 0; j < st.q; ++j)
            for (int k = 0; k < st.r; ++k) {
                const auto njk = static_cast<double>(st.n(j, k));
                pen8 += 0.5 * w * std::log1p(njk / a_jk);
                double numer = njk;
                if (njk == 0.0) {
                    numer = a_jk;
                    out.zero_cells = true;
                }
                pen9 += 0.5 * w * std::log(numer / (2.0 * std::numbers::pi * a_jk * a_jk));
            }
    }
    out.eq8 = alpha * sum_log_r + posterior - pen8;
    out.eq9 = posterior - pen9;
    return out;
}

// Small-(alpha + n) limit of the likelihood term: exactly the negation of
// the small-hyperparameter prior form.
inline double corollary1_smalln(const Dag& g, std::span<const int> cards, double alpha) {
    detail::check_cards(g, cards, "corollary1_smalln");
    if (!(alpha > 0.0)) throw DataError("corollary1_smalln: alpha must be positive");
    double s = 0.0;
    for (int i = 0; i < g.num_vars(); ++i) {
        const double q = static_cast<double>(family_config_count(g, cards, i));
        const double r = cards[static_cast<std::size_t>(i)];
        s -= q * (r - 1.0) * std::log(alpha / (r * q));
    }
    return s;
}

// One (alpha, n) cell of a sweep: the exact decomposition next to every
// approximation, so their gaps can be read off a single row.
struct DecompositionReport {
    double alpha = 0.0;
    long long n = 0;
    double prior_exact = 0.0;
    double prior_approx_small = 0.0;
    double prior_approx_large = 0.0;
    double likelihood_exact = 0.0;
    double posterior_term = 0.0;
    double penalty_term = 0.0;
    double likelihood_approx = 0.0;
    double bdeu_exact = 0.0;
    double bdeu_approx_eq8 = 0.0;
    double bdeu_approx_eq9 = 0.0;
    double ueno2010_approx = 0.0;
    HyperRegime regime = HyperRegime::Mixed;
    bool zero_cells = false;
};

inline DecompositionReport decompose(const Dag& g, std::span<const int> cards,
                                     std::span<const FamilyStats> stats, double alpha,
                                     long long n) {
    DecompositionReport rep;
    rep.alpha = alpha;
    rep.n = n;
    rep.prior_exact = prior_term_exact(g, cards, alpha);
    rep.prior_approx_small = prior_term_approx_small(g, cards, alpha);
    rep.prior_approx_large = prior_term_approx_large(g, cards, alpha);
    rep.likelihood_exact = likelihood_term_exact(stats, alpha);
    const LikelihoodApprox la = likelihood_term_approx(stats, alpha);
    rep.posterior_term = la.posterior;
    rep.penalty_term = la.penalty;
    rep.likelihood_approx = la.value();
    // Exact score via the scoring route, independent of the split above.
    double bdeu = 0.0;
    for (const auto& st : stats) bdeu += log_ml_family(st, bdeu_hyperparams(alpha, st.r, st.q));
    rep.bdeu_exact = bdeu;
    const BdeuApprox ba = bdeu_approx(stats, g, cards, alpha);
    rep.bdeu_approx_eq8 = ba.eq8;
    rep.bdeu_approx_eq9 = ba.eq9;
    rep.regime = ba.regime;
    rep.zero_cells = ba.zero_cells;
    rep.ueno2010_approx = bnsl::ueno2010_approx(stats, alpha);
    return rep;
}

// Sweep over an alpha grid on one fixed dataset.
inline std::vector<DecompositionReport> sweep(const Dag& g, std::span<const int> cards,
                                              const Dataset& data, std::span<const double> alphas) {
    if (alphas.empty()) throw DataError("sweep: empty alpha grid");
    const auto stats = all_family_stats(data, g);
    std::vector<DecompositionReport> out;
    for (double a : alphas) out.push_back(decompose(g, cards, stats, a, data.num_rows()));
    return out;
}

// Sweep over an (alpha, n) grid, sampling each n cell from a generator
// network. Cell seeds are derived from the base seed by sample-size index,
// so the grid is deterministic and cells are independent.
inline std::vector<DecompositionReport> sweep(const Network& generator,
                                              std::span<const double> alphas,
                                              std::span<const long long> sample_sizes,
                                              std::uint64_t seed) {
    if (alphas.empty() || sample_sizes.empty()) throw DataError("sweep: empty grid");
    const auto cards = generator.cards();
    std::vector<DecompositionReport> out;
    for (std::size_t ni = 0; ni < sample_sizes.size(); ++ni) {
        const Dataset data = sample(generator, sample_sizes[ni], derive_seed(seed, ni));
        const auto stats = all_family_stats(data, generator.dag);
        for (double a : alphas) {
            out.push_back(decompose(generator.dag, cards, stats, a, sample_sizes[ni]));
        }
    }
    return out;
}

// Sweep CSV, one row per report, floats at 12 significant digits.
inline void write_sweep_csv(std::ostream& os, std::span<const DecompositionReport> reports) {
    os << "alpha,n,prior_exact,prior_small,prior_large,lik_exact,posterior,penalty,"
          "lik_approx,bdeu_exact,eq8,eq9,ueno2010,regime\n";
    for (const auto& r : reports) {
        os << format_g12(r.alpha) << ',' << r.n << ',' << format_g12(r.prior_exact) << ','
           << format_g12(r.prior_approx_small) << ',' << format_g12(r.prior_approx_large) << ','
           << format_g12(r.likelihood_exact) << ',' << format_g12(r.posterior_term) << ','
           << format_g12(r.penalty_term) << ',' << format_g12(r.likelihood_approx) << ','
           << format_g12(r.bdeu_exact) << ',' << format_g12(r.bdeu_approx_eq8) << ','
           << format_g12(r.bdeu_approx_eq9) << ',' << format_g12(r.ueno2010_approx) << ','
           << to_string(r.regime) << '\n';
    }
}

}  // namespace bnsl

#endif  // BNSL_ASYMPTOTICS_HPP
