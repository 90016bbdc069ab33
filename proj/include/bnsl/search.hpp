// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef BNSL_SEARCH_HPP
#define BNSL_SEARCH_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

#include "bnsl/common.hpp"
#include "bnsl/scoring.hpp"
#include "bnsl/stats.hpp"
#include "bnsl/types.hpp"

namespace bnsl {

// Precomputed log-scores of every family (child, parent set) for one
// (dataset, spec) pair: N * 2^(N-1) entries, keyed by child and the parent
// set's bitmask over the remaining variables.
class FamilyCache {
public:
    static constexpr int kMaxVars = 8;

    FamilyCache() = default;

    int num_vars() const { return n_; }

    // parent_mask uses one bit per variable (bit v = variable v is a parent).
    double family_score(int child, std::uint32_t parent_mask) const {
        return scores_[static_cast<std::size_t>(child)][compress(parent_mask, child)];
    }

    friend FamilyCache build_family_cache(const Dataset& data, const ScoreSpec& spec);

private:
    static std::uint32_t compress(std::uint32_t parent_mask, int child) {
        const std::uint32_t low = (std::uint32_t{1} << child) - 1;
        return (parent_mask & low) | ((parent_mask >> 1) & ~low);
    }

    int n_ = 0;
    std::vector<std::vector<double>> scores_;
};

inline FamilyCache build_family_cache(const Dataset& data, const ScoreSpec& spec) {
    spec.validate();
    const int n = data.num_vars();
    if (n > FamilyCache::kMaxVars) throw CapacityError("build_family_cache: at most 8 variables");
    if (spec.hypothetical && spec.hypothetical->cards() != data.cards()) {
        throw DataError("build_family_cache: hypothetical network cardinalities do not match data");
    }

    FamilyCache cache;
    cache.n_ = n;
    cache.scores_.assign(static_cast<std::size_t>(n),
                         std::vector<double>(std::size_t{1} << (n - 1 > 0 ? n - 1 : 0)));
    std::vector<int> parents;
    for (int child = 0; child < n; ++child) {
        const std::uint32_t subsets = std::uint32_t{1} << (n - 1);
        for (std::uint32_t m = 0; m < subsets; ++m) {
            parents.clear();
            for (int b = 0, v = 0; v < n; ++v) {
                if (v == child) continue;
                if (m >> b & 1) parents.push_back(v);
                ++b;
            }
            cache.scores_[static_cast<std::size_t>(child)][m] =
                score_family(data, child, parents, spec);
        }
    }
    return cache;
}

namespace detail {

// Decode an adjacency mask into per-child parent bitmasks. Bit p of the mask
// is the row-major ordered pair with index p (see Dag::pair_index).
struct PairTable {
    int n = 0;
    std::array<std::uint8_t, 64> from{};
    std::array<std::uint8_t, 64> to{};

    explicit PairTable(int n_) : n(n_) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) {
                    const int p = Dag::pair_index(i, j, n);
                    from[static_cast<std::size_t>(p)] = static_cast<std::uint8_t>(i);
                    to[static_cast<std::size_t>(p)] = static_cast<std::uint8_t>(j);
                }
    }

    void parent_masks(std::uint64_t mask, std::array<std::uint32_t, 8>& pm) const {
        pm.fill(0);
        while (mask) {
            const int p = std::countr_zero(mask);
            pm[to[static_cast<std::size_t>(p)]] |= std::uint32_t{1} << from[static_cast<std::size_t>(p)];
            mask &= mask - 1;
        }
    }
};

inline bool parent_masks_acyclic(const std::array<std::uint32_t, 8>& pm, int n) {
    const std::uint32_t all = (std::uint32_t{1} << n) - 1;
    std::uint32_t removed = 0;
    bool progress = true;
    while (progress && removed != all) {
        progress = false;
        for (int v = 0; v < n; ++v) {
            const std::uint32_t bit = std::uint32_t{1} << v;
            if (!(removed & bit) && (pm[static_cast<std::size_t>(v)] & ~removed) == 0) {
                removed |= bit;
                progress = true;
            }
        }
    }
    return removed == all;
}

inline void check_enumeration_size(int n, const char* who) {
    if (n < 0) throw DataError(std::string(who) + ": negative variable count");
    if (n > 6) throw CapacityError(std::string(who) + ": exhaustive enumeration capped at 6 variables");
}

}  // namespace detail

// Yields every labeled DAG on n nodes exactly once, in ascending
// adjacency-mask order: all 2^(n(n-1)) directed adjacency masks filtered by
// acyclicity. Capped at n <= 6.
class DagEnumerator {
public:
    explicit DagEnumerator(int n)
        : n_(n), pairs_(n), limit_(n >= 0 ? std::uint64_t{1} << (n * (n - 1)) : 0) {
        detail::check_enumeration_size(n, "DagEnumerator");
    }

    std::optional<Dag> next() {
        std::array<std::uint32_t, 8> pm{};
        while (mask_ < limit_) {
            const std::uint64_t m = mask_++;
            pairs_.parent_masks(m, pm);
            if (detail::parent_masks_acyclic(pm, n_)) return Dag::from_adjacency_mask(n_, m);
        }
        return std::nullopt;
    }

private:
    int n_;
    detail::PairTable pairs_;
    std::uint64_t limit_;
    std::uint64_t mask_ = 0;
};

inline std::vector<Dag> enumerate_dags(int n) {
    DagEnumerator it(n);
    std::vector<Dag> out;
    while (auto g = it.next()) out.push_back(std::move(*g));
    return out;
}

// Exact search result. ties lists every DAG scoring within 1e-9 relative of
// the optimum (the optimum itself included); best is the tie with the
// smallest adjacency mask, which makes results reproducible when
// likelihood-equivalent structures tie.
struct SearchResult {
    Dag best;
    double best_score = 0.0;
    std::vector<Dag> ties;
    long long examined = 0;
};

namespace detail {

inline double tie_tolerance(double best) { return 1e-9 * std::max(1.0, std::abs(best)); }

struct WorkerResult {
    double best = 0.0;
    std::uint64_t best_mask = 0;
    bool have = false;
    long long examined = 0;
    std::vector<std::pair<std::uint64_t, double>> candidates;  // within tolerance of running best
};

// Scores every acyclic mask in [lo, hi). The per-mask score is the sum of
// cached family scores in child order, so it is bitwise identical no matter
// how the range is partitioned.
inline WorkerResult scan_masks(const FamilyCache& cache, const PairTable& pairs, int n,
                               std::uint64_t lo, std::uint64_t hi, bool keep_candidates) {
    WorkerResult wr;
    std::array<std::uint32_t, 8> pm{};
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
        pairs.parent_masks(mask, pm);
        if (!parent_masks_acyclic(pm, n)) continue;
        ++wr.examined;
        double s = 0.0;
        for (int v = 0; v < n; ++v) s += cache.family_score(v, pm[static_cast<std::size_t>(v)]);
        if (!wr.have || s > wr.best) {
            wr.best = s;
            wr.best_mask = mask;
            wr.have = true;
        }
        if (keep_candidates && s >= wr.best - tie_tolerance(wr.best)) wr.candidates.emplace_back(mask, s);
    }
    return wr;
}

inline std::vector<WorkerResult> scan_all(const FamilyCache& cache, int n, int jobs,
                                          bool keep_candidates) {
    detail::check_enumeration_size(n, "search");
    const PairTable pairs(n);
    const std::uint64_t limit = std::uint64_t{1} << (n * (n - 1));
    jobs = std::max(1, jobs);
    const auto workers = static_cast<std::uint64_t>(std::min<long long>(jobs, 64));

    std::vector<WorkerResult> results(workers);
    if (workers == 1) {
        results[0] = scan_masks(cache, pairs, n, 0, limit, keep_candidates);
        return results;
    }
    std::vector<std::thread> threads;
    for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t lo = limit / workers * w;
        const std::uint64_t hi = w + 1 == workers ? limit : limit / workers * (w + 1);
        threads.emplace_back([&, w, lo, hi] {
            results[w] = scan_masks(cache, pairs, n, lo, hi, keep_candidates);
        });
    }
    for (auto& t : threads) t.join();
    return results;
}

}  // namespace detail

// Exact maximization of the spec's score over every DAG, via the family
// cache. The worker count only partitions the mask range; results are
// independent of it.
inline SearchResult exhaustive_search(const Dataset& data, const ScoreSpec& spec, int jobs = 1) {
    const FamilyCache cache = build_family_cache(data, spec);
    const int n = data.num_vars();
    const auto results = detail::scan_all(cache, n, jobs, /*keep_candidates=*/true);

    SearchResult out;
    bool have = false;
    for (const auto& wr : results) {
        out.examined += wr.examined;
        if (wr.have && (!have || wr.best > out.best_score ||
                        (wr.best == out.best_score && wr.best_mask < out.best.adjacency_mask()))) {
            out.best_score = wr.best;
            out.best = Dag::from_adjacency_mask(n, wr.best_mask);
            have = true;
        }
    }
    if (!have) throw DataError("exhaustive_search: no structure examined");

    const double tol = detail::tie_tolerance(out.best_score);
    std::vector<std::uint64_t> tie_masks;
    for (const auto& wr : results)
        for (const auto& [mask, s] : wr.candidates)
            if (s >= out.best_score - tol) tie_masks.push_back(mask);
    std::sort(tie_masks.begin(), tie_masks.end());
    for (std::uint64_t m : tie_masks) out.ties.push_back(Dag::from_adjacency_mask(n, m));
    return out;
}

// Globally correct top-k structures, ordered by score descending then
// adjacency mask ascending.
inline std::vector<std::pair<Dag, double>> top_k(const Dataset& data, const ScoreSpec& spec, int k,
                                                 int jobs = 1) {
    if (k < 1) throw DataError("top_k: k must be >= 1");
    const FamilyCache cache = build_family_cache(data, spec);
    const int n = data.num_vars();
    detail::check_enumeration_size(n, "top_k");
    const detail::PairTable pairs(n);
    const std::uint64_t limit = std::uint64_t{1} << (n * (n - 1));

    std::vector<std::pair<double, std::uint64_t>> all;  // (-score used via comparator)
    std::array<std::uint32_t, 8> pm{};
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
        pairs.parent_masks(mask, pm);
        if (!detail::parent_masks_acyclic(pm, n)) continue;
        double s = 0.0;
        for (int v = 0; v < n; ++v) s += cache.family_score(v, pm[static_cast<std::size_t>(v)]);
        all.emplace_back(s, mask);
    }
    (void)jobs;  // single scan; the worker hint never changes output
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (static_cast<std::size_t>(k) < all.size()) all.resize(static_cast<std::size_t>(k));

    std::vector<std::pair<Dag, double>> out;
    out.reserve(all.size());
    for (const auto& [s, mask] : all) out.emplace_back(Dag::from_adjacency_mask(n, mask), s);
    return out;
}

}  // namespace bnsl

#endif  // BNSL_SEARCH_HPP
