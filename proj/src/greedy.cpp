#include "benchprio/greedy.hpp"

#include <algorithm>
#include <map>

#include "benchprio/rng.hpp"

namespace benchprio {

namespace {

std::vector<std::vector<std::size_t>> interned_sets(const CoverageMatrix& cov,
                                                    const std::vector<BenchmarkId>& ids,
                                                    std::size_t& universe_size) {
    std::map<MethodRef, std::size_t> index;
    for (const auto& m : cov.universe()) index.emplace(m, index.size());
    universe_size = index.size();

    std::vector<std::vector<std::size_t>> sets(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto* covered = cov.find(ids[i]);
        if (covered == nullptr) continue;
        for (const auto& m : *covered) sets[i].push_back(index.at(m));
    }
    return sets;
}

}  // namespace

Ranking prioritize_total(const CoverageMatrix& cov) {
    auto ids = canonical_index(cov);
    std::vector<std::size_t> order(ids.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<std::size_t> sizes(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto* covered = cov.find(ids[i]);
        sizes[i] = covered ? covered->size() : 0;
    }
    // stable sort keeps canonical order among equal sizes
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sizes[a] > sizes[b]; });

    Ranking ranking;
    ranking.provenance = {"total", 0, ""};
    ranking.order.reserve(ids.size());
    for (std::size_t i : order) ranking.order.push_back(ids[i]);
    return ranking;
}

Ranking prioritize_additional(const CoverageMatrix& cov) {
    const auto ids = canonical_index(cov);
    const std::size_t n = ids.size();
    std::size_t universe_size = 0;
    const auto sets = interned_sets(cov, ids, universe_size);

    std::vector<bool> covered(universe_size, false);
    std::vector<bool> placed(n, false);

    Ranking ranking;
    ranking.provenance = {"additional", 0, ""};
    ranking.order.reserve(n);

    while (ranking.order.size() < n) {
        std::size_t best = n;
        std::size_t best_gain = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (placed[i]) continue;
            std::size_t gain = 0;
            for (std::size_t m : sets[i])
                if (!covered[m]) ++gain;
            // tie chain: gain, then total size, then canonical index
            if (best == n || gain > best_gain ||
                (gain == best_gain && sets[i].size() > sets[best].size())) {
                best = i;
                best_gain = gain;
            }
        }
        if (best_gain == 0) {
            // exhausted: reset and rescore, unless every remaining set is
            // empty in which case the tie chain already ordered them
            bool anything_left = false;
            for (std::size_t i = 0; i < n; ++i)
                if (!placed[i] && !sets[i].empty()) anything_left = true;
            if (anything_left && std::any_of(covered.begin(), covered.end(),
                                             [](bool c) { return c; })) {
                std::fill(covered.begin(), covered.end(), false);
                continue;
            }
        }
        placed[best] = true;
        for (std::size_t m : sets[best]) covered[m] = true;
        ranking.order.push_back(ids[best]);
    }
    return ranking;
}

Ranking prioritize_random(const CoverageMatrix& cov, std::uint64_t seed) {
    auto ids = canonical_index(cov);
    Rng rng(seed);
    rng.shuffle(ids);
    Ranking ranking;
    ranking.order = std::move(ids);
    ranking.provenance = {"random", seed, ""};
    return ranking;
}

}  // namespace benchprio
