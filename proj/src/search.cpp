#include "benchprio/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "benchprio/ingest.hpp"

namespace benchprio {

namespace {

constexpr std::size_t kMaxGenerations = 100;

int cmp_canonical(const ObjectiveVector& a, const ObjectiveVector& b) {
    for (std::size_t i = 0; i < 3; ++i) {
        if (a.canonical()[i] < b.canonical()[i]) return -1;
        if (a.canonical()[i] > b.canonical()[i]) return 1;
    }
    return 0;
}

int cmp_genes(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

// Full deterministic order used for every tie-break.
int cmp_individual(const Individual& a, const Individual& b) {
    const int c = cmp_canonical(a.objectives, b.objectives);
    if (c != 0) return c;
    return cmp_genes(a.genes, b.genes);
}

}  // namespace

Algorithm parse_algorithm(const std::string& s) {
    if (s == "ibea") return Algorithm::ibea;
    if (s == "nsga2") return Algorithm::nsga2;
    if (s == "spea2") return Algorithm::spea2;
    throw ParseError("unknown algorithm '" + s + "'");
}

const char* algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::ibea: return "ibea";
        case Algorithm::nsga2: return "nsga2";
        case Algorithm::spea2: return "spea2";
    }
    return "?";
}

void SearchConfig::validate() const {
    if (population < 2 || population % 2 != 0)
        throw std::invalid_argument("population must be >= 2 and even");
    if (archive < 1) throw std::invalid_argument("archive must be >= 1");
    if (max_evaluations < population)
        throw std::invalid_argument("max_evaluations must be >= population");
    if (crossover_prob < 0.0 || crossover_prob > 1.0)
        throw std::invalid_argument("crossover_prob must be in [0,1]");
    if (mutation_prob && (*mutation_prob < 0.0 || *mutation_prob > 1.0))
        throw std::invalid_argument("mutation_prob must be in [0,1]");
    if (ibea_kappa <= 0.0) throw std::invalid_argument("ibea_kappa must be > 0");
}

std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> pmx_crossover(
        std::span<const std::int32_t> p1, std::span<const std::int32_t> p2, Rng& rng) {
    const std::size_t n = p1.size();
    if (n != p2.size() || n < 2) throw std::invalid_argument("pmx needs equal length >= 2");

    std::size_t lo = static_cast<std::size_t>(rng.bounded(n));
    std::size_t hi = static_cast<std::size_t>(rng.bounded(n));
    if (lo > hi) std::swap(lo, hi);

    const auto make_child = [&](std::span<const std::int32_t> keep,
                                std::span<const std::int32_t> fill) {
        std::vector<std::int32_t> child(n);
        // displaced-value mapping over the kept segment, flat-indexed by gene
        std::vector<std::int32_t> mapping(n, -1);
        for (std::size_t i = lo; i <= hi; ++i) {
            child[i] = keep[i];
            mapping[static_cast<std::size_t>(keep[i])] = fill[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i >= lo && i <= hi) continue;
            std::int32_t v = fill[i];
            while (mapping[static_cast<std::size_t>(v)] >= 0)
                v = mapping[static_cast<std::size_t>(v)];
            child[i] = v;
        }
        return child;
    };

    return {make_child(p1, p2), make_child(p2, p1)};
}

std::vector<std::int32_t> swap_mutation(std::span<const std::int32_t> p, double prob,
                                        Rng& rng) {
    std::vector<std::int32_t> out(p.begin(), p.end());
    if (out.size() < 2) throw std::invalid_argument("swap mutation needs length >= 2");
    if (!rng.bernoulli(prob)) return out;
    const std::size_t i = static_cast<std::size_t>(rng.bounded(out.size()));
    std::size_t j = static_cast<std::size_t>(rng.bounded(out.size() - 1));
    if (j >= i) ++j;
    std::swap(out[i], out[j]);
    return out;
}

std::vector<std::size_t> non_dominated_indices(std::span<const ObjectiveVector> objectives) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < objectives.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < objectives.size() && !dominated; ++j)
            if (j != i && dominates(objectives[j], objectives[i])) dominated = true;
        if (!dominated) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> fast_non_dominated_sort_ranks(
        std::span<const ObjectiveVector> objectives) {
    const std::size_t n = objectives.size();
    std::vector<std::vector<std::size_t>> dominated_by(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::size_t> ranks(n, 0);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(objectives[i], objectives[j]))
                dominated_by[i].push_back(j);
            else if (dominates(objectives[j], objectives[i]))
                ++domination_count[i];
        }
    }

    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i)
        if (domination_count[i] == 0) current.push_back(i);

    std::size_t rank = 0;
    while (!current.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t i : current) {
            ranks[i] = rank;
            for (std::size_t j : dominated_by[i])
                if (--domination_count[j] == 0) next.push_back(j);
        }
        current = std::move(next);
        ++rank;
    }
    return ranks;
}

std::vector<std::size_t> spea2_strengths(std::span<const ObjectiveVector> objectives) {
    std::vector<std::size_t> strength(objectives.size(), 0);
    for (std::size_t i = 0; i < objectives.size(); ++i)
        for (std::size_t j = 0; j < objectives.size(); ++j)
            if (i != j && dominates(objectives[i], objectives[j])) ++strength[i];
    return strength;
}

namespace {

// ---------------------------------------------------------------- engine

struct Engine {
    const ObjectiveContext& ctx;
    const SearchConfig& cfg;
    Rng rng;
    std::size_t budget;
    std::size_t evaluations = 0;
    double mutation_prob;

    Engine(const ObjectiveContext& ctx_, const SearchConfig& cfg_)
        : ctx(ctx_),
          cfg(cfg_),
          rng(cfg_.seed),
          budget(std::min(cfg_.max_evaluations, cfg_.population * kMaxGenerations)),
          mutation_prob(cfg_.mutation_prob.value_or(1.0 / static_cast<double>(ctx_.size()))) {}

    Individual make(std::vector<std::int32_t> genes) {
        Individual ind;
        ind.objectives = evaluate_genes(genes, ctx);
        ind.genes = std::move(genes);
        ++evaluations;
        return ind;
    }

    std::vector<Individual> initial_population() {
        std::vector<Individual> pop;
        pop.reserve(cfg.population);
        for (std::size_t i = 0; i < cfg.population; ++i)
            pop.push_back(make(rng.permutation(static_cast<std::int32_t>(ctx.size()))));
        return pop;
    }

    // Binary tournament under `better`, then variation. Produces exactly k.
    template <class Better>
    std::vector<Individual> breed(const std::vector<Individual>& pool, std::size_t k,
                                  Better better) {
        const auto pick = [&]() -> const Individual& {
            const auto& a = pool[rng.bounded(pool.size())];
            const auto& b = pool[rng.bounded(pool.size())];
            return better(a, b) ? a : b;
        };
        std::vector<Individual> offspring;
        offspring.reserve(k);
        while (offspring.size() < k) {
            const Individual& p1 = pick();
            const Individual& p2 = pick();
            std::vector<std::int32_t> c1, c2;
            if (rng.bernoulli(cfg.crossover_prob)) {
                auto [a, b] = pmx_crossover(p1.genes, p2.genes, rng);
                c1 = std::move(a);
                c2 = std::move(b);
            } else {
                c1 = p1.genes;
                c2 = p2.genes;
            }
            offspring.push_back(make(swap_mutation(c1, mutation_prob, rng)));
            if (offspring.size() < k)
                offspring.push_back(make(swap_mutation(c2, mutation_prob, rng)));
        }
        return offspring;
    }
};

std::vector<Individual> extract_front(std::vector<Individual> candidates) {
    std::vector<ObjectiveVector> objs;
    objs.reserve(candidates.size());
    for (const auto& c : candidates) objs.push_back(c.objectives);
    const auto keep = non_dominated_indices(objs);

    std::vector<Individual> front;
    front.reserve(keep.size());
    for (std::size_t i : keep) front.push_back(std::move(candidates[i]));
    std::sort(front.begin(), front.end(),
              [](const Individual& a, const Individual& b) { return cmp_individual(a, b) < 0; });
    front.erase(std::unique(front.begin(), front.end(),
                            [](const Individual& a, const Individual& b) {
                                return a.objectives == b.objectives;
                            }),
                front.end());
    return front;
}

// ---------------------------------------------------------------- NSGA-II

struct NsgaMeta {
    std::vector<std::size_t> rank;
    std::vector<double> crowding;
};

NsgaMeta nsga_metadata(const std::vector<Individual>& pop) {
    NsgaMeta meta;
    std::vector<ObjectiveVector> objs;
    objs.reserve(pop.size());
    for (const auto& p : pop) objs.push_back(p.objectives);
    meta.rank = fast_non_dominated_sort_ranks(objs);

    meta.crowding.assign(pop.size(), 0.0);
    std::size_t n_fronts = 0;
    for (std::size_t r : meta.rank) n_fronts = std::max(n_fronts, r + 1);
    for (std::size_t f = 0; f < n_fronts; ++f) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < pop.size(); ++i)
            if (meta.rank[i] == f) members.push_back(i);
        for (std::size_t axis = 0; axis < 3; ++axis) {
            std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
                const double va = pop[a].objectives.canonical()[axis];
                const double vb = pop[b].objectives.canonical()[axis];
                if (va != vb) return va < vb;
                return a < b;
            });
            const double lo = pop[members.front()].objectives.canonical()[axis];
            const double hi = pop[members.back()].objectives.canonical()[axis];
            meta.crowding[members.front()] = std::numeric_limits<double>::infinity();
            meta.crowding[members.back()] = std::numeric_limits<double>::infinity();
            if (hi - lo <= 0.0) continue;
            for (std::size_t m = 1; m + 1 < members.size(); ++m) {
                const double prev = pop[members[m - 1]].objectives.canonical()[axis];
                const double next = pop[members[m + 1]].objectives.canonical()[axis];
                meta.crowding[members[m]] += (next - prev) / (hi - lo);
            }
        }
    }
    return meta;
}

ParetoFront run_nsga2(Engine& eng) {
    auto pop = eng.initial_population();
    auto meta = nsga_metadata(pop);

    while (eng.evaluations < eng.budget) {
        const std::size_t k = std::min(eng.cfg.population, eng.budget - eng.evaluations);

        // index lookup for the tournament comparator
        std::map<const Individual*, std::size_t> where;
        for (std::size_t i = 0; i < pop.size(); ++i) where[&pop[i]] = i;
        const auto better = [&](const Individual& a, const Individual& b) {
            const std::size_t ia = where.at(&a), ib = where.at(&b);
            if (meta.rank[ia] != meta.rank[ib]) return meta.rank[ia] < meta.rank[ib];
            if (meta.crowding[ia] != meta.crowding[ib])
                return meta.crowding[ia] > meta.crowding[ib];
            return cmp_individual(a, b) < 0;
        };
        auto offspring = eng.breed(pop, k, better);

        std::vector<Individual> merged = std::move(pop);
        for (auto& o : offspring) merged.push_back(std::move(o));
        auto merged_meta = nsga_metadata(merged);

        std::vector<std::size_t> order(merged.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (merged_meta.rank[a] != merged_meta.rank[b])
                return merged_meta.rank[a] < merged_meta.rank[b];
            if (merged_meta.crowding[a] != merged_meta.crowding[b])
                return merged_meta.crowding[a] > merged_meta.crowding[b];
            return cmp_individual(merged[a], merged[b]) < 0;
        });

        pop.clear();
        meta.rank.clear();
        meta.crowding.clear();
        for (std::size_t i = 0; i < eng.cfg.population; ++i) {
            pop.push_back(std::move(merged[order[i]]));
            meta.rank.push_back(merged_meta.rank[order[i]]);
            meta.crowding.push_back(merged_meta.crowding[order[i]]);
        }
    }

    ParetoFront front;
    front.solutions = extract_front(std::move(pop));
    return front;
}

// ---------------------------------------------------------------- SPEA2

struct Spea2Fitness {
    std::vector<double> fitness;              // R + D, lower is better
    std::vector<std::vector<double>> dist;    // pairwise objective distances
};

Spea2Fitness spea2_fitness(const std::vector<Individual>& pop) {
    const std::size_t n = pop.size();
    std::vector<ObjectiveVector> objs;
    objs.reserve(n);
    for (const auto& p : pop) objs.push_back(p.objectives);

    const auto strength = spea2_strengths(objs);
    std::vector<double> raw(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && dominates(objs[j], objs[i]))
                raw[i] += static_cast<double>(strength[j]);

    Spea2Fitness out;
    out.dist.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double d2 = 0.0;
            for (std::size_t a = 0; a < 3; ++a) {
                const double d = objs[i].canonical()[a] - objs[j].canonical()[a];
                d2 += d * d;
            }
            out.dist[i][j] = out.dist[j][i] = std::sqrt(d2);
        }
    }

    const std::size_t k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    out.fitness.resize(n);
    std::vector<double> row;
    for (std::size_t i = 0; i < n; ++i) {
        row.clear();
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) row.push_back(out.dist[i][j]);
        std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(
                                              std::min(k, row.size() - 1)),
                         row.end());
        const double sigma_k = row[std::min(k, row.size() - 1)];
        out.fitness[i] = raw[i] + 1.0 / (sigma_k + 2.0);
    }
    return out;
}

// Iterative nearest-neighbor truncation down to `cap`.
std::vector<std::size_t> spea2_truncate(const std::vector<Individual>& pop,
                                        const std::vector<std::vector<double>>& dist,
                                        std::vector<std::size_t> members, std::size_t cap) {
    std::vector<bool> alive(pop.size(), false);
    for (std::size_t m : members) alive[m] = true;
    std::size_t count = members.size();

    const auto profile = [&](std::size_t i) {
        std::vector<double> p;
        p.reserve(count - 1);
        for (std::size_t j : members)
            if (j != i && alive[j]) p.push_back(dist[i][j]);
        std::sort(p.begin(), p.end());
        return p;
    };

    while (count > cap) {
        // nearest-neighbor distance decides almost always; full profiles
        // break exact ties
        double best_sigma = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> candidates;
        for (std::size_t i : members) {
            if (!alive[i]) continue;
            double sigma = std::numeric_limits<double>::infinity();
            for (std::size_t j : members)
                if (j != i && alive[j]) sigma = std::min(sigma, dist[i][j]);
            if (sigma < best_sigma) {
                best_sigma = sigma;
                candidates.clear();
                candidates.push_back(i);
            } else if (sigma == best_sigma) {
                candidates.push_back(i);
            }
        }
        std::size_t victim = candidates.front();
        if (candidates.size() > 1) {
            auto victim_profile = profile(victim);
            for (std::size_t c = 1; c < candidates.size(); ++c) {
                auto p = profile(candidates[c]);
                bool less = p < victim_profile;
                if (p == victim_profile)
                    less = cmp_individual(pop[candidates[c]], pop[victim]) > 0;
                if (less) {
                    victim = candidates[c];
                    victim_profile = std::move(p);
                }
            }
        }
        alive[victim] = false;
        --count;
    }

    std::vector<std::size_t> out;
    out.reserve(count);
    for (std::size_t m : members)
        if (alive[m]) out.push_back(m);
    return out;
}

ParetoFront run_spea2(Engine& eng) {
    const std::size_t archive_cap = eng.cfg.population;
    auto pop = eng.initial_population();
    std::vector<Individual> archive;

    while (true) {
        std::vector<Individual> uni = std::move(pop);
        for (auto& a : archive) uni.push_back(std::move(a));
        auto fit = spea2_fitness(uni);
        for (std::size_t i = 0; i < uni.size(); ++i) uni[i].aux_fitness = fit.fitness[i];

        std::vector<std::size_t> nondom;
        for (std::size_t i = 0; i < uni.size(); ++i)
            if (fit.fitness[i] < 1.0) nondom.push_back(i);

        std::vector<std::size_t> selected;
        if (nondom.size() > archive_cap) {
            selected = spea2_truncate(uni, fit.dist, nondom, archive_cap);
        } else {
            selected = nondom;
            // fill with the best dominated individuals
            std::vector<std::size_t> rest;
            for (std::size_t i = 0; i < uni.size(); ++i)
                if (fit.fitness[i] >= 1.0) rest.push_back(i);
            std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
                if (fit.fitness[a] != fit.fitness[b]) return fit.fitness[a] < fit.fitness[b];
                return cmp_individual(uni[a], uni[b]) < 0;
            });
            for (std::size_t i : rest) {
                if (selected.size() >= archive_cap) break;
                selected.push_back(i);
            }
        }

        archive.clear();
        archive.reserve(selected.size());
        for (std::size_t i : selected) archive.push_back(uni[i]);

        if (eng.evaluations >= eng.budget) break;
        const std::size_t k = std::min(eng.cfg.population, eng.budget - eng.evaluations);
        pop = eng.breed(archive, k, [](const Individual& a, const Individual& b) {
            if (a.aux_fitness != b.aux_fitness) return a.aux_fitness < b.aux_fitness;
            return cmp_individual(a, b) < 0;
        });
    }

    ParetoFront front;
    front.solutions = extract_front(std::move(archive));
    return front;
}

// ---------------------------------------------------------------- IBEA

// Additive hypervolume-difference indicator on objectives normalized to
// [0,1], reference coordinate 2 on every axis. Per-point volumes are
// precomputed; the pairwise call is the engine's hottest path.
struct IbeaIndicator {
    std::vector<std::array<double, 3>> norm;
    std::vector<double> vol;  // volume dominated up to the reference point

    explicit IbeaIndicator(const std::vector<Individual>& pop) {
        std::array<double, 3> lo{}, hi{};
        lo.fill(std::numeric_limits<double>::infinity());
        hi.fill(-std::numeric_limits<double>::infinity());
        for (const auto& p : pop) {
            for (std::size_t a = 0; a < 3; ++a) {
                lo[a] = std::min(lo[a], p.objectives.canonical()[a]);
                hi[a] = std::max(hi[a], p.objectives.canonical()[a]);
            }
        }
        norm.reserve(pop.size());
        vol.reserve(pop.size());
        for (const auto& p : pop) {
            std::array<double, 3> v{};
            for (std::size_t a = 0; a < 3; ++a) {
                const double span = hi[a] - lo[a];
                v[a] = span > 0.0 ? (p.objectives.canonical()[a] - lo[a]) / span : 0.0;
            }
            vol.push_back((2.0 - v[0]) * (2.0 - v[1]) * (2.0 - v[2]));
            norm.push_back(v);
        }
    }

    double operator()(std::size_t x, std::size_t y) const {
        const auto& a = norm[x];
        const auto& b = norm[y];
        const double m0 = a[0] > b[0] ? a[0] : b[0];
        const double m1 = a[1] > b[1] ? a[1] : b[1];
        const double m2 = a[2] > b[2] ? a[2] : b[2];
        if (m0 == b[0] && m1 == b[1] && m2 == b[2])  // x weakly dominates y
            return vol[y] - vol[x];
        return vol[y] - (2.0 - m0) * (2.0 - m1) * (2.0 - m2);
    }
};

ParetoFront run_ibea(Engine& eng) {
    auto pop = eng.initial_population();
    std::vector<Individual> archive;

    while (true) {
        std::vector<Individual> uni = std::move(pop);
        for (auto& a : archive) uni.push_back(std::move(a));
        const std::size_t m = uni.size();

        const IbeaIndicator indicator(uni);
        double c = 0.0;
        std::vector<double> ind_matrix(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (i == j) continue;
                const double v = indicator(i, j);
                ind_matrix[i * m + j] = v;
                c = std::max(c, std::abs(v));
            }
        }

        const double scale = c > 0.0 ? 1.0 / (c * eng.cfg.ibea_kappa) : 0.0;
        std::vector<double> exp_matrix(m * m, 0.0);
        std::vector<double> fitness(m, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (i == j) continue;
                // contribution of i's indicator against j to F(j)
                const double e = std::exp(-ind_matrix[i * m + j] * scale);
                exp_matrix[i * m + j] = e;
                fitness[j] -= e;
            }
        }

        // environmental selection: drop the worst until the archive fits
        std::vector<bool> alive(m, true);
        std::size_t count = m;
        while (count > eng.cfg.archive) {
            std::size_t worst = m;
            for (std::size_t i = 0; i < m; ++i) {
                if (!alive[i]) continue;
                if (worst == m || fitness[i] < fitness[worst] ||
                    (fitness[i] == fitness[worst] &&
                     cmp_individual(uni[i], uni[worst]) > 0))
                    worst = i;
            }
            alive[worst] = false;
            --count;
            for (std::size_t j = 0; j < m; ++j)
                if (alive[j] && j != worst) fitness[j] += exp_matrix[worst * m + j];
        }

        archive.clear();
        archive.reserve(count);
        for (std::size_t i = 0; i < m; ++i) {
            if (!alive[i]) continue;
            uni[i].aux_fitness = fitness[i];
            archive.push_back(std::move(uni[i]));
        }

        if (eng.evaluations >= eng.budget) break;
        const std::size_t k = std::min(eng.cfg.population, eng.budget - eng.evaluations);
        pop = eng.breed(archive, k, [](const Individual& a, const Individual& b) {
            if (a.aux_fitness != b.aux_fitness) return a.aux_fitness > b.aux_fitness;
            return cmp_individual(a, b) < 0;
        });
    }

    ParetoFront front;
    front.solutions = extract_front(std::move(archive));
    return front;
}

}  // namespace

ParetoFront run_search(const ObjectiveContext& ctx, const SearchConfig& config) {
    config.validate();
    if (ctx.size() < 2) throw Error("search needs a suite of at least 2 benchmarks");

    const auto start = std::chrono::steady_clock::now();
    Engine eng(ctx, config);

    ParetoFront front;
    switch (config.algorithm) {
        case Algorithm::ibea: front = run_ibea(eng); break;
        case Algorithm::nsga2: front = run_nsga2(eng); break;
        case Algorithm::spea2: front = run_spea2(eng); break;
    }
    front.evaluations = eng.evaluations;
    front.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    front.algorithm = algorithm_name(config.algorithm);
    front.seed = config.seed;
    return front;
}

Ranking select_solution(const ParetoFront& front, const ObjectiveContext& ctx,
                        const SelectionPolicy& policy) {
    if (front.solutions.empty()) throw EmptyFront("cannot select from an empty front");

    const auto materialize = [&](const Individual& ind, const std::string& note) {
        Ranking r;
        r.order.reserve(ind.genes.size());
        for (std::int32_t g : ind.genes) r.order.push_back(ctx.ids().at(static_cast<std::size_t>(g)));
        r.provenance = {front.algorithm, front.seed, note};
        return r;
    };

    if (std::holds_alternative<SelectIdeal>(policy)) {
        // normalize each objective across the front, then nearest to origin
        std::array<double, 3> lo{}, hi{};
        lo.fill(std::numeric_limits<double>::infinity());
        hi.fill(-std::numeric_limits<double>::infinity());
        for (const auto& s : front.solutions) {
            for (std::size_t a = 0; a < 3; ++a) {
                lo[a] = std::min(lo[a], s.objectives.canonical()[a]);
                hi[a] = std::max(hi[a], s.objectives.canonical()[a]);
            }
        }
        const Individual* best = nullptr;
        double best_dist = std::numeric_limits<double>::infinity();
        for (const auto& s : front.solutions) {
            double d2 = 0.0;
            for (std::size_t a = 0; a < 3; ++a) {
                const double span = hi[a] - lo[a];
                const double v = span > 0.0 ? (s.objectives.canonical()[a] - lo[a]) / span : 0.0;
                d2 += v * v;
            }
            const double d = std::sqrt(d2);
            if (best == nullptr || d < best_dist ||
                (d == best_dist && cmp_individual(s, *best) < 0)) {
                best = &s;
                best_dist = d;
            }
        }
        return materialize(*best, "distance-to-ideal selection");
    }

    const auto& median_policy = std::get<SelectMedianEffectiveness>(policy);
    if (median_policy.truth == nullptr)
        throw std::invalid_argument("median selection requires ground truth");

    std::vector<std::pair<double, std::size_t>> scored;
    scored.reserve(front.solutions.size());
    for (std::size_t i = 0; i < front.solutions.size(); ++i) {
        const auto ranking = materialize(front.solutions[i], "");
        scored.emplace_back(apfd_p(ranking, *median_policy.truth), i);
    }
    std::sort(scored.begin(), scored.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return cmp_individual(front.solutions[a.second], front.solutions[b.second]) < 0;
    });
    const std::size_t pick = scored[(scored.size() - 1) / 2].second;  // lower median
    return materialize(front.solutions[pick], "median-effectiveness selection");
}

Ranking apply_car(const Ranking& ranking, const CoverageMatrix& cov, const DiffSet& diff) {
    Ranking out = ranking;
    std::stable_partition(out.order.begin(), out.order.end(), [&](const BenchmarkId& id) {
        const auto* covered = cov.find(id);
        if (covered == nullptr) return false;
        for (const auto& m : *covered)
            if (diff.changed_methods.count(m) != 0) return true;
        return false;
    });
    if (!out.provenance.note.empty()) out.provenance.note += "; ";
    out.provenance.note += "car reordering";
    return out;
}

double hypervolume(std::span<const std::array<double, 3>> points,
                   const std::array<double, 3>& ref) {
    std::vector<std::array<double, 3>> pts;
    for (const auto& p : points) {
        if (p[0] < ref[0] && p[1] < ref[1] && p[2] < ref[2]) pts.push_back(p);
    }
    if (pts.empty()) return 0.0;
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a[2] < b[2]; });

    // sweep slabs along z; cross-section is a union of rectangles anchored
    // at the (x,y) reference corner
    const auto slab_area = [&](std::size_t upto) {
        std::vector<std::pair<double, double>> xy;
        for (std::size_t i = 0; i < upto; ++i) xy.emplace_back(pts[i][0], pts[i][1]);
        std::sort(xy.begin(), xy.end());
        // minimal staircase: x strictly increasing, y strictly decreasing
        std::vector<std::pair<double, double>> stair;
        double min_y = std::numeric_limits<double>::infinity();
        for (const auto& p : xy) {
            if (p.second < min_y) {
                stair.push_back(p);
                min_y = p.second;
            }
        }
        double area = 0.0;
        for (std::size_t i = 0; i < stair.size(); ++i) {
            const double x_next = i + 1 < stair.size() ? stair[i + 1].first : ref[0];
            area += (x_next - stair[i].first) * (ref[1] - stair[i].second);
        }
        return area;
    };

    double volume = 0.0;
    std::size_t i = 0;
    while (i < pts.size()) {
        std::size_t j = i;
        while (j + 1 < pts.size() && pts[j + 1][2] == pts[i][2]) ++j;
        const double z_top = j + 1 < pts.size() ? pts[j + 1][2] : ref[2];
        volume += slab_area(j + 1) * (z_top - pts[i][2]);
        i = j + 1;
    }
    return volume;
}

}  // namespace benchprio
