#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "benchprio/core.hpp"
#include "benchprio/evaluation.hpp"
#include "benchprio/objectives.hpp"
#include "benchprio/rng.hpp"

namespace benchprio {

struct DiffSet;

enum class Algorithm { ibea, nsga2, spea2 };

Algorithm parse_algorithm(const std::string& s);
const char* algorithm_name(Algorithm a);

struct SearchConfig {
    Algorithm algorithm = Algorithm::ibea;
    std::size_t population = 250;
    std::size_t archive = 500;  // IBEA only (twice the population)
    std::size_t max_evaluations = 25000;
    double crossover_prob = 0.9;
    std::optional<double> mutation_prob;  // defaults to 1/n at run time
    std::uint64_t seed = 42;
    double ibea_kappa = 0.05;

    void validate() const;
};

/// A candidate ranking in genotype form. Genes are canonical-index values;
/// aux_fitness is whatever the hosting algorithm uses for selection.
struct Individual {
    std::vector<std::int32_t> genes;
    ObjectiveVector objectives;
    double aux_fitness = 0.0;
};

struct ParetoFront {
    std::vector<Individual> solutions;  // mutually non-dominated, deduped
    std::size_t evaluations = 0;
    double wall_time_s = 0.0;
    std::string algorithm;
    std::uint64_t seed = 0;
};

/// PMX: each child keeps its own parent's cut segment and fills the rest
/// from the other parent through the displacement mapping.
std::pair<std::vector<std::int32_t>, std::vector<std::int32_t>> pmx_crossover(
        std::span<const std::int32_t> p1, std::span<const std::int32_t> p2, Rng& rng);

/// With probability `prob`, applies exactly one uniformly random
/// transposition; otherwise returns the input unchanged.
std::vector<std::int32_t> swap_mutation(std::span<const std::int32_t> p, double prob,
                                        Rng& rng);

/// Runs the configured MOEA. Deterministic for a fixed seed; evaluation
/// budget is min(max_evaluations, population * 100 generations) exactly.
ParetoFront run_search(const ObjectiveContext& ctx, const SearchConfig& config);

struct SelectIdeal {};
struct SelectMedianEffectiveness {
    const GroundTruthChanges* truth = nullptr;
};
using SelectionPolicy = std::variant<SelectIdeal, SelectMedianEffectiveness>;

/// Picks one solution from the front: minimal Euclidean distance to the
/// front-normalized ideal point, or the (lower-)median APFD-P solution when
/// ground truth is supplied. Throws EmptyFront.
Ranking select_solution(const ParetoFront& front, const ObjectiveContext& ctx,
                        const SelectionPolicy& policy);

/// Change-aware reordering: stable partition with benchmarks covering a
/// changed method first.
Ranking apply_car(const Ranking& ranking, const CoverageMatrix& cov, const DiffSet& diff);

/// Exact 3-D hypervolume of the region dominated by `points` (canonical
/// minimization) up to `ref`; points not strictly dominating ref are
/// discarded.
double hypervolume(std::span<const std::array<double, 3>> points,
                   const std::array<double, 3>& ref);

// Exposed pieces of the engine, checkable against brute force.
std::vector<std::size_t> non_dominated_indices(std::span<const ObjectiveVector> objectives);
std::vector<std::size_t> fast_non_dominated_sort_ranks(
        std::span<const ObjectiveVector> objectives);
std::vector<std::size_t> spea2_strengths(std::span<const ObjectiveVector> objectives);

}  // namespace benchprio
