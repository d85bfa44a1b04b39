#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "benchprio/core.hpp"

namespace benchprio {

/// Current-version performance changes, the effectiveness ground truth.
/// Distinct from ChangeHistory, which holds prior versions and feeds the
/// historical objective.
class GroundTruthChanges {
public:
    void add(const BenchmarkId& id, double change_percent);
    const double* find(const BenchmarkId& id) const;
    double total() const { return total_; }
    std::size_t size() const { return entries_.size(); }
    const std::vector<std::pair<BenchmarkId, double>>& entries() const { return entries_; }

private:
    std::vector<std::pair<BenchmarkId, double>> entries_;
    double total_ = 0.0;
};

/// Area-under-curve effectiveness: rankings that surface larger changes
/// earlier score closer to 1. Throws ZeroTotalChange when the truth sums to
/// 0 (the metric is undefined, not 0) and PermutationMismatch when ranking
/// and truth cover different benchmark sets.
double apfd_p(const Ranking& ranking, const GroundTruthChanges& truth);

/// Fraction of the suite that must run to catch the n largest changes
/// (boundary ties broken by canonical id order, selecting exactly n).
double top_n(const Ranking& ranking, const GroundTruthChanges& truth, std::size_t n = 3);

struct KruskalResult {
    double h;
    double p;
};

/// Kruskal-Wallis H with tie correction; p from chi-squared with k-1 df.
/// All-identical input degenerates to H=0, p=1.
KruskalResult kruskal_wallis(const std::vector<std::vector<double>>& groups);

struct DunnResult {
    std::size_t first;
    std::size_t second;
    double z;
    double p_adjusted;  // Bonferroni, capped at 1
};

/// Dunn's post-hoc z-tests on rank sums, pairs in (i<j) order.
std::vector<DunnResult> dunn_posthoc(const std::vector<std::vector<double>>& groups);

enum class Magnitude { negligible, small, medium, large };
const char* magnitude_name(Magnitude m);

struct EffectSize {
    double a12;
    Magnitude magnitude;
};

/// Vargha-Delaney probability of superiority with the scaled magnitude
/// categories.
EffectSize vargha_delaney(std::span<const double> a, std::span<const double> b);

struct PairwiseComparison {
    std::string first;
    std::string second;
    double dunn_p_adjusted;
    double a12;
    Magnitude magnitude;
    double median_difference;  // median(first) - median(second)
    bool significant;          // adjusted p < alpha and magnitude non-negligible
};

struct ComparisonReport {
    double alpha = 0.01;
    bool kw_performed = false;
    double kw_h = 0.0;
    double kw_p = 1.0;
    std::map<std::string, double> medians;
    std::vector<PairwiseComparison> pairwise;  // populated when KW rejects
};

/// Full comparison harness over per-strategy metric samples. With only
/// single-sample groups the tests are skipped and medians reported alone.
ComparisonReport compare_strategies(const std::map<std::string, std::vector<double>>& results,
                                    double alpha = 0.01);

double median(std::vector<double> values);

/// Survival function of the chi-squared distribution, via the regularized
/// incomplete gamma function.
double chi_squared_sf(double x, std::size_t df);

}  // namespace benchprio
