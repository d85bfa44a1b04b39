#include "benchprio/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace benchprio {

void GroundTruthChanges::add(const BenchmarkId& id, double change_percent) {
    if (change_percent < 0.0 || !std::isfinite(change_percent))
        throw NegativeChange("ground-truth change must be a finite value >= 0 for " +
                             id.to_string());
    for (const auto& [bid, _] : entries_)
        if (bid == id) throw DuplicateBenchmark("duplicate ground truth for " + id.to_string());
    entries_.emplace_back(id, change_percent);
    total_ += change_percent;
}

const double* GroundTruthChanges::find(const BenchmarkId& id) const {
    for (const auto& [bid, c] : entries_)
        if (bid == id) return &c;
    return nullptr;
}

namespace {

std::vector<double> changes_in_rank_order(const Ranking& ranking,
                                          const GroundTruthChanges& truth) {
    if (ranking.order.size() != truth.size())
        throw PermutationMismatch("ranking and ground truth cover different suites");
    std::vector<double> changes;
    changes.reserve(ranking.order.size());
    for (const auto& id : ranking.order) {
        const double* c = truth.find(id);
        if (c == nullptr)
            throw PermutationMismatch("ranking id " + id.to_string() + " missing from truth");
        changes.push_back(*c);
    }
    return changes;
}

}  // namespace

double apfd_p(const Ranking& ranking, const GroundTruthChanges& truth) {
    const auto changes = changes_in_rank_order(ranking, truth);
    const double c = truth.total();
    if (c <= 0.0)
        throw ZeroTotalChange("total change is 0; APFD-P is undefined for this version");
    double detected = 0.0;
    double acc = 0.0;
    for (double ch : changes) {
        detected += ch;
        acc += detected / c;
    }
    return acc / static_cast<double>(changes.size());
}

double top_n(const Ranking& ranking, const GroundTruthChanges& truth, std::size_t n) {
    if (ranking.order.size() < n)
        throw SuiteTooSmall("suite of " + std::to_string(ranking.order.size()) +
                            " benchmarks cannot host top-" + std::to_string(n));
    if (truth.total() <= 0.0)
        throw ZeroTotalChange("total change is 0; Top-N is undefined for this version");

    // Target set: the n largest changes, boundary ties resolved by canonical
    // id order so exactly n benchmarks are selected.
    std::vector<std::pair<BenchmarkId, double>> sorted(truth.entries());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    sorted.resize(n);

    std::size_t last_position = 0;
    for (const auto& [target, _] : sorted) {
        bool found = false;
        for (std::size_t pos = 0; pos < ranking.order.size(); ++pos) {
            if (ranking.order[pos] == target) {
                last_position = std::max(last_position, pos + 1);
                found = true;
                break;
            }
        }
        if (!found)
            throw PermutationMismatch("target " + target.to_string() + " missing from ranking");
    }
    return static_cast<double>(last_position) / static_cast<double>(ranking.order.size());
}

namespace {

// Midranks of the pooled sample plus the tie sum Σ(t³-t).
struct PooledRanks {
    std::vector<double> ranks;  // aligned with the pooled value order
    double tie_sum = 0.0;
};

PooledRanks midranks(const std::vector<double>& pooled) {
    const std::size_t n = pooled.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });

    PooledRanks out;
    out.ranks.resize(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = rank;
        const double t = static_cast<double>(j - i + 1);
        out.tie_sum += t * t * t - t;
        i = j + 1;
    }
    return out;
}

void check_groups(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw std::invalid_argument("need at least 2 groups");
    for (const auto& g : groups)
        if (g.empty()) throw std::invalid_argument("groups must be non-empty");
}

std::vector<double> pool(const std::vector<std::vector<double>>& groups) {
    std::vector<double> pooled;
    for (const auto& g : groups) pooled.insert(pooled.end(), g.begin(), g.end());
    return pooled;
}

}  // namespace

KruskalResult kruskal_wallis(const std::vector<std::vector<double>>& groups) {
    check_groups(groups);
    const auto pooled = pool(groups);
    const double n = static_cast<double>(pooled.size());
    const auto pr = midranks(pooled);

    double stat = 0.0;
    std::size_t pos = 0;
    for (const auto& g : groups) {
        double rank_sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) rank_sum += pr.ranks[pos + i];
        pos += g.size();
        stat += rank_sum * rank_sum / static_cast<double>(g.size());
    }
    double h = 12.0 / (n * (n + 1.0)) * stat - 3.0 * (n + 1.0);

    const double correction = 1.0 - pr.tie_sum / (n * n * n - n);
    if (correction <= 0.0) return {0.0, 1.0};  // every value identical
    h /= correction;
    if (h < 0.0) h = 0.0;  // rounding guard near zero
    return {h, chi_squared_sf(h, groups.size() - 1)};
}

std::vector<DunnResult> dunn_posthoc(const std::vector<std::vector<double>>& groups) {
    check_groups(groups);
    const auto pooled = pool(groups);
    const double n = static_cast<double>(pooled.size());
    const auto pr = midranks(pooled);

    std::vector<double> mean_rank(groups.size());
    std::size_t pos = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        double sum = 0.0;
        for (std::size_t i = 0; i < groups[g].size(); ++i) sum += pr.ranks[pos + i];
        pos += groups[g].size();
        mean_rank[g] = sum / static_cast<double>(groups[g].size());
    }

    const double var_base = n * (n + 1.0) / 12.0 - pr.tie_sum / (12.0 * (n - 1.0));
    const std::size_t n_pairs = groups.size() * (groups.size() - 1) / 2;

    std::vector<DunnResult> out;
    out.reserve(n_pairs);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = i + 1; j < groups.size(); ++j) {
            const double var = var_base * (1.0 / static_cast<double>(groups[i].size()) +
                                           1.0 / static_cast<double>(groups[j].size()));
            double z = 0.0, p = 1.0;
            if (var > 0.0) {
                z = (mean_rank[i] - mean_rank[j]) / std::sqrt(var);
                p = std::erfc(std::abs(z) / std::sqrt(2.0));  // two-sided
            }
            out.push_back({i, j, z, std::min(1.0, p * static_cast<double>(n_pairs))});
        }
    }
    return out;
}

const char* magnitude_name(Magnitude m) {
    switch (m) {
        case Magnitude::negligible: return "negligible";
        case Magnitude::small: return "small";
        case Magnitude::medium: return "medium";
        case Magnitude::large: return "large";
    }
    return "?";
}

EffectSize vargha_delaney(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("samples must be non-empty");
    double score = 0.0;
    for (double x : a) {
        for (double y : b) {
            if (x > y)
                score += 1.0;
            else if (x == y)
                score += 0.5;
        }
    }
    const double a12 = score / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
    const double scaled = std::abs((a12 - 0.5) * 2.0);
    Magnitude mag = Magnitude::large;
    if (scaled < 0.147)
        mag = Magnitude::negligible;
    else if (scaled < 0.33)
        mag = Magnitude::small;
    else if (scaled < 0.474)
        mag = Magnitude::medium;
    return {a12, mag};
}

double median(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("median of empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ComparisonReport compare_strategies(const std::map<std::string, std::vector<double>>& results,
                                    double alpha) {
    if (results.size() < 2) throw std::invalid_argument("need at least 2 strategies");
    ComparisonReport report;
    report.alpha = alpha;

    std::vector<std::string> names;
    std::vector<std::vector<double>> groups;
    for (const auto& [name, values] : results) {
        if (values.empty()) throw std::invalid_argument("strategy '" + name + "' has no samples");
        names.push_back(name);
        groups.push_back(values);
        report.medians[name] = median(values);
    }

    bool any_repeated = false;
    for (const auto& g : groups)
        if (g.size() > 1) any_repeated = true;
    if (!any_repeated) return report;  // single samples: medians only

    const auto kw = kruskal_wallis(groups);
    report.kw_performed = true;
    report.kw_h = kw.h;
    report.kw_p = kw.p;
    if (kw.p >= alpha) return report;

    const auto dunn = dunn_posthoc(groups);
    for (const auto& d : dunn) {
        const auto effect = vargha_delaney(groups[d.first], groups[d.second]);
        PairwiseComparison pc;
        pc.first = names[d.first];
        pc.second = names[d.second];
        pc.dunn_p_adjusted = d.p_adjusted;
        pc.a12 = effect.a12;
        pc.magnitude = effect.magnitude;
        pc.median_difference = report.medians[pc.first] - report.medians[pc.second];
        pc.significant = d.p_adjusted < alpha && effect.magnitude != Magnitude::negligible;
        report.pairwise.push_back(std::move(pc));
    }
    return report;
}

namespace {

double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
        term *= x / (a + static_cast<double>(k));
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    // Lentz's algorithm for the continued fraction of Q(a,x).
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double f = d;
    for (int k = 1; k < 1000; ++k) {
        const double an = -static_cast<double>(k) * (static_cast<double>(k) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return f * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi_squared_sf(double x, std::size_t df) {
    if (df == 0) throw std::invalid_argument("chi-squared needs df >= 1");
    if (x <= 0.0) return 1.0;
    const double a = static_cast<double>(df) / 2.0;
    const double t = x / 2.0;
    // Series for P below the crossover, continued fraction for Q above.
    if (t < a + 1.0) return 1.0 - gamma_p_series(a, t);
    return gamma_q_contfrac(a, t);
}

}  // namespace benchprio
