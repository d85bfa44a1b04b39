#include "benchprio/objectives.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "benchprio/ingest.hpp"

namespace benchprio {

Mode parse_mode(const std::string& s) {
    if (s == "nca") return Mode::nca;
    if (s == "cac") return Mode::cac;
    if (s == "car") return Mode::car;
    throw ParseError("unknown mode '" + s + "' (expected nca, cac, or car)");
}

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::nca: return "nca";
        case Mode::cac: return "cac";
        case Mode::car: return "car";
    }
    return "?";
}

ObjectiveContext::ObjectiveContext(std::vector<BenchmarkId> ids,
                                   std::vector<double> elem_coverage,
                                   std::vector<double> elem_overlap,
                                   std::vector<double> elem_hist, Mode mode)
    : ids_(std::move(ids)),
      elem_coverage_(std::move(elem_coverage)),
      elem_overlap_(std::move(elem_overlap)),
      elem_hist_(std::move(elem_hist)),
      mode_(mode) {
    if (elem_coverage_.size() != ids_.size() || elem_overlap_.size() != ids_.size() ||
        elem_hist_.size() != ids_.size())
        throw std::invalid_argument("element vectors must match suite size");
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        if (elem_coverage_[i] < 0.0 || elem_hist_[i] < 0.0 || elem_overlap_[i] < 0.0 ||
            elem_overlap_[i] > 1.0)
            throw std::invalid_argument("element value out of range");
        coverage_total_ += elem_coverage_[i];
        overlap_total_ += elem_overlap_[i];
        hist_total_ += elem_hist_[i];
    }
}

namespace {

// Interned coverage sets as sorted int vectors, pairwise merges instead of
// std::set intersections.
std::vector<std::vector<std::int32_t>> intern_coverage(
        const CoverageMatrix& cov, const std::vector<BenchmarkId>& ids,
        const std::set<MethodRef>* restrict_to) {
    std::map<MethodRef, std::int32_t> method_index;
    for (const auto& m : cov.universe())
        method_index.emplace(m, static_cast<std::int32_t>(method_index.size()));

    std::vector<std::vector<std::int32_t>> sets(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto* covered = cov.find(ids[i]);
        if (covered == nullptr) continue;
        for (const auto& m : *covered) {
            if (restrict_to != nullptr && restrict_to->count(m) == 0) continue;
            sets[i].push_back(method_index.at(m));
        }
        // std::set iteration is ordered and the index map is monotone in it,
        // so each vector is already sorted.
    }
    return sets;
}

std::size_t intersection_size(const std::vector<std::int32_t>& a,
                              const std::vector<std::int32_t>& b) {
    std::size_t n = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

double pair_overlap(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b,
                    OverlapMeasure measure) {
    const std::size_t inter = intersection_size(a, b);
    if (measure == OverlapMeasure::jaccard) {
        const std::size_t uni = a.size() + b.size() - inter;
        return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
    }
    // containment: |a ∩ b| / |a|, 0 for an empty base set
    return a.empty() ? 0.0 : static_cast<double>(inter) / static_cast<double>(a.size());
}

double aggregate_history(const std::vector<ChangeHistory::Entry>* entries, HistAgg agg) {
    if (entries == nullptr || entries->empty()) return 0.0;
    if (agg == HistAgg::mean) {
        double sum = 0.0;
        for (const auto& [_, c] : *entries) sum += c;
        return sum / static_cast<double>(entries->size());
    }
    std::vector<double> values;
    values.reserve(entries->size());
    for (const auto& [_, c] : *entries) values.push_back(c);
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace

ObjectiveContext build_context(const CoverageMatrix& cov, const ChangeHistory& hist,
                               const DiffSet* diff, Mode mode,
                               const ObjectiveOptions& opts) {
    if ((mode == Mode::cac || mode == Mode::car) && diff == nullptr)
        throw MissingDiff(std::string("mode ") + mode_name(mode) + " requires a diff set");

    const auto ids = canonical_index(cov);
    const std::size_t n = ids.size();
    // Only cac filters the element sets; car prioritizes on full coverage
    // and reorders afterwards.
    const std::set<MethodRef>* restrict_to =
            mode == Mode::cac ? &diff->changed_methods : nullptr;
    const auto sets = intern_coverage(cov, ids, restrict_to);

    std::vector<double> elem_cov(n), elem_ovl(n, 0.0), elem_hist(n);
    for (std::size_t i = 0; i < n; ++i)
        elem_cov[i] = static_cast<double>(sets[i].size());

    if (n > 1) {
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                sum += pair_overlap(sets[i], sets[j], opts.overlap);
            }
            elem_ovl[i] = sum / static_cast<double>(n - 1);
        }
    }

    for (std::size_t i = 0; i < n; ++i)
        elem_hist[i] = aggregate_history(hist.find(ids[i]), opts.hist_agg);

    return ObjectiveContext(ids, std::move(elem_cov), std::move(elem_ovl),
                            std::move(elem_hist), mode);
}

double aptec(std::span<const double> elements_in_rank_order) {
    if (elements_in_rank_order.empty())
        throw std::invalid_argument("aptec of an empty element list");
    double m_total = 0.0;
    for (double e : elements_in_rank_order) m_total += e;
    if (m_total == 0.0) return 0.0;
    double prefix = 0.0;
    double acc = 0.0;
    for (double e : elements_in_rank_order) {
        prefix += e;
        acc += prefix / m_total;
    }
    return acc / static_cast<double>(elements_in_rank_order.size());
}

ObjectiveVector evaluate_genes(std::span<const std::int32_t> genes,
                               const ObjectiveContext& ctx) {
    const std::size_t n = ctx.size();
    if (genes.size() != n) throw PermutationMismatch("gene count != suite size");

    // One pass computes all three prefix sums; totals come from the context.
    double pc = 0.0, po = 0.0, ph = 0.0;
    double ac = 0.0, ao = 0.0, ah = 0.0;
    std::vector<bool> seen(n, false);
    const auto ec = ctx.elem_coverage();
    const auto eo = ctx.elem_overlap();
    const auto eh = ctx.elem_hist();
    for (std::int32_t g : genes) {
        if (g < 0 || static_cast<std::size_t>(g) >= n || seen[static_cast<std::size_t>(g)])
            throw PermutationMismatch("genes are not a permutation of [0,n)");
        seen[static_cast<std::size_t>(g)] = true;
        const auto i = static_cast<std::size_t>(g);
        pc += ec[i];
        po += eo[i];
        ph += eh[i];
        ac += pc;
        ao += po;
        ah += ph;
    }
    const double dn = static_cast<double>(n);
    // Summation order differs from the context totals, so the ratio can
    // exceed 1 by a few ulps; clamp before the strict range check.
    const auto score = [dn](double acc, double total) {
        if (total == 0.0) return 0.0;
        return std::clamp(acc / total / dn, 0.0, 1.0);
    };
    return ObjectiveVector::from_scores(score(ac, ctx.coverage_total()),
                                        score(ao, ctx.overlap_total()),
                                        score(ah, ctx.hist_total()));
}

ObjectiveVector evaluate(const Ranking& ranking, const ObjectiveContext& ctx) {
    if (ranking.order.size() != ctx.size())
        throw PermutationMismatch("ranking size != suite size");
    std::vector<std::int32_t> genes;
    genes.reserve(ranking.order.size());
    for (const auto& id : ranking.order) {
        const auto idx = index_of(ctx.ids(), id);
        if (!idx) throw PermutationMismatch("ranking contains unknown id " + id.to_string());
        genes.push_back(static_cast<std::int32_t>(*idx));
    }
    return evaluate_genes(genes, ctx);
}

}  // namespace benchprio
