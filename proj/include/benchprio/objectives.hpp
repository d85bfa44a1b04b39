#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "benchprio/core.hpp"

namespace benchprio {

struct DiffSet;

enum class Mode { nca, cac, car };
enum class OverlapMeasure { jaccard, containment };
enum class HistAgg { mean, median };

Mode parse_mode(const std::string& s);
const char* mode_name(Mode m);

struct ObjectiveOptions {
    OverlapMeasure overlap = OverlapMeasure::jaccard;
    HistAgg hist_agg = HistAgg::mean;
};

/// Immutable per-suite element values feeding the three APTEC objectives.
/// Indexed by canonical gene value; fitness evaluation reads only this.
class ObjectiveContext {
public:
    ObjectiveContext(std::vector<BenchmarkId> ids, std::vector<double> elem_coverage,
                     std::vector<double> elem_overlap, std::vector<double> elem_hist,
                     Mode mode);

    const std::vector<BenchmarkId>& ids() const { return ids_; }
    std::size_t size() const { return ids_.size(); }
    Mode mode() const { return mode_; }

    std::span<const double> elem_coverage() const { return elem_coverage_; }
    std::span<const double> elem_overlap() const { return elem_overlap_; }
    std::span<const double> elem_hist() const { return elem_hist_; }

    double coverage_total() const { return coverage_total_; }
    double overlap_total() const { return overlap_total_; }
    double hist_total() const { return hist_total_; }

private:
    std::vector<BenchmarkId> ids_;  // canonical order
    std::vector<double> elem_coverage_;
    std::vector<double> elem_overlap_;
    std::vector<double> elem_hist_;
    double coverage_total_ = 0.0;
    double overlap_total_ = 0.0;
    double hist_total_ = 0.0;
    Mode mode_;
};

/// Builds the element values for the given change-awareness mode. `diff` is
/// required for cac and car (car consumes it in post-processing only) and
/// ignored under nca. Throws MissingDiff when a required diff is absent.
ObjectiveContext build_context(const CoverageMatrix& cov, const ChangeHistory& hist,
                               const DiffSet* diff, Mode mode,
                               const ObjectiveOptions& opts = {});

/// Area-under-curve over cumulative element values in rank order:
/// sum of prefix(b)/m_total over b, divided by n. Returns 0 when m_total
/// is 0 so a degenerate objective stays neutral to the search.
double aptec(std::span<const double> elements_in_rank_order);

/// Three APTEC scores of `ranking` under `ctx`. Throws PermutationMismatch
/// if the ranking is not a permutation of the context's suite.
ObjectiveVector evaluate(const Ranking& ranking, const ObjectiveContext& ctx);

/// Same on a raw gene permutation (the search hot path).
ObjectiveVector evaluate_genes(std::span<const std::int32_t> genes,
                               const ObjectiveContext& ctx);

}  // namespace benchprio
