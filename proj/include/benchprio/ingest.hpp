#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>

#include "benchprio/core.hpp"
#include "benchprio/evaluation.hpp"

namespace benchprio {

/// Methods changed since the last version; drives the cac/car modes.
struct DiffSet {
    std::set<MethodRef> changed_methods;
};

/// Desk-scale instance generator parameters.
struct SyntheticSpec {
    std::size_t n_benchmarks = 50;
    std::size_t n_methods = 100;
    double coverage_density = 0.2;    // Bernoulli p per (benchmark, method), (0,1]
    double change_correlation = 0.0;  // target corr(coverage size, planted change), [0,1]
    std::size_t n_versions = 3;
    std::uint64_t seed = 42;
};

struct SyntheticInstance {
    CoverageMatrix coverage;
    ChangeHistory history;
    DiffSet diff;
    GroundTruthChanges truth;
};

// Coverage JSON:
//   {"version": str,
//    "benchmarks": [{"method": str, "params": [{"k": str, "v": str}], "covered": [str]}]}
CoverageMatrix load_coverage(const std::filesystem::path& path);
void save_coverage(const CoverageMatrix& cov, const std::filesystem::path& path);

// History CSV, header `version,method,params,change_percent`; params uses the
// canonical k1=v1;k2=v2 encoding. Extra columns are ignored so the
// detect-changes output feeds straight back in. `absolute_values` maps signed
// upstream data through |x|; without it a negative change is rejected.
ChangeHistory load_history(const std::filesystem::path& path, bool absolute_values = false);
void save_history(const ChangeHistory& hist, const std::filesystem::path& path);

// Diff file: one MethodRef per line, blank lines skipped.
DiffSet load_diff(const std::filesystem::path& path);
void save_diff(const DiffSet& diff, const std::filesystem::path& path);

// Ground-truth CSV, header `method,params,change_percent`.
GroundTruthChanges load_truth(const std::filesystem::path& path);
void save_truth(const GroundTruthChanges& truth, const std::filesystem::path& path);

/// Deterministic for a fixed seed. The planted current-version change of a
/// benchmark tracks its coverage size with the requested correlation; prior
/// versions are noisy copies of the planted change so history is predictive.
SyntheticInstance generate_synthetic(const SyntheticSpec& spec);

}  // namespace benchprio
