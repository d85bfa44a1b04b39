#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "benchprio/core.hpp"

namespace benchprio {

/// Raw performance samples, three levels: trial -> iteration -> invocation.
/// All samples must be finite and positive.
class MeasurementSet {
public:
    using Trials = std::vector<std::vector<std::vector<double>>>;

    explicit MeasurementSet(Trials trials);

    const Trials& trials() const { return trials_; }
    std::size_t trial_count() const { return trials_.size(); }

private:
    Trials trials_;
};

struct ChangeResult {
    double ratio_ci_low;
    double ratio_ci_high;
    double change_percent;  // 0 exactly when not significant
    bool significant;
};

struct BootstrapOptions {
    std::size_t iterations = 10000;
    double confidence = 0.99;
    std::uint64_t seed = 42;
};

/// Percentile CI of mean(new)/mean(old) under hierarchical resampling with
/// replacement at every level, preserving the original shape. Each replicate
/// draws from its own derived RNG stream, so a parallel driver would produce
/// the same interval.
std::pair<double, double> bootstrap_ratio_ci(const MeasurementSet& old_version,
                                             const MeasurementSet& new_version,
                                             const BootstrapOptions& opts = {});

/// Conservative endpoint rule: a CI containing 1 is no change; otherwise the
/// change is the distance from 1 to the nearest endpoint, in percent.
ChangeResult change_size(std::pair<double, double> ci);

struct MeasurementFile {
    BenchmarkId benchmark;
    MeasurementSet measurements;
};

// Measurements JSON, either one object or an array of them:
//   {"benchmark": {"method": str, "params": str}, "trials": [[[f, ...], ...], ...]}
std::vector<MeasurementFile> load_measurements(const std::filesystem::path& path);
void save_measurements(const std::vector<MeasurementFile>& sets,
                       const std::filesystem::path& path);

}  // namespace benchprio
