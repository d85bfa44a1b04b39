#include "benchprio/change_detection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "benchprio/rng.hpp"

namespace benchprio {

MeasurementSet::MeasurementSet(Trials trials) : trials_(std::move(trials)) {
    if (trials_.empty()) throw DegenerateInput("measurement set has no trials");
    for (const auto& trial : trials_) {
        if (trial.empty()) throw DegenerateInput("trial has no iterations");
        for (const auto& iteration : trial) {
            if (iteration.empty()) throw DegenerateInput("iteration has no samples");
            for (double v : iteration)
                if (!std::isfinite(v) || v <= 0.0)
                    throw DegenerateInput("samples must be finite and positive");
        }
    }
}

namespace {

// One hierarchical resample: trials with replacement, then iterations within
// each chosen trial, then invocations within each chosen iteration. Returns
// the grand mean of the drawn values.
double resample_mean(const MeasurementSet::Trials& trials, Rng& rng) {
    double sum = 0.0;
    std::size_t count = 0;
    const std::size_t n_trials = trials.size();
    for (std::size_t t = 0; t < n_trials; ++t) {
        const auto& trial = trials[rng.bounded(n_trials)];
        const std::size_t n_iters = trial.size();
        for (std::size_t i = 0; i < n_iters; ++i) {
            const auto& iteration = trial[rng.bounded(n_iters)];
            const std::size_t n_inv = iteration.size();
            for (std::size_t s = 0; s < n_inv; ++s) {
                sum += iteration[rng.bounded(n_inv)];
                ++count;
            }
        }
    }
    return sum / static_cast<double>(count);
}

double percentile(const std::vector<double>& sorted, double q) {
    const double h = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::pair<double, double> bootstrap_ratio_ci(const MeasurementSet& old_version,
                                             const MeasurementSet& new_version,
                                             const BootstrapOptions& opts) {
    if (opts.iterations < 2) throw std::invalid_argument("need at least 2 bootstrap iterations");
    if (opts.confidence <= 0.0 || opts.confidence >= 1.0)
        throw std::invalid_argument("confidence must be in (0,1)");

    std::vector<double> stats(opts.iterations);
    for (std::size_t r = 0; r < opts.iterations; ++r) {
        Rng rng = Rng::stream(opts.seed, r);
        const double mean_old = resample_mean(old_version.trials(), rng);
        const double mean_new = resample_mean(new_version.trials(), rng);
        if (mean_old <= 0.0 || mean_new <= 0.0)
            throw DegenerateInput("resampled mean is not positive");
        stats[r] = mean_new / mean_old;
    }
    std::sort(stats.begin(), stats.end());

    const double alpha = 1.0 - opts.confidence;
    return {percentile(stats, alpha / 2.0), percentile(stats, 1.0 - alpha / 2.0)};
}

ChangeResult change_size(std::pair<double, double> ci) {
    const auto [low, high] = ci;
    if (low > high) throw std::invalid_argument("CI endpoints crossed");
    if (low <= 1.0 && 1.0 <= high) return {low, high, 0.0, false};
    const double nearest = low > 1.0 ? low : high;
    return {low, high, std::abs(nearest - 1.0) * 100.0, true};
}

namespace {

using nlohmann::json;

MeasurementFile parse_measurement(const json& doc, const std::filesystem::path& path) {
    if (!doc.contains("benchmark") || !doc.contains("trials"))
        throw ParseError("measurement entry missing benchmark/trials in " + path.string());
    const auto& bench = doc["benchmark"];
    const auto id = BenchmarkId::from_parts(bench.at("method").get<std::string>(),
                                            bench.value("params", std::string{}));
    MeasurementSet::Trials trials;
    for (const auto& trial : doc["trials"]) {
        std::vector<std::vector<double>> iterations;
        for (const auto& iteration : trial)
            iterations.push_back(iteration.get<std::vector<double>>());
        trials.push_back(std::move(iterations));
    }
    try {
        return {id, MeasurementSet(std::move(trials))};
    } catch (const DegenerateInput& e) {
        throw ParseError(std::string(e.what()) + " for " + id.to_string() + " in " +
                         path.string());
    }
}

}  // namespace

std::vector<MeasurementFile> load_measurements(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("malformed measurements JSON in " + path.string() + ": " + e.what());
    }
    std::vector<MeasurementFile> out;
    if (doc.is_array()) {
        for (const auto& entry : doc) out.push_back(parse_measurement(entry, path));
    } else {
        out.push_back(parse_measurement(doc, path));
    }
    return out;
}

void save_measurements(const std::vector<MeasurementFile>& sets,
                       const std::filesystem::path& path) {
    json doc = json::array();
    for (const auto& m : sets) {
        json entry;
        entry["benchmark"] = {{"method", m.benchmark.method},
                              {"params", m.benchmark.params_string()}};
        entry["trials"] = m.measurements.trials();
        doc.push_back(std::move(entry));
    }
    std::ofstream outf(path, std::ios::binary | std::ios::trunc);
    if (!outf) throw Error("cannot write " + path.string());
    outf << doc.dump(2) << "\n";
}

}  // namespace benchprio
