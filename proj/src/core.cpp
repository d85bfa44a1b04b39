#include "benchprio/core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace benchprio {

std::vector<std::pair<std::string, std::string>> BenchmarkId::sorted_params() const {
    auto sorted = params;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
}

std::string BenchmarkId::params_string() const {
    std::string out;
    for (const auto& [k, v] : sorted_params()) {
        if (!out.empty()) out += ';';
        out += k;
        out += '=';
        out += v;
    }
    return out;
}

std::string BenchmarkId::to_string() const {
    if (params.empty()) return method;
    std::string out = method + "(";
    bool first = true;
    for (const auto& [k, v] : sorted_params()) {
        if (!first) out += ',';
        first = false;
        out += k;
        out += '=';
        out += v;
    }
    out += ')';
    return out;
}

BenchmarkId BenchmarkId::from_parts(std::string method, const std::string& params_string) {
    if (method.empty()) throw ParseError("benchmark method name is empty");
    BenchmarkId id{std::move(method), {}};
    std::size_t pos = 0;
    while (pos < params_string.size()) {
        std::size_t end = params_string.find(';', pos);
        if (end == std::string::npos) end = params_string.size();
        const std::string pair = params_string.substr(pos, end - pos);
        const std::size_t eq = pair.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ParseError("malformed parameter pair '" + pair + "'");
        id.params.emplace_back(pair.substr(0, eq), pair.substr(eq + 1));
        pos = end + 1;
    }
    if (!id.has_unique_keys())
        throw ParseError("duplicate parameter key in '" + id.to_string() + "'");
    return id;
}

bool BenchmarkId::has_unique_keys() const {
    std::set<std::string> seen;
    for (const auto& [k, _] : params)
        if (!seen.insert(k).second) return false;
    return true;
}

bool operator<(const BenchmarkId& a, const BenchmarkId& b) {
    if (a.method != b.method) return a.method < b.method;
    const auto sa = a.sorted_params();
    const auto sb = b.sorted_params();
    if (sa != sb) return sa < sb;
    return a.params < b.params;
}

void ChangeHistory::add(const BenchmarkId& id, std::string version, double change) {
    if (change < 0.0)
        throw NegativeChange("negative change " + std::to_string(change) + " for " +
                             id.to_string());
    if (!std::isfinite(change)) throw Error("non-finite change for " + id.to_string());
    for (auto& [bid, list] : entries_) {
        if (bid == id) {
            for (const auto& [v, _] : list)
                if (v == version)
                    throw Error("duplicate version label '" + version + "' for " +
                                id.to_string());
            list.emplace_back(std::move(version), change);
            return;
        }
    }
    entries_.push_back({id, {{std::move(version), change}}});
}

const std::vector<ChangeHistory::Entry>* ChangeHistory::find(const BenchmarkId& id) const {
    for (const auto& [bid, list] : entries_)
        if (bid == id) return &list;
    return nullptr;
}

ObjectiveVector ObjectiveVector::from_scores(double coverage, double overlap,
                                             double hist_change) {
    return from_canonical({1.0 - coverage, overlap, 1.0 - hist_change});
}

ObjectiveVector ObjectiveVector::from_canonical(const std::array<double, 3>& c) {
    for (double v : c)
        if (!std::isfinite(v) || v < 0.0 || v > 1.0)
            throw std::invalid_argument("objective component out of [0,1]");
    ObjectiveVector out;
    out.canonical_ = c;
    return out;
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
    bool strict = false;
    for (std::size_t i = 0; i < 3; ++i) {
        if (a.canonical()[i] > b.canonical()[i]) return false;
        if (a.canonical()[i] < b.canonical()[i]) strict = true;
    }
    return strict;
}

ValidationReport validate_suite(const CoverageMatrix& cov, const ChangeHistory& hist) {
    ValidationReport report;
    std::map<BenchmarkId, int> counts;
    for (const auto& [id, _] : cov.benchmarks()) ++counts[id];
    for (const auto& [id, n] : counts) {
        if (n > 1) {
            report.duplicate_ids.push_back(id);
            report.notes.push_back("duplicate benchmark id: " + id.to_string());
        }
    }
    report.ok = report.duplicate_ids.empty();
    for (const auto& [id, _] : cov.benchmarks()) {
        if (hist.find(id) == nullptr) {
            report.missing_history.push_back(id);
            report.notes.push_back("no history for " + id.to_string() +
                                   " (historical change defaults to 0)");
        }
    }
    if (cov.universe().empty()) {
        report.empty_universe = true;
        report.notes.push_back("coverage universe is empty");
    }
    return report;
}

std::vector<BenchmarkId> canonical_index(const CoverageMatrix& cov) {
    std::vector<BenchmarkId> ids;
    ids.reserve(cov.size());
    for (const auto& [id, _] : cov.benchmarks()) ids.push_back(id);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::optional<std::size_t> index_of(const std::vector<BenchmarkId>& index,
                                    const BenchmarkId& id) {
    const auto it = std::lower_bound(index.begin(), index.end(), id);
    if (it == index.end() || !(*it == id)) return std::nullopt;
    return static_cast<std::size_t>(it - index.begin());
}

}  // namespace benchprio
