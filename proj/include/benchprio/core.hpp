#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace benchprio {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};
struct DuplicateBenchmark : Error {
    using Error::Error;
};
struct NegativeChange : Error {
    using Error::Error;
};
struct MissingDiff : Error {
    using Error::Error;
};
struct PermutationMismatch : Error {
    using Error::Error;
};
struct EmptyFront : Error {
    using Error::Error;
};
struct ZeroTotalChange : Error {
    using Error::Error;
};
struct SuiteTooSmall : Error {
    using Error::Error;
};
struct DegenerateInput : Error {
    using Error::Error;
};

/// Code element identifier (fully-qualified method name).
using MethodRef = std::string;

/// A benchmark is a method plus a concrete parameterization. Equality is on
/// the method and the full ordered parameter list; serialization sorts
/// parameters by key so ids survive file reordering.
struct BenchmarkId {
    std::string method;
    std::vector<std::pair<std::string, std::string>> params;  // insertion order

    bool operator==(const BenchmarkId& other) const {
        return method == other.method && params == other.params;
    }

    /// Params sorted by key, the canonical form used for serialization
    /// and ordering.
    std::vector<std::pair<std::string, std::string>> sorted_params() const;

    /// "k1=v1;k2=v2" with keys sorted; empty string for no params.
    std::string params_string() const;

    /// "method" or "method(k1=v1,k2=v2)".
    std::string to_string() const;

    /// Inverse of params_string. Throws ParseError on malformed pairs or
    /// duplicate keys.
    static BenchmarkId from_parts(std::string method, const std::string& params_string);

    bool has_unique_keys() const;
};

/// Total order: method first, then canonical params, then raw param order.
bool operator<(const BenchmarkId& a, const BenchmarkId& b);

/// Per-benchmark covered-method sets for one project version. Built by
/// appending entries (duplicates representable, flagged by validate_suite);
/// immutable once loaded.
class CoverageMatrix {
public:
    using Entry = std::pair<BenchmarkId, std::set<MethodRef>>;

    explicit CoverageMatrix(std::string version) : version_(std::move(version)) {}

    void add(BenchmarkId id, std::set<MethodRef> covered) {
        for (const auto& m : covered) universe_.insert(m);
        entries_.emplace_back(std::move(id), std::move(covered));
    }

    const std::string& version() const { return version_; }
    const std::vector<Entry>& benchmarks() const { return entries_; }
    const std::set<MethodRef>& universe() const { return universe_; }
    std::size_t size() const { return entries_.size(); }

    const std::set<MethodRef>* find(const BenchmarkId& id) const {
        for (const auto& [bid, cov] : entries_)
            if (bid == id) return &cov;
        return nullptr;
    }

private:
    std::string version_;
    std::vector<Entry> entries_;
    std::set<MethodRef> universe_;
};

/// Per-benchmark performance-change sizes (percent, direction discarded)
/// across prior versions.
class ChangeHistory {
public:
    using Entry = std::pair<std::string, double>;  // version label, change >= 0

    /// Throws NegativeChange for change < 0 and Error on a duplicated
    /// version label within one benchmark.
    void add(const BenchmarkId& id, std::string version, double change);

    const std::vector<Entry>* find(const BenchmarkId& id) const;
    std::size_t size() const { return entries_.size(); }
    const std::vector<std::pair<BenchmarkId, std::vector<Entry>>>& entries() const {
        return entries_;
    }

private:
    std::vector<std::pair<BenchmarkId, std::vector<Entry>>> entries_;
};

struct Provenance {
    std::string strategy;
    std::uint64_t seed = 0;
    std::string note;
};

/// A permutation of the whole suite, the unit of prioritization output.
struct Ranking {
    std::vector<BenchmarkId> order;
    Provenance provenance;
};

/// The three fitness values of a candidate ranking. Stored canonically as
/// all-minimization (1-coverage, overlap, 1-hist_change); accessors expose
/// the maximize/minimize/maximize orientation.
class ObjectiveVector {
public:
    ObjectiveVector() : canonical_{1.0, 0.0, 1.0} {}

    static ObjectiveVector from_scores(double coverage, double overlap, double hist_change);
    static ObjectiveVector from_canonical(const std::array<double, 3>& c);

    double coverage() const { return 1.0 - canonical_[0]; }
    double overlap() const { return canonical_[1]; }
    double hist_change() const { return 1.0 - canonical_[2]; }
    const std::array<double, 3>& canonical() const { return canonical_; }

    bool operator==(const ObjectiveVector& other) const {
        return canonical_ == other.canonical_;
    }

private:
    std::array<double, 3> canonical_;
};

/// Strict Pareto dominance in canonical minimization space.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

struct ValidationReport {
    bool ok = true;
    bool empty_universe = false;
    std::vector<BenchmarkId> duplicate_ids;
    std::vector<BenchmarkId> missing_history;  // legal; contribute change 0
    std::vector<std::string> notes;
};

/// Report-style validation: ok=false only on duplicated BenchmarkIds.
ValidationReport validate_suite(const CoverageMatrix& cov, const ChangeHistory& hist);

/// Deterministic total order over the suite (lexicographic by method, then
/// params), mapping BenchmarkId <-> integer gene value.
std::vector<BenchmarkId> canonical_index(const CoverageMatrix& cov);

/// Position of `id` in a canonical_index result; nullopt if absent.
std::optional<std::size_t> index_of(const std::vector<BenchmarkId>& index, const BenchmarkId& id);

}  // namespace benchprio
