#pragma once

#include <initializer_list>
#include <set>
#include <string>
#include <vector>

#include "benchprio/core.hpp"
#include "benchprio/evaluation.hpp"
#include "benchprio/rng.hpp"

namespace testing {

inline benchprio::BenchmarkId bid(const std::string& method) {
    return benchprio::BenchmarkId{method, {}};
}

inline benchprio::CoverageMatrix make_coverage(
        std::initializer_list<std::pair<std::string, std::set<std::string>>> entries,
        const std::string& version = "v1") {
    benchprio::CoverageMatrix cov(version);
    for (const auto& [method, covered] : entries) cov.add(bid(method), covered);
    return cov;
}

inline benchprio::Ranking make_ranking(const std::vector<std::string>& methods,
                                       const std::string& strategy = "test") {
    benchprio::Ranking r;
    for (const auto& m : methods) r.order.push_back(bid(m));
    r.provenance.strategy = strategy;
    return r;
}

// Random coverage matrix for property tests: n benchmarks over m methods.
inline benchprio::CoverageMatrix random_coverage(benchprio::Rng& rng, std::size_t n,
                                                 std::size_t m) {
    benchprio::CoverageMatrix cov("rand");
    for (std::size_t b = 0; b < n; ++b) {
        std::set<std::string> covered;
        for (std::size_t j = 0; j < m; ++j)
            if (rng.bernoulli(0.4)) covered.insert("m" + std::to_string(j));
        cov.add(bid("b" + std::to_string(b)), std::move(covered));
    }
    return cov;
}

}  // namespace testing
