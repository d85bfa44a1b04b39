#pragma once

#include <cstdint>

#include "benchprio/core.hpp"

namespace benchprio {

/// Total strategy: descending covered-method count, ties in canonical order.
Ranking prioritize_total(const CoverageMatrix& cov);

/// Additional strategy: repeatedly pick the benchmark adding the most not-yet
/// covered methods; when no remaining benchmark adds anything the covered set
/// resets and selection continues. Ties: larger total coverage, then
/// canonical order.
Ranking prioritize_additional(const CoverageMatrix& cov);

/// Seeded shuffle of the canonical index; the experiment control strategy.
Ranking prioritize_random(const CoverageMatrix& cov, std::uint64_t seed);

}  // namespace benchprio
