#pragma once

// Serial reference implementations of the parallel kernels. Kept for
// equivalence tests and benchmarks.

#include <cstddef>
#include <span>
#include <vector>

#include "hopnet/experiments.hpp"
#include "hopnet/network.hpp"

namespace hopnet::reference {

/// Pairwise enumeration over each pattern's active bits.
std::vector<CooccurrenceEntry> cooccurrence_counts(std::span<const Pattern> patterns, std::size_t units);

/// Single-threaded run_experiment; must match the parallel result exactly.
ExperimentResult run_experiment(const ExperimentPlan& plan, const PatternSet& patterns);

}  // namespace hopnet::reference
