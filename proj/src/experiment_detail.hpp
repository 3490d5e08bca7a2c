#pragma once

// Task planning and aggregation shared by the parallel experiment runner and
// its serial reference.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hopnet/experiments.hpp"

namespace hopnet::detail {

struct TrialTask {
    std::size_t level = 0;
    std::size_t pattern = 0;
    std::uint64_t noise_seed = 0;
    std::uint64_t recall_seed = 0;
};

struct TrialRecord {
    BitErrors errors;
    std::size_t sweeps = 0;
    bool converged = false;
};

/// Tasks ordered by (noise level, trial, slot). Pattern samples and seeds
/// depend on (trial, slot) only, so every noise level sees the same probes
/// up to the flip threshold.
std::vector<TrialTask> plan_tasks(const ExperimentPlan& plan, std::size_t pattern_count);

TrialRecord run_task(const TrialTask& task, const ExperimentPlan& plan, const PatternSet& patterns,
                     const TrainedNetwork& network, const std::vector<double>& external);

/// Validates the plan against the pattern set and trains the network.
TrainedNetwork prepare_network(const ExperimentPlan& plan, const PatternSet& patterns);

ExperimentResult aggregate(const ExperimentPlan& plan, const std::vector<TrialRecord>& records,
                           const MatrixCharacteristics& characteristics);

}  // namespace hopnet::detail
