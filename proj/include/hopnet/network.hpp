#pragma once

// Discrete Hopfield network with Hebbian storage and a global inhibitor.
//
// Weights are T_ij = C_ij / N where C_ij counts the stored patterns in which
// units i and j are both active. Every other off-diagonal entry is -J/N.
// Only the positive counts are stored; the inhibitor is applied analytically:
//
//   sum_{j != i} T_ij V_j = (sum_{j in pos(i)} (C_ij + J) V_j - J (A - V_i)) / N
//
// where A is the number of active units.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hopnet/corpus.hpp"

namespace hopnet {

/// One stored cooccurrence count, upper triangle (row < col).
struct CooccurrenceEntry {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    std::uint32_t count = 0;

    bool operator==(const CooccurrenceEntry&) const = default;
};

/// Symmetric N x N weight matrix, zero diagonal. Positive entries are kept in
/// compressed rows holding both triangles.
class WeightMatrix {
public:
    WeightMatrix() = default;

    /// Entries must have row < col < units and count >= 1; duplicates are
    /// rejected. Throws DataError.
    static WeightMatrix from_entries(std::size_t units, double inhibitor_strength,
                                     std::vector<CooccurrenceEntry> entries);

    std::size_t size() const noexcept { return units_; }
    double inhibitor_strength() const noexcept { return inhibitor_; }

    /// Raw cooccurrence count C_ij (0 on the diagonal and for absent pairs).
    std::uint32_t count(std::size_t i, std::size_t j) const;
    /// T_ij including the inhibitor.
    double weight(std::size_t i, std::size_t j) const;

    std::span<const std::uint32_t> neighbors(std::size_t i) const;
    std::span<const std::uint32_t> neighbor_counts(std::size_t i) const;

    /// Number of ordered (i, j) pairs with a positive count.
    std::size_t positive_entries() const noexcept { return cols_.size(); }

    /// Upper-triangle entries sorted by (row, col).
    std::vector<CooccurrenceEntry> entries() const;

    /// sum_{j != i} T_ij V_j given the total number of active units in V.
    double internal_field(std::span<const std::uint8_t> outputs, std::size_t active_total, std::size_t i) const;

    bool operator==(const WeightMatrix&) const = default;

private:
    std::size_t units_ = 0;
    double inhibitor_ = 0.0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::uint32_t> cols_;
    std::vector<std::uint32_t> counts_;
};

struct ThresholdPolicy {
    /// u = theta_fraction * mean in-pattern field of the stored patterns.
    double theta_fraction = 0.5;
    /// Overrides the computed constant when set.
    std::optional<double> fixed_threshold;
};

struct TrainedNetwork {
    WeightMatrix weights;
    std::vector<double> thresholds;
};

/// Upper-triangle cooccurrence counts of the patterns (parallel kernel).
std::vector<CooccurrenceEntry> cooccurrence_counts(std::span<const Pattern> patterns, std::size_t units);

/// Mean over patterns of the mean internal field at the pattern's set bits,
/// evaluated with the pattern as the state. Patterns with no set bit are
/// skipped; returns 0 if none remain.
double mean_pattern_field(const WeightMatrix& weights, std::span<const Pattern> patterns);

/// Hebbian training with zero diagonal and global inhibitor. Throws
/// DataError("degenerate network") when fewer than two units.
TrainedNetwork train(const PatternSet& patterns, double inhibitor_strength, const ThresholdPolicy& policy = {});
TrainedNetwork train(std::span<const Pattern> patterns, std::size_t units, double inhibitor_strength,
                     const ThresholdPolicy& policy = {});

/// Thresholds for an existing matrix under a policy.
std::vector<double> thresholds_for(const WeightMatrix& weights, std::span<const Pattern> patterns,
                                   const ThresholdPolicy& policy);

struct NetworkState {
    BitVector outputs;
    std::vector<double> thresholds;
    std::vector<double> external_inputs;

    /// Zero outputs and inputs, the given constant threshold.
    static NetworkState zeros(std::size_t units, double threshold = 0.0);

    std::size_t size() const noexcept { return outputs.size(); }
    std::size_t active_count() const;
};

/// N_i = sum_{j != i} T_ij V_j + I_i. Throws DataError on a bad index or
/// mismatched vector lengths.
double local_field(const NetworkState& state, const WeightMatrix& weights, std::size_t i);

/// V_i <- 1 if N_i >= U_i else 0. Returns the new bit.
bool update_unit(NetworkState& state, const WeightMatrix& weights, std::size_t i);

/// E = -1/2 sum_ij T_ij V_i V_j + sum_i U_i V_i - sum_i I_i V_i.
double energy(const NetworkState& state, const WeightMatrix& weights);

struct RecallOutcome {
    BitVector final_state;
    std::size_t sweeps_used = 0;
    std::vector<double> energy_trace;  ///< energy after each sweep
    bool converged = false;

    bool operator==(const RecallOutcome&) const = default;
};

/// Asynchronous dynamics: each sweep updates every unit once in a fresh
/// random order drawn from rng_seed. Stops after a sweep with no change
/// (converged) or after max_sweeps.
RecallOutcome recall(std::span<const std::uint8_t> initial, const WeightMatrix& weights,
                     std::span<const double> thresholds, std::span<const double> external_inputs,
                     std::uint64_t rng_seed, std::size_t max_sweeps = 100);

/// Convenience overload with zero external input.
RecallOutcome recall(std::span<const std::uint8_t> initial, const TrainedNetwork& network, std::uint64_t rng_seed,
                     std::size_t max_sweeps = 100);

/// True iff no single-unit update would change the state.
bool is_fixed_point(const NetworkState& state, const WeightMatrix& weights);

}  // namespace hopnet
