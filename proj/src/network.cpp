#include "hopnet/network.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hopnet/errors.hpp"
#include "hopnet/random.hpp"

namespace hopnet {

namespace {

void check_state(const NetworkState& state, const WeightMatrix& weights) {
    const std::size_t n = weights.size();
    if (state.outputs.size() != n || state.thresholds.size() != n || state.external_inputs.size() != n) {
        throw DataError("state vectors must have length " + std::to_string(n));
    }
}

std::size_t count_active(std::span<const std::uint8_t> bits) {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; }));
}

}  // namespace

// --- WeightMatrix -----------------------------------------------------------

WeightMatrix WeightMatrix::from_entries(std::size_t units, double inhibitor_strength,
                                        std::vector<CooccurrenceEntry> entries) {
    if (inhibitor_strength < 0.0) throw DataError("inhibitor strength must be >= 0");
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });

    std::vector<std::size_t> degree(units, 0);
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& e = entries[k];
        if (e.row >= e.col || e.col >= units) {
            throw DataError("invalid matrix entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) + ")");
        }
        if (e.count == 0) throw DataError("matrix entry counts must be >= 1");
        if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col) {
            throw DataError("duplicate matrix entry (" + std::to_string(e.row) + ", " + std::to_string(e.col) + ")");
        }
        ++degree[e.row];
        ++degree[e.col];
    }

    WeightMatrix m;
    m.units_ = units;
    m.inhibitor_ = inhibitor_strength;
    m.row_offsets_.assign(units + 1, 0);
    for (std::size_t i = 0; i < units; ++i) m.row_offsets_[i + 1] = m.row_offsets_[i] + degree[i];
    m.cols_.resize(m.row_offsets_[units]);
    m.counts_.resize(m.row_offsets_[units]);

    // Lower-triangle entries of row i come from earlier rows (sorted by row),
    // upper-triangle ones from row i itself (sorted by col), so filling in
    // this order leaves every row sorted.
    std::vector<std::size_t> fill(m.row_offsets_.begin(), m.row_offsets_.end() - 1);
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> lower(units);
    for (const auto& e : entries) lower[e.col].emplace_back(e.row, e.count);
    std::size_t next = 0;
    for (std::size_t i = 0; i < units; ++i) {
        for (auto [col, count] : lower[i]) {
            m.cols_[fill[i]] = col;
            m.counts_[fill[i]++] = count;
        }
        for (; next < entries.size() && entries[next].row == i; ++next) {
            m.cols_[fill[i]] = entries[next].col;
            m.counts_[fill[i]++] = entries[next].count;
        }
    }
    return m;
}

std::span<const std::uint32_t> WeightMatrix::neighbors(std::size_t i) const {
    return {cols_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
}

std::span<const std::uint32_t> WeightMatrix::neighbor_counts(std::size_t i) const {
    return {counts_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
}

std::uint32_t WeightMatrix::count(std::size_t i, std::size_t j) const {
    if (i >= units_ || j >= units_) throw DataError("matrix index out of range");
    auto cols = neighbors(i);
    auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<std::uint32_t>(j));
    if (it == cols.end() || *it != j) return 0;
    return neighbor_counts(i)[static_cast<std::size_t>(it - cols.begin())];
}

double WeightMatrix::weight(std::size_t i, std::size_t j) const {
    if (i == j) {
        if (i >= units_) throw DataError("matrix index out of range");
        return 0.0;
    }
    const auto c = count(i, j);
    const double n = static_cast<double>(units_);
    return c > 0 ? static_cast<double>(c) / n : -inhibitor_ / n;
}

std::vector<CooccurrenceEntry> WeightMatrix::entries() const {
    std::vector<CooccurrenceEntry> out;
    out.reserve(cols_.size() / 2);
    for (std::size_t i = 0; i < units_; ++i) {
        auto cols = neighbors(i);
        auto counts = neighbor_counts(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] > i) out.push_back({static_cast<std::uint32_t>(i), cols[k], counts[k]});
        }
    }
    return out;
}

double WeightMatrix::internal_field(std::span<const std::uint8_t> outputs, std::size_t active_total,
                                    std::size_t i) const {
    std::int64_t count_sum = 0;
    std::int64_t active_neighbors = 0;
    const std::size_t begin = row_offsets_[i];
    const std::size_t end = row_offsets_[i + 1];
    for (std::size_t k = begin; k < end; ++k) {
        if (outputs[cols_[k]]) {
            count_sum += counts_[k];
            ++active_neighbors;
        }
    }
    const auto active_others = static_cast<std::int64_t>(active_total) - (outputs[i] ? 1 : 0);
    return (static_cast<double>(count_sum) + inhibitor_ * static_cast<double>(active_neighbors - active_others)) /
           static_cast<double>(units_);
}

// --- training ---------------------------------------------------------------

double mean_pattern_field(const WeightMatrix& weights, std::span<const Pattern> patterns) {
    double total = 0.0;
    std::size_t used = 0;
    for (const auto& p : patterns) {
        const auto active = p.active_indices();
        if (active.empty()) continue;
        double sum = 0.0;
        for (std::size_t i : active) sum += weights.internal_field(p.bits(), active.size(), i);
        total += sum / static_cast<double>(active.size());
        ++used;
    }
    return used == 0 ? 0.0 : total / static_cast<double>(used);
}

std::vector<double> thresholds_for(const WeightMatrix& weights, std::span<const Pattern> patterns,
                                   const ThresholdPolicy& policy) {
    const double u = policy.fixed_threshold ? *policy.fixed_threshold
                                            : policy.theta_fraction * mean_pattern_field(weights, patterns);
    return std::vector<double>(weights.size(), u);
}

TrainedNetwork train(std::span<const Pattern> patterns, std::size_t units, double inhibitor_strength,
                     const ThresholdPolicy& policy) {
    if (units < 2) throw DataError("degenerate network");
    if (patterns.empty()) throw DataError("training needs at least one pattern");
    if (inhibitor_strength < 0.0) throw DataError("inhibitor strength must be >= 0");
    for (const auto& p : patterns) {
        if (p.size() != units) throw DataError("pattern length does not match network size");
    }
    TrainedNetwork net;
    net.weights = WeightMatrix::from_entries(units, inhibitor_strength, cooccurrence_counts(patterns, units));
    net.thresholds = thresholds_for(net.weights, patterns, policy);
    return net;
}

TrainedNetwork train(const PatternSet& patterns, double inhibitor_strength, const ThresholdPolicy& policy) {
    return train(patterns.patterns(), patterns.units(), inhibitor_strength, policy);
}

// --- dynamics ---------------------------------------------------------------

NetworkState NetworkState::zeros(std::size_t units, double threshold) {
    return NetworkState{BitVector(units, 0), std::vector<double>(units, threshold), std::vector<double>(units, 0.0)};
}

std::size_t NetworkState::active_count() const { return count_active(outputs); }

double local_field(const NetworkState& state, const WeightMatrix& weights, std::size_t i) {
    check_state(state, weights);
    if (i >= weights.size()) throw DataError("unit index " + std::to_string(i) + " out of range");
    return weights.internal_field(state.outputs, state.active_count(), i) + state.external_inputs[i];
}

bool update_unit(NetworkState& state, const WeightMatrix& weights, std::size_t i) {
    const bool on = local_field(state, weights, i) >= state.thresholds[i];
    state.outputs[i] = on ? 1 : 0;
    return on;
}

double energy(const NetworkState& state, const WeightMatrix& weights) {
    check_state(state, weights);
    const std::size_t n = weights.size();
    std::int64_t count_sum = 0;
    std::int64_t positive_pairs = 0;
    std::int64_t active = 0;
    double linear = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!state.outputs[i]) continue;
        ++active;
        linear += state.thresholds[i] - state.external_inputs[i];
        auto cols = weights.neighbors(i);
        auto counts = weights.neighbor_counts(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (state.outputs[cols[k]]) {
                count_sum += counts[k];
                ++positive_pairs;
            }
        }
    }
    // Ordered active pairs without a positive count carry -J/N each.
    const double quadratic =
        (static_cast<double>(count_sum) +
         weights.inhibitor_strength() * static_cast<double>(positive_pairs - active * (active - 1))) /
        static_cast<double>(n);
    return -0.5 * quadratic + linear;
}

bool is_fixed_point(const NetworkState& state, const WeightMatrix& weights) {
    check_state(state, weights);
    const std::size_t active = state.active_count();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double field = weights.internal_field(state.outputs, active, i) + state.external_inputs[i];
        if ((field >= state.thresholds[i]) != (state.outputs[i] != 0)) return false;
    }
    return true;
}

RecallOutcome recall(std::span<const std::uint8_t> initial, const WeightMatrix& weights,
                     std::span<const double> thresholds, std::span<const double> external_inputs,
                     std::uint64_t rng_seed, std::size_t max_sweeps) {
    const std::size_t n = weights.size();
    if (initial.size() != n || thresholds.size() != n || external_inputs.size() != n) {
        throw DataError("recall vectors must have length " + std::to_string(n));
    }
    if (max_sweeps == 0) throw DataError("max_sweeps must be >= 1");

    NetworkState state{BitVector(initial.begin(), initial.end()),
                       std::vector<double>(thresholds.begin(), thresholds.end()),
                       std::vector<double>(external_inputs.begin(), external_inputs.end())};
    for (auto& b : state.outputs) b = b ? 1 : 0;
    std::size_t active = state.active_count();

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    Rng rng(rng_seed);

    RecallOutcome outcome;
    while (outcome.sweeps_used < max_sweeps) {
        rng.shuffle(std::span<std::uint32_t>(order));
        std::size_t changes = 0;
        for (std::uint32_t i : order) {
            const double field = weights.internal_field(state.outputs, active, i) + state.external_inputs[i];
            const std::uint8_t next = field >= state.thresholds[i] ? 1 : 0;
            if (next != state.outputs[i]) {
                state.outputs[i] = next;
                if (next) {
                    ++active;
                } else {
                    --active;
                }
                ++changes;
            }
        }
        ++outcome.sweeps_used;
        outcome.energy_trace.push_back(energy(state, weights));
        if (changes == 0) {
            outcome.converged = true;
            break;
        }
    }
    outcome.final_state = std::move(state.outputs);
    return outcome;
}

RecallOutcome recall(std::span<const std::uint8_t> initial, const TrainedNetwork& network, std::uint64_t rng_seed,
                     std::size_t max_sweeps) {
    const std::vector<double> external(network.weights.size(), 0.0);
    return recall(initial, network.weights, network.thresholds, external, rng_seed, max_sweeps);
}

}  // namespace hopnet
