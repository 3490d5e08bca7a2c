#include "hopnet/reference.hpp"

#include <map>
#include <utility>

#include "experiment_detail.hpp"

namespace hopnet::reference {

std::vector<CooccurrenceEntry> cooccurrence_counts(std::span<const Pattern> patterns, std::size_t /*units*/) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> counts;
    for (const auto& p : patterns) {
        const auto active = p.active_indices();
        for (std::size_t a = 0; a < active.size(); ++a) {
            for (std::size_t b = a + 1; b < active.size(); ++b) {
                ++counts[{static_cast<std::uint32_t>(active[a]), static_cast<std::uint32_t>(active[b])}];
            }
        }
    }
    std::vector<CooccurrenceEntry> out;
    out.reserve(counts.size());
    for (const auto& [key, count] : counts) out.push_back({key.first, key.second, count});
    return out;
}

ExperimentResult run_experiment(const ExperimentPlan& plan, const PatternSet& patterns) {
    const TrainedNetwork network = detail::prepare_network(plan, patterns);
    const auto tasks = detail::plan_tasks(plan, patterns.count());
    const std::vector<double> external(patterns.units(), 0.0);
    std::vector<detail::TrialRecord> records;
    records.reserve(tasks.size());
    for (const auto& task : tasks) records.push_back(detail::run_task(task, plan, patterns, network, external));
    return detail::aggregate(plan, records, characterize(patterns, network.weights));
}

}  // namespace hopnet::reference
