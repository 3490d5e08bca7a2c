// OpenMP kernels. Serial counterparts live in reference.cpp.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "hopnet/network.hpp"

namespace hopnet {

std::vector<CooccurrenceEntry> cooccurrence_counts(std::span<const Pattern> patterns, std::size_t units) {
    std::vector<std::vector<std::uint32_t>> active(patterns.size());
    std::vector<std::vector<std::uint32_t>> containing(units);
    for (std::size_t mu = 0; mu < patterns.size(); ++mu) {
        const auto& bits = patterns[mu].bits();
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (!bits[i]) continue;
            active[mu].push_back(static_cast<std::uint32_t>(i));
            containing[i].push_back(static_cast<std::uint32_t>(mu));
        }
    }

    // Row i gathers counts for columns j > i from the patterns containing i.
    std::vector<std::vector<CooccurrenceEntry>> rows(units);
    const auto n_rows = static_cast<std::int64_t>(units);
#pragma omp parallel
    {
        std::vector<std::uint32_t> scratch(units, 0);
        std::vector<std::uint32_t> touched;
#pragma omp for schedule(dynamic, 16)
        for (std::int64_t r = 0; r < n_rows; ++r) {
            const auto i = static_cast<std::uint32_t>(r);
            for (std::uint32_t mu : containing[i]) {
                const auto& members = active[mu];
                auto it = std::upper_bound(members.begin(), members.end(), i);
                for (; it != members.end(); ++it) {
                    if (scratch[*it]++ == 0) touched.push_back(*it);
                }
            }
            std::sort(touched.begin(), touched.end());
            auto& row = rows[i];
            row.reserve(touched.size());
            for (std::uint32_t j : touched) {
                row.push_back({i, j, scratch[j]});
                scratch[j] = 0;
            }
            touched.clear();
        }
    }

    std::size_t total = 0;
    for (const auto& row : rows) total += row.size();
    std::vector<CooccurrenceEntry> out;
    out.reserve(total);
    for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
    return out;
}

}  // namespace hopnet
