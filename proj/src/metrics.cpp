#include "hopnet/metrics.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "hopnet/errors.hpp"

namespace hopnet {

double bias(std::span<const Pattern> patterns) {
    if (patterns.empty()) throw DataError("bias of an empty pattern set");
    std::size_t ones = 0;
    std::size_t bits = 0;
    for (const auto& p : patterns) {
        ones += p.active_count();
        bits += p.size();
    }
    return bits == 0 ? 0.0 : static_cast<double>(ones) / static_cast<double>(bits);
}

double bias(const PatternSet& patterns) { return bias(patterns.patterns()); }

double storage_ratio(std::size_t n, std::size_t units) {
    if (units == 0) throw DataError("storage ratio undefined for N = 0");
    return static_cast<double>(n) / static_cast<double>(units);
}

double mean_connectivity(const WeightMatrix& weights) {
    if (weights.size() == 0) return 0.0;
    return static_cast<double>(weights.positive_entries()) / static_cast<double>(weights.size());
}

double sparsity(const WeightMatrix& weights) {
    if (weights.size() == 0) return 0.0;
    return mean_connectivity(weights) / static_cast<double>(weights.size());
}

double hamming_fraction(std::span<const std::uint8_t> recalled, std::span<const std::uint8_t> nominated) {
    if (recalled.size() != nominated.size()) throw DataError("hamming distance of vectors with different lengths");
    if (recalled.empty()) return 0.0;
    std::size_t diff = 0;
    for (std::size_t i = 0; i < recalled.size(); ++i) diff += (recalled[i] != 0) != (nominated[i] != 0);
    return static_cast<double>(diff) / static_cast<double>(recalled.size());
}

BitErrors bit_errors(std::span<const std::uint8_t> recalled, std::span<const std::uint8_t> nominated) {
    if (recalled.size() != nominated.size()) throw DataError("recalled and nominated vectors differ in length");
    BitErrors e;
    for (std::size_t i = 0; i < recalled.size(); ++i) {
        const bool wrong = (recalled[i] != 0) != (nominated[i] != 0);
        if (nominated[i]) {
            ++e.ones_total;
            e.ones_errors += wrong;
        } else {
            ++e.zeros_total;
            e.zeros_errors += wrong;
        }
    }
    return e;
}

void RecallErrorAccumulator::add(const BitErrors& errors) {
    ++pairs_;
    if (errors.ones_total > 0) {
        ones_sum_ += static_cast<double>(errors.ones_errors) / static_cast<double>(errors.ones_total);
        ++ones_pairs_;
    }
    if (errors.zeros_total > 0) {
        zeros_sum_ += static_cast<double>(errors.zeros_errors) / static_cast<double>(errors.zeros_total);
        ++zeros_pairs_;
    }
}

RecallError RecallErrorAccumulator::result() const {
    RecallError r;
    r.f_b_ones = ones_pairs_ == 0 ? 0.0 : ones_sum_ / static_cast<double>(ones_pairs_);
    r.f_b_zeros = zeros_pairs_ == 0 ? 0.0 : zeros_sum_ / static_cast<double>(zeros_pairs_);
    r.trials = pairs_;
    return r;
}

RecallError f_b_split(std::span<const BitVector> recalled, std::span<const BitVector> nominated) {
    if (recalled.empty()) throw DataError("f_b of an empty recall list");
    if (recalled.size() != nominated.size()) throw DataError("recalled and nominated lists differ in length");
    RecallErrorAccumulator acc;
    for (std::size_t k = 0; k < recalled.size(); ++k) acc.add(bit_errors(recalled[k], nominated[k]));
    return acc.result();
}

MatrixCharacteristics characterize(const PatternSet& patterns, const WeightMatrix& weights) {
    if (patterns.units() != weights.size()) throw DataError("pattern set and matrix sizes differ");
    MatrixCharacteristics c;
    c.units = patterns.units();
    c.patterns = patterns.count();
    c.alpha = storage_ratio(c.patterns, c.units);
    c.mean_connectivity = mean_connectivity(weights);
    c.sparsity = sparsity(weights);
    c.bias = bias(patterns);
    return c;
}

void print_characteristics_table(std::ostream& out,
                                 std::span<const std::pair<std::string, MatrixCharacteristics>> columns) {
    constexpr int label_width = 10;
    constexpr int col_width = 10;
    auto row = [&](const std::string& label, auto&& cell) {
        out << std::left << std::setw(label_width) << label << std::right;
        for (const auto& [name, c] : columns) out << std::setw(col_width) << cell(c);
        out << '\n';
    };
    auto fixed = [](double v, int digits) {
        std::ostringstream s;
        s << std::fixed << std::setprecision(digits) << v;
        return s.str();
    };
    out << std::left << std::setw(label_width) << "Matrix" << std::right;
    for (const auto& [name, c] : columns) out << std::setw(col_width) << name;
    out << '\n';
    row("N", [](const MatrixCharacteristics& c) { return std::to_string(c.units); });
    row("n", [](const MatrixCharacteristics& c) { return std::to_string(c.patterns); });
    row("alpha", [&](const MatrixCharacteristics& c) { return fixed(c.alpha, 2); });
    row("s(T)", [&](const MatrixCharacteristics& c) { return fixed(c.sparsity, 3); });
    row("c(T)", [&](const MatrixCharacteristics& c) { return fixed(c.mean_connectivity, 2); });
    row("Pr(xi=1)", [&](const MatrixCharacteristics& c) { return fixed(c.bias, 3); });
}

}  // namespace hopnet
