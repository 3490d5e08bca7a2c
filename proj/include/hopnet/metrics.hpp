#pragma once

// Summary statistics for pattern sets, weight matrices and recall quality.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hopnet/corpus.hpp"
#include "hopnet/network.hpp"

namespace hopnet {

/// Probability that a bit in the training set is 1.
double bias(std::span<const Pattern> patterns);
double bias(const PatternSet& patterns);

/// n / N. Throws DataError when N == 0.
double storage_ratio(std::size_t n, std::size_t units);

/// Ordered pairs (i, j), i != j, that cooccur at least once, divided by N.
double mean_connectivity(const WeightMatrix& weights);

/// Fraction of the matrix that is non-zero: mean_connectivity / N.
double sparsity(const WeightMatrix& weights);

/// (1/N) sum_i |a_i - b_i|. Throws DataError on length mismatch.
double hamming_fraction(std::span<const std::uint8_t> recalled, std::span<const std::uint8_t> nominated);

/// Error counts of one recalled/nominated pair split by the nominated bit.
struct BitErrors {
    std::size_t ones_errors = 0;
    std::size_t ones_total = 0;
    std::size_t zeros_errors = 0;
    std::size_t zeros_total = 0;

    std::size_t total_errors() const { return ones_errors + zeros_errors; }
};

BitErrors bit_errors(std::span<const std::uint8_t> recalled, std::span<const std::uint8_t> nominated);

/// Mean per-pattern fractional error on the 1 bits and on the 0 bits of the
/// nominated images.
struct RecallError {
    double f_b_ones = 0.0;
    double f_b_zeros = 0.0;
    std::size_t trials = 0;  ///< recalled/nominated pairs aggregated

    bool operator==(const RecallError&) const = default;
};

/// Accumulates per-pair fractions. A pair with no 1 bits (no 0 bits) in the
/// nominated image does not contribute to f_b_ones (f_b_zeros); a class with
/// no contributing pair reports 0.
class RecallErrorAccumulator {
public:
    void add(const BitErrors& errors);
    RecallError result() const;

private:
    double ones_sum_ = 0.0;
    double zeros_sum_ = 0.0;
    std::size_t ones_pairs_ = 0;
    std::size_t zeros_pairs_ = 0;
    std::size_t pairs_ = 0;
};

/// Throws DataError on empty input or mismatched lengths.
RecallError f_b_split(std::span<const BitVector> recalled, std::span<const BitVector> nominated);

struct MatrixCharacteristics {
    std::size_t units = 0;     ///< N
    std::size_t patterns = 0;  ///< n
    double alpha = 0.0;
    double sparsity = 0.0;
    double mean_connectivity = 0.0;
    double bias = 0.0;

    bool operator==(const MatrixCharacteristics&) const = default;
};

MatrixCharacteristics characterize(const PatternSet& patterns, const WeightMatrix& weights);

/// Rows N, n, alpha, s(T), c(T), Pr(xi=1); one column per named matrix.
void print_characteristics_table(std::ostream& out,
                                 std::span<const std::pair<std::string, MatrixCharacteristics>> columns);

}  // namespace hopnet
