#pragma once

// Monte Carlo auto-association experiments: noisy probes, recall trials and
// F_B-versus-noise curves.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hopnet/corpus.hpp"
#include "hopnet/metrics.hpp"
#include "hopnet/network.hpp"

namespace hopnet {

/// Flips each bit independently with probability m0. Bit i flips iff the
/// i-th uniform draw of the seeded stream is below m0, so for a fixed seed
/// the flipped set grows monotonically with m0. Throws DataError if m0 is
/// outside [0, 1].
BitVector inject_noise(std::span<const std::uint8_t> pattern, double m0, std::uint64_t rng_seed);

/// Turns off each active bit independently with probability m0; inactive
/// bits are untouched. Same seeded stream as inject_noise.
BitVector inject_deletion_noise(std::span<const std::uint8_t> pattern, double m0, std::uint64_t rng_seed);

/// n patterns of N i.i.d. bits, each 1 with probability density. The lexicon
/// holds placeholder words "w0".."w{N-1}". Throws DataError unless
/// 0 < density < 1, n >= 1 and N >= 1.
PatternSet generate_random_patterns(std::size_t n, std::size_t units, double density, std::uint64_t rng_seed);

/// Parameters of the topic-block generator, a stand-in for sentence patterns:
/// units are split into equal topic blocks, each pattern picks one topic and
/// draws most of its words from that block with Zipf-distributed popularity.
struct TopicModel {
    std::size_t topics = 20;
    double mean_length = 10.0;      ///< mean active bits per pattern
    std::size_t length_spread = 2;  ///< length uniform in mean +- spread
    double topic_share = 0.8;       ///< probability a word comes from the topic block
    double zipf_exponent = 0.5;
};

/// Throws DataError on inconsistent parameters (more topics than units,
/// lengths exceeding N, shares outside [0, 1]).
PatternSet generate_topic_patterns(std::size_t n, std::size_t units, const TopicModel& model,
                                   std::uint64_t rng_seed);

/// Uniform sample of count patterns without replacement, re-encoded over the
/// words that occur in the sample (original index order kept). Throws
/// DataError unless 1 <= count <= n.
PatternSet select_subcorpus(const PatternSet& patterns, std::size_t count, std::uint64_t rng_seed);

enum class PatternSource { corpus, random, topic };

/// flip: every bit flips with probability m0 (m0 = 1 gives the complement).
/// delete: only active bits are turned off, each with probability m0.
enum class NoiseMode { flip, remove };

struct ExperimentPlan {
    PatternSource source = PatternSource::corpus;

    // corpus source
    std::filesystem::path corpus_path;
    std::filesystem::path stoplist_path;
    bool one_sentence_per_line = false;
    std::size_t subcorpus = 0;  ///< 0 keeps every sentence

    // synthetic sources
    std::size_t units = 500;
    std::size_t patterns = 90;
    double density = 0.02;
    TopicModel topic;

    NoiseMode noise_mode = NoiseMode::flip;
    std::vector<double> noise_levels = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::size_t trials = 10;
    std::size_t patterns_per_trial = 50;
    std::uint64_t seed = 1;
    double inhibitor_strength = 10.0;
    double threshold_fraction = 0.5;
    std::optional<double> threshold;
    std::size_t max_sweeps = 100;

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
};

/// Default plan with the bundled corpus and stoplist.
ExperimentPlan default_plan();

/// key=value lines, '#' comments. Relative paths resolve against base_dir.
/// Throws ConfigError("unknown config key: <key>") and similar.
ExperimentPlan parse_plan(std::string_view text, const std::filesystem::path& base_dir = {});
ExperimentPlan load_plan(const std::filesystem::path& path);

/// Lists every key with its default value, in the config file syntax.
std::string describe_plan_keys();

struct NoiseLevelResult {
    double m0 = 0.0;
    RecallError error;
    double mean_sweeps = 0.0;
    double convergence_rate = 0.0;

    bool operator==(const NoiseLevelResult&) const = default;
};

struct ExperimentResult {
    std::vector<NoiseLevelResult> levels;
    std::size_t trials = 0;
    std::size_t patterns_per_trial = 0;
    MatrixCharacteristics characteristics;

    bool operator==(const ExperimentResult&) const = default;
};

/// Builds the pattern set named by the plan (corpus, subcorpus or generator).
PatternSet load_patterns(const ExperimentPlan& plan);

/// Trains on all patterns, then for every noise level runs `trials` trials of
/// `patterns_per_trial` recalls from noisy probes. Recall trials run in
/// parallel; the result does not depend on the thread count.
ExperimentResult run_experiment(const ExperimentPlan& plan);
ExperimentResult run_experiment(const ExperimentPlan& plan, const PatternSet& patterns);

/// Result CSV: m0,f_b_ones,f_b_zeros,mean_sweeps,convergence_rate,trials,patterns_per_trial
std::string format_results_csv(const ExperimentResult& result);
/// Parses the result CSV back. Characteristics are not part of it.
ExperimentResult parse_results_csv(std::string_view csv);
void emit_results(const ExperimentResult& result, const std::filesystem::path& path);

/// Characteristics CSV: N,n,alpha,sparsity,connectivity,bias
std::string format_characteristics_csv(const MatrixCharacteristics& c);
void emit_characteristics(const MatrixCharacteristics& c, const std::filesystem::path& path);

/// Aligned-column version of the result table.
void print_results_table(std::ostream& out, const ExperimentResult& result);

}  // namespace hopnet
