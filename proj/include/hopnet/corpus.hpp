#pragma once

// Corpus ingestion: sentence segmentation, function-word filtering, lexicon
// construction and binary sentence patterns.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hopnet {

using WordList = std::vector<std::string>;
using BitVector = std::vector<std::uint8_t>;
using Stoplist = std::unordered_set<std::string>;

struct TokenizerConfig {
    /// Characters that end a sentence when followed by whitespace or end of input.
    std::string terminators = ".!?";
    /// Input is pre-segmented: every non-empty line is one sentence.
    bool one_sentence_per_line = false;
};

/// Throws DecodeError at the first byte that is not part of a well-formed
/// UTF-8 sequence.
void validate_utf8(std::string_view text);

/// Lowercases ASCII letters and strips leading/trailing characters that are
/// neither ASCII alphanumerics nor part of a multi-byte UTF-8 sequence.
std::string normalize_token(std::string_view token);

/// Splits raw text into sentences of normalized words. Sentences that end up
/// with no tokens are dropped.
std::vector<WordList> tokenize_sentences(std::string_view raw_text, const TokenizerConfig& config = {});

/// Parses a stoplist: one word per line, blank lines and lines starting with
/// '#' ignored, entries normalized like tokens.
Stoplist parse_stoplist(std::string_view text);
Stoplist load_stoplist(const std::string& path);

WordList remove_function_words(const WordList& sentence, const Stoplist& stoplist);

struct FilteredCorpus {
    std::vector<WordList> sentences;  ///< non-empty filtered sentences only
    std::size_t tokens_total = 0;
    std::size_t tokens_removed = 0;
    std::size_t sentences_dropped = 0;  ///< sentences made only of function words

    double removed_fraction() const {
        return tokens_total == 0 ? 0.0 : static_cast<double>(tokens_removed) / static_cast<double>(tokens_total);
    }
};

FilteredCorpus filter_corpus(const std::vector<WordList>& sentences, const Stoplist& stoplist);

/// Bidirectional word <-> unit index map.
class Lexicon {
public:
    Lexicon() = default;

    /// Throws DataError on duplicate words.
    static Lexicon from_words(std::vector<std::string> words);

    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }
    const std::string& word(std::size_t index) const { return words_.at(index); }
    const std::vector<std::string>& words() const noexcept { return words_; }
    std::optional<std::size_t> find(std::string_view word) const;

    bool operator==(const Lexicon& other) const { return words_ == other.words_; }

private:
    std::vector<std::string> words_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Synthetic words "w0".."w{units-1}" for generated pattern sets.
Lexicon placeholder_lexicon(std::size_t units);

/// Indices follow first occurrence. Throws DataError("empty lexicon") when no
/// word is present at all.
Lexicon build_lexicon(const std::vector<WordList>& sentences);

/// Binary sentence vector: bit i is set iff word i of the lexicon occurs.
class Pattern {
public:
    Pattern() = default;
    explicit Pattern(std::size_t units) : bits_(units, 0) {}
    /// Throws DataError if any element is not 0 or 1.
    explicit Pattern(BitVector bits);
    /// Throws DataError on an index >= units.
    static Pattern from_indices(std::size_t units, std::span<const std::size_t> indices);

    std::size_t size() const noexcept { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool on) { bits_.at(i) = on ? 1 : 0; }
    const BitVector& bits() const noexcept { return bits_; }
    std::vector<std::size_t> active_indices() const;
    std::size_t active_count() const;

    bool operator==(const Pattern&) const = default;

private:
    BitVector bits_;
};

/// A non-empty list of equal-length patterns over one lexicon.
class PatternSet {
public:
    /// Throws DataError if patterns is empty or any length differs from the
    /// lexicon size.
    PatternSet(Lexicon lexicon, std::vector<Pattern> patterns);

    const Lexicon& lexicon() const noexcept { return lexicon_; }
    const std::vector<Pattern>& patterns() const noexcept { return patterns_; }
    std::size_t units() const noexcept { return lexicon_.size(); }
    std::size_t count() const noexcept { return patterns_.size(); }

    bool operator==(const PatternSet&) const = default;

private:
    Lexicon lexicon_;
    std::vector<Pattern> patterns_;
};

enum class UnknownWordPolicy { skip, error };

/// Multiple occurrences collapse to one bit. Unknown words are skipped or
/// raise DataError according to policy.
Pattern encode(const WordList& sentence, const Lexicon& lexicon, UnknownWordPolicy policy = UnknownWordPolicy::skip);

/// Words of the set bits, in index order.
WordList decode(const Pattern& pattern, const Lexicon& lexicon);

struct GrowthSample {
    std::size_t sentences_seen = 0;
    std::size_t lexicon_size = 0;
};

struct CorpusStats {
    std::size_t sentence_count = 0;
    std::size_t lexicon_size = 0;
    double mean_content_length = 0.0;
    std::vector<GrowthSample> growth_curve;
};

/// Growth curve sampled every sample_stride sentences; the final sentence
/// count is always sampled so the last point matches the full lexicon.
CorpusStats corpus_stats(const std::vector<WordList>& sentences, std::size_t sample_stride);

/// lexicon_size ~ scale * sentences^exponent, least squares in log-log space.
struct PowerLawFit {
    double scale = 0.0;
    double exponent = 0.0;
};

/// Needs at least two samples with distinct positive sentence counts.
PowerLawFit fit_growth_curve(std::span<const GrowthSample> curve);

struct PreparedCorpus {
    FilteredCorpus filtered;
    PatternSet patterns;
    CorpusStats stats;
};

/// Full pipeline: decode check, tokenize, filter, lexicon, encode, stats.
PreparedCorpus prepare_corpus(std::string_view raw_text, const Stoplist& stoplist,
                              const TokenizerConfig& config = {}, std::size_t sample_stride = 10);

}  // namespace hopnet
