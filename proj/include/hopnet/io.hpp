#pragma once

// Plain-text file formats:
//
//   lexicon   line k holds the word with index k
//   patterns  "N n", then n lines of sorted set-bit indices
//   matrix    "N J", then "i j count" per positive pair (i < j, sorted),
//             then "U u" for the uniform threshold

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hopnet/corpus.hpp"
#include "hopnet/network.hpp"

namespace hopnet {

/// Throws IoError naming the path and the OS error.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

/// Splits on '\n', dropping a trailing '\r' from each line and the empty
/// piece after a final newline.
std::vector<std::string_view> split_lines(std::string_view text);

std::string format_lexicon(const Lexicon& lexicon);
Lexicon parse_lexicon(std::string_view text);

struct PatternFile {
    std::size_t units = 0;
    std::vector<Pattern> patterns;
};

std::string format_patterns(const PatternSet& patterns);
PatternFile parse_patterns(std::string_view text);

/// Pairs a pattern file with a lexicon (checking sizes) or with placeholder
/// words when none is given.
PatternSet make_pattern_set(PatternFile file, std::optional<Lexicon> lexicon = std::nullopt);

/// Throws DataError if the thresholds are not one uniform constant.
std::string format_network(const TrainedNetwork& network);
TrainedNetwork parse_network(std::string_view text);

}  // namespace hopnet
