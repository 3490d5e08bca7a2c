#include "hopnet/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hopnet/errors.hpp"

namespace hopnet {

namespace {

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Bytes >= 0x80 belong to multi-byte UTF-8 characters and count as word
// characters; only ASCII punctuation is stripped.
bool is_word_byte(unsigned char c) { return c >= 0x80 || (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

void append_tokens(std::string_view text, WordList& out) {
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) {
            std::string token = normalize_token(text.substr(start, i - start));
            if (!token.empty()) out.push_back(std::move(token));
        }
    }
}

}  // namespace

void validate_utf8(std::string_view text) {
    const auto* s = reinterpret_cast<const unsigned char*>(text.data());
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        unsigned char c = s[i];
        if (c < 0x80) {
            ++i;
            continue;
        }
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            throw DecodeError(i);
        }
        if (i + len > n) throw DecodeError(i);
        for (std::size_t k = 1; k < len; ++k) {
            if ((s[i + k] & 0xC0) != 0x80) throw DecodeError(i);
            cp = (cp << 6) | (s[i + k] & 0x3F);
        }
        const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
        if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) throw DecodeError(i);
        i += len;
    }
}

std::string normalize_token(std::string_view token) {
    std::size_t begin = 0;
    std::size_t end = token.size();
    while (begin < end && !is_word_byte(static_cast<unsigned char>(token[begin]))) ++begin;
    while (end > begin && !is_word_byte(static_cast<unsigned char>(token[end - 1]))) --end;
    std::string out(token.substr(begin, end - begin));
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::vector<WordList> tokenize_sentences(std::string_view raw_text, const TokenizerConfig& config) {
    std::vector<WordList> sentences;
    auto flush = [&](std::string_view text) {
        WordList words;
        append_tokens(text, words);
        if (!words.empty()) sentences.push_back(std::move(words));
    };

    if (config.one_sentence_per_line) {
        std::size_t start = 0;
        while (start <= raw_text.size()) {
            std::size_t nl = raw_text.find('\n', start);
            if (nl == std::string_view::npos) nl = raw_text.size();
            flush(raw_text.substr(start, nl - start));
            start = nl + 1;
        }
        return sentences;
    }

    std::size_t start = 0;
    for (std::size_t i = 0; i < raw_text.size(); ++i) {
        if (config.terminators.find(raw_text[i]) == std::string::npos) continue;
        const bool boundary = i + 1 == raw_text.size() || is_space(static_cast<unsigned char>(raw_text[i + 1]));
        if (!boundary) continue;
        flush(raw_text.substr(start, i + 1 - start));
        start = i + 1;
    }
    if (start < raw_text.size()) flush(raw_text.substr(start));
    return sentences;
}

Stoplist parse_stoplist(std::string_view text) {
    Stoplist stoplist;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        start = nl + 1;

        std::size_t b = 0;
        while (b < line.size() && is_space(static_cast<unsigned char>(line[b]))) ++b;
        if (b == line.size() || line[b] == '#') continue;
        std::string word = normalize_token(line.substr(b));
        if (!word.empty()) stoplist.insert(std::move(word));
    }
    return stoplist;
}

Stoplist load_stoplist(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open stoplist '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::string text = buffer.str();
    validate_utf8(text);
    return parse_stoplist(text);
}

WordList remove_function_words(const WordList& sentence, const Stoplist& stoplist) {
    WordList kept;
    kept.reserve(sentence.size());
    for (const auto& word : sentence) {
        if (!stoplist.contains(word)) kept.push_back(word);
    }
    return kept;
}

FilteredCorpus filter_corpus(const std::vector<WordList>& sentences, const Stoplist& stoplist) {
    FilteredCorpus result;
    for (const auto& sentence : sentences) {
        WordList kept = remove_function_words(sentence, stoplist);
        result.tokens_total += sentence.size();
        result.tokens_removed += sentence.size() - kept.size();
        if (kept.empty()) {
            ++result.sentences_dropped;
        } else {
            result.sentences.push_back(std::move(kept));
        }
    }
    return result;
}

Lexicon Lexicon::from_words(std::vector<std::string> words) {
    Lexicon lexicon;
    lexicon.index_.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (!lexicon.index_.emplace(words[i], i).second) throw DataError("duplicate lexicon word '" + words[i] + "'");
    }
    lexicon.words_ = std::move(words);
    return lexicon;
}

std::optional<std::size_t> Lexicon::find(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Lexicon placeholder_lexicon(std::size_t units) {
    std::vector<std::string> words;
    words.reserve(units);
    for (std::size_t i = 0; i < units; ++i) words.push_back("w" + std::to_string(i));
    return Lexicon::from_words(std::move(words));
}

Lexicon build_lexicon(const std::vector<WordList>& sentences) {
    std::vector<std::string> words;
    std::unordered_set<std::string> seen;
    for (const auto& sentence : sentences) {
        for (const auto& word : sentence) {
            if (seen.insert(word).second) words.push_back(word);
        }
    }
    if (words.empty()) throw DataError("empty lexicon");
    return Lexicon::from_words(std::move(words));
}

Pattern::Pattern(BitVector bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
        if (b > 1) throw DataError("pattern bits must be 0 or 1");
    }
}

Pattern Pattern::from_indices(std::size_t units, std::span<const std::size_t> indices) {
    Pattern p(units);
    for (std::size_t i : indices) {
        if (i >= units) {
            throw DataError("bit index " + std::to_string(i) + " out of range for " + std::to_string(units) + " units");
        }
        p.bits_[i] = 1;
    }
    return p;
}

std::vector<std::size_t> Pattern::active_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) out.push_back(i);
    }
    return out;
}

std::size_t Pattern::active_count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

PatternSet::PatternSet(Lexicon lexicon, std::vector<Pattern> patterns)
    : lexicon_(std::move(lexicon)), patterns_(std::move(patterns)) {
    if (patterns_.empty()) throw DataError("pattern set must contain at least one pattern");
    for (const auto& p : patterns_) {
        if (p.size() != lexicon_.size()) {
            throw DataError("pattern length " + std::to_string(p.size()) + " does not match lexicon size " +
                            std::to_string(lexicon_.size()));
        }
    }
}

Pattern encode(const WordList& sentence, const Lexicon& lexicon, UnknownWordPolicy policy) {
    Pattern p(lexicon.size());
    for (const auto& word : sentence) {
        if (auto idx = lexicon.find(word)) {
            p.set(*idx, true);
        } else if (policy == UnknownWordPolicy::error) {
            throw DataError("word not in lexicon: " + word);
        }
    }
    return p;
}

WordList decode(const Pattern& pattern, const Lexicon& lexicon) {
    if (pattern.size() != lexicon.size()) throw DataError("pattern length does not match lexicon size");
    WordList words;
    for (std::size_t i : pattern.active_indices()) words.push_back(lexicon.word(i));
    return words;
}

CorpusStats corpus_stats(const std::vector<WordList>& sentences, std::size_t sample_stride) {
    if (sample_stride == 0) throw DataError("sample stride must be >= 1");
    CorpusStats stats;
    stats.sentence_count = sentences.size();
    std::unordered_set<std::string> seen;
    std::size_t tokens = 0;
    for (std::size_t k = 0; k < sentences.size(); ++k) {
        tokens += sentences[k].size();
        for (const auto& word : sentences[k]) seen.insert(word);
        const std::size_t seen_sentences = k + 1;
        if (seen_sentences % sample_stride == 0 || seen_sentences == sentences.size()) {
            stats.growth_curve.push_back({seen_sentences, seen.size()});
        }
    }
    stats.lexicon_size = seen.size();
    stats.mean_content_length =
        sentences.empty() ? 0.0 : static_cast<double>(tokens) / static_cast<double>(sentences.size());
    return stats;
}

PowerLawFit fit_growth_curve(std::span<const GrowthSample> curve) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (const auto& s : curve) {
        if (s.sentences_seen == 0 || s.lexicon_size == 0) continue;
        const double x = std::log(static_cast<double>(s.sentences_seen));
        const double y = std::log(static_cast<double>(s.lexicon_size));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (m < 2 || denom <= 0.0) throw DataError("growth curve needs at least two distinct sample points");
    PowerLawFit fit;
    fit.exponent = (static_cast<double>(m) * sxy - sx * sy) / denom;
    fit.scale = std::exp((sy - fit.exponent * sx) / static_cast<double>(m));
    return fit;
}

PreparedCorpus prepare_corpus(std::string_view raw_text, const Stoplist& stoplist, const TokenizerConfig& config,
                              std::size_t sample_stride) {
    validate_utf8(raw_text);
    FilteredCorpus filtered = filter_corpus(tokenize_sentences(raw_text, config), stoplist);
    Lexicon lexicon = build_lexicon(filtered.sentences);
    std::vector<Pattern> patterns;
    patterns.reserve(filtered.sentences.size());
    for (const auto& sentence : filtered.sentences) patterns.push_back(encode(sentence, lexicon));
    CorpusStats stats = corpus_stats(filtered.sentences, sample_stride);
    PatternSet set(std::move(lexicon), std::move(patterns));
    return PreparedCorpus{std::move(filtered), std::move(set), std::move(stats)};
}

}  // namespace hopnet
