#include "hopnet/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "hopnet/errors.hpp"

namespace hopnet {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <typename T>
T parse_number(std::string_view field, std::string_view what, std::size_t line_no) {
    T value{};
    const char* end = field.data() + field.size();
    auto res = std::from_chars(field.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end) {
        throw DataError("line " + std::to_string(line_no) + ": invalid " + std::string(what) + " '" +
                        std::string(field) + "'");
    }
    return value;
}

std::string shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "': " + std::strerror(errno));
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path.string() + "'");
    return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "': " + std::strerror(errno));
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("error writing '" + path.string() + "': " + std::strerror(errno));
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = nl + 1;
    }
    return lines;
}

std::string format_lexicon(const Lexicon& lexicon) {
    std::string out;
    for (const auto& w : lexicon.words()) {
        out += w;
        out += '\n';
    }
    return out;
}

Lexicon parse_lexicon(std::string_view text) {
    validate_utf8(text);
    std::vector<std::string> words;
    const auto lines = split_lines(text);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        if (lines[k].empty()) throw DataError("lexicon line " + std::to_string(k + 1) + " is empty");
        words.emplace_back(lines[k]);
    }
    return Lexicon::from_words(std::move(words));
}

std::string format_patterns(const PatternSet& patterns) {
    std::string out = std::to_string(patterns.units()) + ' ' + std::to_string(patterns.count()) + '\n';
    for (const auto& p : patterns.patterns()) {
        bool first = true;
        for (std::size_t i : p.active_indices()) {
            if (!first) out += ' ';
            out += std::to_string(i);
            first = false;
        }
        out += '\n';
    }
    return out;
}

PatternFile parse_patterns(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw DataError("pattern file is empty");
    const auto header = split_fields(lines[0]);
    if (header.size() != 2) throw DataError("pattern file header must be 'N n'");
    PatternFile file;
    file.units = parse_number<std::size_t>(header[0], "N", 1);
    const auto n = parse_number<std::size_t>(header[1], "n", 1);
    if (lines.size() - 1 != n) {
        throw DataError("pattern file declares " + std::to_string(n) + " patterns but has " +
                        std::to_string(lines.size() - 1));
    }
    file.patterns.reserve(n);
    for (std::size_t k = 1; k < lines.size(); ++k) {
        std::vector<std::size_t> indices;
        for (auto field : split_fields(lines[k])) {
            const auto i = parse_number<std::size_t>(field, "bit index", k + 1);
            if (!indices.empty() && i <= indices.back()) {
                throw DataError("line " + std::to_string(k + 1) + ": indices must be strictly increasing");
            }
            indices.push_back(i);
        }
        file.patterns.push_back(Pattern::from_indices(file.units, indices));
    }
    return file;
}

PatternSet make_pattern_set(PatternFile file, std::optional<Lexicon> lexicon) {
    if (lexicon && lexicon->size() != file.units) {
        throw DataError("lexicon size " + std::to_string(lexicon->size()) + " does not match pattern size " +
                        std::to_string(file.units));
    }
    return PatternSet(lexicon ? std::move(*lexicon) : placeholder_lexicon(file.units), std::move(file.patterns));
}

std::string format_network(const TrainedNetwork& network) {
    const auto& w = network.weights;
    if (network.thresholds.size() != w.size()) throw DataError("threshold vector length does not match matrix");
    for (double u : network.thresholds) {
        if (u != network.thresholds.front()) throw DataError("matrix file stores a single uniform threshold");
    }
    std::string out = std::to_string(w.size()) + ' ' + shortest(w.inhibitor_strength()) + '\n';
    for (const auto& e : w.entries()) {
        out += std::to_string(e.row) + ' ' + std::to_string(e.col) + ' ' + std::to_string(e.count) + '\n';
    }
    out += "U " + shortest(network.thresholds.empty() ? 0.0 : network.thresholds.front()) + '\n';
    return out;
}

TrainedNetwork parse_network(std::string_view text) {
    const auto lines = split_lines(text);
    if (lines.empty()) throw DataError("matrix file is empty");
    const auto header = split_fields(lines[0]);
    if (header.size() != 2) throw DataError("matrix file header must be 'N J'");
    const auto units = parse_number<std::size_t>(header[0], "N", 1);
    const auto inhibitor = parse_number<double>(header[1], "J", 1);

    std::vector<CooccurrenceEntry> entries;
    std::optional<double> threshold;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto fields = split_fields(lines[k]);
        if (fields.empty()) continue;
        if (threshold) throw DataError("line " + std::to_string(k + 1) + ": data after threshold line");
        if (fields[0] == "U") {
            if (fields.size() != 2) throw DataError("line " + std::to_string(k + 1) + ": expected 'U u'");
            threshold = parse_number<double>(fields[1], "threshold", k + 1);
            continue;
        }
        if (fields.size() != 3) throw DataError("line " + std::to_string(k + 1) + ": expected 'i j count'");
        CooccurrenceEntry e;
        e.row = parse_number<std::uint32_t>(fields[0], "row", k + 1);
        e.col = parse_number<std::uint32_t>(fields[1], "column", k + 1);
        e.count = parse_number<std::uint32_t>(fields[2], "count", k + 1);
        if (!entries.empty()) {
            const auto& prev = entries.back();
            if (e.row < prev.row || (e.row == prev.row && e.col <= prev.col)) {
                throw DataError("line " + std::to_string(k + 1) + ": entries must be sorted");
            }
        }
        entries.push_back(e);
    }
    if (!threshold) throw DataError("matrix file lacks the 'U u' threshold line");
    TrainedNetwork net;
    net.weights = WeightMatrix::from_entries(units, inhibitor, std::move(entries));
    net.thresholds.assign(units, *threshold);
    return net;
}

}  // namespace hopnet
