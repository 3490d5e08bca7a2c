#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "hopnet/errors.hpp"
#include "hopnet/experiments.hpp"
#include "hopnet/io.hpp"

namespace hopnet {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
    throw ConfigError("invalid value for config key " + std::string(key) + ": '" + std::string(value) + "'");
}

template <typename T>
T parse_value(std::string_view key, std::string_view value) {
    T out{};
    const char* end = value.data() + value.size();
    auto res = std::from_chars(value.data(), end, out);
    if (value.empty() || res.ec != std::errc() || res.ptr != end) bad_value(key, value);
    return out;
}

double parse_real(std::string_view key, std::string_view value) {
    const double v = parse_value<double>(key, value);
    if (!std::isfinite(v)) bad_value(key, value);
    return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value);
}

std::vector<double> parse_list(std::string_view key, std::string_view value) {
    std::vector<double> out;
    if (value.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = value.find(',', start);
        out.push_back(parse_real(key, trim(value.substr(start, comma - start))));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
    std::filesystem::path p{std::string(value)};
    return p.is_absolute() || base.empty() ? p : base / p;
}

using Setter = std::function<void(ExperimentPlan&, std::string_view key, std::string_view value,
                                  const std::filesystem::path& base)>;

struct KeySpec {
    Setter set;
    std::string default_value;
    std::string help;
};

const std::map<std::string, KeySpec, std::less<>>& key_table() {
    static const std::map<std::string, KeySpec, std::less<>> table = [] {
        std::map<std::string, KeySpec, std::less<>> t;
        t["source"] = {[](ExperimentPlan& p, auto key, auto v, auto&) {
                           if (v == "corpus") {
                               p.source = PatternSource::corpus;
                           } else if (v == "random") {
                               p.source = PatternSource::random;
                           } else if (v == "topic") {
                               p.source = PatternSource::topic;
                           } else {
                               bad_value(key, v);
                           }
                       },
                       "corpus", "pattern source: corpus | random | topic"};
        t["corpus"] = {[](ExperimentPlan& p, auto, auto v, auto& base) { p.corpus_path = resolve(base, v); },
                       "<bundled sample corpus>", "UTF-8 text file (corpus source)"};
        t["stoplist"] = {[](ExperimentPlan& p, auto, auto v, auto& base) { p.stoplist_path = resolve(base, v); },
                         "<bundled English stoplist>", "function-word list, one per line"};
        t["one_sentence_per_line"] = {
            [](ExperimentPlan& p, auto key, auto v, auto&) { p.one_sentence_per_line = parse_bool(key, v); },
            "false", "treat every line of the corpus as one sentence"};
        t["subcorpus"] = {
            [](ExperimentPlan& p, auto key, auto v, auto&) { p.subcorpus = parse_value<std::size_t>(key, v); }, "0",
            "sentences sampled from the corpus (0 = all)"};
        t["units"] = {[](ExperimentPlan& p, auto key, auto v, auto&) { p.units = parse_value<std::size_t>(key, v); },
                      "500", "N for synthetic sources"};
        t["patterns"] = {
            [](ExperimentPlan& p, auto key, auto v, auto&) { p.patterns = parse_value<std::size_t>(key, v); }, "90",
            "n for synthetic sources"};
        t["density"] = {[](ExperimentPlan& p, auto key, auto v, auto&) { p.density = parse_real(key, v); }, "0.02",
                        "bit probability (random source)"};
        t["topics"] = {
            [](ExperimentPlan& p, auto key, auto v, auto&) { p.topic.topics = parse_value<std::size_t>(key, v); },
            "20", "topic blocks (topic source)"};
        t["mean_length"] = {[](ExperimentPlan& p, auto key, auto v, auto&) { p.topic.mean_length = parse_real(key, v); },
                            "10", "mean active bits per pattern (topic source)"};
        t["length_spread"] = {[](ExperimentPlan& p, auto key,
                                 auto v, auto&) { p.topic.length_spread = parse_value<std::size_t>(key, v); },
                              "2", "pattern length varies uniformly by +- this much (topic source)"};
        t["topic_share"] = {[](ExperimentPlan& p, auto key, auto v, auto&) { p.topic.topic_share = parse_real(key, v); },
                            "0.8", "probability a word is drawn from the pattern's topic (topic source)"};
        t["zipf_exponent"] = {
            [](ExperimentPlan& p, auto key, auto v, auto&) { p.topic.zipf_exponent = parse_real(key, v); }, "0.5",
            "word popularity exponent (topic source)"};
        t["noise_mode"] = {[](ExperimentPlan& p, auto key, auto v, auto&) {
                               if (v == "flip") {
                                   p.noise_mode = NoiseMode::flip;
                               } else if (v == "delete") {
                                   p.noise_mode = NoiseMode::remove;
                               } else {
                                   bad_value(key, v);
                               }
                           },
                           "flip", "flip: every bit flips with probability m0; delete: only 1 bits are cleared"};
        t["noise_levels"] = {
            [](ExperimentPlan& p, auto key, auto v, auto&) { p.noise_levels = parse_list(key, v); },
            "0.0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0", "comma-separated m0 values, ascending, in [0, 1]"};
        t["trials"] = {[](ExperimentPlan& p, auto key, auto v, auto&) { p.trials = parse_value<std::size_t>(key, v); },
                       "10", "trials per noise level"};
        t["patterns_per_trial"] = {[](ExperimentPlan& p, auto key, auto v,
                                      auto&) { p.patterns_per_trial = parse_value<std::size_t>(key, v); },
                                   "50", "stored patterns probed per trial"};
        t["seed"] = {[](ExperimentPlan& p, auto key, auto v, auto&) { p.seed = parse_value<std::uint64_t>(key, v); },
                     "1", "master seed; every random draw derives from it"};
        t["inhibitor"] = {
            [](ExperimentPlan& p, auto key, auto v, auto&) { p.inhibitor_strength = parse_real(key, v); }, "10",
            "global inhibitor J (weight -J/N on non-cooccurring pairs)"};
        t["theta_frac"] = {
            [](ExperimentPlan& p, auto key, auto v, auto&) { p.threshold_fraction = parse_real(key, v); }, "0.5",
            "threshold as a fraction of the mean in-pattern field"};
        t["threshold"] = {[](ExperimentPlan& p, auto key, auto v, auto&) { p.threshold = parse_real(key, v); },
                          "<computed>", "fixed threshold u, overrides theta_frac"};
        t["max_sweeps"] = {
            [](ExperimentPlan& p, auto key, auto v, auto&) { p.max_sweeps = parse_value<std::size_t>(key, v); },
            "100", "sweep limit per recall"};
        return t;
    }();
    return table;
}

}  // namespace

void ExperimentPlan::validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (patterns_per_trial < 1) throw ConfigError("patterns_per_trial must be >= 1");
    if (max_sweeps < 1) throw ConfigError("max_sweeps must be >= 1");
    if (!(inhibitor_strength >= 0.0)) throw ConfigError("inhibitor must be >= 0");
    for (std::size_t k = 0; k < noise_levels.size(); ++k) {
        if (!(noise_levels[k] >= 0.0 && noise_levels[k] <= 1.0)) throw ConfigError("noise levels must lie in [0, 1]");
        if (k > 0 && noise_levels[k] < noise_levels[k - 1]) throw ConfigError("noise levels must be ascending");
    }
    switch (source) {
        case PatternSource::corpus:
            if (corpus_path.empty()) throw ConfigError("corpus source needs a corpus path");
            if (stoplist_path.empty()) throw ConfigError("corpus source needs a stoplist path");
            break;
        case PatternSource::random:
            if (!(density > 0.0 && density < 1.0)) throw ConfigError("density must lie strictly between 0 and 1");
            [[fallthrough]];
        case PatternSource::topic:
            if (units < 2) throw ConfigError("units must be >= 2");
            if (patterns < 1) throw ConfigError("patterns must be >= 1");
            break;
    }
}

ExperimentPlan default_plan() {
    ExperimentPlan plan;
    plan.corpus_path = std::filesystem::path(HOPNET_DATA_DIR) / "sample_corpus.txt";
    plan.stoplist_path = std::filesystem::path(HOPNET_DATA_DIR) / "stoplist_en.txt";
    return plan;
}

ExperimentPlan parse_plan(std::string_view text, const std::filesystem::path& base_dir) {
    ExperimentPlan plan = default_plan();
    std::set<std::string, std::less<>> seen;
    const auto lines = split_lines(text);
    for (std::size_t k = 0; k < lines.size(); ++k) {
        const std::string_view line = trim(lines[k]);
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(k + 1) + ": expected key=value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view value = trim(line.substr(eq + 1));
        auto it = key_table().find(key);
        if (it == key_table().end()) throw ConfigError("unknown config key: " + std::string(key));
        if (!seen.emplace(key).second) throw ConfigError("duplicate config key: " + std::string(key));
        it->second.set(plan, key, value, base_dir);
    }
    plan.validate();
    return plan;
}

ExperimentPlan load_plan(const std::filesystem::path& path) {
    return parse_plan(read_text_file(path), path.parent_path());
}

std::string describe_plan_keys() {
    std::string out;
    for (const auto& [key, spec] : key_table()) {
        out += "# " + spec.help + '\n' + key + " = " + spec.default_value + '\n';
    }
    return out;
}

}  // namespace hopnet
