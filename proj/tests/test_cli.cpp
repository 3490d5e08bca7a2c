#include <sys/wait.h>

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hopnet/corpus.hpp"
#include "hopnet/io.hpp"

namespace fs = std::filesystem;
using namespace hopnet;

namespace {

const fs::path kData = HOPNET_DATA_DIR;

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

class Sandbox {
public:
    Sandbox() {
        dir_ = fs::temp_directory_path() / ("hopnet_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    ~Sandbox() { fs::remove_all(dir_); }

    fs::path path(const std::string& name) const { return dir_ / name; }

    fs::path write(const std::string& name, const std::string& text) const {
        write_text_file(path(name), text);
        return path(name);
    }

    Run run(const std::string& args) const {
        const std::string cmd = std::string("'") + HOPNET_CLI + "' " + args + " > '" + path("stdout").string() +
                                "' 2> '" + path("stderr").string() + "'";
        const int status = std::system(cmd.c_str());
        Run r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.out = read_text_file(path("stdout"));
        r.err = read_text_file(path("stderr"));
        return r;
    }

private:
    static inline int counter_ = 0;
    fs::path dir_;
};

std::string quote(const fs::path& p) { return "'" + p.string() + "'"; }

std::string field_after(const std::string& text, const std::string& label) {
    const auto pos = text.find(label);
    if (pos == std::string::npos) return {};
    std::istringstream in(text.substr(pos + label.size()));
    std::string value;
    in >> value;
    return value;
}

std::vector<std::string> recalled_words(const std::string& out) {
    const auto pos = out.find("recalled:");
    const auto eol = out.find('\n', pos);
    std::istringstream in(out.substr(pos + 9, eol - pos - 9));
    std::vector<std::string> words;
    for (std::string w; in >> w;) words.push_back(w);
    return words;
}

const char* kTiny =
    "The river flooded the valley village. "
    "Farmers planted rice near the river. "
    "Engineers designed a bridge over the valley. "
    "The council approved funding for schools.\n";

}  // namespace

TEST_CASE("usage errors exit with 1") {
    Sandbox box;
    CHECK(box.run("").code == 1);
    CHECK(box.run("frobnicate").code == 1);
    CHECK(box.run("train --patterns").code == 1);
    CHECK(box.run("stats").code == 1);
    CHECK(box.run("--help").code == 0);
}

TEST_CASE("prepare on the bundled corpus") {
    Sandbox box;
    const auto prefix = box.path("sample");
    const Run r = box.run("prepare --text " + quote(kData / "sample_corpus.txt") + " --stoplist " +
                          quote(kData / "stoplist_en.txt") + " --out " + quote(prefix));
    REQUIRE(r.code == 0);
    CHECK(r.out.find("function words removed") != std::string::npos);
    CHECK(r.out.find("lexicon growth fit") != std::string::npos);

    const PatternFile file = parse_patterns(read_text_file(prefix.string() + ".patterns"));
    const Lexicon lex = parse_lexicon(read_text_file(prefix.string() + ".lexicon"));
    CHECK(lex.size() == file.units);

    // recompute the mean content length from the written pattern file
    double active = 0;
    for (const auto& p : file.patterns) active += static_cast<double>(p.active_count());
    const double from_file = active / static_cast<double>(file.patterns.size());
    const double reported = std::stod(field_after(r.out, "mean content length"));
    CHECK(reported >= 2.0);
    CHECK(reported <= 30.0);
    // the report counts repeated words; the pattern file cannot exceed it
    CHECK(from_file <= reported + 0.005);
    CHECK(from_file >= 0.9 * reported);
    CHECK(std::stoul(field_after(r.out, "lexicon size (N)")) == file.units);

    // byte-identical on rerun
    const std::string lexicon_text = read_text_file(prefix.string() + ".lexicon");
    const std::string pattern_text = read_text_file(prefix.string() + ".patterns");
    const Run again = box.run("prepare --text " + quote(kData / "sample_corpus.txt") + " --stoplist " +
                              quote(kData / "stoplist_en.txt") + " --out " + quote(prefix));
    CHECK(again.out == r.out);
    CHECK(read_text_file(prefix.string() + ".lexicon") == lexicon_text);
    CHECK(read_text_file(prefix.string() + ".patterns") == pattern_text);
}

TEST_CASE("prepare errors") {
    Sandbox box;
    const auto stop = box.write("stop.txt", "the\nof\na\n");
    const auto empty = box.write("empty.txt", "");
    Run r = box.run("prepare --text " + quote(empty) + " --stoplist " + quote(stop) + " --out " + quote(box.path("x")));
    CHECK(r.code == 2);
    CHECK(r.err.find("empty lexicon") != std::string::npos);
    CHECK_FALSE(fs::exists(box.path("x.lexicon")));

    const auto text = box.write("text.txt", "The cat sat. A dog of the cat.");
    const auto all = box.write("all.txt", "the\ncat\nsat\na\ndog\nof\n");
    r = box.run("prepare --text " + quote(text) + " --stoplist " + quote(all) + " --out " + quote(box.path("x")));
    CHECK(r.code == 2);
    CHECK(r.err.find("empty lexicon") != std::string::npos);

    r = box.run("prepare --text " + quote(box.path("missing.txt")) + " --stoplist " + quote(stop) + " --out " +
                quote(box.path("x")));
    CHECK(r.code == 3);

    const auto bad = box.write("bad.txt", "ok text \xff here.");
    r = box.run("prepare --text " + quote(bad) + " --stoplist " + quote(stop) + " --out " + quote(box.path("x")));
    CHECK(r.code == 2);
    CHECK(r.err.find("byte offset 8") != std::string::npos);
}

TEST_CASE("prepare, train, stats and recall") {
    Sandbox box;
    const auto text = box.write("tiny.txt", kTiny);
    const auto prefix = box.path("tiny");
    REQUIRE(box.run("prepare --text " + quote(text) + " --stoplist " + quote(kData / "stoplist_en.txt") + " --out " +
                    quote(prefix))
                .code == 0);
    const std::string patterns = prefix.string() + ".patterns";
    const std::string lexicon = prefix.string() + ".lexicon";
    const PatternFile file = parse_patterns(read_text_file(patterns));

    const auto matrix = box.path("tiny.matrix");
    const Run trained = box.run("train --patterns " + quote(patterns) + " --out " + quote(matrix));
    REQUIRE(trained.code == 0);
    const std::string matrix_text = read_text_file(matrix);
    REQUIRE(box.run("train --patterns " + quote(patterns) + " --out " + quote(matrix)).code == 0);
    CHECK(read_text_file(matrix) == matrix_text);

    Run stats = box.run("stats --patterns " + quote(patterns));
    REQUIRE(stats.code == 0);
    CHECK(std::stoul(field_after(stats.out, "\nN")) == file.units);
    CHECK(std::stoul(field_after(stats.out, "\nn")) == file.patterns.size());

    stats = box.run("stats --matrix " + quote(matrix));
    REQUIRE(stats.code == 0);
    CHECK(std::stoul(field_after(stats.out, "\nN")) == file.units);

    stats = box.run("stats --patterns " + quote(patterns) + " --lexicon " + quote(lexicon) + " --matrix " + quote(matrix));
    REQUIRE(stats.code == 0);
    CHECK(std::stoul(field_after(stats.out, "\nn")) == file.patterns.size());

    // a stored sentence recalls at least its own content words
    const Run rec = box.run("recall --matrix " + quote(matrix) + " --lexicon " + quote(lexicon) +
                            " --probe 'Engineers designed a bridge over the valley.' --seed 3");
    REQUIRE(rec.code == 0);
    const auto words = recalled_words(rec.out);
    const std::set<std::string> got(words.begin(), words.end());
    for (const char* w : {"engineers", "designed", "bridge", "valley"}) CHECK(got.contains(w));
    CHECK(field_after(rec.out, "converged:") == "yes");
    CHECK(box.run("recall --matrix " + quote(matrix) + " --lexicon " + quote(lexicon) +
                  " --probe 'Engineers designed a bridge over the valley.' --seed 3")
              .out == rec.out);

    const Run unknown = box.run("recall --matrix " + quote(matrix) + " --lexicon " + quote(lexicon) +
                                " --probe 'zebra quantum xylophone'");
    REQUIRE(unknown.code == 0);
    CHECK(recalled_words(unknown.out).empty());

    // lexicon from a different corpus
    const auto other = box.write("other.txt", "Completely different words here. Nothing shared.");
    REQUIRE(box.run("prepare --text " + quote(other) + " --stoplist " + quote(kData / "stoplist_en.txt") + " --out " +
                    quote(box.path("other")))
                .code == 0);
    const Lexicon other_lex = parse_lexicon(read_text_file(box.path("other.lexicon")));
    REQUIRE(other_lex.size() != file.units);
    const Run mismatch = box.run("recall --matrix " + quote(matrix) + " --lexicon " +
                                 quote(box.path("other.lexicon")) + " --probe 'river'");
    CHECK(mismatch.code == 2);
    CHECK(mismatch.err.find(std::to_string(other_lex.size())) != std::string::npos);
    CHECK(mismatch.err.find(std::to_string(file.units)) != std::string::npos);

    CHECK(box.run("recall --matrix " + quote(box.path("nope")) + " --lexicon " + quote(lexicon) + " --probe x").code == 3);
}

TEST_CASE("experiment with the default config") {
    Sandbox box;
    const auto config = box.write("default.cfg", "# all defaults\n");
    const auto out = box.path("result.csv");
    const Run r = box.run("experiment --config " + quote(config) + " --out " + quote(out));
    REQUIRE(r.code == 0);
    const std::string csv = read_text_file(out);
    const auto lines = split_lines(csv);
    REQUIRE(lines.size() == 12);
    CHECK(lines[0] == "m0,f_b_ones,f_b_zeros,mean_sweeps,convergence_rate,trials,patterns_per_trial");
    for (std::size_t k = 1; k < lines.size(); ++k) {
        char expected[16];
        std::snprintf(expected, sizeof expected, "%.6f,", 0.1 * static_cast<double>(k - 1));
        CHECK(lines[k].substr(0, 9) == expected);
        CHECK(lines[k].substr(lines[k].size() - 6) == ",10,50");
    }
    const std::string chars_text = read_text_file(box.path("result.characteristics.csv"));
    const auto chars = split_lines(chars_text);
    REQUIRE(chars.size() == 2);
    CHECK(chars[0] == "N,n,alpha,sparsity,connectivity,bias");
    CHECK(r.out.find("Pr(xi=1)") != std::string::npos);

    // same seed, byte-identical CSV
    REQUIRE(box.run("experiment --config " + quote(config) + " --out " + quote(box.path("again.csv"))).code == 0);
    CHECK(read_text_file(box.path("again.csv")) == csv);
}

TEST_CASE("experiment options and errors") {
    Sandbox box;
    const auto single = box.write("single.cfg", "trials = 1\nnoise_levels = 0.0, 0.5\nsubcorpus = 120\n");
    Run r = box.run("experiment --config " + quote(single) + " --out " + quote(box.path("single.csv")));
    REQUIRE(r.code == 0);
    const std::string csv = read_text_file(box.path("single.csv"));
    const auto lines = split_lines(csv);
    REQUIRE(lines.size() == 3);
    CHECK(lines[1].substr(lines[1].size() - 5) == ",1,50");

    const auto foo = box.write("foo.cfg", "foo = 1\n");
    r = box.run("experiment --config " + quote(foo) + " --out " + quote(box.path("foo.csv")));
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown config key: foo") != std::string::npos);
    CHECK_FALSE(fs::exists(box.path("foo.csv")));

    const auto relative = box.write("rel.cfg", "corpus = missing.txt\n");
    r = box.run("experiment --config " + quote(relative) + " --out " + quote(box.path("rel.csv")));
    CHECK(r.code == 3);
    CHECK(r.err.find(box.path("missing.txt").string()) != std::string::npos);

    r = box.run("experiment --config " + quote(box.path("none.cfg")) + " --out " + quote(box.path("x.csv")));
    CHECK(r.code == 3);

    const auto greedy = box.write("greedy.cfg", "source = topic\npatterns = 20\n");
    r = box.run("experiment --config " + quote(greedy) + " --out " + quote(box.path("g.csv")));
    CHECK(r.code == 2);
    CHECK(r.err.find("patterns_per_trial") != std::string::npos);

    r = box.run("plan-template");
    CHECK(r.code == 0);
    CHECK(r.out.find("noise_levels = 0.0,0.1") != std::string::npos);
}
