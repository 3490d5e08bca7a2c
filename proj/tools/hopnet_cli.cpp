// hopnet: corpus preparation, training, recall, experiments and statistics
// for sentence patterns stored in a Hopfield network.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 I/O error.

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "hopnet/corpus.hpp"
#include "hopnet/errors.hpp"
#include "hopnet/experiments.hpp"
#include "hopnet/io.hpp"
#include "hopnet/metrics.hpp"
#include "hopnet/network.hpp"

namespace fs = std::filesystem;
using namespace hopnet;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kIo = 3 };

void require_file(const std::string& path) {
    if (!fs::is_regular_file(path)) throw IoError("no such file: " + path);
}

int cmd_prepare(const std::string& text_path, const std::string& stoplist_path, const std::string& prefix,
                bool per_line, std::size_t stride) {
    require_file(text_path);
    require_file(stoplist_path);
    const std::string text = read_text_file(text_path);
    const Stoplist stoplist = load_stoplist(stoplist_path);
    TokenizerConfig config;
    config.one_sentence_per_line = per_line;
    const PreparedCorpus corpus = prepare_corpus(text, stoplist, config, stride);

    write_text_file(prefix + ".lexicon", format_lexicon(corpus.patterns.lexicon()));
    write_text_file(prefix + ".patterns", format_patterns(corpus.patterns));

    const auto& s = corpus.stats;
    std::cout << std::left << std::setw(28) << "sentences" << s.sentence_count << '\n'
              << std::setw(28) << "sentences dropped" << corpus.filtered.sentences_dropped << '\n'
              << std::setw(28) << "tokens" << corpus.filtered.tokens_total << '\n'
              << std::setw(28) << "function words removed" << std::fixed << std::setprecision(1)
              << 100.0 * corpus.filtered.removed_fraction() << "%\n"
              << std::setw(28) << "lexicon size (N)" << s.lexicon_size << '\n'
              << std::setw(28) << "mean content length" << std::setprecision(2) << s.mean_content_length << '\n';
    std::cout << std::setw(28) << "lexicon growth fit";
    try {
        const PowerLawFit fit = fit_growth_curve(s.growth_curve);
        std::cout << std::setprecision(2) << fit.scale << " * n^" << std::setprecision(3) << fit.exponent << '\n';
    } catch (const DataError&) {
        std::cout << "n/a (too few samples)\n";
    }
    std::cout << "wrote " << prefix << ".lexicon, " << prefix << ".patterns\n";
    return kOk;
}

int cmd_train(const std::string& patterns_path, const std::string& out_path, double inhibitor, double theta,
              std::optional<double> threshold) {
    require_file(patterns_path);
    const PatternSet patterns = make_pattern_set(parse_patterns(read_text_file(patterns_path)));
    ThresholdPolicy policy;
    policy.theta_fraction = theta;
    policy.fixed_threshold = threshold;
    const TrainedNetwork net = train(patterns, inhibitor, policy);
    write_text_file(out_path, format_network(net));
    std::cout << "trained N=" << patterns.units() << " n=" << patterns.count() << " J=" << inhibitor
              << " u=" << net.thresholds.front() << " positive pairs=" << net.weights.positive_entries() / 2 << '\n'
              << "wrote " << out_path << '\n';
    return kOk;
}

int cmd_recall(const std::string& matrix_path, const std::string& lexicon_path, const std::string& probe,
               std::uint64_t seed, std::size_t max_sweeps) {
    require_file(matrix_path);
    require_file(lexicon_path);
    const TrainedNetwork net = parse_network(read_text_file(matrix_path));
    const Lexicon lexicon = parse_lexicon(read_text_file(lexicon_path));
    if (lexicon.size() != net.weights.size()) {
        throw DataError("size mismatch: lexicon has " + std::to_string(lexicon.size()) + " words but matrix has " +
                        std::to_string(net.weights.size()) + " units");
    }
    validate_utf8(probe);
    WordList words;
    for (auto& sentence : tokenize_sentences(probe)) words.insert(words.end(), sentence.begin(), sentence.end());
    const Pattern cue = encode(words, lexicon);
    const RecallOutcome outcome = recall(cue.bits(), net, seed, max_sweeps);

    auto print_words = [](const char* label, const WordList& list) {
        std::cout << std::left << std::setw(12) << label;
        for (const auto& w : list) std::cout << ' ' << w;
        std::cout << '\n';
    };
    print_words("probe:", decode(cue, lexicon));
    print_words("recalled:", decode(Pattern(outcome.final_state), lexicon));
    std::cout << std::left << std::setw(12) << "sweeps:" << ' ' << outcome.sweeps_used << '\n'
              << std::setw(12) << "converged:" << ' ' << (outcome.converged ? "yes" : "no") << '\n'
              << std::setw(12) << "energy:" << ' ' << std::setprecision(10) << outcome.energy_trace.back() << '\n';
    return kOk;
}

fs::path characteristics_path(const fs::path& out) {
    fs::path p = out;
    p.replace_extension();
    p += ".characteristics.csv";
    return p;
}

int cmd_experiment(const std::string& config_path, const std::string& out_path) {
    require_file(config_path);
    const ExperimentPlan plan = load_plan(config_path);
    const ExperimentResult result = run_experiment(plan);
    emit_results(result, out_path);
    const fs::path chars_path = characteristics_path(out_path);
    emit_characteristics(result.characteristics, chars_path);

    const std::pair<std::string, MatrixCharacteristics> column{"matrix", result.characteristics};
    print_characteristics_table(std::cout, std::span(&column, 1));
    std::cout << '\n';
    print_results_table(std::cout, result);
    std::cout << "wrote " << out_path << ", " << chars_path.string() << '\n';
    return kOk;
}

int cmd_stats(const std::string& patterns_path, const std::string& matrix_path, const std::string& lexicon_path,
              double inhibitor) {
    std::optional<PatternSet> patterns;
    std::optional<TrainedNetwork> net;
    if (!patterns_path.empty()) {
        require_file(patterns_path);
        std::optional<Lexicon> lexicon;
        if (!lexicon_path.empty()) {
            require_file(lexicon_path);
            lexicon = parse_lexicon(read_text_file(lexicon_path));
        }
        patterns = make_pattern_set(parse_patterns(read_text_file(patterns_path)), std::move(lexicon));
    }
    if (!matrix_path.empty()) {
        require_file(matrix_path);
        net = parse_network(read_text_file(matrix_path));
    }
    if (patterns && !net) net = train(*patterns, inhibitor);

    if (patterns) {
        const std::pair<std::string, MatrixCharacteristics> column{"matrix", characterize(*patterns, net->weights)};
        print_characteristics_table(std::cout, std::span(&column, 1));
        return kOk;
    }
    // Matrix only: pattern count and bias are not recoverable from the file.
    const auto& w = net->weights;
    std::cout << std::left << std::setw(10) << "Matrix" << std::right << std::setw(10) << "matrix" << '\n'
              << std::left << std::setw(10) << "N" << std::right << std::setw(10) << w.size() << '\n'
              << std::left << std::setw(10) << "n" << std::right << std::setw(10) << "-" << '\n'
              << std::left << std::setw(10) << "alpha" << std::right << std::setw(10) << "-" << '\n'
              << std::fixed << std::left << std::setw(10) << "s(T)" << std::right << std::setw(10)
              << std::setprecision(3) << sparsity(w) << '\n'
              << std::left << std::setw(10) << "c(T)" << std::right << std::setw(10) << std::setprecision(2)
              << mean_connectivity(w) << '\n'
              << std::left << std::setw(10) << "Pr(xi=1)" << std::right << std::setw(10) << "-" << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sentence patterns in a Hopfield associative memory"};
    app.require_subcommand(1);

    std::string text_path, stoplist_path, prefix;
    bool per_line = false;
    std::size_t stride = 10;
    auto* prepare = app.add_subcommand("prepare", "Corpus -> lexicon + pattern file + statistics");
    prepare->add_option("--text", text_path, "UTF-8 corpus file")->required();
    prepare->add_option("--stoplist", stoplist_path, "function-word list")->required();
    prepare->add_option("--out", prefix, "output prefix (<prefix>.lexicon, <prefix>.patterns)")->required();
    prepare->add_flag("--one-per-line", per_line, "input holds one sentence per line");
    prepare->add_option("--stride", stride, "growth-curve sampling stride")->check(CLI::PositiveNumber);

    std::string patterns_path, matrix_out;
    double inhibitor = 10.0;
    double theta = 0.5;
    std::optional<double> threshold;
    auto* train_cmd = app.add_subcommand("train", "Pattern file -> weight matrix file");
    train_cmd->add_option("--patterns", patterns_path, "pattern file")->required();
    train_cmd->add_option("--out", matrix_out, "matrix file to write")->required();
    train_cmd->add_option("--inhibitor", inhibitor, "global inhibitor J")->check(CLI::NonNegativeNumber);
    train_cmd->add_option("--theta-frac", theta, "threshold fraction of the mean in-pattern field");
    train_cmd->add_option("--threshold", threshold, "fixed threshold, overrides --theta-frac");

    std::string matrix_path, lexicon_path, probe;
    std::uint64_t seed = 1;
    std::size_t max_sweeps = 100;
    auto* recall_cmd = app.add_subcommand("recall", "Recall from a probe sentence");
    recall_cmd->add_option("--matrix", matrix_path, "matrix file")->required();
    recall_cmd->add_option("--lexicon", lexicon_path, "lexicon file")->required();
    recall_cmd->add_option("--probe", probe, "probe sentence")->required();
    recall_cmd->add_option("--seed", seed, "update-order seed");
    recall_cmd->add_option("--max-sweeps", max_sweeps, "sweep limit")->check(CLI::PositiveNumber);

    std::string config_path, csv_out;
    auto* experiment = app.add_subcommand("experiment", "Run a recall-error experiment");
    experiment->add_option("--config", config_path, "key=value plan file")->required();
    experiment->add_option("--out", csv_out, "result CSV")->required();

    auto* keys = app.add_subcommand("plan-template", "Print every experiment config key with its default");

    std::string stats_patterns, stats_matrix, stats_lexicon;
    double stats_inhibitor = 10.0;
    auto* stats = app.add_subcommand("stats", "Matrix characteristics table");
    auto* sp = stats->add_option("--patterns", stats_patterns, "pattern file");
    auto* sm = stats->add_option("--matrix", stats_matrix, "matrix file");
    stats->add_option("--lexicon", stats_lexicon, "lexicon for the pattern file")->needs(sp);
    stats->add_option("--inhibitor", stats_inhibitor, "J used when training from --patterns")
        ->check(CLI::NonNegativeNumber);
    stats->callback([&] {
        if (sp->count() == 0 && sm->count() == 0) throw CLI::RequiredError("--patterns or --matrix");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*prepare) return cmd_prepare(text_path, stoplist_path, prefix, per_line, stride);
        if (*train_cmd) return cmd_train(patterns_path, matrix_out, inhibitor, theta, threshold);
        if (*recall_cmd) return cmd_recall(matrix_path, lexicon_path, probe, seed, max_sweeps);
        if (*experiment) return cmd_experiment(config_path, csv_out);
        if (*keys) {
            std::cout << describe_plan_keys();
            return kOk;
        }
        if (*stats) return cmd_stats(stats_patterns, stats_matrix, stats_lexicon, stats_inhibitor);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kData;
    }
    return kUsage;
}
