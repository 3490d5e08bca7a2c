#include "hopnet/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iomanip>
#include <numeric>
#include <ostream>

#include "experiment_detail.hpp"
#include "hopnet/errors.hpp"
#include "hopnet/io.hpp"
#include "hopnet/random.hpp"

namespace hopnet {

namespace {

// Seed streams.
enum : std::uint64_t { kGenerator = 1, kSubcorpus = 2, kSelection = 3, kNoise = 4, kRecall = 5 };

std::vector<double> zipf_cdf(std::size_t n, double exponent) {
    std::vector<double> cdf(n);
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        total += 1.0 / std::pow(static_cast<double>(r + 1), exponent);
        cdf[r] = total;
    }
    return cdf;
}

std::size_t sample_cdf(const std::vector<double>& cdf, Rng& rng) {
    const double x = rng.uniform() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), x);
    return std::min(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) std::swap(idx[i], idx[i + rng.below(n - i)]);
    idx.resize(k);
    return idx;
}

std::string format_fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

BitVector inject_noise(std::span<const std::uint8_t> pattern, double m0, std::uint64_t rng_seed) {
    if (!(m0 >= 0.0 && m0 <= 1.0)) throw DataError("noise level m0 must lie in [0, 1]");
    Rng rng(rng_seed);
    BitVector out(pattern.size());
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const bool bit = pattern[i] != 0;
        out[i] = (rng.uniform() < m0) != bit ? 1 : 0;
    }
    return out;
}

BitVector inject_deletion_noise(std::span<const std::uint8_t> pattern, double m0, std::uint64_t rng_seed) {
    if (!(m0 >= 0.0 && m0 <= 1.0)) throw DataError("noise level m0 must lie in [0, 1]");
    Rng rng(rng_seed);
    BitVector out(pattern.size());
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const bool drop = rng.uniform() < m0;
        out[i] = pattern[i] != 0 && !drop ? 1 : 0;
    }
    return out;
}

PatternSet generate_random_patterns(std::size_t n, std::size_t units, double density, std::uint64_t rng_seed) {
    if (!(density > 0.0 && density < 1.0)) throw DataError("density must lie strictly between 0 and 1");
    if (n == 0 || units == 0) throw DataError("random pattern set needs n >= 1 and N >= 1");
    Rng rng(rng_seed);
    std::vector<Pattern> patterns;
    patterns.reserve(n);
    for (std::size_t mu = 0; mu < n; ++mu) {
        BitVector bits(units);
        for (auto& b : bits) b = rng.bernoulli(density) ? 1 : 0;
        patterns.emplace_back(std::move(bits));
    }
    return PatternSet(placeholder_lexicon(units), std::move(patterns));
}

PatternSet generate_topic_patterns(std::size_t n, std::size_t units, const TopicModel& model,
                                   std::uint64_t rng_seed) {
    if (n == 0 || units == 0) throw DataError("topic pattern set needs n >= 1 and N >= 1");
    if (model.topics == 0 || model.topics > units) throw DataError("topic count must lie in [1, N]");
    if (!(model.mean_length >= 1.0)) throw DataError("mean pattern length must be >= 1");
    const auto center = static_cast<std::size_t>(std::lround(model.mean_length));
    if (center < model.length_spread + 1 || center + model.length_spread > units) {
        throw DataError("pattern length range must lie in [1, N]");
    }
    if (!(model.topic_share >= 0.0 && model.topic_share <= 1.0)) throw DataError("topic_share must lie in [0, 1]");
    if (model.zipf_exponent < 0.0) throw DataError("zipf exponent must be >= 0");

    Rng rng(rng_seed);
    std::vector<std::size_t> global_rank(units);
    std::iota(global_rank.begin(), global_rank.end(), std::size_t{0});
    rng.shuffle(std::span<std::size_t>(global_rank));
    const auto global_cdf = zipf_cdf(units, model.zipf_exponent);

    std::vector<std::size_t> block_start(model.topics + 1);
    for (std::size_t t = 0; t <= model.topics; ++t) block_start[t] = t * units / model.topics;
    std::vector<std::vector<double>> block_cdf(model.topics);
    for (std::size_t t = 0; t < model.topics; ++t) {
        block_cdf[t] = zipf_cdf(block_start[t + 1] - block_start[t], model.zipf_exponent);
    }

    std::vector<Pattern> patterns;
    patterns.reserve(n);
    for (std::size_t mu = 0; mu < n; ++mu) {
        const std::size_t topic = rng.below(model.topics);
        const std::size_t length = center - model.length_spread + rng.below(2 * model.length_spread + 1);
        Pattern p(units);
        std::size_t placed = 0;
        // Small topic blocks can run out of fresh words; fall back to the
        // global ranking after a bounded number of draws.
        for (std::size_t attempt = 0; placed < length && attempt < 64 * length; ++attempt) {
            std::size_t unit = 0;
            if (!block_cdf[topic].empty() && rng.bernoulli(model.topic_share)) {
                unit = block_start[topic] + sample_cdf(block_cdf[topic], rng);
            } else {
                unit = global_rank[sample_cdf(global_cdf, rng)];
            }
            if (!p[unit]) {
                p.set(unit, true);
                ++placed;
            }
        }
        for (std::size_t r = 0; placed < length; ++r) {
            if (!p[global_rank[r]]) {
                p.set(global_rank[r], true);
                ++placed;
            }
        }
        patterns.push_back(std::move(p));
    }
    return PatternSet(placeholder_lexicon(units), std::move(patterns));
}

PatternSet select_subcorpus(const PatternSet& patterns, std::size_t count, std::uint64_t rng_seed) {
    if (count < 1 || count > patterns.count()) {
        throw DataError("subcorpus size " + std::to_string(count) + " outside [1, " +
                        std::to_string(patterns.count()) + "]");
    }
    Rng rng(rng_seed);
    auto chosen = sample_without_replacement(patterns.count(), count, rng);
    std::sort(chosen.begin(), chosen.end());

    const std::size_t units = patterns.units();
    std::vector<std::uint8_t> used(units, 0);
    for (std::size_t k : chosen) {
        const auto& bits = patterns.patterns()[k].bits();
        for (std::size_t i = 0; i < units; ++i) used[i] |= bits[i];
    }
    std::vector<std::size_t> remap(units, units);
    std::vector<std::string> words;
    for (std::size_t i = 0; i < units; ++i) {
        if (!used[i]) continue;
        remap[i] = words.size();
        words.push_back(patterns.lexicon().word(i));
    }
    if (words.empty()) throw DataError("empty lexicon");

    std::vector<Pattern> out;
    out.reserve(count);
    for (std::size_t k : chosen) {
        Pattern p(words.size());
        for (std::size_t i : patterns.patterns()[k].active_indices()) p.set(remap[i], true);
        out.push_back(std::move(p));
    }
    return PatternSet(Lexicon::from_words(std::move(words)), std::move(out));
}

PatternSet load_patterns(const ExperimentPlan& plan) {
    plan.validate();
    switch (plan.source) {
        case PatternSource::random:
            return generate_random_patterns(plan.patterns, plan.units, plan.density,
                                            derive_seed(plan.seed, {kGenerator}));
        case PatternSource::topic:
            return generate_topic_patterns(plan.patterns, plan.units, plan.topic,
                                           derive_seed(plan.seed, {kGenerator}));
        case PatternSource::corpus:
            break;
    }
    const std::string text = read_text_file(plan.corpus_path);
    const Stoplist stoplist = load_stoplist(plan.stoplist_path.string());
    TokenizerConfig config;
    config.one_sentence_per_line = plan.one_sentence_per_line;
    PreparedCorpus corpus = prepare_corpus(text, stoplist, config);
    if (plan.subcorpus == 0) return std::move(corpus.patterns);
    return select_subcorpus(corpus.patterns, plan.subcorpus, derive_seed(plan.seed, {kSubcorpus}));
}

namespace detail {

std::vector<TrialTask> plan_tasks(const ExperimentPlan& plan, std::size_t pattern_count) {
    std::vector<std::vector<std::size_t>> samples(plan.trials);
    for (std::size_t t = 0; t < plan.trials; ++t) {
        Rng rng(derive_seed(plan.seed, {kSelection, t}));
        samples[t] = sample_without_replacement(pattern_count, plan.patterns_per_trial, rng);
    }
    std::vector<TrialTask> tasks;
    tasks.reserve(plan.noise_levels.size() * plan.trials * plan.patterns_per_trial);
    for (std::size_t level = 0; level < plan.noise_levels.size(); ++level) {
        for (std::size_t t = 0; t < plan.trials; ++t) {
            for (std::size_t s = 0; s < plan.patterns_per_trial; ++s) {
                tasks.push_back({level, samples[t][s], derive_seed(plan.seed, {kNoise, t, s}),
                                 derive_seed(plan.seed, {kRecall, t, s})});
            }
        }
    }
    return tasks;
}

TrialRecord run_task(const TrialTask& task, const ExperimentPlan& plan, const PatternSet& patterns,
                     const TrainedNetwork& network, const std::vector<double>& external) {
    const auto& nominated = patterns.patterns()[task.pattern].bits();
    const double m0 = plan.noise_levels[task.level];
    const BitVector probe = plan.noise_mode == NoiseMode::flip ? inject_noise(nominated, m0, task.noise_seed)
                                                               : inject_deletion_noise(nominated, m0, task.noise_seed);
    const RecallOutcome outcome =
        recall(probe, network.weights, network.thresholds, external, task.recall_seed, plan.max_sweeps);
    return {bit_errors(outcome.final_state, nominated), outcome.sweeps_used, outcome.converged};
}

TrainedNetwork prepare_network(const ExperimentPlan& plan, const PatternSet& patterns) {
    plan.validate();
    if (patterns.count() < plan.patterns_per_trial) {
        throw DataError("pattern source yields " + std::to_string(patterns.count()) +
                        " patterns, fewer than patterns_per_trial = " + std::to_string(plan.patterns_per_trial));
    }
    ThresholdPolicy policy;
    policy.theta_fraction = plan.threshold_fraction;
    policy.fixed_threshold = plan.threshold;
    return train(patterns, plan.inhibitor_strength, policy);
}

ExperimentResult aggregate(const ExperimentPlan& plan, const std::vector<TrialRecord>& records,
                           const MatrixCharacteristics& characteristics) {
    ExperimentResult result;
    result.trials = plan.trials;
    result.patterns_per_trial = plan.patterns_per_trial;
    result.characteristics = characteristics;
    const std::size_t per_level = plan.trials * plan.patterns_per_trial;
    for (std::size_t level = 0; level < plan.noise_levels.size(); ++level) {
        RecallErrorAccumulator acc;
        std::size_t sweeps = 0;
        std::size_t converged = 0;
        for (std::size_t k = level * per_level; k < (level + 1) * per_level; ++k) {
            acc.add(records[k].errors);
            sweeps += records[k].sweeps;
            converged += records[k].converged;
        }
        NoiseLevelResult r;
        r.m0 = plan.noise_levels[level];
        r.error = acc.result();
        r.mean_sweeps = static_cast<double>(sweeps) / static_cast<double>(per_level);
        r.convergence_rate = static_cast<double>(converged) / static_cast<double>(per_level);
        result.levels.push_back(r);
    }
    return result;
}

}  // namespace detail

ExperimentResult run_experiment(const ExperimentPlan& plan, const PatternSet& patterns) {
    const TrainedNetwork network = detail::prepare_network(plan, patterns);
    const auto tasks = detail::plan_tasks(plan, patterns.count());
    const std::vector<double> external(patterns.units(), 0.0);
    std::vector<detail::TrialRecord> records(tasks.size());

    std::exception_ptr failure;
    const auto n_tasks = static_cast<std::int64_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t k = 0; k < n_tasks; ++k) {
        try {
            records[k] = detail::run_task(tasks[k], plan, patterns, network, external);
        } catch (...) {
#pragma omp critical(hopnet_experiment_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return detail::aggregate(plan, records, characterize(patterns, network.weights));
}

ExperimentResult run_experiment(const ExperimentPlan& plan) { return run_experiment(plan, load_patterns(plan)); }

std::string format_results_csv(const ExperimentResult& result) {
    std::string out = "m0,f_b_ones,f_b_zeros,mean_sweeps,convergence_rate,trials,patterns_per_trial\n";
    for (const auto& r : result.levels) {
        out += format_fixed6(r.m0) + ',' + format_fixed6(r.error.f_b_ones) + ',' + format_fixed6(r.error.f_b_zeros) +
               ',' + format_fixed6(r.mean_sweeps) + ',' + format_fixed6(r.convergence_rate) + ',' +
               std::to_string(result.trials) + ',' + std::to_string(result.patterns_per_trial) + '\n';
    }
    return out;
}

ExperimentResult parse_results_csv(std::string_view csv) {
    const auto lines = split_lines(csv);
    if (lines.empty() || lines[0] != "m0,f_b_ones,f_b_zeros,mean_sweeps,convergence_rate,trials,patterns_per_trial") {
        throw DataError("result CSV has an unexpected header");
    }
    ExperimentResult result;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        std::string_view line = lines[k];
        if (line.empty()) continue;
        double fields[5];
        std::size_t counts[2];
        for (int f = 0; f < 7; ++f) {
            const std::size_t comma = line.find(',');
            const std::string_view cell = line.substr(0, comma);
            const char* end = cell.data() + cell.size();
            std::from_chars_result res{};
            if (f < 5) {
                res = std::from_chars(cell.data(), end, fields[f]);
            } else {
                res = std::from_chars(cell.data(), end, counts[f - 5]);
            }
            if (res.ec != std::errc() || res.ptr != end || (f < 6) == (comma == std::string_view::npos)) {
                throw DataError("malformed result CSV row " + std::to_string(k + 1));
            }
            line = comma == std::string_view::npos ? std::string_view{} : line.substr(comma + 1);
        }
        if (result.levels.empty()) {
            result.trials = counts[0];
            result.patterns_per_trial = counts[1];
        } else if (result.trials != counts[0] || result.patterns_per_trial != counts[1]) {
            throw DataError("inconsistent trial counts in result CSV row " + std::to_string(k + 1));
        }
        NoiseLevelResult r;
        r.m0 = fields[0];
        r.error = {fields[1], fields[2], counts[0] * counts[1]};
        r.mean_sweeps = fields[3];
        r.convergence_rate = fields[4];
        result.levels.push_back(r);
    }
    return result;
}

void emit_results(const ExperimentResult& result, const std::filesystem::path& path) {
    write_text_file(path, format_results_csv(result));
}

std::string format_characteristics_csv(const MatrixCharacteristics& c) {
    return "N,n,alpha,sparsity,connectivity,bias\n" + std::to_string(c.units) + ',' + std::to_string(c.patterns) +
           ',' + format_fixed6(c.alpha) + ',' + format_fixed6(c.sparsity) + ',' + format_fixed6(c.mean_connectivity) +
           ',' + format_fixed6(c.bias) + '\n';
}

void emit_characteristics(const MatrixCharacteristics& c, const std::filesystem::path& path) {
    write_text_file(path, format_characteristics_csv(c));
}

void print_results_table(std::ostream& out, const ExperimentResult& result) {
    out << std::setw(6) << "m0" << std::setw(12) << "F_B(1)" << std::setw(12) << "F_B(0)" << std::setw(12)
        << "sweeps" << std::setw(12) << "converged" << '\n';
    for (const auto& r : result.levels) {
        out << std::fixed << std::setprecision(2) << std::setw(6) << r.m0 << std::setprecision(4) << std::setw(12)
            << r.error.f_b_ones << std::setw(12) << r.error.f_b_zeros << std::setprecision(2) << std::setw(12)
            << r.mean_sweeps << std::setprecision(3) << std::setw(12) << r.convergence_rate << '\n';
    }
    out << std::defaultfloat << result.trials << " trials x " << result.patterns_per_trial
        << " patterns per noise level\n";
}

}  // namespace hopnet
