#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "hopnet/errors.hpp"
#include "hopnet/experiments.hpp"
#include "hopnet/network.hpp"
#include "hopnet/random.hpp"
#include "hopnet/reference.hpp"
#include "oracle.hpp"

using namespace hopnet;

namespace {

std::vector<Pattern> to_patterns(const std::vector<oracle::Bits>& bits) {
    std::vector<Pattern> out;
    for (const auto& b : bits) out.emplace_back(b);
    return out;
}

std::vector<oracle::Bits> random_bits(Rng& rng, std::size_t n, std::size_t units, double density) {
    std::vector<oracle::Bits> out(n, oracle::Bits(units));
    for (auto& p : out) {
        for (auto& b : p) b = rng.bernoulli(density) ? 1 : 0;
    }
    return out;
}

}  // namespace

TEST_CASE("single pattern, no inhibitor") {
    const auto net = train(to_patterns({{1, 1, 0, 0}}), 4, 0.0);
    const auto& w = net.weights;
    CHECK(w.weight(0, 1) == 0.25);
    CHECK(w.weight(1, 0) == 0.25);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if ((i == 0 && j == 1) || (i == 1 && j == 0)) continue;
            CHECK(w.weight(i, j) == 0.0);
        }
    }
}

TEST_CASE("single pattern, inhibitor 10") {
    const auto w = train(to_patterns({{1, 1, 0, 0}}), 4, 10.0).weights;
    CHECK(w.weight(0, 1) == 0.25);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(w.weight(i, i) == 0.0);
        for (std::size_t j = 0; j < 4; ++j) {
            if (i == j || (i < 2 && j < 2)) continue;
            CHECK(w.weight(i, j) == -2.5);
        }
    }
}

TEST_CASE("three patterns match a brute-force count") {
    const std::vector<oracle::Bits> bits{{1, 1, 0}, {1, 1, 0}, {1, 0, 1}};
    const auto w = train(to_patterns(bits), 3, 0.0).weights;
    CHECK(w.weight(0, 1) == doctest::Approx(2.0 / 3.0));
    CHECK(w.weight(0, 2) == doctest::Approx(1.0 / 3.0));
    CHECK(w.weight(1, 2) == 0.0);
    const auto c = oracle::counts(bits, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) CHECK(static_cast<int>(w.count(i, j)) == c[i][j]);
    }
}

TEST_CASE("train rejects degenerate input") {
    CHECK_THROWS_WITH_AS(train(to_patterns({{1}}), 1, 10.0), "degenerate network", DataError);
    CHECK_THROWS_AS(train(std::vector<Pattern>{}, 4, 10.0), DataError);
    CHECK_THROWS_AS(train(to_patterns({{1, 1, 0}}), 3, -1.0), DataError);
}

TEST_CASE("weights equal the dense oracle on random instances") {
    Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t units = 2 + rng.below(30);
        const std::size_t n = 1 + rng.below(12);
        const double inhibitor = trial % 2 ? 10.0 : 0.0;
        const auto bits = random_bits(rng, n, units, 0.25);
        const auto w = train(to_patterns(bits), units, inhibitor).weights;
        const auto dense = oracle::weights(bits, units, inhibitor);
        const auto c = oracle::counts(bits, units);
        std::size_t positive = 0;
        std::size_t negative = 0;
        for (std::size_t i = 0; i < units; ++i) {
            for (std::size_t j = 0; j < units; ++j) {
                CHECK(w.weight(i, j) == dense[i][j]);
                CHECK(w.weight(i, j) == w.weight(j, i));
                if (c[i][j] > 0) {
                    CHECK(std::abs(static_cast<double>(units) * w.weight(i, j) - c[i][j]) < 1e-12);
                    ++positive;
                }
                if (i != j && w.weight(i, j) < 0) ++negative;
            }
            CHECK(w.weight(i, i) == 0.0);
        }
        CHECK(w.positive_entries() == positive);
        if (inhibitor > 0) CHECK(positive + negative == units * (units - 1));
    }
}

TEST_CASE("parallel cooccurrence kernel equals the serial reference") {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t units = 50 + rng.below(400);
        const auto bits = random_bits(rng, 20 + rng.below(200), units, 0.03);
        const auto patterns = to_patterns(bits);
        CHECK(cooccurrence_counts(patterns, units) == reference::cooccurrence_counts(patterns, units));
    }
    const PatternSet topic = generate_topic_patterns(400, 1500, {}, 3);
    CHECK(cooccurrence_counts(topic.patterns(), 1500) == reference::cooccurrence_counts(topic.patterns(), 1500));
}

TEST_CASE("from_entries validation") {
    CHECK_THROWS_AS(WeightMatrix::from_entries(3, 1.0, {{1, 1, 1}}), DataError);
    CHECK_THROWS_AS(WeightMatrix::from_entries(3, 1.0, {{2, 1, 1}}), DataError);
    CHECK_THROWS_AS(WeightMatrix::from_entries(3, 1.0, {{0, 3, 1}}), DataError);
    CHECK_THROWS_AS(WeightMatrix::from_entries(3, 1.0, {{0, 1, 0}}), DataError);
    CHECK_THROWS_AS(WeightMatrix::from_entries(3, 1.0, {{0, 1, 1}, {0, 1, 2}}), DataError);
    CHECK_THROWS_AS(WeightMatrix::from_entries(3, -1.0, {}), DataError);
    const auto w = WeightMatrix::from_entries(3, 1.0, {{1, 2, 4}, {0, 2, 1}});
    CHECK(w.entries() == std::vector<CooccurrenceEntry>{{0, 2, 1}, {1, 2, 4}});
    CHECK(w.count(2, 1) == 4);
}

TEST_CASE("local_field") {
    const auto net = train(to_patterns({{1, 1, 0, 0}}), 4, 0.0);
    NetworkState zero = NetworkState::zeros(4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(local_field(zero, net.weights, i) == 0.0);

    NetworkState s = NetworkState::zeros(4);
    s.outputs = {0, 1, 0, 0};
    CHECK(local_field(s, net.weights, 0) == 0.25);
    CHECK_THROWS_AS(local_field(s, net.weights, 4), DataError);
    s.thresholds.pop_back();
    CHECK_THROWS_AS(local_field(s, net.weights, 0), DataError);
}

TEST_CASE("local_field equals the dense sum including external input") {
    Rng rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t units = 2 + rng.below(40);
        const double inhibitor = rng.bernoulli(0.5) ? 10.0 : rng.uniform() * 5.0;
        const auto bits = random_bits(rng, 1 + rng.below(8), units, 0.3);
        const auto w = train(to_patterns(bits), units, inhibitor).weights;
        const auto dense = oracle::weights(bits, units, inhibitor);
        NetworkState s = NetworkState::zeros(units);
        for (auto& b : s.outputs) b = rng.bernoulli(0.4) ? 1 : 0;
        for (auto& x : s.external_inputs) x = rng.uniform() - 0.5;
        for (std::size_t i = 0; i < units; ++i) {
            CHECK(local_field(s, w, i) == doctest::Approx(oracle::field(dense, s.outputs, s.external_inputs, i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("update_unit uses >= at the threshold") {
    // field at unit 0 is 0.25 when unit 1 is on, 0 otherwise
    const auto w = train(to_patterns({{1, 1, 0, 0}}), 4, 0.0).weights;
    NetworkState s = NetworkState::zeros(4, 0.1);
    s.outputs = {0, 1, 0, 0};
    CHECK(update_unit(s, w, 0));
    CHECK(s.outputs[0] == 1);

    NetworkState tie = NetworkState::zeros(4, 0.0);
    CHECK(update_unit(tie, w, 0));

    // field -0.5 via external input
    NetworkState below = NetworkState::zeros(4, 0.0);
    below.outputs[0] = 1;
    below.external_inputs[0] = -0.5;
    CHECK_FALSE(update_unit(below, w, 0));
    CHECK(below.outputs[0] == 0);
}

TEST_CASE("energy examples") {
    const auto net = train(to_patterns({{1, 1, 0, 0}}), 4, 0.0);
    CHECK(energy(NetworkState::zeros(4, 0.3), net.weights) == 0.0);
    NetworkState s = NetworkState::zeros(4);
    s.outputs = {1, 1, 0, 0};
    CHECK(energy(s, net.weights) == doctest::Approx(-0.25));
}

TEST_CASE("energy equals the dense quadratic form") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t units = 2 + rng.below(30);
        const double inhibitor = trial % 2 ? 10.0 : 0.0;
        const auto bits = random_bits(rng, 1 + rng.below(6), units, 0.3);
        const auto w = train(to_patterns(bits), units, inhibitor).weights;
        NetworkState s = NetworkState::zeros(units, rng.uniform());
        for (auto& b : s.outputs) b = rng.bernoulli(0.5) ? 1 : 0;
        for (auto& x : s.external_inputs) x = rng.uniform();
        const double expected = oracle::energy(oracle::weights(bits, units, inhibitor), s.outputs, s.thresholds,
                                               s.external_inputs);
        CHECK(energy(s, w) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("single-unit updates never raise the energy") {
    Rng rng(41);
    std::size_t updates = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t units = 4 + rng.below(40);
        const double inhibitor = trial % 2 ? 10.0 : 0.0;
        const auto bits = random_bits(rng, 1 + rng.below(6), units, 0.2);
        const auto net = train(to_patterns(bits), units, inhibitor);
        NetworkState s{BitVector(units), net.thresholds, std::vector<double>(units, 0.0)};
        for (auto& b : s.outputs) b = rng.bernoulli(0.5) ? 1 : 0;
        double e = energy(s, net.weights);
        for (int step = 0; step < 200; ++step) {
            update_unit(s, net.weights, rng.below(units));
            const double next = energy(s, net.weights);
            CHECK(next <= e + 1e-12);
            e = next;
            ++updates;
        }
    }
    CHECK(updates == 6000);
}

TEST_CASE("recall from a stored pattern of a single-pattern network") {
    const std::vector<oracle::Bits> stored{{1, 1, 0, 0}};
    const auto net = train(to_patterns(stored), 4, 10.0);
    const auto dense = oracle::weights(stored, 4, 10.0);
    CHECK(net.thresholds[0] == doctest::Approx(oracle::default_threshold(dense, stored, 0.5)));

    // exhaustive scan of all 16 states against the dense oracle
    std::vector<oracle::Bits> fixed;
    for (std::uint64_t code = 0; code < 16; ++code) {
        const auto v = oracle::state_bits(code, 4);
        NetworkState s{v, net.thresholds, std::vector<double>(4, 0.0)};
        const bool expect = oracle::fixed_point(dense, v, net.thresholds);
        CHECK(is_fixed_point(s, net.weights) == expect);
        if (expect) fixed.push_back(v);
    }
    CHECK(std::find(fixed.begin(), fixed.end(), stored[0]) != fixed.end());

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto out = recall(stored[0], net, seed);
        CHECK(out.final_state == stored[0]);
        CHECK(out.converged);
        CHECK(out.sweeps_used <= 2);
    }
}

TEST_CASE("all-zero state is a fixed point under positive thresholds") {
    Rng rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t units = 10 + rng.below(100);
        const auto net = train(to_patterns(random_bits(rng, 5, units, 0.1)), units, 10.0);
        REQUIRE(net.thresholds[0] > 0.0);
        const BitVector zero(units, 0);
        const auto out = recall(zero, net, rng.next());
        CHECK(out.final_state == zero);
        CHECK(out.converged);
        CHECK(out.sweeps_used == 1);
        CHECK(out.energy_trace == std::vector<double>{0.0});
    }
}

TEST_CASE("recall is deterministic and its energy trace is nonincreasing") {
    const PatternSet set = generate_topic_patterns(90, 500, {}, 9);
    const auto net = train(set, 10.0);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const BitVector probe = inject_noise(set.patterns()[seed].bits(), 0.1, seed);
        const auto a = recall(probe, net, seed);
        const auto b = recall(probe, net, seed);
        CHECK(a == b);
        NetworkState start{probe, net.thresholds, std::vector<double>(500, 0.0)};
        double prev = energy(start, net.weights);
        for (double e : a.energy_trace) {
            CHECK(e <= prev + 1e-12);
            prev = e;
        }
        if (a.converged) {
            NetworkState end{a.final_state, net.thresholds, std::vector<double>(500, 0.0)};
            CHECK(is_fixed_point(end, net.weights));
        }
        CHECK(a.energy_trace.size() == a.sweeps_used);
    }
}

TEST_CASE("recall respects max_sweeps and validates lengths") {
    const auto net = train(to_patterns({{1, 1, 0, 0}}), 4, 10.0);
    CHECK_THROWS_AS(recall(BitVector{1, 1, 0}, net, 1), DataError);
    CHECK_THROWS_AS(recall(BitVector{1, 1, 0, 0}, net, 1, 0), DataError);
    // from the full state the first sweep must change bits, so one sweep is not enough to converge
    const auto out = recall(BitVector{1, 1, 1, 1}, net, 3, 1);
    CHECK(out.sweeps_used == 1);
    CHECK_FALSE(out.converged);
}

TEST_CASE("external inputs clamp a unit on") {
    const auto net = train(to_patterns({{1, 1, 0, 0}}), 4, 10.0);
    std::vector<double> input(4, 0.0);
    input[3] = 100.0;
    const auto out = recall(BitVector{0, 0, 0, 0}, net.weights, net.thresholds, input, 1);
    CHECK(out.final_state == BitVector{0, 0, 0, 1});
}

TEST_CASE("threshold policy") {
    const auto patterns = to_patterns({{1, 1, 0, 0}});
    ThresholdPolicy fixed;
    fixed.fixed_threshold = 0.7;
    CHECK(train(patterns, 4, 10.0, fixed).thresholds == std::vector<double>(4, 0.7));
    ThresholdPolicy full;
    full.theta_fraction = 1.0;
    CHECK(train(patterns, 4, 10.0, full).thresholds[2] == doctest::Approx(0.25));
}
