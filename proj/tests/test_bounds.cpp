#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "keysec/bounds.hpp"
#include "keysec/constructions.hpp"
#include "keysec/oracle.hpp"

using namespace keysec;
using Catch::Approx;

TEST_CASE("subset_leak_bound evaluates and clamps") {
    // a 10^5-bit segment: the 2^-len term is utterly negligible
    REQUIRE(subset_leak_bound(1e5, 1e-9) == Approx(1e-9));
    REQUIRE(subset_leak_bound(1, 0.0) == Approx(0.5));
    REQUIRE(subset_leak_bound(8, std::ldexp(1.0, -4)) ==
            Approx(std::ldexp(1.0, -8) + std::ldexp(1.0, -4)));
    bool clamped = false;
    REQUIRE(subset_leak_bound(1, 0.9, &clamped) == 1.0);
    REQUIRE(clamped);
    REQUIRE_THROWS_AS(subset_leak_bound(0.5, 0.1), std::invalid_argument);
}

TEST_CASE("multi_segment_bound adds lengths") {
    std::vector<double> one = {7};
    REQUIRE(multi_segment_bound(one, 0.01) == Approx(subset_leak_bound(7, 0.01)));
    std::vector<double> three = {10, 10, 10};
    REQUIRE(multi_segment_bound(three, 1e-9) == Approx(std::ldexp(1.0, -30) + 1e-9));
    // whole block as one segment: the total-compromise cap
    std::vector<double> whole = {12};
    REQUIRE(multi_segment_bound(whole, 0.25) == Approx(std::ldexp(1.0, -12) + 0.25));
    REQUIRE_THROWS_AS(multi_segment_bound({}, 0.1), std::invalid_argument);
}

TEST_CASE("kpa_average_bound matches enumerated averages with equality on the counter-example") {
    REQUIRE(kpa_average_bound(20, 0.0) == Approx(std::ldexp(1.0, -20)));
    REQUIRE(kpa_average_bound(1e5, 1e-9) == Approx(1e-9));

    auto p = kpa_counterexample<double>(8, 4);
    double delta = stat_distance_from_uniform(p);
    auto rep = oracle::exhaustive_kpa(p, 0b1111);
    double bound = kpa_average_bound(4, delta);
    REQUIRE(rep.weighted_average <= bound + 1e-12);
    REQUIRE(rep.weighted_average == Approx(bound));  // construction is tight
}

TEST_CASE("markov_tail") {
    REQUIRE(markov_tail(1e-9, std::pow(10.0, -4.5)) == Approx(std::pow(10.0, -4.5)));
    REQUIRE(markov_tail(2.0, 1.5) == 1.0);
    REQUIRE(markov_tail(0.0, 3.0) == 0.0);
    REQUIRE_THROWS_AS(markov_tail(-1.0, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(markov_tail(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("markov_tail is sound for any empirical sample") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> xs(128);
        double mean = 0.0;
        for (double& x : xs) {
            x = -std::log(1.0 - unit(rng)) * (1.0 + 3.0 * unit(rng));
            mean += x;
        }
        mean /= double(xs.size());
        double gamma = 0.1 + 5.0 * unit(rng);
        double frac = 0.0;
        for (double x : xs)
            if (x >= gamma) frac += 1.0;
        frac /= double(xs.size());
        REQUIRE(frac <= markov_tail(mean, gamma) + 1e-12);
    }
}

TEST_CASE("individual_guarantee: one Markov conversion") {
    REQUIRE(individual_guarantee(0.0) == 0.0);
    REQUIRE(individual_guarantee(1e-9) == Approx(2.0 * std::pow(10.0, -4.5)));
    REQUIRE(individual_guarantee(1e-9) == Approx(6.3246e-5).epsilon(1e-4));
    REQUIRE(individual_guarantee(1e-44) == Approx(2e-22));
    bool clamped = false;
    REQUIRE(individual_guarantee(0.5, &clamped) == 1.0);
    REQUIRE(clamped);
}

TEST_CASE("kpa_individual_guarantee: two Markov conversions") {
    REQUIRE(kpa_individual_guarantee(0.0) == 0.0);
    REQUIRE(kpa_individual_guarantee(1e-9) == Approx(3e-3));
    REQUIRE(kpa_individual_guarantee(1e-30) == Approx(3e-10));
    // the 10^-30 level buys roughly 32-bit-tag authentication security
    REQUIRE(kpa_individual_guarantee(1e-30) / std::ldexp(1.0, -32) < 3.0);
    REQUIRE(std::ldexp(1.0, -32) / kpa_individual_guarantee(1e-30) < 3.0);
}

TEST_CASE("fano_ber_bound endpoints and frozen evaluation") {
    REQUIRE(fano_ber_bound(10, 0.0) == Approx(0.5).margin(2e-9));

    // bisection target: 10 H2(pb) = 10 - 0.02 (10 + log2(50))
    double pb = fano_ber_bound(10, 0.01);
    double rhs = 10.0 - 2.0 * 0.01 * (10.0 + std::log2(50.0));
    REQUIRE(rhs == Approx(9.6871).margin(1e-4));
    REQUIRE(10.0 * binary_entropy(pb) == Approx(rhs).margin(1e-6));
    REQUIRE(pb == Approx(0.39625).margin(1e-4));

    // wide key at a realistic distance level: floor is essentially one half
    REQUIRE(fano_ber_bound(100000, 1e-9) == Approx(0.5).margin(1e-4));

    // vacuous entropy floor
    REQUIRE_THROWS_AS(fano_ber_bound(10, 0.5), std::domain_error);

    // optional exact-leak variant tightens the floor
    REQUIRE(fano_ber_bound(10, 0.01, 0.5) < fano_ber_bound(10, 0.01));
}

TEST_CASE("fano_ber_bound never beats the enumerated optimum") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 300; ++trial) {
        auto p = random_distribution_within(8, 0.05, rng);
        double delta = stat_distance_from_uniform(p);
        double truth = optimal_ber(p);
        double floor = fano_ber_bound(8, delta);
        REQUIRE(truth >= floor - 1e-9);
    }
}

TEST_CASE("pinsker_band") {
    auto zero = pinsker_band(0.0, 5);
    REQUIRE(zero.lower == 0.0);
    REQUIRE(zero.upper.has_value());
    REQUIRE(*zero.upper == 0.0);

    auto band = pinsker_band(0.1, 10);
    REQUIRE(band.lower == Approx(0.02));
    REQUIRE(*band.upper == Approx(8.0 + 2.0 * binary_entropy(0.2)));

    // outside the H2 domain only the lower branch survives
    auto wide = pinsker_band(0.7, 10);
    REQUIRE(wide.lower == Approx(2.0 * 0.49));
    REQUIRE_FALSE(wide.upper.has_value());
}

TEST_CASE("lhl_key_length tradeoff") {
    auto r = lhl_key_length(100, std::ldexp(1.0, -20));
    REQUIRE(r.bits == 60);
    REQUIRE(r.feasible);

    // vacuous target costs nothing
    REQUIRE(lhl_key_length(37, 1.0).bits == 37);

    // boundary: d = 2^(-l/2) exhausts the budget exactly
    auto edge = lhl_key_length(64, std::ldexp(1.0, -32));
    REQUIRE(edge.bits == 0);
    REQUIRE(edge.feasible);

    auto bad = lhl_key_length(64, std::ldexp(1.0, -33));
    REQUIRE(bad.bits == 0);
    REQUIRE_FALSE(bad.feasible);
}

TEST_CASE("lhl_min_d is the square root of the input guess probability") {
    REQUIRE(lhl_min_d(std::ldexp(1.0, -100)) == Approx(std::ldexp(1.0, -50)));
    REQUIRE(lhl_min_d(1.0) == 1.0);
    REQUIRE(lhl_min_d(std::ldexp(1.0, -60)) == Approx(std::ldexp(1.0, -30)));
}

TEST_CASE("granted key length always meets its distance target") {
    // floor(l - 2 log2(1/d)) output bits guarantee 2^-(l-m)/2 <= d
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        double l = 1.0 + 200.0 * unit(rng);
        double d = std::pow(2.0, -40.0 * unit(rng));
        auto granted = lhl_key_length(l, d);
        if (!granted.feasible) {
            REQUIRE(l < 2.0 * std::log2(1.0 / d));
            continue;
        }
        double achieved = std::exp2(-0.5 * (l - double(granted.bits)));
        REQUIRE(achieved <= d * (1.0 + 1e-12));
    }
    // the minimum achievable distance is the zero-length boundary
    REQUIRE(lhl_min_d(std::ldexp(1.0, -64)) ==
            Approx(std::exp2(-0.5 * 64.0)).epsilon(1e-12));
}

TEST_CASE("ecc_leak formulas") {
    REQUIRE(ecc_leak(1e5, 0.0, 1.2) == 0.0);
    REQUIRE(ecc_leak(1e5, 0.02, 1.2) == Approx(16972.865).margin(0.01));
    REQUIRE(ecc_leak(1e5, 0.02, 1.0) == Approx(14144.054).margin(0.01));
    REQUIRE(ecc_leak_systematic(1e5, 0.02) == Approx(16474.170).margin(0.01));
    // systematic accounting always costs more than the f = 1 figure
    for (double q : {0.01, 0.05, 0.11, 0.25})
        REQUIRE(ecc_leak_systematic(1e5, q) > ecc_leak(1e5, q, 1.0));
    REQUIRE_THROWS_AS(ecc_leak(1e5, 0.5, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(ecc_leak(1e5, 0.02, 2.5), std::invalid_argument);
}

TEST_CASE("mac_bounds with a perfect key collapse to the family quality") {
    auto b = mac_bounds(0.01, 0.0, 16.0, 1);
    REQUIRE(b.worst_tag_cap == Approx(0.01));
    REQUIRE(b.avg_substitution == Approx(0.01));
    REQUIRE(b.avg_impersonation == Approx(0.01));
    REQUIRE(b.multiuse_avg == Approx(0.01));
}

TEST_CASE("mac_bounds at the 32-bit-tag scale") {
    const double tag_space = std::ldexp(1.0, 32);
    auto b = mac_bounds(std::ldexp(1.0, -32), 1e-9, tag_space, 1);
    REQUIRE(b.avg_substitution == Approx(1e-9 + 2.3283e-10).epsilon(1e-4));
    // the worst single tag is capped only by eps + eps' * |T|, which clamps
    REQUIRE(b.worst_tag_cap == 1.0);
    REQUIRE(b.worst_clamped);
    REQUIRE(b.floor_cardinality == Approx(std::ldexp(1.0, -32)));
    REQUIRE(b.floor_bit_length == Approx(1.0 / 32.0));
}

TEST_CASE("mac_bounds multiuse grows linearly in the tag covers") {
    auto b = mac_bounds(0.001, 0.0, 256.0, 5, 0.002);
    REQUIRE(b.multiuse_avg == Approx(0.001 + 5 * 0.002));
}

TEST_CASE("complexity_success is the trial fraction") {
    REQUIRE(complexity_success(0, 1024) == 0.0);
    REQUIRE(complexity_success(1024, 1024) == 1.0);
    REQUIRE(complexity_success(std::ldexp(1.0, 40), std::ldexp(1.0, 128)) ==
            Approx(std::ldexp(1.0, -88)));
    REQUIRE_THROWS_AS(complexity_success(2048, 1024), std::invalid_argument);
}

TEST_CASE("per_bit_fallacy column evaluates but is marked refuted") {
    REQUIRE(per_bit_fallacy(0.1, 2) == Approx(0.0025));
    REQUIRE(per_bit_fallacy(0.0, 8) == 0.0);
    // against the achievable whole-key success of the same distance level
    auto p = saturating_distribution<double>(2, 0b11, 0.1);
    REQUIRE(p.max_prob() == Approx(0.35));
    REQUIRE(per_bit_fallacy(0.1, 2) < p.max_prob() / 100.0);

    // accumulated-failure parameters: per-bit level 1e-24 over a 1e6-bit
    // block means d = 1e-18, and the column underflows to nothing
    REQUIRE(per_bit_fallacy_log2(1e-18, 1e6) == Approx(1e6 * std::log2(1e-24)));
    REQUIRE(per_bit_fallacy(1e-18, 1e6) == 0.0);
}

TEST_CASE("ber_fallacy_bound column evaluates but is refuted by construction") {
    REQUIRE(ber_fallacy_bound(0.0) == 0.5);
    REQUIRE(ber_fallacy_bound(1.0) == 0.0);
    REQUIRE(ber_fallacy_bound(0.1) == Approx(0.45));
    auto p = biased_bits_distribution(1, 0.6);  // delta 0.1, error rate 0.4
    REQUIRE(optimal_ber(p) < ber_fallacy_bound(0.1));
}

TEST_CASE("lfsr_whole_key_leak") {
    REQUIRE(lfsr_whole_key_leak(128) == Approx(2.9387e-39).epsilon(1e-4));
    REQUIRE(lfsr_whole_key_leak(1) == 0.5);
    REQUIRE(lfsr_whole_key_leak(8) == Approx(std::ldexp(1.0, -8)));
}

TEST_CASE("evaluate_bound dispatches by name and echoes inputs") {
    auto r = evaluate_bound("subset-leak", {{"subset_len", 8}, {"delta", 0.0625}});
    REQUIRE(r.value == Approx(std::ldexp(1.0, -8) + 0.0625));
    REQUIRE(r.flag == Soundness::valid);
    REQUIRE(r.inputs.size() == 2);

    auto multi = evaluate_bound("multi-segment",
                                {{"len1", 10}, {"len2", 10}, {"len3", 10}, {"delta", 1e-9}});
    REQUIRE(multi.value == Approx(std::ldexp(1.0, -30) + 1e-9));

    auto mac = evaluate_bound("mac", {{"eps_asu", 0.01}, {"eps_key", 0.001}, {"tag_space", 16}});
    REQUIRE(mac.value == Approx(0.011));
    REQUIRE(mac.extras.size() == 5);

    REQUIRE_THROWS_AS(evaluate_bound("no-such-bound", {}), std::invalid_argument);
}

TEST_CASE("only the two fallacy columns carry the refuted flag") {
    std::map<std::string, std::map<std::string, double>> args = {
        {"subset-leak", {{"subset_len", 4}, {"delta", 0.1}}},
        {"multi-segment", {{"len1", 4}, {"delta", 0.1}}},
        {"kpa-average", {{"subset_len", 4}, {"delta", 0.1}}},
        {"markov-tail", {{"mean", 0.1}, {"gamma", 1.0}}},
        {"individual", {{"epsilon", 0.01}}},
        {"kpa-individual", {{"epsilon", 0.01}}},
        {"fano-ber", {{"n", 10}, {"epsilon", 0.01}}},
        {"pinsker-band", {{"delta", 0.1}, {"n", 10}}},
        {"lhl-key-length", {{"min_entropy", 100}, {"d_target", 0.001}}},
        {"lhl-min-d", {{"p1", 0.001}}},
        {"ecc-leak", {{"sifted_len", 1000}, {"qber", 0.02}, {"f", 1.1}}},
        {"ecc-leak-systematic", {{"sifted_len", 1000}, {"qber", 0.02}}},
        {"mac", {{"eps_asu", 0.01}, {"eps_key", 0.001}, {"tag_space", 16}}},
        {"complexity-success", {{"trials", 16}, {"keyspace", 1024}}},
        {"per-bit-fallacy", {{"d", 0.1}, {"n", 4}}},
        {"ber-fallacy", {{"d", 0.1}}},
        {"lfsr-whole-key", {{"seed_bits", 128}}},
    };
    for (const auto& name : bound_names()) {
        auto r = evaluate_bound(name, args.at(name));
        bool should_flag = (name == "per-bit-fallacy" || name == "ber-fallacy");
        REQUIRE((r.flag == Soundness::refuted) == should_flag);
    }
}
