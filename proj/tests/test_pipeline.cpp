#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "keysec/pipeline.hpp"

using namespace keysec;
using namespace keysec::pipeline;
using Catch::Approx;

namespace {

ProtocolParams theory_point() {
    ProtocolParams p;
    p.block_len = 1e5;
    p.d_level = 1e-9;
    p.key_rate_bps = 1e7;
    return p;
}

ProtocolParams experimental_point() {
    ProtocolParams p;
    p.block_len = 1e5;
    p.d_level = 4e-9;
    p.key_rate_bps = 1.4e5;
    return p;
}

}  // namespace

TEST_CASE("parameter validation") {
    ProtocolParams p;
    REQUIRE_NOTHROW(p.validate());
    p.qber = 0.5;
    REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
    p = ProtocolParams{};
    p.ecc_factor = 2.5;
    REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
    p = ProtocolParams{};
    p.d_level = 1.5;
    REQUIRE_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("per-block probabilities by model") {
    ProtocolParams p;
    p.block_len = 20;
    p.d_level = 1e-4;
    REQUIRE(per_block_probability(p, LeakModel::average) ==
            Approx(std::ldexp(1.0, -20) + 1e-4));
    REQUIRE(per_block_probability(p, LeakModel::individual) == Approx(1e-2));
    REQUIRE(per_block_probability(p, LeakModel::kpa_individual) ==
            Approx(std::cbrt(1e-4)));
    REQUIRE(per_block_probability(p, LeakModel::per_bit_fallacy) ==
            Approx(std::pow(1e-4 / 20, 20)));
    REQUIRE(per_block_probability(p, LeakModel::uniform_baseline) ==
            Approx(std::ldexp(1.0, -20)));
    REQUIRE(per_block_probability(p, LeakModel::symmetric_cipher_baseline) ==
            Approx(std::ldexp(1.0, -128)));
}

TEST_CASE("log2 path stays finite where the probability underflows") {
    ProtocolParams p = theory_point();
    REQUIRE(per_block_log2(p, LeakModel::uniform_baseline) == Approx(-1e5));
    REQUIRE(std::exp2(-1e5) == 0.0);  // the direct value is gone
    REQUIRE(per_block_log2(p, LeakModel::per_bit_fallacy) ==
            Approx(1e5 * std::log2(1e-9 / 1e5)));
    REQUIRE(per_block_log2(p, LeakModel::average) == Approx(std::log2(1e-9)));
}

TEST_CASE("net key rate after correction accounting") {
    ProtocolParams p;
    p.qber = 0.0;
    REQUIRE(net_key_rate(p).rate_bps == Approx(p.key_rate_bps));

    p = ProtocolParams{};
    p.qber = 0.02;
    p.ecc_factor = 1.0;
    auto net = net_key_rate(p);
    REQUIRE(net.leak_bits == Approx(14144.054).margin(0.01));
    REQUIRE(net.rate_bps == Approx(1e7 * (1e5 - 14144.054) / 1e5).epsilon(1e-6));
    REQUIRE_FALSE(net.infeasible);

    auto sys = net_key_rate(p, true);
    REQUIRE(sys.leak_bits == Approx(16474.170).margin(0.01));
    REQUIRE(sys.rate_bps < net.rate_bps);  // systematic accounting costs more

    // a noisy enough channel eats the whole block
    p.qber = 0.45;
    p.ecc_factor = 1.2;
    auto dead = net_key_rate(p);
    REQUIRE(dead.infeasible);
    REQUIRE(dead.rate_bps == 0.0);
}

TEST_CASE("theory-point projections") {
    ProtocolParams p = theory_point();

    auto avg = leak_projection(p, LeakModel::average);
    REQUIRE(avg.blocks_per_day == Approx(8.64e6));
    REQUIRE(avg.block_leaks_per_day == Approx(8.64e-3).epsilon(1e-6));
    REQUIRE(avg.mean_seconds_between_leaks / kSecondsPerDay == Approx(115.74).margin(0.01));

    auto ind = leak_projection(p, LeakModel::individual);
    REQUIRE(ind.block_leaks_per_day == Approx(273.22).margin(0.01));

    auto kpa = leak_projection(p, LeakModel::kpa_individual);
    REQUIRE(kpa.block_leaks_per_day == Approx(8640.0).epsilon(1e-9));
    REQUIRE(kpa.mean_seconds_between_leaks == Approx(10.0).epsilon(1e-9));
}

TEST_CASE("experimental-point projections") {
    ProtocolParams p = experimental_point();
    REQUIRE(leak_projection(p, LeakModel::individual).block_leaks_per_day ==
            Approx(7.65).margin(0.01));
    REQUIRE(leak_projection(p, LeakModel::kpa_individual).block_leaks_per_day ==
            Approx(192.01).margin(0.01));
}

TEST_CASE("projection bookkeeping identities") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        ProtocolParams p;
        p.block_len = 10 + 1e5 * unit(rng);
        p.d_level = std::pow(10.0, -12.0 * unit(rng));
        p.key_rate_bps = 1e3 + 1e7 * unit(rng);
        for (LeakModel m : {LeakModel::average, LeakModel::individual,
                            LeakModel::kpa_individual, LeakModel::uniform_baseline,
                            LeakModel::symmetric_cipher_baseline}) {
            auto proj = leak_projection(p, m);
            REQUIRE(proj.bit_leaks_per_day ==
                    Approx(proj.block_leaks_per_day * p.block_len).epsilon(1e-12));
            if (proj.block_leaks_per_day > 0.0)
                REQUIRE(proj.mean_seconds_between_leaks ==
                        Approx(kSecondsPerDay / proj.block_leaks_per_day).epsilon(1e-12));
            REQUIRE(proj.expectation_only);
        }
    }
}

TEST_CASE("models order from the refuted column up to the prefix-attack guarantee") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        ProtocolParams p;
        p.block_len = 2 + 1e4 * unit(rng);
        p.d_level = std::pow(10.0, -14.0 * unit(rng));
        double fallacy = per_block_probability(p, LeakModel::per_bit_fallacy);
        double avg = per_block_probability(p, LeakModel::average);
        double ind = per_block_probability(p, LeakModel::individual);
        double kpa = per_block_probability(p, LeakModel::kpa_individual);
        REQUIRE(fallacy <= avg + 1e-15);
        REQUIRE(avg <= ind + 1e-12);
        REQUIRE(ind <= kpa + 1e-12);
    }
}

TEST_CASE("required_d inverts each model") {
    // a practical-impossibility target over one day of 10^7 blocks
    auto r = required_d(1e-15, kSecondsPerDay, 1e7, LeakModel::individual);
    REQUIRE(r.depends_on_d);
    REQUIRE(r.d == Approx(1e-44).epsilon(1e-9));

    auto kpa = required_d(1e-15, kSecondsPerDay, 1e7, LeakModel::kpa_individual);
    REQUIRE(kpa.d == Approx(1e-66).epsilon(1e-9));

    auto avg = required_d(1e-15, kSecondsPerDay, 1e7, LeakModel::average, 1e5);
    REQUIRE(avg.d == Approx(1e-22).epsilon(1e-9));

    // a vacuous target clamps to one
    auto loose = required_d(1.0, 1.0, 1.0, LeakModel::individual);
    REQUIRE(loose.d == 1.0);
    REQUIRE(loose.clamped);

    // baselines do not depend on d at all
    auto base = required_d(1e-15, kSecondsPerDay, 1e7, LeakModel::uniform_baseline, 1e5);
    REQUIRE_FALSE(base.depends_on_d);
    REQUIRE(base.floor_log2 == Approx(-1e5));

    REQUIRE_THROWS_AS(required_d(1e-15, kSecondsPerDay, 1e7, LeakModel::per_bit_fallacy),
                      std::invalid_argument);
}

TEST_CASE("required_d round-trips through the projection") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        double target = std::pow(10.0, -1.0 - 14.0 * unit(rng));
        double horizon = kSecondsPerDay * (0.1 + 10.0 * unit(rng));
        ProtocolParams p;
        p.block_len = 1e3;
        p.key_rate_bps = 1e5 + 1e7 * unit(rng);
        for (LeakModel m :
             {LeakModel::average, LeakModel::individual, LeakModel::kpa_individual}) {
            auto r = required_d(target, horizon, p, m);
            if (r.clamped) continue;
            p.d_level = r.d;
            auto proj = leak_projection(p, m);
            double achieved = proj.block_leaks_per_day * horizon / kSecondsPerDay;
            REQUIRE(achieved <= target * 1.01);
            REQUIRE(achieved >= target * 0.99);
        }
    }
}

TEST_CASE("comparison table carries the five rows with exact security bits") {
    ProtocolParams p = theory_point();
    auto table = table_report(p);
    REQUIRE(table.rows.size() == 5);

    REQUIRE(table.rows[0].model == LeakModel::per_bit_fallacy);
    REQUIRE(table.rows[0].flagged_incorrect);

    for (const auto& row : table.rows)
        REQUIRE(row.security_bits == -row.per_block_log2);  // exact, by construction

    // d = 1e-9 buys about 30 bits per block
    REQUIRE(table.rows[1].model == LeakModel::average);
    REQUIRE(table.rows[1].security_bits == Approx(-std::log2(1e-9)).epsilon(1e-12));
    REQUIRE(table.rows[1].security_bits == Approx(29.897).margin(0.01));

    // the uniform key keeps all 1e5 bits
    REQUIRE(table.rows[3].model == LeakModel::uniform_baseline);
    REQUIRE(table.rows[3].security_bits == Approx(1e5));

    // the 128-bit-seed baseline holds 128 bits at probability 2^-128
    REQUIRE(table.rows[4].model == LeakModel::symmetric_cipher_baseline);
    REQUIRE(table.rows[4].security_bits == 128.0);
    REQUIRE(table.rows[4].per_block_prob == std::exp2(-128.0));

    REQUIRE(table.note.find("bits") != std::string::npos);
}

TEST_CASE("renderers are deterministic and well-formed") {
    std::vector<ComparisonTable> tables = {table_report(theory_point()),
                                           table_report(experimental_point())};
    auto csv1 = render_csv(tables);
    auto csv2 = render_csv(tables);
    REQUIRE(csv1 == csv2);
    REQUIRE(csv1.rfind("block_len,", 0) == 0);
    REQUIRE(std::count(csv1.begin(), csv1.end(), '\n') == 11);  // header + 2x5 rows

    auto md = render_markdown(tables);
    REQUIRE(md.find("| guarantee |") != std::string::npos);
    REQUIRE(md.find("uniform key") != std::string::npos);
}

TEST_CASE("accumulated-failure analysis contrasts the refuted column with corrected models") {
    auto rep = statement_f_analysis(1e-24, 1e6, 1e6);
    REQUIRE(rep.implied_d == Approx(1e-18));

    // the per-bit column promises next to nothing ever happens
    REQUIRE(rep.fallacy_log2_per_block == Approx(1e6 * std::log2(1e-24)));
    REQUIRE(rep.fallacy_accumulated_universe == 0.0);  // underflows utterly

    // corrected projections leak continuously at the same parameters
    REQUIRE(rep.corrected_individual.bit_leaks_per_day == Approx(86.4).margin(0.01));
    REQUIRE(rep.corrected_kpa.bit_leaks_per_day == Approx(86400.0).epsilon(1e-9));
    double days_in_universe = kUniverseAgeSeconds / kSecondsPerDay;
    REQUIRE(rep.corrected_individual.block_leaks_per_day * days_in_universe > 1e6);

    auto silent = statement_f_analysis(0.0, 1e6, 1e6);
    REQUIRE(silent.implied_d == 0.0);
    REQUIRE(silent.corrected_individual.block_leaks_per_day == 0.0);
    REQUIRE(silent.corrected_kpa.block_leaks_per_day == 0.0);
}
