#include <doctest.h>

#include "cdc/analysis.hpp"
#include "cdc/errors.hpp"
#include "cdc/simnet.hpp"

using namespace cdc;

TEST_CASE("map phase computes one IV per function per local file") {
    SchemePlan plan = build_flcd3(1, 2, 2, 2);
    SeededWorkload workload(plan.profile, 1);
    PhaseCounters counters;
    auto stores = run_map(plan.placement, plan.profile, workload, &counters);
    REQUIRE(stores.size() == 3);
    CHECK(stores[0].count() == 4 * 3);  // node 0 maps 4 of the 8 files
    CHECK(stores[1].count() == 6 * 3);
    CHECK(counters.map_ivs == (4 + 6 + 6) * 3);

    auto again = run_map(plan.placement, plan.profile, workload);
    CHECK(stores == again);
}

TEST_CASE("map phase rejects a lying workload") {
    struct Liar final : IvWorkload {
        std::int64_t iv_bits(int) const override { return 4; }
        BitString iv(int, std::int64_t) const override { return BitString::zeros(3); }
    };
    SchemePlan plan = build_flcd3(1, 2, 2, 1);
    CHECK_THROWS_AS(run_map(plan.placement, plan.profile, Liar{}), SizeMismatch);
}

TEST_CASE("empty instance runs to completion") {
    PlacementPlan placement(3, {});
    IvSizeProfile profile({1, 1, 1});
    SeededWorkload workload(profile, 0);
    auto stores = run_map(placement, profile, workload);
    for (const auto& store : stores) CHECK(store.count() == 0);
    SchemePlan plan{placement, ShufflePlan{}, profile};
    SimResult result = run_shuffle(plan, stores, workload);
    CHECK(result.decode_ok);
    CHECK(result.measured_load == Rational(0));
}

TEST_CASE("three-node instance measures 3/20 with three broadcasts") {
    SchemePlan plan = build_flcd3(1, 2, 2, 2);
    SimResult result = simulate(plan, SeededWorkload(plan.profile, 7));
    CHECK(result.decode_ok);
    CHECK(result.measured_load == Rational(3, 20));
    CHECK(result.ledger.entries().size() == 3);
    for (const auto& entry : result.ledger.entries()) CHECK(entry.payload_bits == 2);
    CHECK(result.counters.broadcasts == 3);
    CHECK(result.counters.map_ivs == 48);
}

TEST_CASE("general design measures its closed form exactly") {
    SUBCASE("integer K/r") {
        SchemePlan plan = build_flcd_general(NetworkConfig::create(16, 4));
        SimResult result = simulate(plan, SeededWorkload(plan.profile, 3));
        CHECK(result.decode_ok);
        CHECK(result.measured_load == Rational(1, 4));
        CHECK(result.counters.broadcasts == 256 * 4);
    }
    SUBCASE("smallest fractional case") {
        SchemePlan plan = build_flcd_general(NetworkConfig::create(5, 2));
        SimResult result = simulate(plan, SeededWorkload(plan.profile, 3));
        CHECK(result.decode_ok);
        CHECK(result.measured_load == Rational(4, 7));
        CHECK(result.measured_load == load_flcd_general(5, 2));
    }
}

TEST_CASE("binomial design measures its closed form exactly") {
    SchemePlan plan4 = build_lmya(NetworkConfig::create(4, 2), 2);
    SimResult r4 = simulate(plan4, SeededWorkload(plan4.profile, 11));
    CHECK(r4.decode_ok);
    CHECK(r4.measured_load == Rational(1, 4));

    SchemePlan plan5 = build_lmya(NetworkConfig::create(5, 2), 2);
    SimResult r5 = simulate(plan5, SeededWorkload(plan5.profile, 11));
    CHECK(r5.decode_ok);
    CHECK(r5.measured_load == Rational(3, 10));
}

TEST_CASE("unicast example measures 13/20") {
    SchemePlan plan = build_uncoded({2, 3, 3}, IvSizeProfile({1, 2, 2}));
    SimResult result = simulate(plan, SeededWorkload(plan.profile, 5));
    CHECK(result.decode_ok);
    CHECK(result.measured_load == Rational(13, 20));
    CHECK(result.counters.broadcasts == 16);
    CHECK(result.counters.encode_xors == 0);
}

TEST_CASE("ledger conserves exactly the recipe bits") {
    SchemePlan plan = build_flcd_general(NetworkConfig::create(7, 3));
    SeededWorkload workload(plan.profile, 9);
    SimResult result = simulate(plan, workload);
    std::int64_t recipe_bits = 0;
    for (const auto& group : plan.shuffle.groups)
        for (const auto& msg : group.messages)
            recipe_bits += operand_bits(msg.operands.front(), plan.profile);
    CHECK(result.ledger.payload_bits() == recipe_bits);
    CHECK(result.ledger.entries().size() == static_cast<std::size_t>(plan.shuffle.message_count()));
}

TEST_CASE("shuffle is idempotent and order independent") {
    SchemePlan plan = build_flcd_general(NetworkConfig::create(6, 2));
    SeededWorkload workload(plan.profile, 13);
    auto stores = run_map(plan.placement, plan.profile, workload);

    SimResult first = run_shuffle(plan, stores, workload);
    CHECK(first.decode_ok);
    auto snapshot = stores;
    SimResult second = run_shuffle(plan, stores, workload);
    CHECK(second.decode_ok);
    CHECK(second.measured_load == first.measured_load);
    CHECK(stores == snapshot);

    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto fresh = run_map(plan.placement, plan.profile, workload);
        SimResult shuffled = run_shuffle(plan, fresh, workload, seed);
        CHECK(shuffled.decode_ok);
        CHECK(shuffled.measured_load == first.measured_load);
        CHECK(fresh == stores);
    }
}

TEST_CASE("a corrupted mapper output is caught by verification") {
    SchemePlan plan = build_flcd3(1, 2, 2, 1);
    SeededWorkload workload(plan.profile, 21);
    auto stores = run_map(plan.placement, plan.profile, workload);
    // node 0 flips a bit of one IV it computed for itself
    std::int64_t file = plan.placement.files_of(0).front();
    BitString bad = *stores[0].find(0, file);
    bad.set_bit(0, !bad.bit(0));
    stores[0].put(0, file, bad);
    SimResult result = run_shuffle(plan, stores, workload);
    CHECK_FALSE(result.decode_ok);
    CHECK(result.first_mismatch.find("node 0") != std::string::npos);
    auto fresh = run_map(plan.placement, plan.profile, workload);
    fresh[0].put(0, file, bad);
    CHECK_THROWS_AS(run_shuffle(plan, fresh, workload, std::nullopt, true), DecodeFailure);
}

TEST_CASE("every reference-table configuration measures its closed form") {
    for (auto [nodes, load] : standard_table_configs()) {
        ExperimentConfig cfg;
        cfg.scheme = SchemeId::FlcdGeneral;
        cfg.nodes = nodes;
        cfg.load = load;
        cfg.seed = 99;
        auto cmp = predict_vs_measure(cfg);
        CHECK(cmp.exact);
        CHECK(cmp.decode_ok);
        CHECK(cmp.files == counts_flcd(nodes, load).first);
        CHECK(cmp.groups == counts_flcd(nodes, load).second);
    }
}

TEST_CASE("predicted equals measured across schemes") {
    ExperimentConfig cfg;
    cfg.scheme = SchemeId::Flcd3;
    cfg.iv_sizes = {3, 4, 5};
    auto flcd3 = predict_vs_measure(cfg);
    CHECK(flcd3.exact);
    CHECK(flcd3.decode_ok);

    cfg = {};
    cfg.scheme = SchemeId::FlcdGeneral;
    cfg.nodes = 9;
    cfg.load = 4;
    auto flcd = predict_vs_measure(cfg);
    CHECK(flcd.exact);
    CHECK(flcd.measured == load_flcd_general(9, 4));

    cfg = {};
    cfg.scheme = SchemeId::Lmya;
    cfg.nodes = 6;
    cfg.load = 2;
    auto lmya = predict_vs_measure(cfg);
    CHECK(lmya.exact);
    CHECK(lmya.measured == Rational(1, 3));

    cfg = {};
    cfg.scheme = SchemeId::Uncoded;
    cfg.nodes = 4;
    cfg.iv_sizes = {2, 3, 4, 5};
    cfg.file_counts = {1, 2, 3, 4};
    auto uncoded = predict_vs_measure(cfg);
    CHECK(uncoded.exact);
}
