#include <doctest.h>

#include "cdc/errors.hpp"
#include "cdc/types.hpp"

using namespace cdc;

TEST_CASE("network config class split invariants") {
    for (int nodes = 1; nodes <= 40; ++nodes) {
        for (int load = 1; load <= nodes; ++load) {
            auto cfg = NetworkConfig::create(nodes, load);
            CHECK(cfg.k1 + cfg.k2 == nodes);
            CHECK(cfg.r1 + cfg.r2 == load);
            if (cfg.r1 > 0) CHECK(cfg.k1 == cfg.m_hat * cfg.r1);
            if (cfg.r2 > 0) CHECK(cfg.k2 == cfg.floor_m * cfg.r2);
            CHECK((cfg.k1 == 0) == cfg.integer_m());
        }
    }
    CHECK_THROWS_AS(NetworkConfig::create(4, 5), InvalidParams);
    CHECK_THROWS_AS(NetworkConfig::create(0, 1), InvalidParams);
}

TEST_CASE("iv size profile validation") {
    CHECK_THROWS_AS(IvSizeProfile({}), InvalidParams);
    CHECK_THROWS_AS(IvSizeProfile({1, 0, 2}), InvalidParams);
    IvSizeProfile p({1, 2, 2});
    CHECK(p.total_bits() == 5);
    CHECK(p.bits(2) == 2);
}

TEST_CASE("placement plan derives per-node file lists") {
    PlacementPlan plan(3, {{0, 1}, {0, 2}, {1, 2}, {1, 2}});
    CHECK(plan.files() == 4);
    CHECK(plan.replication() == 2);
    CHECK(plan.files_of(0) == std::vector<std::int64_t>{0, 1});
    CHECK(plan.files_of(2) == std::vector<std::int64_t>{1, 2, 3});
    CHECK(plan.maps(1, 3));
    CHECK_FALSE(plan.maps(0, 3));
    std::int64_t mapped = 0;
    for (int k = 0; k < 3; ++k) mapped += static_cast<std::int64_t>(plan.files_of(k).size());
    CHECK(mapped == plan.files() * plan.replication());
}

TEST_CASE("placement plan rejects malformed groups") {
    CHECK_THROWS_AS(PlacementPlan(3, {{0, 1}, {2}}), InvalidParams);
    CHECK_THROWS_AS(PlacementPlan(3, {{1, 0}}), InvalidParams);
    CHECK_THROWS_AS(PlacementPlan(3, {{0, 0}}), InvalidParams);
    CHECK_THROWS_AS(PlacementPlan(3, {{0, 3}}), InvalidParams);
}

TEST_CASE("operand segments tile the requested part") {
    IvSizeProfile profile({2, 2, 2});
    Operand op;
    op.target = 0;
    op.files = {4, 5, 6};
    op.part_count = 2;

    op.part_index = 0;
    auto first = operand_segments(op, profile);
    REQUIRE(first.size() == 2);
    CHECK(first[0].file == 4);
    CHECK(first[0].bit_lo == 0);
    CHECK(first[0].bit_hi == 2);
    CHECK(first[1].file == 5);
    CHECK(first[1].bit_lo == 0);
    CHECK(first[1].bit_hi == 1);

    op.part_index = 1;
    auto second = operand_segments(op, profile);
    REQUIRE(second.size() == 2);
    CHECK(second[0].file == 5);
    CHECK(second[0].bit_lo == 1);
    CHECK(second[0].bit_hi == 2);
    CHECK(second[1].file == 6);

    CHECK(operand_bits(op, profile) == 3);
    op.part_count = 4;
    CHECK_THROWS_AS(operand_bits(op, profile), PlanDefect);  // 6 bits into 4 parts
}

namespace {

// 2 nodes, 2 files, each node owns one file and unicasts the other's IV.
ShufflePlan tiny_unicast_plan() {
    ShufflePlan plan;
    ShuffleGroup g;
    g.members = {0, 1};
    g.messages.push_back({0, {{1, {0}, 0, 1}}});
    g.messages.push_back({1, {{0, {1}, 0, 1}}});
    plan.groups.push_back(g);
    return plan;
}

}  // namespace

TEST_CASE("validate_plan accepts a correct plan and names defects") {
    PlacementPlan placement(2, {{0}, {1}});
    IvSizeProfile profile({4, 4});
    CHECK_NOTHROW(validate_plan(placement, profile, tiny_unicast_plan()));

    SUBCASE("coverage gap") {
        auto plan = tiny_unicast_plan();
        plan.groups[0].messages.pop_back();
        CHECK_THROWS_AS(validate_plan(placement, profile, plan), PlanDefect);
    }
    SUBCASE("overlapping delivery") {
        auto plan = tiny_unicast_plan();
        plan.groups[0].messages.push_back(plan.groups[0].messages[0]);
        CHECK_THROWS_AS(validate_plan(placement, profile, plan), PlanDefect);
    }
    SUBCASE("sender does not map the file") {
        PlacementPlan p3(3, {{0}, {1}, {2}});
        IvSizeProfile prof({4, 4, 4});
        ShufflePlan plan;
        ShuffleGroup g;
        g.members = {0, 1, 2};
        // file 0 belongs to node 0 alone; node 1 cannot source it
        g.messages.push_back({1, {{2, {0}, 0, 1}}});
        plan.groups.push_back(g);
        CHECK_THROWS_AS(validate_plan(p3, prof, plan), PlanDefect);
    }
    SUBCASE("operand already local to its requester") {
        auto plan = tiny_unicast_plan();
        plan.groups[0].messages[0].operands[0].target = 0;
        CHECK_THROWS_AS(validate_plan(placement, profile, plan), PlanDefect);
    }
    SUBCASE("unequal xor operands") {
        PlacementPlan p3(3, {{0, 1}, {0, 2}, {1, 2}});
        IvSizeProfile prof({4, 4, 8});
        ShufflePlan plan;
        ShuffleGroup g;
        g.members = {0, 1, 2};
        // 4-bit and 8-bit operands in one message
        g.messages.push_back({0, {{1, {1}, 0, 1}, {2, {0}, 0, 1}}});
        plan.groups.push_back(g);
        CHECK_THROWS_AS(validate_plan(p3, prof, plan), PlanDefect);
    }
    SUBCASE("recipient lacks side information") {
        PlacementPlan p3(3, {{0, 1}, {0, 2}, {1, 2}});
        IvSizeProfile prof({4, 4, 4});
        ShufflePlan plan;
        ShuffleGroup g;
        g.members = {0, 1, 2};
        // node 1 must cancel the operand built from file 1, which it does not map
        g.messages.push_back({0, {{1, {1}, 0, 1}, {2, {1}, 0, 1}}});
        plan.groups.push_back(g);
        CHECK_THROWS_AS(validate_plan(p3, prof, plan), PlanDefect);
    }
}

TEST_CASE("ledger accumulates payload bits") {
    ShuffleLedger ledger(40);
    ledger.add(0, 0, 2);
    ledger.add(1, 0, 2);
    ledger.add(2, 0, 2);
    CHECK(ledger.entries().size() == 3);
    CHECK(ledger.payload_bits() == 6);
    CHECK(ledger.measured_load() == Rational(3, 20));
}

TEST_CASE("iv store assembles values from segments") {
    IvStore store;
    BitString whole = BitString::from_word(0b1011010, 7);
    store.write_segment(1, 9, 7, 0, whole.slice(0, 3));
    CHECK(store.contains(1, 9));
    CHECK_FALSE(store.contains(0, 9));
    store.write_segment(1, 9, 7, 3, whole.slice(3, 4));
    REQUIRE(store.find(1, 9) != nullptr);
    CHECK(*store.find(1, 9) == whole);
}
