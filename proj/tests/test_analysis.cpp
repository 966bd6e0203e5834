#include <doctest.h>

#include "cdc/analysis.hpp"
#include "cdc/errors.hpp"
#include "cdc/workload.hpp"

using namespace cdc;

TEST_CASE("binomial-design load") {
    CHECK(load_lmya(16, 4) == Rational(3, 16));
    CHECK(load_lmya(16, 4).to_decimal(2) == "0.19");
    CHECK(load_lmya(9, 9) == Rational(0));
    CHECK(load_lmya(25, 3) == Rational(22, 75));
    CHECK(load_lmya(25, 3).to_decimal(2) == "0.29");
    CHECK_THROWS_AS(load_lmya(8, 0), InvalidParams);
    CHECK_THROWS_AS(load_lmya(8, 9), InvalidParams);
}

TEST_CASE("resolvable-design load") {
    CHECK(load_kr(16, 4) == Rational(1, 4));
    CHECK(load_kr(16, 8) == Rational(1, 14));
    CHECK_THROWS_AS(load_kr(16, 3), NotFeasible);
    CHECK_THROWS_AS(load_kr(16, 1), InvalidParams);
}

TEST_CASE("three-node varying-size load") {
    CHECK(load_flcd3(1, 2, 2) == Rational(3, 20));
    CHECK(load_flcd3(1, 1, 1) == Rational(1, 6));
    CHECK(load_flcd3(2, 3, 5) == Rational(45, 310));
    CHECK(load_flcd3(2, 3, 5) == Rational(9, 62));
    CHECK_THROWS_AS(load_flcd3(0, 1, 1), InvalidParams);
}

TEST_CASE("general varying-size load") {
    CHECK(load_flcd_general(16, 3) == Rational(30, 74));
    CHECK(load_flcd_general(16, 3).to_decimal(2) == "0.41");
    CHECK(load_flcd_general(18, 4) == Rational(8, 31));
    CHECK(load_flcd_general(18, 4).to_decimal(4) == "0.2581");
    CHECK(load_flcd_general(16, 4) == load_kr(16, 4));
    CHECK_THROWS_AS(load_flcd_general(3, 2), InvalidParams);
    CHECK_THROWS_AS(load_flcd_general(16, 9), InvalidParams);
}

TEST_CASE("uncoded load formula") {
    CHECK(load_uncoded({2, 3, 3}, IvSizeProfile({1, 2, 2})) == Rational(13, 20));
    CHECK(load_uncoded({1, 1}, IvSizeProfile({4, 4})) == Rational(1, 2));
}

TEST_CASE("file and group counts") {
    CHECK(counts_flcd(16, 3) == std::pair<std::int64_t, std::int64_t>{150, 150});
    CHECK(counts_flcd(25, 5) == std::pair<std::int64_t, std::int64_t>{3125, 3125});
    CHECK(counts_flcd(22, 4) == std::pair<std::int64_t, std::int64_t>{900, 900});
    CHECK(counts_lmya(25, 5) == std::pair<std::int64_t, std::int64_t>{53130, 177100});
    CHECK(counts_lmya(4, 1) == std::pair<std::int64_t, std::int64_t>{4, 6});
    CHECK(counts_kr(25, 5) == std::pair<std::int64_t, std::int64_t>{625, 2500});
    CHECK_THROWS_AS(counts_kr(25, 4), NotFeasible);
    CHECK(counts_flcd3_files(1, 2, 2) == 4);
    CHECK(counts_flcd3_files(2, 3, 5) == 31);
}

namespace {

struct TableRow {
    int nodes, load;
    const char *lmya_l, *kr_l, *flcd_l;
    std::int64_t lmya_n, lmya_g, kr_n, kr_g, flcd_n, flcd_g;
};

// reference comparison table, "-" marks infeasible resolvable designs
constexpr TableRow kTable[] = {
    {16, 3, "0.27", "-", "0.41", 560, 1820, -1, -1, 150, 150},
    {16, 4, "0.19", "0.25", "0.25", 1820, 4368, 64, 192, 256, 256},
    {16, 5, "0.14", "-", "0.17", 4368, 8008, -1, -1, 324, 324},
    {22, 3, "0.29", "-", "0.43", 1540, 7315, -1, -1, 392, 392},
    {22, 4, "0.20", "-", "0.27", 7315, 26334, -1, -1, 900, 900},
    {22, 5, "0.15", "-", "0.19", 26334, 74613, -1, -1, 1600, 1600},
    {25, 3, "0.29", "-", "0.44", 2300, 12650, -1, -1, 576, 576},
    {25, 4, "0.21", "-", "0.28", 12650, 53130, -1, -1, 1512, 1512},
    {25, 5, "0.16", "0.20", "0.20", 53130, 177100, 625, 2500, 3125, 3125},
};

}  // namespace

TEST_CASE("the nine-row comparison table is exact") {
    for (const auto& row : kTable) {
        auto reports = generate_table(std::vector<std::pair<int, int>>{{row.nodes, row.load}});
        REQUIRE(reports.size() == 3);
        const auto& lmya = reports[0];
        const auto& kr = reports[1];
        const auto& flcd = reports[2];
        CHECK(lmya.design == TableDesign::Lmya);
        CHECK(lmya.feasible);
        CHECK(lmya.communication_load.to_decimal(2) == row.lmya_l);
        CHECK(lmya.files == row.lmya_n);
        CHECK(lmya.groups == row.lmya_g);
        if (row.kr_n < 0) {
            CHECK_FALSE(kr.feasible);
        } else {
            CHECK(kr.feasible);
            CHECK(kr.communication_load.to_decimal(2) == row.kr_l);
            CHECK(kr.files == row.kr_n);
            CHECK(kr.groups == row.kr_g);
        }
        CHECK(flcd.feasible);
        CHECK(flcd.communication_load.to_decimal(2) == row.flcd_l);
        CHECK(flcd.files == row.flcd_n);
        CHECK(flcd.groups == row.flcd_g);
    }
}

TEST_CASE("generate_table handles the empty list") {
    CHECK(generate_table({}).empty());
}

TEST_CASE("varying sizes never lose to the uniform three-node bound") {
    SplitMix64 rng{2024};
    for (int i = 0; i < 100; ++i) {
        std::int64_t t1 = 1 + static_cast<std::int64_t>(rng.next() % 50);
        std::int64_t t2 = 1 + static_cast<std::int64_t>(rng.next() % 50);
        std::int64_t t3 = 1 + static_cast<std::int64_t>(rng.next() % 50);
        Rational load = load_flcd3(t1, t2, t3);
        CHECK(load <= Rational(1, 6));
        if (t1 == t2 && t2 == t3)
            CHECK(load == Rational(1, 6));
        else
            CHECK(load < Rational(1, 6));
    }
    CHECK(load_flcd3(7, 7, 7) == Rational(1, 6));
}

TEST_CASE("non-integer K/r beats the uniform-size bound, integer K/r matches it") {
    for (int nodes = 4; nodes <= 20; ++nodes) {
        for (int load = 2; 2 * load <= nodes; ++load) {
            Rational flcd = load_flcd_general(nodes, load);
            Rational uniform_bound = Rational(1, load - 1) * Rational(nodes - load, nodes);
            if (nodes % load == 0) {
                CHECK(flcd == load_kr(nodes, load));
            } else {
                CHECK(flcd < uniform_bound);
            }
        }
    }
}

TEST_CASE("iv ratio of the general design") {
    CHECK(flcd_iv_ratio(16, 5) == Rational(2, 3));
    CHECK(flcd_iv_ratio(16, 4) == Rational(1));
    CHECK(flcd_iv_ratio(18, 4) == Rational(3, 4));
}

TEST_CASE("predicted load dispatch") {
    ExperimentConfig cfg;
    cfg.scheme = SchemeId::Flcd3;
    cfg.iv_sizes = {1, 2, 2};
    CHECK(predicted_load(cfg) == Rational(3, 20));

    cfg = {};
    cfg.scheme = SchemeId::FlcdGeneral;
    cfg.nodes = 18;
    cfg.load = 4;
    CHECK(predicted_load(cfg) == Rational(8, 31));

    cfg = {};
    cfg.scheme = SchemeId::Uncoded;
    cfg.nodes = 3;
    cfg.iv_sizes = {1, 2, 2};
    cfg.file_counts = {2, 3, 3};
    CHECK(predicted_load(cfg) == Rational(13, 20));
}
