#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <filesystem>
#include <sstream>

#include "cdc/cli.hpp"

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cdc::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("table command emits the standard rows") {
    auto res = run_cli({"table"});
    CHECK(res.code == 0);
    CHECK(res.out.find("| 16 | 3 | 5.33 | 0.27 | 560 | 1820 | - | - | - | 0.41 | 150 | 150 |") !=
          std::string::npos);
    CHECK(res.out.find("| 25 | 5 | 5.00 | 0.16 | 53130 | 177100 | 0.20 | 625 | 2500 | 0.20 | "
                       "3125 | 3125 |") != std::string::npos);

    auto again = run_cli({"table"});
    CHECK(again.out == res.out);  // byte-stable output
}

TEST_CASE("table command in csv with explicit configs") {
    auto res = run_cli({"table", "--configs", "16:4", "--format", "csv"});
    CHECK(res.code == 0);
    CHECK(res.out.find("K,r,m,lmya_L,lmya_N,lmya_G,kr_L,kr_N,kr_G,flcd_L,flcd_N,flcd_G") !=
          std::string::npos);
    CHECK(res.out.find("16,4,4.00,0.19,1820,4368,0.25,64,192,0.25,256,256") != std::string::npos);
}

TEST_CASE("simulate command reports an exact match") {
    auto res = run_cli({"simulate", "--scheme", "flcd3", "--iv-sizes", "1,2,2", "--scale", "2"});
    CHECK(res.code == 0);
    CHECK(res.out.find("predicted load: 3/20") != std::string::npos);
    CHECK(res.out.find("measured load:  3/20") != std::string::npos);
    CHECK(res.out.find("exact match: yes") != std::string::npos);
    CHECK(res.out.find("decode: ok") != std::string::npos);
}

TEST_CASE("simulate rejects infeasible parameters with exit code 2") {
    CHECK(run_cli({"simulate", "--scheme", "flcd", "--nodes", "3", "--load", "2"}).code == 2);
    CHECK(run_cli({"simulate", "--scheme", "flcd", "--nodes", "12", "--load", "7"}).code == 2);
    CHECK(run_cli({"simulate", "--scheme", "nonsense"}).code == 2);
    auto guarded = run_cli({"simulate", "--scheme", "lmya", "--nodes", "25", "--load", "5",
                            "--max-files", "1000"});
    CHECK(guarded.code == 2);
    CHECK(guarded.err.find("53130") != std::string::npos);
}

TEST_CASE("terasort command runs end to end and is reproducible") {
    std::vector<std::string> args{"terasort", "--scheme", "flcd",    "--nodes", "6",
                                  "--load",   "2",        "--records", "2000",  "--seed", "3"};
    auto res = run_cli(args);
    CHECK(res.code == 0);
    CHECK(res.out.find("sorted: yes") != std::string::npos);
    CHECK(res.out.find("permutation: yes") != std::string::npos);
    auto again = run_cli(args);
    CHECK(again.out == res.out);
}

TEST_CASE("terasort writes per-node part files") {
    auto dir = std::filesystem::temp_directory_path() / "cdcsim_cli_test_parts";
    std::filesystem::remove_all(dir);
    auto res = run_cli({"terasort", "--scheme", "flcd3", "--iv-sizes", "1,2,2", "--records",
                        "500", "--output-dir", dir.string()});
    CHECK(res.code == 0);
    std::uintmax_t bytes = 0;
    for (int k = 0; k < 3; ++k) {
        auto part = dir / ("part-" + std::to_string(k) + ".bin");
        REQUIRE(std::filesystem::exists(part));
        bytes += std::filesystem::file_size(part);
    }
    CHECK(bytes == 500 * 20);
    std::filesystem::remove_all(dir);
}

TEST_CASE("terasort can sort a dataset file written by gen-data") {
    auto path = std::filesystem::temp_directory_path() / "cdcsim_cli_test_input.bin";
    std::filesystem::remove(path);
    REQUIRE(run_cli({"gen-data", "--records", "2000", "--seed", "3", "--output", path.string()})
                .code == 0);
    auto from_file = run_cli({"terasort", "--scheme", "flcd", "--nodes", "6", "--load", "2",
                              "--input", path.string(), "--seed", "3"});
    auto from_seed = run_cli({"terasort", "--scheme", "flcd", "--nodes", "6", "--load", "2",
                              "--records", "2000", "--seed", "3"});
    CHECK(from_file.code == 0);
    CHECK(from_file.out == from_seed.out);  // gen-data and the driver share the generator
    std::filesystem::remove(path);
}

TEST_CASE("gen-data writes the requested dataset") {
    auto path = std::filesystem::temp_directory_path() / "cdcsim_cli_test_data.bin";
    std::filesystem::remove(path);
    auto res = run_cli({"gen-data", "--records", "123", "--seed", "9", "--output", path.string()});
    CHECK(res.code == 0);
    REQUIRE(std::filesystem::exists(path));
    CHECK(std::filesystem::file_size(path) == 123 * 20);
    std::filesystem::remove(path);
}

TEST_CASE("config file supplies defaults and flags win") {
    auto path = std::filesystem::temp_directory_path() / "cdcsim_cli_test.conf";
    {
        std::ofstream file(path);
        file << "# defaults\nscheme = flcd\nnodes = 10\nload = 3\n";
    }
    auto from_file = run_cli({"simulate", "--config", path.string()});
    CHECK(from_file.code == 0);
    CHECK(from_file.out.find("K=10  r=3") != std::string::npos);

    auto overridden = run_cli({"simulate", "--config", path.string(), "--nodes", "12"});
    CHECK(overridden.code == 0);
    CHECK(overridden.out.find("K=12  r=3") != std::string::npos);

    {
        std::ofstream file(path);
        file << "records = 7\n";
    }
    // 'records' is a terasort key; simulate rejects it by name
    auto wrong = run_cli({"simulate", "--scheme", "flcd", "--nodes", "8", "--load", "2",
                          "--config", path.string()});
    CHECK(wrong.code == 2);
    std::filesystem::remove(path);
}

TEST_CASE("help exits cleanly") {
    auto res = run_cli({"--help"});
    CHECK(res.code == 0);
    CHECK(res.out.find("table") != std::string::npos);
}
