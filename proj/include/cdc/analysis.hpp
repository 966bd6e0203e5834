#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cdc/rational.hpp"
#include "cdc/schemes.hpp"

namespace cdc {

/// Closed-form communication loads, exact rationals throughout.

/// (1/r)(1 - r/K), the optimum under uniform IV sizes. 1 <= r <= K.
Rational load_lmya(int nodes, int load);

/// (1/(r-1))(1 - r/K); requires integer K/r and r >= 2, else NotFeasible.
Rational load_kr(int nodes, int load);

/// 3 t1 t2 t3 / (2 (t1t2 + t1t3 + t2t3)(t1 + t2 + t3)) for K = 3, r = 2.
Rational load_flcd3(std::int64_t t1, std::int64_t t2, std::int64_t t3);

/// (1/(r-1)) * (fm^2 - fm) / (fm * (fm+1) - K/r) with fm = floor(K/r).
/// K > 3, 2 <= r <= K/2.
Rational load_flcd_general(int nodes, int load);

/// Unicast load for a given ownership split: sum_k (N - c_k) T_k / (N sum T).
Rational load_uncoded(const std::vector<std::int64_t>& file_counts, const IvSizeProfile& profile);

/// (files, shuffle groups) required by each design.
std::pair<std::int64_t, std::int64_t> counts_lmya(int nodes, int load);
std::pair<std::int64_t, std::int64_t> counts_kr(int nodes, int load);
std::pair<std::int64_t, std::int64_t> counts_flcd(int nodes, int load);

/// Minimal file count for the three-node design: lcm(t) * (1/t1 + 1/t2 + 1/t3).
std::int64_t counts_flcd3_files(std::int64_t t1, std::int64_t t2, std::int64_t t3);

/// Small-class to large-class IV size ratio of the general design,
/// (fm - 1)/fm, or exactly 1 when K/r is an integer.
Rational flcd_iv_ratio(int nodes, int load);

/// Designs compared in the flexibility/complexity table. KR appears via
/// its closed forms only; its construction is out of scope here.
enum class TableDesign { Lmya, Kr, Flcd };

std::string design_name(TableDesign d);

struct LoadReport {
    TableDesign design = TableDesign::Lmya;
    int nodes = 0;
    int load = 0;
    bool feasible = false;
    Rational communication_load;
    std::int64_t files = 0;
    std::int64_t groups = 0;
    Rational iv_ratio = 1;
};

/// One report per design per (K, r) pair, in design order lmya, kr, flcd.
/// Infeasible combinations come back with feasible = false.
std::vector<LoadReport> generate_table(std::span<const std::pair<int, int>> configs);

/// The nine (K, r) pairs of the standard comparison table.
std::span<const std::pair<int, int>> standard_table_configs();

/// Closed-form load for the plan an ExperimentConfig would build.
Rational predicted_load(const ExperimentConfig& cfg);

}  // namespace cdc
