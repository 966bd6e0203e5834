#include "cdc/analysis.hpp"

#include <array>
#include <limits>

#include "cdc/errors.hpp"

namespace cdc {

namespace {

void check_pair(int nodes, int load, int min_load) {
    if (nodes < 1) throw InvalidParams("node count must be positive");
    if (load < min_load || load > nodes) throw InvalidParams("computation load out of range");
}

std::int64_t ipow(std::int64_t base, int exp) {
    __int128 r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= base;
        if (r > std::numeric_limits<std::int64_t>::max())
            throw std::overflow_error("power exceeds 64 bits");
    }
    return static_cast<std::int64_t>(r);
}

}  // namespace

Rational load_lmya(int nodes, int load) {
    check_pair(nodes, load, 1);
    return Rational(1, load) * Rational(nodes - load, nodes);
}

Rational load_kr(int nodes, int load) {
    check_pair(nodes, load, 2);
    if (nodes % load != 0) throw NotFeasible("resolvable design requires integer K/r");
    return Rational(1, load - 1) * Rational(nodes - load, nodes);
}

Rational load_flcd3(std::int64_t t1, std::int64_t t2, std::int64_t t3) {
    if (t1 <= 0 || t2 <= 0 || t3 <= 0) throw InvalidParams("IV sizes must be positive");
    Rational num = Rational(3) * Rational(t1) * Rational(t2) * Rational(t3);
    Rational den = Rational(2) * Rational(t1 * t2 + t1 * t3 + t2 * t3) * Rational(t1 + t2 + t3);
    return num / den;
}

Rational load_flcd_general(int nodes, int load) {
    if (nodes <= 3) throw InvalidParams("general coded design needs more than 3 nodes");
    if (load < 2 || 2 * load > nodes)
        throw InvalidParams("computation load must satisfy 2 <= r <= K/2");
    std::int64_t fm = nodes / load;
    Rational denom = Rational(fm * (fm + 1)) - Rational(nodes, load);
    return Rational(1, load - 1) * (Rational(fm * fm - fm) / denom);
}

Rational load_uncoded(const std::vector<std::int64_t>& file_counts,
                      const IvSizeProfile& profile) {
    if (static_cast<int>(file_counts.size()) != profile.functions())
        throw InvalidParams("one file count per node required");
    std::int64_t total = 0;
    for (auto c : file_counts) total += c;
    if (total <= 0) throw InvalidParams("no files assigned");
    Rational sent = 0;
    for (int k = 0; k < profile.functions(); ++k)
        sent += Rational((total - file_counts[static_cast<std::size_t>(k)]) * profile.bits(k));
    return sent / Rational(total * profile.total_bits());
}

std::pair<std::int64_t, std::int64_t> counts_lmya(int nodes, int load) {
    check_pair(nodes, load, 1);
    return {binomial(nodes, load), binomial(nodes, load + 1)};
}

std::pair<std::int64_t, std::int64_t> counts_kr(int nodes, int load) {
    check_pair(nodes, load, 2);
    if (nodes % load != 0) throw NotFeasible("resolvable design requires integer K/r");
    std::int64_t m = nodes / load;
    std::int64_t files = ipow(m, load - 1);
    return {files, files * (m - 1)};
}

std::pair<std::int64_t, std::int64_t> counts_flcd(int nodes, int load) {
    if (nodes <= 3) throw InvalidParams("general coded design needs more than 3 nodes");
    if (load < 2 || 2 * load > nodes)
        throw InvalidParams("computation load must satisfy 2 <= r <= K/2");
    std::int64_t fm = nodes / load;
    int r2 = (fm + 1) * load - nodes;
    int r1 = nodes - static_cast<int>(fm) * load;
    std::int64_t files = ipow(fm, r2) * ipow(fm + 1, r1);
    return {files, files};
}

std::int64_t counts_flcd3_files(std::int64_t t1, std::int64_t t2, std::int64_t t3) {
    if (t1 <= 0 || t2 <= 0 || t3 <= 0) throw InvalidParams("IV sizes must be positive");
    std::int64_t unit = lcm64(t1, lcm64(t2, t3));
    return unit / t1 + unit / t2 + unit / t3;
}

Rational flcd_iv_ratio(int nodes, int load) {
    if (nodes % load == 0) return 1;
    std::int64_t fm = nodes / load;
    return Rational(fm - 1, fm);
}

std::string design_name(TableDesign d) {
    switch (d) {
        case TableDesign::Lmya: return "lmya";
        case TableDesign::Kr: return "kr";
        case TableDesign::Flcd: return "flcd";
    }
    return "?";
}

std::vector<LoadReport> generate_table(std::span<const std::pair<int, int>> configs) {
    std::vector<LoadReport> rows;
    for (auto [nodes, load] : configs) {
        LoadReport lmya;
        lmya.design = TableDesign::Lmya;
        lmya.nodes = nodes;
        lmya.load = load;
        lmya.feasible = true;
        lmya.communication_load = load_lmya(nodes, load);
        std::tie(lmya.files, lmya.groups) = counts_lmya(nodes, load);
        rows.push_back(lmya);

        LoadReport kr;
        kr.design = TableDesign::Kr;
        kr.nodes = nodes;
        kr.load = load;
        try {
            kr.communication_load = load_kr(nodes, load);
            std::tie(kr.files, kr.groups) = counts_kr(nodes, load);
            kr.feasible = true;
        } catch (const NotFeasible&) {
        } catch (const InvalidParams&) {
        }
        rows.push_back(kr);

        LoadReport flcd;
        flcd.design = TableDesign::Flcd;
        flcd.nodes = nodes;
        flcd.load = load;
        try {
            flcd.communication_load = load_flcd_general(nodes, load);
            std::tie(flcd.files, flcd.groups) = counts_flcd(nodes, load);
            flcd.iv_ratio = flcd_iv_ratio(nodes, load);
            flcd.feasible = true;
        } catch (const InvalidParams&) {
        }
        rows.push_back(flcd);
    }
    return rows;
}

std::span<const std::pair<int, int>> standard_table_configs() {
    static const std::array<std::pair<int, int>, 9> configs{{
        {16, 3}, {16, 4}, {16, 5}, {22, 3}, {22, 4}, {22, 5}, {25, 3}, {25, 4}, {25, 5},
    }};
    return configs;
}

Rational predicted_load(const ExperimentConfig& cfg) {
    switch (cfg.scheme) {
        case SchemeId::Flcd3:
            if (cfg.iv_sizes.size() != 3) throw InvalidParams("flcd3 needs three IV sizes");
            return load_flcd3(cfg.iv_sizes[0], cfg.iv_sizes[1], cfg.iv_sizes[2]);
        case SchemeId::FlcdGeneral:
            return load_flcd_general(cfg.nodes, cfg.load);
        case SchemeId::Lmya:
            return load_lmya(cfg.nodes, cfg.load);
        case SchemeId::Uncoded: {
            SchemePlan plan = build_scheme(cfg);
            std::vector<std::int64_t> counts(static_cast<std::size_t>(plan.placement.nodes()));
            for (int k = 0; k < plan.placement.nodes(); ++k)
                counts[static_cast<std::size_t>(k)] =
                    static_cast<std::int64_t>(plan.placement.files_of(k).size());
            return load_uncoded(counts, plan.profile);
        }
    }
    throw InvalidParams("unknown scheme");
}

}  // namespace cdc
