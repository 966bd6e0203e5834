#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cdc/types.hpp"

namespace cdc {

enum class SchemeId { Uncoded, Lmya, Flcd3, FlcdGeneral };

std::string scheme_name(SchemeId id);
SchemeId scheme_from_name(const std::string& name);  // InvalidParams on unknown

/// Everything a scheme decides: who maps what, who sends what, and how
/// large each function's IVs are.
struct SchemePlan {
    PlacementPlan placement;
    ShufflePlan shuffle;
    IvSizeProfile profile;
};

inline constexpr std::int64_t kDefaultFileLimit = 1'000'000;

/// Size triple of the three-node design. Each of the three wanted IV sets
/// carries the same bit count B = scale * lcm(t1,t2,t3), doubled once when
/// odd so both halves of a set are whole bits; the two-node file sets are
/// sized B/t3, B/t2, B/t1.
struct Flcd3Sizes {
    std::int64_t t1 = 1;
    std::int64_t t2 = 1;
    std::int64_t t3 = 1;

    Flcd3Sizes(std::int64_t a, std::int64_t b, std::int64_t c);
    std::int64_t set_bits(std::int64_t scale = 1) const;
    std::int64_t file_count(std::int64_t scale = 1) const;
};

/// Three-node coded design with arbitrary IV sizes (t1, t2, t3), load 2.
/// One shuffle group, three broadcasts of set_bits/2 each.
SchemePlan build_flcd3(std::int64_t t1, std::int64_t t2, std::int64_t t3, std::int64_t scale = 1);

/// General coded design for K > 3, 2 <= r <= K/2. Nodes split into two
/// classes with contiguous equal blocks; placement groups take one node
/// per block; every placement group is also a shuffle group in which each
/// member broadcasts the XOR of r-1 equal slices, one per other member.
/// `base_iv_bits` is scaled by the smallest factor that makes both the
/// large-class IV size and the per-broadcast slice integral.
SchemePlan build_flcd_general(const NetworkConfig& cfg, std::int64_t base_iv_bits = 1);

/// Binomial-subset design: one file per r-subset of nodes, one shuffle
/// group per (r+1)-subset, uniform IV size `iv_bits` (divisible by r).
SchemePlan build_lmya(const NetworkConfig& cfg, std::int64_t iv_bits,
                      std::int64_t max_files = kDefaultFileLimit);

/// Plain unicast MapReduce: file n is mapped by exactly one node and every
/// missing IV travels uncoded. Node k owns `file_counts[k]` consecutive files.
SchemePlan build_uncoded(const std::vector<std::int64_t>& file_counts,
                         const IvSizeProfile& profile);

/// One experiment, fully parameterized; what the CLI parses into.
struct ExperimentConfig {
    SchemeId scheme = SchemeId::FlcdGeneral;
    int nodes = 0;
    int load = 0;
    std::vector<std::int64_t> iv_sizes;     // flcd3: three; lmya: one; flcd: base; uncoded: per node
    std::vector<std::int64_t> file_counts;  // uncoded only
    std::int64_t scale = 1;                 // flcd3 only
    std::int64_t records = 0;
    std::uint64_t seed = 0;
    std::int64_t max_files = kDefaultFileLimit;
};

/// Build the plan an ExperimentConfig describes, filling scheme defaults
/// (lmya iv size r, flcd base 1, uncoded even file split) where omitted.
SchemePlan build_scheme(const ExperimentConfig& cfg);

/// File count build_flcd3 will actually materialize, doubling included.
std::int64_t flcd3_file_count(std::int64_t t1, std::int64_t t2, std::int64_t t3,
                              std::int64_t scale = 1);

/// Binomial coefficient as a checked 64-bit integer.
std::int64_t binomial(int n, int k);

std::int64_t lcm64(std::int64_t a, std::int64_t b);

/// Split `total` files over `nodes` owners as evenly as possible.
std::vector<std::int64_t> even_file_counts(std::int64_t total, int nodes);

}  // namespace cdc
