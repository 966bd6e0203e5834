#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdc/schemes.hpp"
#include "cdc/types.hpp"
#include "cdc/workload.hpp"

namespace cdc {

struct PhaseCounters {
    std::int64_t map_ivs = 0;
    std::int64_t encode_xors = 0;
    std::int64_t broadcasts = 0;
    std::int64_t decode_xors = 0;
};

struct SimResult {
    Rational measured_load;
    ShuffleLedger ledger{1};
    bool decode_ok = false;
    std::string first_mismatch;
    PhaseCounters counters;
};

/// Map phase: every node computes, for each locally available file, the IV
/// of every output function. SizeMismatch if the workload produces an IV of
/// the wrong length.
std::vector<IvStore> run_map(const PlacementPlan& placement, const IvSizeProfile& profile,
                             const IvWorkload& workload, PhaseCounters* counters = nullptr);

/// Shuffle phase over an error-free broadcast link. Encodes each message
/// from the sender's store, logs its exact bit length, then has every
/// recipient cancel the other operands with locally recomputed IVs and
/// write the recovered segments into its own store. Afterwards every node
/// is checked, bit for bit, against the workload for all N of its IVs.
/// Message processing order can be permuted with `order_seed`; results do
/// not depend on it. With throw_on_failure, a verification miss raises
/// DecodeFailure instead of reporting decode_ok = false.
SimResult run_shuffle(const SchemePlan& plan, std::vector<IvStore>& stores,
                      const IvWorkload& workload,
                      std::optional<std::uint64_t> order_seed = std::nullopt,
                      bool throw_on_failure = false);

/// Map, shuffle, and verify in one call.
SimResult simulate(const SchemePlan& plan, const IvWorkload& workload,
                   std::optional<std::uint64_t> order_seed = std::nullopt);

struct LoadComparison {
    Rational predicted;
    Rational measured;
    bool exact = false;
    bool decode_ok = false;
    std::int64_t files = 0;
    std::int64_t groups = 0;
    std::int64_t broadcast_bits = 0;
    std::int64_t total_iv_bits = 0;
    PhaseCounters counters;
};

/// Build the configured scheme, run it on the seeded synthetic workload,
/// and compare the measured load against the closed form. Raises
/// DecodeFailure if any node ends up without a bit-exact IV.
LoadComparison predict_vs_measure(const ExperimentConfig& cfg);

}  // namespace cdc
