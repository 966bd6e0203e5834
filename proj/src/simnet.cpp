#include "cdc/simnet.hpp"

#include <algorithm>
#include <numeric>

#include "cdc/analysis.hpp"
#include "cdc/errors.hpp"

namespace cdc {

namespace {

std::string iv_name(int function, std::int64_t file) {
    return "v[" + std::to_string(function) + "," + std::to_string(file) + "]";
}

// Concatenated segments of one operand, read from a single node's store.
BitString assemble_operand(const Operand& op, const IvSizeProfile& profile, const IvStore& store,
                           int holder) {
    BitString out;
    for (const auto& seg : operand_segments(op, profile)) {
        const BitString* iv = store.find(op.target, seg.file);
        if (iv == nullptr)
            throw PlanDefect("node " + std::to_string(holder) + " lacks " +
                             iv_name(op.target, seg.file));
        out.append(iv->slice(seg.bit_lo, seg.bit_hi - seg.bit_lo));
    }
    return out;
}

}  // namespace

std::vector<IvStore> run_map(const PlacementPlan& placement, const IvSizeProfile& profile,
                             const IvWorkload& workload, PhaseCounters* counters) {
    if (placement.nodes() != profile.functions())
        throw InvalidParams("profile and placement disagree on node count");
    std::vector<IvStore> stores(static_cast<std::size_t>(placement.nodes()));
    for (int node = 0; node < placement.nodes(); ++node) {
        for (auto file : placement.files_of(node)) {
            for (int function = 0; function < placement.nodes(); ++function) {
                BitString iv = workload.iv(function, file);
                if (iv.size() != profile.bits(function))
                    throw SizeMismatch("workload produced " + std::to_string(iv.size()) +
                                       " bits for " + iv_name(function, file) + ", expected " +
                                       std::to_string(profile.bits(function)));
                stores[static_cast<std::size_t>(node)].put(function, file, std::move(iv));
                if (counters != nullptr) ++counters->map_ivs;
            }
        }
    }
    return stores;
}

SimResult run_shuffle(const SchemePlan& plan, std::vector<IvStore>& stores,
                      const IvWorkload& workload, std::optional<std::uint64_t> order_seed,
                      bool throw_on_failure) {
    const PlacementPlan& placement = plan.placement;
    const IvSizeProfile& profile = plan.profile;
    validate_plan(placement, profile, plan.shuffle);
    if (static_cast<int>(stores.size()) != placement.nodes())
        throw InvalidParams("one store per node required");

    std::int64_t total_iv_bits = placement.files() * profile.total_bits();
    SimResult result;
    result.ledger = ShuffleLedger(total_iv_bits == 0 ? 1 : total_iv_bits);

    // Flat message order; decoding is order independent because every
    // operand cancels against map-phase IVs only.
    std::vector<std::pair<std::size_t, std::size_t>> order;
    for (std::size_t g = 0; g < plan.shuffle.groups.size(); ++g)
        for (std::size_t m = 0; m < plan.shuffle.groups[g].messages.size(); ++m)
            order.push_back({g, m});
    if (order_seed) {
        SplitMix64 rng{*order_seed};
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.next() % i]);
    }

    for (auto [g, mi] : order) {
        const auto& group = plan.shuffle.groups[g];
        const auto& msg = group.messages[mi];
        BitString payload;
        bool first = true;
        for (const auto& op : msg.operands) {
            BitString bits =
                assemble_operand(op, profile, stores[static_cast<std::size_t>(msg.sender)],
                                 msg.sender);
            if (first) {
                payload = std::move(bits);
                first = false;
            } else {
                payload.xor_with(bits);
                ++result.counters.encode_xors;
            }
        }
        result.ledger.add(msg.sender, static_cast<std::int64_t>(g), payload.size());
        ++result.counters.broadcasts;

        for (const auto& op : msg.operands) {
            IvStore& mine = stores[static_cast<std::size_t>(op.target)];
            BitString recovered = payload;
            for (const auto& other : msg.operands) {
                if (other.target == op.target) continue;
                recovered.xor_with(assemble_operand(other, profile, mine, op.target));
                ++result.counters.decode_xors;
            }
            std::int64_t offset = 0;
            for (const auto& seg : operand_segments(op, profile)) {
                std::int64_t len = seg.bit_hi - seg.bit_lo;
                mine.write_segment(op.target, seg.file, profile.bits(op.target), seg.bit_lo,
                                   recovered.slice(offset, len));
                offset += len;
            }
        }
    }

    result.decode_ok = true;
    for (int node = 0; node < placement.nodes() && result.decode_ok; ++node) {
        for (std::int64_t file = 0; file < placement.files(); ++file) {
            const BitString* have = stores[static_cast<std::size_t>(node)].find(node, file);
            if (have == nullptr || !(*have == workload.iv(node, file))) {
                result.decode_ok = false;
                result.first_mismatch = "node " + std::to_string(node) + " holds " +
                                        (have == nullptr ? "no" : "a wrong") + " value for " +
                                        iv_name(node, file);
                break;
            }
        }
    }
    if (!result.decode_ok && throw_on_failure) throw DecodeFailure(result.first_mismatch);
    result.measured_load = result.ledger.measured_load();
    return result;
}

SimResult simulate(const SchemePlan& plan, const IvWorkload& workload,
                   std::optional<std::uint64_t> order_seed) {
    PhaseCounters map_counters;
    std::vector<IvStore> stores = run_map(plan.placement, plan.profile, workload, &map_counters);
    SimResult result = run_shuffle(plan, stores, workload, order_seed);
    result.counters.map_ivs = map_counters.map_ivs;
    return result;
}

LoadComparison predict_vs_measure(const ExperimentConfig& cfg) {
    SchemePlan plan = build_scheme(cfg);
    SeededWorkload workload(plan.profile, cfg.seed);
    PhaseCounters map_counters;
    std::vector<IvStore> stores = run_map(plan.placement, plan.profile, workload, &map_counters);
    SimResult sim = run_shuffle(plan, stores, workload, std::nullopt, /*throw_on_failure=*/true);
    sim.counters.map_ivs = map_counters.map_ivs;

    LoadComparison cmp;
    cmp.predicted = predicted_load(cfg);
    cmp.measured = sim.measured_load;
    cmp.exact = cmp.predicted == cmp.measured;
    cmp.decode_ok = sim.decode_ok;
    cmp.files = plan.placement.files();
    cmp.groups = static_cast<std::int64_t>(plan.shuffle.groups.size());
    cmp.broadcast_bits = sim.ledger.payload_bits();
    cmp.total_iv_bits = sim.ledger.total_iv_bits();
    cmp.counters = sim.counters;
    return cmp;
}

}  // namespace cdc
