#include "cdc/types.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "cdc/errors.hpp"

namespace cdc {

NetworkConfig NetworkConfig::create(int nodes, int load) {
    if (nodes < 1) throw InvalidParams("node count must be positive");
    if (load < 1 || load > nodes) throw InvalidParams("computation load must be in [1, K]");
    NetworkConfig c;
    c.nodes = nodes;
    c.load = load;
    c.floor_m = nodes / load;
    c.m_hat = c.floor_m + 1;
    c.k1 = c.m_hat * nodes - c.floor_m * c.m_hat * load;
    c.k2 = c.floor_m * c.m_hat * load - c.floor_m * nodes;
    c.r1 = nodes - c.floor_m * load;
    c.r2 = c.m_hat * load - nodes;
    return c;
}

IvSizeProfile::IvSizeProfile(std::vector<std::int64_t> bits_per_function)
    : sizes_(std::move(bits_per_function)) {
    if (sizes_.empty()) throw InvalidParams("empty IV size profile");
    for (auto t : sizes_)
        if (t <= 0) throw InvalidParams("IV sizes must be positive");
}

std::int64_t IvSizeProfile::total_bits() const {
    std::int64_t sum = 0;
    for (auto t : sizes_) sum += t;
    return sum;
}

PlacementPlan::PlacementPlan(int nodes, std::vector<std::vector<int>> file_groups)
    : nodes_(nodes), groups_(std::move(file_groups)) {
    if (nodes_ < 1) throw InvalidParams("node count must be positive");
    node_files_.resize(static_cast<std::size_t>(nodes_));
    replication_ = groups_.empty() ? 0 : static_cast<int>(groups_.front().size());
    for (std::size_t n = 0; n < groups_.size(); ++n) {
        auto& g = groups_[n];
        if (g.empty() || static_cast<int>(g.size()) != replication_)
            throw InvalidParams("placement groups must share one cardinality");
        if (!std::is_sorted(g.begin(), g.end()) ||
            std::adjacent_find(g.begin(), g.end()) != g.end())
            throw InvalidParams("placement group must be a sorted node set");
        for (int k : g) {
            if (k < 0 || k >= nodes_) throw InvalidParams("placement group node out of range");
            node_files_[static_cast<std::size_t>(k)].push_back(static_cast<std::int64_t>(n));
        }
    }
}

bool PlacementPlan::maps(int node, std::int64_t file) const {
    const auto& g = mappers_of(file);
    return std::binary_search(g.begin(), g.end(), node);
}

std::int64_t ShufflePlan::message_count() const {
    std::int64_t n = 0;
    for (const auto& g : groups) n += static_cast<std::int64_t>(g.messages.size());
    return n;
}

std::int64_t operand_bits(const Operand& op, const IvSizeProfile& profile) {
    std::int64_t total = static_cast<std::int64_t>(op.files.size()) * profile.bits(op.target);
    if (op.part_count < 1 || total % op.part_count != 0)
        throw PlanDefect("operand concatenation does not split into equal parts");
    return total / op.part_count;
}

std::vector<IvSegment> operand_segments(const Operand& op, const IvSizeProfile& profile) {
    std::int64_t piece = operand_bits(op, profile);
    std::int64_t lo = static_cast<std::int64_t>(op.part_index) * piece;
    std::int64_t hi = lo + piece;
    std::int64_t iv_bits = profile.bits(op.target);
    std::vector<IvSegment> segments;
    std::int64_t offset = 0;
    for (auto file : op.files) {
        std::int64_t a = std::max<std::int64_t>(lo - offset, 0);
        std::int64_t b = std::min<std::int64_t>(hi - offset, iv_bits);
        if (a < b) segments.push_back({file, a, b});
        offset += iv_bits;
    }
    return segments;
}

namespace {

std::string seg_name(int target, std::int64_t file) {
    return "v[" + std::to_string(target) + "," + std::to_string(file) + "]";
}

}  // namespace

void validate_plan(const PlacementPlan& placement, const IvSizeProfile& profile,
                   const ShufflePlan& plan) {
    if (placement.nodes() != profile.functions())
        throw PlanDefect("profile and placement disagree on node count");
    // coverage[(target, file)] accumulates delivered half-open ranges
    std::map<std::pair<int, std::int64_t>, std::vector<std::pair<std::int64_t, std::int64_t>>>
        coverage;
    for (std::size_t gi = 0; gi < plan.groups.size(); ++gi) {
        const auto& group = plan.groups[gi];
        if (!std::is_sorted(group.members.begin(), group.members.end()))
            throw PlanDefect("shuffle group members must be sorted");
        for (const auto& msg : group.messages) {
            if (!std::binary_search(group.members.begin(), group.members.end(), msg.sender))
                throw PlanDefect("message sender outside its shuffle group");
            if (msg.operands.empty()) throw PlanDefect("message without operands");
            std::int64_t msg_bits = -1;
            for (const auto& op : msg.operands) {
                if (op.target == msg.sender) throw PlanDefect("operand targets its own sender");
                if (!std::binary_search(group.members.begin(), group.members.end(), op.target))
                    throw PlanDefect("operand target outside its shuffle group");
                if (!std::is_sorted(op.files.begin(), op.files.end()))
                    throw PlanDefect("operand files must be ascending");
                std::int64_t bits = operand_bits(op, profile);
                if (msg_bits < 0) msg_bits = bits;
                if (bits != msg_bits)
                    throw PlanDefect("XOR operands of one message differ in length");
                for (auto file : op.files) {
                    if (file < 0 || file >= placement.files())
                        throw PlanDefect("operand file out of range");
                    if (placement.maps(op.target, file))
                        throw PlanDefect(seg_name(op.target, file) +
                                         " is already local to its requester");
                    if (!placement.maps(msg.sender, file))
                        throw PlanDefect("sender does not map " + seg_name(op.target, file));
                }
                // every other recipient decodes by re-encoding this operand
                for (const auto& other : msg.operands) {
                    if (other.target == op.target) continue;
                    for (auto file : op.files)
                        if (!placement.maps(other.target, file))
                            throw PlanDefect("recipient " + std::to_string(other.target) +
                                             " lacks side information " +
                                             seg_name(op.target, file));
                }
                for (const auto& seg : operand_segments(op, profile))
                    coverage[{op.target, seg.file}].push_back({seg.bit_lo, seg.bit_hi});
            }
        }
    }
    // Delivered segments must tile [0, T) for every wanted IV, and only those.
    for (auto& [key, ranges] : coverage) {
        auto [target, file] = key;
        std::sort(ranges.begin(), ranges.end());
        std::int64_t at = 0;
        for (auto [lo, hi] : ranges) {
            if (lo != at)
                throw PlanDefect(seg_name(target, file) +
                                 (lo < at ? " has overlapping segments" : " has a coverage gap"));
            at = hi;
        }
        if (at != profile.bits(target))
            throw PlanDefect(seg_name(target, file) + " is not fully delivered");
    }
    for (std::int64_t n = 0; n < placement.files(); ++n)
        for (int k = 0; k < placement.nodes(); ++k)
            if (!placement.maps(k, n) && !coverage.count({k, n}))
                throw PlanDefect(seg_name(k, n) + " is requested but never sent");
}

void ShuffleLedger::add(int sender, std::int64_t group, std::int64_t bits) {
    entries_.push_back({sender, group, bits});
    payload_bits_ += bits;
}

void IvStore::put(int function, std::int64_t file, BitString iv) {
    ivs_[key(function, file)] = std::move(iv);
}

const BitString* IvStore::find(int function, std::int64_t file) const {
    auto it = ivs_.find(key(function, file));
    return it == ivs_.end() ? nullptr : &it->second;
}

void IvStore::write_segment(int function, std::int64_t file, std::int64_t full_bits,
                            std::int64_t bit_lo, const BitString& piece) {
    auto [it, inserted] = ivs_.try_emplace(key(function, file));
    if (inserted) it->second = BitString::zeros(full_bits);
    it->second.write_slice(bit_lo, piece);
}

std::uint64_t IvStore::key(int function, std::int64_t file) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(function)) << 40) |
           static_cast<std::uint64_t>(file);
}

}  // namespace cdc
