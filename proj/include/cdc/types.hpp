#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "cdc/bitstring.hpp"
#include "cdc/rational.hpp"

namespace cdc {

/// Network of `nodes` workers where every input file is mapped by `load`
/// of them. The derived fields describe the two-class node split used by
/// the varying-IV-size design: k1 nodes each map a 1/m_hat fraction of
/// the library and k2 nodes a 1/floor_m fraction; the classes partition
/// into r1 and r2 equal blocks, each block covering the library once.
/// Always: k1 + k2 == nodes and r1 + r2 == load.
struct NetworkConfig {
    int nodes = 0;    // K
    int load = 0;     // r
    int floor_m = 0;  // floor(K/r)
    int m_hat = 0;    // floor(K/r) + 1
    int k1 = 0;
    int k2 = 0;
    int r1 = 0;
    int r2 = 0;

    static NetworkConfig create(int nodes, int load);

    Rational m() const { return Rational(nodes, load); }
    bool integer_m() const { return nodes % load == 0; }
};

/// Per-reduce-function intermediate value sizes, in bits.
class IvSizeProfile {
public:
    explicit IvSizeProfile(std::vector<std::int64_t> bits_per_function);

    int functions() const { return static_cast<int>(sizes_.size()); }
    std::int64_t bits(int function) const { return sizes_.at(static_cast<std::size_t>(function)); }
    std::int64_t total_bits() const;
    const std::vector<std::int64_t>& all() const { return sizes_; }

    bool operator==(const IvSizeProfile&) const = default;

private:
    std::vector<std::int64_t> sizes_;
};

/// Which nodes map which files. Group n lists the mappers of file n;
/// all groups have the same cardinality (the computation load).
class PlacementPlan {
public:
    PlacementPlan(int nodes, std::vector<std::vector<int>> file_groups);

    int nodes() const { return nodes_; }
    std::int64_t files() const { return static_cast<std::int64_t>(groups_.size()); }
    int replication() const { return replication_; }

    const std::vector<int>& mappers_of(std::int64_t file) const {
        return groups_.at(static_cast<std::size_t>(file));
    }
    const std::vector<std::int64_t>& files_of(int node) const {
        return node_files_.at(static_cast<std::size_t>(node));
    }
    bool maps(int node, std::int64_t file) const;

private:
    int nodes_ = 0;
    int replication_ = 0;
    std::vector<std::vector<int>> groups_;
    std::vector<std::vector<std::int64_t>> node_files_;
};

/// One XOR operand of a coded message: the IVs wanted by `target` from
/// the listed files, concatenated in file order, then cut into
/// `part_count` equal pieces of which this operand is piece `part_index`.
struct Operand {
    int target = 0;
    std::vector<std::int64_t> files;
    int part_index = 0;
    int part_count = 1;
};

/// Half-open bit range within the IV v_{target,file}.
struct IvSegment {
    std::int64_t file = 0;
    std::int64_t bit_lo = 0;
    std::int64_t bit_hi = 0;
};

struct CodedMessage {
    int sender = 0;
    std::vector<Operand> operands;
};

struct ShuffleGroup {
    std::vector<int> members;
    std::vector<CodedMessage> messages;
};

struct ShufflePlan {
    std::vector<ShuffleGroup> groups;
    std::int64_t message_count() const;
};

std::int64_t operand_bits(const Operand& op, const IvSizeProfile& profile);

/// Materialize the operand as per-file bit ranges. Throws PlanDefect when
/// the concatenation does not divide evenly into part_count pieces.
std::vector<IvSegment> operand_segments(const Operand& op, const IvSizeProfile& profile);

/// Structural checks: members valid, senders and targets in-group, XOR
/// operands of equal bit length, senders and side-information holders
/// actually map what the plan assumes, and the delivered segments for
/// every wanted IV tile [0, T) exactly once. Throws PlanDefect.
void validate_plan(const PlacementPlan& placement, const IvSizeProfile& profile,
                   const ShufflePlan& plan);

/// Record of every broadcast on the shared link.
class ShuffleLedger {
public:
    struct Entry {
        int sender = 0;
        std::int64_t group = 0;
        std::int64_t payload_bits = 0;
    };

    explicit ShuffleLedger(std::int64_t total_iv_bits) : total_iv_bits_(total_iv_bits) {}

    void add(int sender, std::int64_t group, std::int64_t payload_bits);
    const std::vector<Entry>& entries() const { return entries_; }
    std::int64_t payload_bits() const { return payload_bits_; }
    std::int64_t total_iv_bits() const { return total_iv_bits_; }

    /// Broadcast bits over total IV bits.
    Rational measured_load() const { return Rational(payload_bits_, total_iv_bits_); }

private:
    std::vector<Entry> entries_;
    std::int64_t payload_bits_ = 0;
    std::int64_t total_iv_bits_ = 0;
};

/// Per-node storage of intermediate values keyed by (function, file).
class IvStore {
public:
    void put(int function, std::int64_t file, BitString iv);
    const BitString* find(int function, std::int64_t file) const;
    bool contains(int function, std::int64_t file) const { return find(function, file) != nullptr; }

    /// Write a decoded piece at the given offset, allocating a zeroed IV
    /// of full_bits on first touch.
    void write_segment(int function, std::int64_t file, std::int64_t full_bits,
                       std::int64_t bit_lo, const BitString& piece);

    std::size_t count() const { return ivs_.size(); }
    bool operator==(const IvStore&) const = default;

private:
    static std::uint64_t key(int function, std::int64_t file);
    std::unordered_map<std::uint64_t, BitString> ivs_;
};

}  // namespace cdc
