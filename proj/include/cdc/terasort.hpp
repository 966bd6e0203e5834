#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cdc/rational.hpp"
#include "cdc/schemes.hpp"

namespace cdc {

/// Key-value pair: 16-bit key plus nine 16-bit words, 20 bytes on the wire.
struct Record {
    std::uint16_t key = 0;
    std::array<std::uint16_t, 9> value{};

    friend auto operator<=>(const Record&, const Record&) = default;
};

inline constexpr std::size_t kRecordBytes = 20;

std::vector<Record> generate_records(std::int64_t count, std::uint64_t seed,
                                     std::uint32_t key_bound = 1u << 16);

/// Little-endian, fixed 20 bytes per record.
std::vector<std::uint8_t> serialize_records(const std::vector<Record>& records);
std::vector<Record> parse_records(const std::uint8_t* data, std::size_t bytes);

/// Dataset files are raw concatenated records.
void write_records_file(const std::string& path, const std::vector<Record>& records);
std::vector<Record> read_records_file(const std::string& path);

/// Key ranges assigned to the reduce functions: node k sorts keys in
/// [upper(k-1), upper(k)), with upper(-1) = 0 and upper(K-1) = key_bound.
class SortSpec {
public:
    SortSpec(std::uint32_t key_bound, std::vector<std::uint32_t> uppers);

    int bins() const { return static_cast<int>(uppers_.size()); }
    std::uint32_t key_bound() const { return key_bound_; }
    std::uint32_t lower(int bin) const { return bin == 0 ? 0 : uppers_[static_cast<std::size_t>(bin - 1)]; }
    std::uint32_t upper(int bin) const { return uppers_.at(static_cast<std::size_t>(bin)); }
    std::int64_t width(int bin) const { return static_cast<std::int64_t>(upper(bin)) - lower(bin); }
    int bin_of(std::uint16_t key) const;  // KeyOutOfRange for key >= key_bound

private:
    std::uint32_t key_bound_;
    std::vector<std::uint32_t> uppers_;
};

/// Bin widths proportional to the IV size profile, rounded to integers by
/// largest remainder so they sum to key_bound, every bin nonempty.
/// InvalidParams if key_bound < K.
SortSpec design_boundaries(std::uint32_t key_bound, const IvSizeProfile& profile);

/// Hash a file's records into the K key-range bins; record count preserved.
std::vector<std::vector<Record>> map_hash(const std::vector<Record>& file, const SortSpec& spec);

/// Designed key-range weights next to what the hashing actually produced.
/// Target fractions always sum to exactly 1; realized fractions are zero
/// for an empty input.
struct BinProfile {
    std::vector<Rational> target_fractions;
    std::vector<Rational> realized_fractions;
};

BinProfile make_bin_profile(const IvSizeProfile& profile,
                            const std::vector<std::int64_t>& bin_counts);

/// Shared-link accounting for the record shuffle. Bin sizes are
/// stochastic, so XOR operands inside one coded message are zero-padded to
/// the longest and a 4-byte length prefix per operand is broadcast with
/// the payload. `payload_bits` is what the link carries (prefixes aside);
/// `useful_bits` is the equalized-ideal count, i.e. per message the mean
/// operand length, which excludes the padding imbalance.
struct ShuffleTraffic {
    std::int64_t payload_bits = 0;
    std::int64_t prefix_bits = 0;
    std::int64_t padding_bits = 0;
    std::int64_t messages = 0;
    Rational useful_bits;
};

struct SortReport {
    int nodes = 0;
    std::int64_t records = 0;
    std::int64_t files = 0;
    std::int64_t groups = 0;
    std::int64_t map_ivs = 0;
    std::int64_t encode_xors = 0;
    std::int64_t decode_xors = 0;
    ShuffleTraffic traffic;
    std::vector<std::int64_t> bin_counts;
    BinProfile bins;
    bool sorted_ok = false;
    bool permutation_ok = false;
    bool bounds_ok = false;
    std::vector<std::vector<Record>> output;  // per-node sorted runs
};

/// Full run: partition input into the plan's files, map into key bins,
/// encode, shuffle, decode, reduce, and verify the result is a sorted,
/// boundary-consistent permutation of the input.
SortReport run_terasort(const SchemePlan& plan, const SortSpec& spec,
                        const std::vector<Record>& input);

struct TerasortComparison {
    SortReport coded;
    SortReport uncoded;
    Rational predicted_coded;
    Rational predicted_uncoded;
    Rational measured_ratio;   // coded useful bits over uncoded useful bits
    Rational predicted_ratio;  // closed-form load ratio
};

/// Run the configured scheme and, on the same records and the same key
/// boundaries, a plain unicast baseline with an even file split.
TerasortComparison run_terasort_experiment(const ExperimentConfig& cfg,
                                           const std::vector<Record>& input);

/// Same, over records generated from the config's count and seed.
TerasortComparison run_terasort_experiment(const ExperimentConfig& cfg);

}  // namespace cdc
