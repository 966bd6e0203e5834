#include "cdc/terasort.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <string>
#include <unordered_map>

#include "cdc/analysis.hpp"
#include "cdc/errors.hpp"
#include "cdc/workload.hpp"

namespace cdc {

std::vector<Record> generate_records(std::int64_t count, std::uint64_t seed,
                                     std::uint32_t key_bound) {
    if (count < 0) throw InvalidParams("negative record count");
    if (key_bound == 0 || key_bound > (1u << 16)) throw InvalidParams("key bound out of range");
    SplitMix64 rng{mix_key(seed, 0x7265636f72647321ull, static_cast<std::uint64_t>(key_bound))};
    std::vector<Record> records(static_cast<std::size_t>(count));
    for (auto& rec : records) {
        rec.key = static_cast<std::uint16_t>(rng.next() % key_bound);
        for (auto& w : rec.value) w = static_cast<std::uint16_t>(rng.next());
    }
    return records;
}

std::vector<std::uint8_t> serialize_records(const std::vector<Record>& records) {
    std::vector<std::uint8_t> out;
    out.reserve(records.size() * kRecordBytes);
    auto put16 = [&](std::uint16_t v) {
        out.push_back(static_cast<std::uint8_t>(v & 0xFF));
        out.push_back(static_cast<std::uint8_t>(v >> 8));
    };
    for (const auto& rec : records) {
        put16(rec.key);
        for (auto w : rec.value) put16(w);
    }
    return out;
}

void write_records_file(const std::string& path, const std::vector<Record>& records) {
    auto bytes = serialize_records(records);
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + path);
    file.write(reinterpret_cast<const char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()));
    if (!file) throw std::runtime_error("cannot write " + path);
}

std::vector<Record> read_records_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                    std::istreambuf_iterator<char>());
    return parse_records(bytes.data(), bytes.size());
}

std::vector<Record> parse_records(const std::uint8_t* data, std::size_t bytes) {
    if (bytes % kRecordBytes != 0)
        throw SizeMismatch("record blob of " + std::to_string(bytes) +
                           " bytes is not a whole number of records");
    std::vector<Record> records(bytes / kRecordBytes);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::uint8_t* p = data + i * kRecordBytes;
        auto get16 = [&](std::size_t off) {
            return static_cast<std::uint16_t>(p[off] | (p[off + 1] << 8));
        };
        records[i].key = get16(0);
        for (std::size_t w = 0; w < records[i].value.size(); ++w)
            records[i].value[w] = get16(2 + 2 * w);
    }
    return records;
}

SortSpec::SortSpec(std::uint32_t key_bound, std::vector<std::uint32_t> uppers)
    : key_bound_(key_bound), uppers_(std::move(uppers)) {
    if (uppers_.empty()) throw InvalidParams("no bins");
    std::uint32_t prev = 0;
    for (auto z : uppers_) {
        if (z <= prev) throw InvalidParams("bin bounds must be strictly increasing");
        prev = z;
    }
    if (prev != key_bound_) throw InvalidParams("last bound must equal the key bound");
}

int SortSpec::bin_of(std::uint16_t key) const {
    if (key >= key_bound_) throw KeyOutOfRange("key " + std::to_string(key) + " not below " +
                                               std::to_string(key_bound_));
    auto it = std::upper_bound(uppers_.begin(), uppers_.end(), static_cast<std::uint32_t>(key));
    return static_cast<int>(it - uppers_.begin());
}

SortSpec design_boundaries(std::uint32_t key_bound, const IvSizeProfile& profile) {
    int bins = profile.functions();
    if (key_bound < static_cast<std::uint32_t>(bins))
        throw InvalidParams("key range narrower than the bin count");
    std::int64_t total = profile.total_bits();
    std::vector<std::int64_t> widths(static_cast<std::size_t>(bins));
    std::vector<std::pair<std::int64_t, int>> remainders;  // (-remainder numerator, bin)
    std::int64_t assigned = 0;
    for (int k = 0; k < bins; ++k) {
        __int128 exact_num = static_cast<__int128>(key_bound) * profile.bits(k);
        widths[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(exact_num / total);
        assigned += widths[static_cast<std::size_t>(k)];
        remainders.push_back({-static_cast<std::int64_t>(exact_num % total), k});
    }
    std::sort(remainders.begin(), remainders.end());
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(key_bound) - assigned; ++i)
        ++widths[static_cast<std::size_t>(remainders[static_cast<std::size_t>(i) %
                                                     remainders.size()].second)];
    // key_bound >= bins, so width can always be stolen for empty bins
    for (auto& w : widths) {
        while (w == 0) {
            auto widest = std::max_element(widths.begin(), widths.end());
            --*widest;
            ++w;
        }
    }
    std::vector<std::uint32_t> uppers(static_cast<std::size_t>(bins));
    std::uint32_t acc = 0;
    for (int k = 0; k < bins; ++k) {
        acc += static_cast<std::uint32_t>(widths[static_cast<std::size_t>(k)]);
        uppers[static_cast<std::size_t>(k)] = acc;
    }
    return SortSpec(key_bound, std::move(uppers));
}

std::vector<std::vector<Record>> map_hash(const std::vector<Record>& file, const SortSpec& spec) {
    std::vector<std::vector<Record>> bins(static_cast<std::size_t>(spec.bins()));
    for (const auto& rec : file)
        bins[static_cast<std::size_t>(spec.bin_of(rec.key))].push_back(rec);
    return bins;
}

BinProfile make_bin_profile(const IvSizeProfile& profile,
                            const std::vector<std::int64_t>& bin_counts) {
    if (static_cast<int>(bin_counts.size()) != profile.functions())
        throw InvalidParams("one bin count per node required");
    BinProfile bins;
    std::int64_t records = 0;
    for (auto c : bin_counts) records += c;
    for (int k = 0; k < profile.functions(); ++k) {
        bins.target_fractions.push_back(Rational(profile.bits(k), profile.total_bits()));
        bins.realized_fractions.push_back(
            records == 0 ? Rational(0)
                         : Rational(bin_counts[static_cast<std::size_t>(k)], records));
    }
    return bins;
}

namespace {

using Blob = std::vector<std::uint8_t>;

std::uint64_t blob_key(int function, std::int64_t file) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(function)) << 40) |
           static_cast<std::uint64_t>(file);
}

// Byte range of one operand over the actual (stochastic) IV lengths held
// by `holder`: the concatenation of the target's IVs in file order, cut
// into part_count near-equal byte spans.
Blob assemble_operand_bytes(const Operand& op,
                            const std::unordered_map<std::uint64_t, Blob>& store) {
    std::int64_t total = 0;
    for (auto file : op.files) total += static_cast<std::int64_t>(
        store.at(blob_key(op.target, file)).size());
    std::int64_t lo = op.part_index * total / op.part_count;
    std::int64_t hi = (op.part_index + 1) * total / op.part_count;
    Blob out;
    out.reserve(static_cast<std::size_t>(hi - lo));
    std::int64_t offset = 0;
    for (auto file : op.files) {
        const Blob& iv = store.at(blob_key(op.target, file));
        std::int64_t a = std::max<std::int64_t>(lo - offset, 0);
        std::int64_t b = std::min<std::int64_t>(hi - offset, static_cast<std::int64_t>(iv.size()));
        if (a < b) out.insert(out.end(), iv.begin() + a, iv.begin() + b);
        offset += static_cast<std::int64_t>(iv.size());
    }
    return out;
}

void xor_into(Blob& acc, const Blob& other) {
    // acc is already at least as long; shorter operands are zero padded
    for (std::size_t i = 0; i < other.size(); ++i) acc[i] ^= other[i];
}

}  // namespace

SortReport run_terasort(const SchemePlan& plan, const SortSpec& spec,
                        const std::vector<Record>& input) {
    const PlacementPlan& placement = plan.placement;
    const int nodes = placement.nodes();
    if (spec.bins() != nodes) throw InvalidParams("sort spec and plan disagree on node count");
    validate_plan(placement, plan.profile, plan.shuffle);

    SortReport report;
    report.nodes = nodes;
    report.records = static_cast<std::int64_t>(input.size());
    report.files = placement.files();
    report.groups = static_cast<std::int64_t>(plan.shuffle.groups.size());
    report.bin_counts.assign(static_cast<std::size_t>(nodes), 0);

    // Partition records into the plan's files, contiguous and even.
    const std::int64_t n_files = placement.files();
    auto file_slice = [&](std::int64_t n) {
        std::int64_t lo = n * report.records / n_files;
        std::int64_t hi = (n + 1) * report.records / n_files;
        return std::vector<Record>(input.begin() + lo, input.begin() + hi);
    };

    // Map phase: every mapper of file n hashes it into per-function bins.
    // Bins are deterministic, so one hash per file serves all its mappers.
    std::vector<std::unordered_map<std::uint64_t, Blob>> stores(
        static_cast<std::size_t>(nodes));
    for (std::int64_t n = 0; n < n_files; ++n) {
        auto bins = map_hash(file_slice(n), spec);
        std::vector<Blob> blobs(static_cast<std::size_t>(nodes));
        for (int k = 0; k < nodes; ++k) {
            report.bin_counts[static_cast<std::size_t>(k)] +=
                static_cast<std::int64_t>(bins[static_cast<std::size_t>(k)].size());
            blobs[static_cast<std::size_t>(k)] =
                serialize_records(bins[static_cast<std::size_t>(k)]);
        }
        // bin_counts tallies per-function records once per file, not per replica
        for (int mapper : placement.mappers_of(n)) {
            for (int k = 0; k < nodes; ++k) {
                stores[static_cast<std::size_t>(mapper)][blob_key(k, n)] =
                    blobs[static_cast<std::size_t>(k)];
                ++report.map_ivs;
            }
        }
    }

    // Encode, broadcast, decode. Partial reconstructions are grouped per
    // (recipient, shuffle group) and joined in part order once complete.
    std::vector<std::vector<Record>> reduce_input(static_cast<std::size_t>(nodes));
    struct Pending {
        std::vector<Blob> parts;
        std::vector<bool> have;
    };
    std::vector<std::map<std::int64_t, Pending>> pending(static_cast<std::size_t>(nodes));

    for (std::size_t g = 0; g < plan.shuffle.groups.size(); ++g) {
        for (const auto& msg : plan.shuffle.groups[g].messages) {
            const auto& sender_store = stores[static_cast<std::size_t>(msg.sender)];
            std::vector<Blob> operands;
            std::size_t max_len = 0;
            for (const auto& op : msg.operands) {
                operands.push_back(assemble_operand_bytes(op, sender_store));
                max_len = std::max(max_len, operands.back().size());
            }
            Blob payload(max_len, 0);
            for (const auto& bytes : operands) {
                xor_into(payload, bytes);
                if (operands.size() > 1) ++report.encode_xors;
            }
            ++report.traffic.messages;
            report.traffic.payload_bits += static_cast<std::int64_t>(max_len) * 8;
            std::int64_t len_sum = 0;
            for (const auto& bytes : operands) {
                len_sum += static_cast<std::int64_t>(bytes.size());
                report.traffic.padding_bits +=
                    static_cast<std::int64_t>(max_len - bytes.size()) * 8;
            }
            if (operands.size() > 1)
                report.traffic.prefix_bits += 32 * static_cast<std::int64_t>(operands.size());
            report.traffic.useful_bits +=
                Rational(len_sum * 8, static_cast<std::int64_t>(operands.size()));

            for (std::size_t oi = 0; oi < msg.operands.size(); ++oi) {
                const Operand& op = msg.operands[oi];
                auto& mine = stores[static_cast<std::size_t>(op.target)];
                Blob recovered = payload;
                for (std::size_t oj = 0; oj < msg.operands.size(); ++oj) {
                    if (oj == oi) continue;
                    Blob side = assemble_operand_bytes(msg.operands[oj], mine);
                    xor_into(recovered, side);
                    ++report.decode_xors;
                }
                // own length travels in the prefix table
                recovered.resize(operands[oi].size());
                if (op.part_count == 1) {
                    auto recs = parse_records(recovered.data(), recovered.size());
                    auto& sink = reduce_input[static_cast<std::size_t>(op.target)];
                    sink.insert(sink.end(), recs.begin(), recs.end());
                } else {
                    auto& slot =
                        pending[static_cast<std::size_t>(op.target)][static_cast<std::int64_t>(g)];
                    if (slot.parts.empty()) {
                        slot.parts.resize(static_cast<std::size_t>(op.part_count));
                        slot.have.assign(static_cast<std::size_t>(op.part_count), false);
                    }
                    slot.parts[static_cast<std::size_t>(op.part_index)] = std::move(recovered);
                    slot.have[static_cast<std::size_t>(op.part_index)] = true;
                }
            }
        }
    }
    for (int k = 0; k < nodes; ++k) {
        for (auto& [group, slot] : pending[static_cast<std::size_t>(k)]) {
            Blob joined;
            for (std::size_t p = 0; p < slot.parts.size(); ++p) {
                if (!slot.have[p])
                    throw DecodeFailure("node " + std::to_string(k) + " missing part " +
                                        std::to_string(p) + " of group " + std::to_string(group));
                joined.insert(joined.end(), slot.parts[p].begin(), slot.parts[p].end());
            }
            auto recs = parse_records(joined.data(), joined.size());
            auto& sink = reduce_input[static_cast<std::size_t>(k)];
            sink.insert(sink.end(), recs.begin(), recs.end());
        }
    }

    // Reduce: local bins for mapped files plus everything decoded.
    report.output.resize(static_cast<std::size_t>(nodes));
    for (int k = 0; k < nodes; ++k) {
        auto& run = report.output[static_cast<std::size_t>(k)];
        run = std::move(reduce_input[static_cast<std::size_t>(k)]);
        const auto& store = stores[static_cast<std::size_t>(k)];
        for (auto file : placement.files_of(k)) {
            const Blob& iv = store.at(blob_key(k, file));
            auto recs = parse_records(iv.data(), iv.size());
            run.insert(run.end(), recs.begin(), recs.end());
        }
        std::sort(run.begin(), run.end());
    }

    // Verification: sorted runs, boundary consistency, global permutation.
    report.sorted_ok = true;
    report.bounds_ok = true;
    for (int k = 0; k < nodes; ++k) {
        const auto& run = report.output[static_cast<std::size_t>(k)];
        if (!std::is_sorted(run.begin(), run.end())) report.sorted_ok = false;
        for (const auto& rec : run)
            if (rec.key < spec.lower(k) || rec.key >= spec.upper(k)) report.bounds_ok = false;
    }
    std::vector<Record> all_out;
    all_out.reserve(input.size());
    for (const auto& run : report.output) all_out.insert(all_out.end(), run.begin(), run.end());
    std::vector<Record> all_in = input;
    std::sort(all_in.begin(), all_in.end());
    std::sort(all_out.begin(), all_out.end());
    report.permutation_ok = all_in == all_out;
    report.bins = make_bin_profile(plan.profile, report.bin_counts);
    return report;
}

TerasortComparison run_terasort_experiment(const ExperimentConfig& cfg,
                                           const std::vector<Record>& input) {
    SchemePlan coded = build_scheme(cfg);
    SortSpec spec = design_boundaries(1u << 16, coded.profile);

    TerasortComparison cmp;
    cmp.coded = run_terasort(coded, spec, input);
    cmp.predicted_coded = predicted_load(cfg);

    if (cfg.scheme == SchemeId::Uncoded) {
        cmp.uncoded = cmp.coded;
        cmp.predicted_uncoded = cmp.predicted_coded;
    } else {
        auto counts = even_file_counts(coded.placement.files(), coded.placement.nodes());
        SchemePlan baseline = build_uncoded(counts, coded.profile);
        cmp.uncoded = run_terasort(baseline, spec, input);
        cmp.predicted_uncoded = load_uncoded(counts, coded.profile);
    }
    cmp.predicted_ratio = cmp.predicted_coded / cmp.predicted_uncoded;
    cmp.measured_ratio = cmp.uncoded.traffic.useful_bits.is_zero()
                             ? Rational(1)
                             : cmp.coded.traffic.useful_bits / cmp.uncoded.traffic.useful_bits;
    return cmp;
}

TerasortComparison run_terasort_experiment(const ExperimentConfig& cfg) {
    return run_terasort_experiment(cfg, generate_records(cfg.records, cfg.seed));
}

}  // namespace cdc
