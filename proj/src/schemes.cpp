#include "cdc/schemes.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "cdc/errors.hpp"

namespace cdc {

std::string scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::Uncoded: return "uncoded";
        case SchemeId::Lmya: return "lmya";
        case SchemeId::Flcd3: return "flcd3";
        case SchemeId::FlcdGeneral: return "flcd";
    }
    return "?";
}

SchemeId scheme_from_name(const std::string& name) {
    if (name == "uncoded") return SchemeId::Uncoded;
    if (name == "lmya") return SchemeId::Lmya;
    if (name == "flcd3") return SchemeId::Flcd3;
    if (name == "flcd") return SchemeId::FlcdGeneral;
    throw InvalidParams("unknown scheme '" + name + "'");
}

std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    __int128 res = 1;
    for (int i = 1; i <= k; ++i) {
        res = res * (n - k + i) / i;
        if (res > std::numeric_limits<std::int64_t>::max())
            throw std::overflow_error("binomial exceeds 64 bits");
    }
    return static_cast<std::int64_t>(res);
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
    if (a <= 0 || b <= 0) throw InvalidParams("lcm of non-positive values");
    __int128 l = static_cast<__int128>(a) / std::gcd(a, b) * b;
    if (l > std::numeric_limits<std::int64_t>::max())
        throw std::overflow_error("lcm exceeds 64 bits");
    return static_cast<std::int64_t>(l);
}

std::vector<std::int64_t> even_file_counts(std::int64_t total, int nodes) {
    if (nodes < 1 || total < 0) throw InvalidParams("bad even split request");
    std::vector<std::int64_t> counts(static_cast<std::size_t>(nodes));
    for (int k = 0; k < nodes; ++k)
        counts[static_cast<std::size_t>(k)] =
            (k + 1) * total / nodes - static_cast<std::int64_t>(k) * total / nodes;
    return counts;
}

Flcd3Sizes::Flcd3Sizes(std::int64_t a, std::int64_t b, std::int64_t c) : t1(a), t2(b), t3(c) {
    if (t1 <= 0 || t2 <= 0 || t3 <= 0) throw InvalidParams("IV sizes must be positive");
}

std::int64_t Flcd3Sizes::set_bits(std::int64_t scale) const {
    if (scale <= 0) throw InvalidParams("scale must be positive");
    std::int64_t bits = scale * lcm64(t1, lcm64(t2, t3));
    return bits % 2 == 0 ? bits : 2 * bits;
}

std::int64_t Flcd3Sizes::file_count(std::int64_t scale) const {
    std::int64_t bits = set_bits(scale);
    return bits / t1 + bits / t2 + bits / t3;
}

std::int64_t flcd3_file_count(std::int64_t t1, std::int64_t t2, std::int64_t t3,
                              std::int64_t scale) {
    return Flcd3Sizes(t1, t2, t3).file_count(scale);
}

SchemePlan build_flcd3(std::int64_t t1, std::int64_t t2, std::int64_t t3, std::int64_t scale) {
    Flcd3Sizes sizes(t1, t2, t3);
    // B bits per wanted IV set; each broadcast carries B/2
    std::int64_t set_bits = sizes.set_bits(scale);
    std::int64_t n12 = set_bits / t3;
    std::int64_t n13 = set_bits / t2;
    std::int64_t n23 = set_bits / t1;

    std::vector<std::vector<int>> groups;
    groups.reserve(static_cast<std::size_t>(n12 + n13 + n23));
    for (std::int64_t i = 0; i < n12; ++i) groups.push_back({0, 1});
    for (std::int64_t i = 0; i < n13; ++i) groups.push_back({0, 2});
    for (std::int64_t i = 0; i < n23; ++i) groups.push_back({1, 2});
    PlacementPlan placement(3, std::move(groups));

    auto span_of = [&](std::int64_t first, std::int64_t count) {
        std::vector<std::int64_t> files(static_cast<std::size_t>(count));
        std::iota(files.begin(), files.end(), first);
        return files;
    };
    std::vector<std::int64_t> files12 = span_of(0, n12);
    std::vector<std::int64_t> files13 = span_of(n12, n13);
    std::vector<std::int64_t> files23 = span_of(n12 + n13, n23);

    // Each wanted IV set splits into two halves, the first sent by the
    // lower-numbered mapper. Three broadcasts serve all requests.
    ShuffleGroup group;
    group.members = {0, 1, 2};
    group.messages = {
        {0, {{1, files13, 0, 2}, {2, files12, 0, 2}}},
        {1, {{0, files23, 0, 2}, {2, files12, 1, 2}}},
        {2, {{0, files23, 1, 2}, {1, files13, 1, 2}}},
    };
    ShufflePlan shuffle;
    shuffle.groups.push_back(std::move(group));

    return {std::move(placement), std::move(shuffle), IvSizeProfile({t1, t2, t3})};
}

namespace {

struct BlockLayout {
    std::vector<std::vector<int>> blocks;  // node ids, contiguous ascending
    std::vector<int> block_of;             // node -> block index
    std::vector<int> slot_of;              // node -> index within its block
    std::vector<std::int64_t> strides;     // mixed-radix strides, last block fastest
    std::int64_t file_count = 0;
};

BlockLayout make_blocks(const NetworkConfig& cfg) {
    BlockLayout layout;
    layout.block_of.resize(static_cast<std::size_t>(cfg.nodes));
    layout.slot_of.resize(static_cast<std::size_t>(cfg.nodes));
    int next = 0;
    auto add_blocks = [&](int count, int size) {
        for (int b = 0; b < count; ++b) {
            std::vector<int> block(static_cast<std::size_t>(size));
            for (int i = 0; i < size; ++i) {
                block[static_cast<std::size_t>(i)] = next;
                layout.block_of[static_cast<std::size_t>(next)] =
                    static_cast<int>(layout.blocks.size());
                layout.slot_of[static_cast<std::size_t>(next)] = i;
                ++next;
            }
            layout.blocks.push_back(std::move(block));
        }
    };
    add_blocks(cfg.r1, cfg.m_hat);
    add_blocks(cfg.r2, cfg.floor_m);

    layout.strides.assign(layout.blocks.size(), 1);
    __int128 total = 1;
    for (int b = static_cast<int>(layout.blocks.size()) - 1; b >= 0; --b) {
        layout.strides[static_cast<std::size_t>(b)] = static_cast<std::int64_t>(total);
        total *= static_cast<std::int64_t>(layout.blocks[static_cast<std::size_t>(b)].size());
        if (total > 100'000'000) throw FileLimitExceeded("placement group count out of range");
    }
    layout.file_count = static_cast<std::int64_t>(total);
    return layout;
}

}  // namespace

SchemePlan build_flcd_general(const NetworkConfig& cfg, std::int64_t base_iv_bits) {
    if (cfg.nodes <= 3) throw InvalidParams("general coded design needs more than 3 nodes");
    if (cfg.load < 2 || 2 * cfg.load > cfg.nodes)
        throw InvalidParams("computation load must satisfy 2 <= r <= K/2");
    if (base_iv_bits <= 0) throw InvalidParams("IV size must be positive");

    const int fm = cfg.floor_m;  // >= 2 here
    // Scale the small-class IV size so the large-class size and the
    // per-broadcast slice both come out integral.
    std::int64_t g = fm * base_iv_bits;
    std::int64_t need1 = (fm - 1) / std::gcd<std::int64_t>(fm - 1, g);
    std::int64_t need2 = (cfg.load - 1) / std::gcd<std::int64_t>(cfg.load - 1, g);
    std::int64_t t_small = lcm64(need1, need2) * base_iv_bits;
    std::int64_t t_large = fm * t_small / (fm - 1);

    BlockLayout layout = make_blocks(cfg);
    const std::int64_t n_files = layout.file_count;

    std::vector<std::vector<int>> groups(static_cast<std::size_t>(n_files));
    for (std::int64_t n = 0; n < n_files; ++n) {
        std::vector<int> members(layout.blocks.size());
        for (std::size_t b = 0; b < layout.blocks.size(); ++b) {
            auto digit = (n / layout.strides[b]) % static_cast<std::int64_t>(layout.blocks[b].size());
            members[b] = layout.blocks[b][static_cast<std::size_t>(digit)];
        }
        groups[static_cast<std::size_t>(n)] = std::move(members);
    }
    PlacementPlan placement(cfg.nodes, std::move(groups));

    ShufflePlan shuffle;
    shuffle.groups.reserve(static_cast<std::size_t>(n_files));
    for (std::int64_t n = 0; n < n_files; ++n) {
        ShuffleGroup group;
        group.members = placement.mappers_of(n);
        const auto& members = group.members;
        for (int j : members) {
            CodedMessage msg;
            msg.sender = j;
            for (std::size_t ki = 0; ki < members.size(); ++ki) {
                int k = members[ki];
                if (k == j) continue;
                int b = layout.block_of[static_cast<std::size_t>(k)];
                int slot = layout.slot_of[static_cast<std::size_t>(k)];
                // Files held by the rest of the group together with one
                // sibling of k from k's own block; those are exactly the
                // IVs k misses within this group.
                Operand op;
                op.target = k;
                for (std::size_t alt = 0; alt < layout.blocks[static_cast<std::size_t>(b)].size();
                     ++alt) {
                    if (static_cast<int>(alt) == slot) continue;
                    op.files.push_back(n + (static_cast<std::int64_t>(alt) - slot) *
                                               layout.strides[static_cast<std::size_t>(b)]);
                }
                op.part_count = cfg.load - 1;
                int j_pos = static_cast<int>(
                    std::lower_bound(members.begin(), members.end(), j) - members.begin());
                op.part_index = j_pos - (j_pos > static_cast<int>(ki) ? 1 : 0);
                msg.operands.push_back(std::move(op));
            }
            group.messages.push_back(std::move(msg));
        }
        shuffle.groups.push_back(std::move(group));
    }

    std::vector<std::int64_t> sizes(static_cast<std::size_t>(cfg.nodes));
    for (int k = 0; k < cfg.nodes; ++k)
        sizes[static_cast<std::size_t>(k)] = k < cfg.k1 ? t_small : t_large;
    return {std::move(placement), std::move(shuffle), IvSizeProfile(std::move(sizes))};
}

namespace {

// Lexicographic rank of a sorted k-subset of [0, n).
std::int64_t subset_rank(const std::vector<int>& subset, int n, int skip = -1) {
    int k = static_cast<int>(subset.size()) - (skip >= 0 ? 1 : 0);
    std::int64_t rank = 0;
    int prev = 0;
    int i = 0;
    for (int c : subset) {
        if (c == skip) continue;
        for (int v = prev; v < c; ++v) rank += binomial(n - 1 - v, k - 1 - i);
        prev = c + 1;
        ++i;
    }
    return rank;
}

bool next_subset(std::vector<int>& subset, int n) {
    int k = static_cast<int>(subset.size());
    for (int i = k - 1; i >= 0; --i) {
        if (subset[static_cast<std::size_t>(i)] < n - k + i) {
            ++subset[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < k; ++j)
                subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

SchemePlan build_lmya(const NetworkConfig& cfg, std::int64_t iv_bits, std::int64_t max_files) {
    if (cfg.load < 1 || cfg.load >= cfg.nodes)
        throw InvalidParams("binomial design needs 1 <= r < K");
    if (iv_bits <= 0 || iv_bits % cfg.load != 0)
        throw InvalidParams("IV size must be a positive multiple of r");
    std::int64_t n_files = binomial(cfg.nodes, cfg.load);
    if (n_files > max_files)
        throw FileLimitExceeded("binomial design needs " + std::to_string(n_files) +
                                " files, limit is " + std::to_string(max_files));

    std::vector<std::vector<int>> groups;
    groups.reserve(static_cast<std::size_t>(n_files));
    std::vector<int> subset(static_cast<std::size_t>(cfg.load));
    std::iota(subset.begin(), subset.end(), 0);
    do {
        groups.push_back(subset);
    } while (next_subset(subset, cfg.nodes));
    PlacementPlan placement(cfg.nodes, std::move(groups));

    // Every (r+1)-subset exchanges once: each member wants the IV from the
    // file mapped by the other r, cut into r slices, one per other member.
    ShufflePlan shuffle;
    std::vector<int> exchange(static_cast<std::size_t>(cfg.load + 1));
    std::iota(exchange.begin(), exchange.end(), 0);
    do {
        ShuffleGroup group;
        group.members = exchange;
        for (std::size_t ji = 0; ji < exchange.size(); ++ji) {
            int j = exchange[ji];
            CodedMessage msg;
            msg.sender = j;
            for (std::size_t ki = 0; ki < exchange.size(); ++ki) {
                int k = exchange[ki];
                if (k == j) continue;
                Operand op;
                op.target = k;
                op.files = {subset_rank(exchange, cfg.nodes, k)};
                op.part_count = cfg.load;
                op.part_index = static_cast<int>(ji) - (ji > ki ? 1 : 0);
                msg.operands.push_back(std::move(op));
            }
            group.messages.push_back(std::move(msg));
        }
        shuffle.groups.push_back(std::move(group));
    } while (next_subset(exchange, cfg.nodes));

    return {std::move(placement), std::move(shuffle),
            IvSizeProfile(std::vector<std::int64_t>(static_cast<std::size_t>(cfg.nodes), iv_bits))};
}

SchemePlan build_uncoded(const std::vector<std::int64_t>& file_counts,
                         const IvSizeProfile& profile) {
    int nodes = profile.functions();
    if (static_cast<int>(file_counts.size()) != nodes)
        throw InvalidParams("one file count per node required");
    std::int64_t n_files = 0;
    for (auto c : file_counts) {
        if (c < 0) throw InvalidParams("negative file count");
        n_files += c;
    }
    if (n_files == 0) throw InvalidParams("no files assigned");

    std::vector<std::vector<int>> groups;
    groups.reserve(static_cast<std::size_t>(n_files));
    for (int k = 0; k < nodes; ++k)
        for (std::int64_t i = 0; i < file_counts[static_cast<std::size_t>(k)]; ++i)
            groups.push_back({k});
    PlacementPlan placement(nodes, std::move(groups));

    ShuffleGroup group;
    group.members.resize(static_cast<std::size_t>(nodes));
    std::iota(group.members.begin(), group.members.end(), 0);
    for (std::int64_t n = 0; n < n_files; ++n) {
        int owner = placement.mappers_of(n).front();
        for (int k = 0; k < nodes; ++k) {
            if (k == owner) continue;
            group.messages.push_back({owner, {{k, {n}, 0, 1}}});
        }
    }
    ShufflePlan shuffle;
    shuffle.groups.push_back(std::move(group));
    return {std::move(placement), std::move(shuffle), profile};
}

SchemePlan build_scheme(const ExperimentConfig& cfg) {
    switch (cfg.scheme) {
        case SchemeId::Flcd3: {
            if (cfg.nodes != 0 && cfg.nodes != 3) throw InvalidParams("flcd3 requires K = 3");
            if (cfg.load != 0 && cfg.load != 2) throw InvalidParams("flcd3 requires r = 2");
            if (cfg.iv_sizes.size() != 3) throw InvalidParams("flcd3 needs three IV sizes");
            return build_flcd3(cfg.iv_sizes[0], cfg.iv_sizes[1], cfg.iv_sizes[2], cfg.scale);
        }
        case SchemeId::FlcdGeneral: {
            if (cfg.iv_sizes.size() > 1)
                throw InvalidParams("flcd takes at most one base IV size");
            auto net = NetworkConfig::create(cfg.nodes, cfg.load);
            return build_flcd_general(net, cfg.iv_sizes.empty() ? 1 : cfg.iv_sizes[0]);
        }
        case SchemeId::Lmya: {
            if (cfg.iv_sizes.size() > 1)
                throw InvalidParams("lmya takes at most one IV size");
            auto net = NetworkConfig::create(cfg.nodes, cfg.load);
            std::int64_t iv = cfg.iv_sizes.empty() ? cfg.load : cfg.iv_sizes[0];
            return build_lmya(net, iv, cfg.max_files);
        }
        case SchemeId::Uncoded: {
            if (cfg.load > 1) throw InvalidParams("uncoded shuffle requires r = 1");
            int nodes = cfg.nodes != 0 ? cfg.nodes : static_cast<int>(cfg.iv_sizes.size());
            if (nodes < 1) throw InvalidParams("uncoded needs a node count");
            std::vector<std::int64_t> sizes = cfg.iv_sizes;
            if (sizes.empty()) sizes.assign(static_cast<std::size_t>(nodes), 8);
            if (sizes.size() == 1) sizes.assign(static_cast<std::size_t>(nodes), sizes[0]);
            if (static_cast<int>(sizes.size()) != nodes)
                throw InvalidParams("uncoded IV sizes must match the node count");
            auto counts = cfg.file_counts.empty() ? even_file_counts(nodes, nodes)
                                                  : cfg.file_counts;
            return build_uncoded(counts, IvSizeProfile(std::move(sizes)));
        }
    }
    throw InvalidParams("unknown scheme");
}

}  // namespace cdc
