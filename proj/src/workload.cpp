#include "cdc/workload.hpp"

namespace cdc {

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    SplitMix64 s{seed};
    std::uint64_t h = s.next();
    s.state = h ^ a;
    h = s.next();
    s.state = h ^ b;
    return s.next();
}

BitString SeededWorkload::iv(int function, std::int64_t file) const {
    std::int64_t bits = profile_.bits(function);
    SplitMix64 rng{mix_key(seed_, static_cast<std::uint64_t>(function),
                           static_cast<std::uint64_t>(file))};
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>((bits + 7) / 8));
    for (std::size_t i = 0; i < bytes.size(); i += 8) {
        std::uint64_t w = rng.next();
        for (std::size_t j = i; j < bytes.size() && j < i + 8; ++j)
            bytes[j] = static_cast<std::uint8_t>(w >> (8 * (j - i)));
    }
    return BitString::from_bytes(bytes, bits);
}

}  // namespace cdc
