#pragma once

#include <cstdint>

#include "cdc/bitstring.hpp"
#include "cdc/types.hpp"

namespace cdc {

/// splitmix64: tiny, fast, identical on every platform. Used everywhere a
/// reproducible byte stream is needed.
struct SplitMix64 {
    std::uint64_t state = 0;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b);

/// Source of map-phase intermediate values: v_{function,file}, exactly
/// iv_bits(function) bits, same answer every call.
class IvWorkload {
public:
    virtual ~IvWorkload() = default;
    virtual std::int64_t iv_bits(int function) const = 0;
    virtual BitString iv(int function, std::int64_t file) const = 0;
};

/// Pseudorandom IVs keyed by (seed, function, file) so any node, and the
/// verifier, can recompute any IV independently.
class SeededWorkload final : public IvWorkload {
public:
    SeededWorkload(IvSizeProfile profile, std::uint64_t seed)
        : profile_(std::move(profile)), seed_(seed) {}

    std::int64_t iv_bits(int function) const override { return profile_.bits(function); }
    BitString iv(int function, std::int64_t file) const override;
    const IvSizeProfile& profile() const { return profile_; }

private:
    IvSizeProfile profile_;
    std::uint64_t seed_;
};

}  // namespace cdc
