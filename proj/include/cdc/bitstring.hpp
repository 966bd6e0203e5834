#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cdc {

/// Bit array backed by bytes, least significant bit first within each byte.
/// Lengths are exact bit counts; segment boundaries may fall mid-byte.
/// Bits past size() in the last byte are kept zero, so equality and
/// hashing can work on the raw bytes.
class BitString {
public:
    BitString() = default;

    static BitString zeros(std::int64_t bits);
    static BitString from_bytes(std::span<const std::uint8_t> data, std::int64_t bits);
    /// Low `bits` of `value`, bit i of the string = bit i of the word.
    static BitString from_word(std::uint64_t value, int bits);

    std::int64_t size() const { return bits_; }
    bool empty() const { return bits_ == 0; }
    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    std::uint64_t word() const;

    bool bit(std::int64_t i) const;
    void set_bit(std::int64_t i, bool value);

    void xor_with(const BitString& other);
    void append(const BitString& other);
    BitString slice(std::int64_t lo, std::int64_t len) const;
    void write_slice(std::int64_t lo, const BitString& piece);

    bool operator==(const BitString&) const = default;

private:
    std::vector<std::uint8_t> bytes_;
    std::int64_t bits_ = 0;

    void mask_tail();
};

/// Elementwise XOR of equal-length operands; empty list gives an empty string.
BitString xor_segments(std::span<const BitString> operands);

/// Concatenation in order; empty list gives a zero-length string.
BitString concat_segments(std::span<const BitString> parts);

}  // namespace cdc
