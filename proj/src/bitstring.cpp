#include "cdc/bitstring.hpp"

#include <stdexcept>

#include "cdc/errors.hpp"

namespace cdc {

namespace {
std::size_t byte_count(std::int64_t bits) { return static_cast<std::size_t>((bits + 7) / 8); }
}

BitString BitString::zeros(std::int64_t bits) {
    if (bits < 0) throw InvalidParams("negative bit length");
    BitString s;
    s.bits_ = bits;
    s.bytes_.assign(byte_count(bits), 0);
    return s;
}

BitString BitString::from_bytes(std::span<const std::uint8_t> data, std::int64_t bits) {
    if (bits < 0 || byte_count(bits) > data.size())
        throw InvalidParams("bit length does not fit the provided bytes");
    BitString s;
    s.bits_ = bits;
    s.bytes_.assign(data.begin(), data.begin() + byte_count(bits));
    s.mask_tail();
    return s;
}

BitString BitString::from_word(std::uint64_t value, int bits) {
    if (bits < 0 || bits > 64) throw InvalidParams("word length out of range");
    BitString s = zeros(bits);
    for (std::size_t i = 0; i < s.bytes_.size(); ++i)
        s.bytes_[i] = static_cast<std::uint8_t>(value >> (8 * i));
    s.mask_tail();
    return s;
}

std::uint64_t BitString::word() const {
    if (bits_ > 64) throw std::out_of_range("bit string longer than a word");
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < bytes_.size(); ++i)
        v |= static_cast<std::uint64_t>(bytes_[i]) << (8 * i);
    return v;
}

bool BitString::bit(std::int64_t i) const {
    if (i < 0 || i >= bits_) throw std::out_of_range("bit index");
    return (bytes_[static_cast<std::size_t>(i >> 3)] >> (i & 7)) & 1;
}

void BitString::set_bit(std::int64_t i, bool value) {
    if (i < 0 || i >= bits_) throw std::out_of_range("bit index");
    std::uint8_t mask = static_cast<std::uint8_t>(1u << (i & 7));
    if (value)
        bytes_[static_cast<std::size_t>(i >> 3)] |= mask;
    else
        bytes_[static_cast<std::size_t>(i >> 3)] &= static_cast<std::uint8_t>(~mask);
}

void BitString::xor_with(const BitString& other) {
    if (bits_ != other.bits_) throw LengthMismatch("xor of bit strings with different lengths");
    for (std::size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= other.bytes_[i];
}

void BitString::append(const BitString& other) {
    if ((bits_ & 7) == 0) {
        bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
        bits_ += other.bits_;
        return;
    }
    std::int64_t base = bits_;
    bits_ += other.bits_;
    bytes_.resize(byte_count(bits_), 0);
    for (std::int64_t i = 0; i < other.bits_; ++i)
        if (other.bit(i)) set_bit(base + i, true);
}

BitString BitString::slice(std::int64_t lo, std::int64_t len) const {
    if (lo < 0 || len < 0 || lo + len > bits_) throw std::out_of_range("slice range");
    BitString out = zeros(len);
    int sh = static_cast<int>(lo & 7);
    std::size_t base = static_cast<std::size_t>(lo >> 3);
    for (std::size_t i = 0; i < out.bytes_.size(); ++i) {
        std::uint8_t b = static_cast<std::uint8_t>(bytes_[base + i] >> sh);
        if (sh != 0 && base + i + 1 < bytes_.size())
            b |= static_cast<std::uint8_t>(bytes_[base + i + 1] << (8 - sh));
        out.bytes_[i] = b;
    }
    out.mask_tail();
    return out;
}

void BitString::write_slice(std::int64_t lo, const BitString& piece) {
    if (lo < 0 || lo + piece.bits_ > bits_) throw std::out_of_range("write range");
    for (std::int64_t i = 0; i < piece.bits_; ++i) set_bit(lo + i, piece.bit(i));
}

void BitString::mask_tail() {
    int used = static_cast<int>(bits_ & 7);
    if (used != 0 && !bytes_.empty())
        bytes_.back() &= static_cast<std::uint8_t>((1u << used) - 1);
}

BitString xor_segments(std::span<const BitString> operands) {
    if (operands.empty()) return {};
    BitString out = operands.front();
    for (std::size_t i = 1; i < operands.size(); ++i) out.xor_with(operands[i]);
    return out;
}

BitString concat_segments(std::span<const BitString> parts) {
    BitString out;
    for (const auto& p : parts) out.append(p);
    return out;
}

}  // namespace cdc
