#include "cdc/rational.hpp"

#include <limits>

namespace cdc {

namespace {

__int128 abs128(__int128 v) { return v < 0 ? -v : v; }

__int128 gcd128(__int128 a, __int128 b) {
    a = abs128(a);
    b = abs128(b);
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t narrow(__int128 v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("rational component exceeds 64 bits");
    return static_cast<std::int64_t>(v);
}

}  // namespace

Rational Rational::make(__int128 num, __int128 den) {
    if (den == 0) throw InvalidParams("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (num == 0) {
        Rational r;
        return r;
    }
    __int128 g = gcd128(num, den);
    num /= g;
    den /= g;
    Rational r;
    r.num_ = narrow(num);
    r.den_ = narrow(den);
    return r;
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

std::string Rational::to_decimal(int places) const {
    if (places < 0 || places > 18) throw InvalidParams("decimal places out of range");
    __int128 scale = 1;
    for (int i = 0; i < places; ++i) scale *= 10;
    bool negative = num_ < 0;
    __int128 scaled = abs128(static_cast<__int128>(num_)) * scale;
    // round half away from zero
    __int128 q = (2 * scaled + den_) / (2 * static_cast<__int128>(den_));
    __int128 whole = q / scale;
    __int128 frac = q % scale;
    std::string out = negative && q != 0 ? "-" : "";
    out += std::to_string(static_cast<std::int64_t>(narrow(whole)));
    if (places > 0) {
        std::string f = std::to_string(static_cast<std::int64_t>(narrow(frac)));
        out += "." + std::string(places - f.size(), '0') + f;
    }
    return out;
}

}  // namespace cdc
