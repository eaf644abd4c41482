#include "landalloc/encoding.hpp"

#include <cmath>
#include <stdexcept>

namespace landalloc {

BigInt max_encoded(int base, int digits)
{
    BigInt v = 1;
    for (int d = 0; d < digits; ++d) {
        v *= base;
    }
    return v - 1;
}

BigInt EncodedPlot::max_value() const { return max_encoded(base, digits); }

EncodedPlot encode(const FloorUses& uses, int base)
{
    EncodedPlot e;
    e.base = base;
    e.digits = static_cast<int>(uses.size());
    for (UseCode u : uses) {
        if (u >= base) {
            throw ModelError("use code out of range for encoding base");
        }
        e.value = e.value * base + u;
    }
    return e;
}

FloorUses decode(const EncodedPlot& enc)
{
    if (enc.value < 0 || enc.value > enc.max_value()) {
        throw ModelError("encoded plot value outside [0, K^f - 1]");
    }
    FloorUses out(static_cast<std::size_t>(enc.digits));
    BigInt v = enc.value;
    for (int d = enc.digits - 1; d >= 0; --d) {
        const BigInt digit = v % enc.base;
        out[d] = static_cast<UseCode>(digit.convert_to<unsigned>());
        v /= enc.base;
    }
    return out;
}

BigInt clamp_encoded(const BigInt& v, int base, int digits)
{
    if (v < 0) {
        return 0;
    }
    const BigInt hi = max_encoded(base, digits);
    return v > hi ? hi : v;
}

BigInt round_to_int(double v)
{
    if (!std::isfinite(v)) {
        throw std::domain_error("cannot round a non-finite value to an integer");
    }
    // nearbyint honours the default round-to-nearest-even mode.
    return BigInt(std::nearbyint(v));
}

double to_double(const BigInt& v) { return v.convert_to<double>(); }

} // namespace landalloc
