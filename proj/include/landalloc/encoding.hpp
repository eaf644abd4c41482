#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "landalloc/model.hpp"

namespace landalloc {

using BigInt = boost::multiprecision::cpp_int;

// A plot's floor-use vector read as a base-K number, most significant digit
// first: with K = 3, floors [1, 2, 2] encode to 1*9 + 2*3 + 2 = 17.
struct EncodedPlot {
    BigInt value;
    int base = 2;
    int digits = 1;

    // K^digits - 1
    BigInt max_value() const;
};

EncodedPlot encode(const FloorUses& uses, int base);
FloorUses decode(const EncodedPlot& enc);

// Largest encodable value for a plot with `digits` floors.
BigInt max_encoded(int base, int digits);

// Clamps into [0, K^digits - 1].
BigInt clamp_encoded(const BigInt& v, int base, int digits);

// Rounds a real offset half-to-even.
BigInt round_to_int(double v);

double to_double(const BigInt& v);

} // namespace landalloc
