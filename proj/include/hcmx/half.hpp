#ifndef HCMX_HALF_HPP
#define HCMX_HALF_HPP
//
// Project     : hcmx
// Module      : half
// Description : IEEE754 binary16 storage conversion (no arithmetic)
//

#include <bit>
#include <cstdint>

namespace hcmx::mp {

// round-to-nearest-even, denormals preserved, overflow saturates to inf
inline std::uint16_t float_to_half(float value) {
    const std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
    const std::uint32_t sign = (bits >> 16) & 0x8000u;
    const std::int32_t exp = static_cast<std::int32_t>((bits >> 23) & 0xffu) - 127 + 15;
    std::uint32_t mant = bits & 0x7fffffu;

    if (exp >= 31)
        return static_cast<std::uint16_t>(sign | 0x7c00u);
    if (exp <= 0) {
        if (exp < -10)
            return static_cast<std::uint16_t>(sign); // below half the smallest denormal
        mant |= 0x800000u;
        const unsigned shift = static_cast<unsigned>(14 - exp); // 14..24
        const std::uint32_t lsb = 1u << shift;
        const std::uint32_t rest = mant & (lsb - 1);
        std::uint32_t hm = mant >> shift;
        if (rest > (lsb >> 1) || (rest == (lsb >> 1) && (hm & 1u)))
            ++hm; // carry into the exponent yields the smallest normal
        return static_cast<std::uint16_t>(sign | hm);
    }
    std::uint32_t hm = mant >> 13;
    const std::uint32_t rest = mant & 0x1fffu;
    if (rest > 0x1000u || (rest == 0x1000u && (hm & 1u)))
        ++hm;
    const std::uint32_t out = (static_cast<std::uint32_t>(exp) << 10) + hm;
    return static_cast<std::uint16_t>(sign | out);
}

inline float half_to_float(std::uint16_t h) {
    const std::uint32_t sign = static_cast<std::uint32_t>(h & 0x8000u) << 16;
    const std::uint32_t exp = (h >> 10) & 0x1fu;
    const std::uint32_t mant = h & 0x3ffu;
    std::uint32_t bits;
    if (exp == 0) {
        if (mant == 0) {
            bits = sign;
        } else {
            int e = -1;
            std::uint32_t m = mant;
            while (!(m & 0x400u)) {
                m <<= 1;
                ++e;
            }
            bits = sign | ((127u - 15u - static_cast<std::uint32_t>(e)) << 23) |
                   ((m & 0x3ffu) << 13);
        }
    } else if (exp == 31) {
        bits = sign | 0x7f800000u | (mant << 13);
    } else {
        bits = sign | ((exp - 15u + 127u) << 23) | (mant << 13);
    }
    return std::bit_cast<float>(bits);
}

inline std::uint16_t double_to_half(double v) { return float_to_half(static_cast<float>(v)); }
inline double half_to_double(std::uint16_t h) { return half_to_float(h); }

} // namespace hcmx::mp

#endif // HCMX_HALF_HPP
