//
// Project     : hcmx
// Module      : codec
// Description : bit-packed adaptive-precision floating point compression
//

#include "hcmx/codec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

#include "hcmx/bitstream.hpp"

namespace hcmx::codec {

namespace {

constexpr std::uint64_t fp64_mant_mask = (1ull << 52) - 1;
constexpr std::int64_t fp64_bias = 1023;

// widen the mantissa to fill the scheme's padded width, at most 52 bits
std::uint8_t align_mantissa(Scheme scheme, std::uint8_t exp_bits, std::uint8_t mant_bits) {
    const unsigned unit = FormatDescriptor::alignment_unit(scheme);
    unsigned w = 1u + exp_bits + mant_bits;
    w += (unit - w % unit) % unit;
    return static_cast<std::uint8_t>(std::min(52u, w - 1u - exp_bits));
}

} // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::afl: return "afl";
        case Scheme::aflp: return "aflp";
        case Scheme::bfl: return "bfl";
        case Scheme::dfl: return "dfl";
    }
    return "?";
}

BlockStats analyze(std::span<const double> values) {
    BlockStats st;
    st.min_mag = std::numeric_limits<double>::infinity();
    for (double v : values) {
        const double a = std::abs(v);
        if (a == 0.0)
            continue;
        st.all_zero = false;
        st.min_mag = std::min(st.min_mag, a);
        st.max_mag = std::max(st.max_mag, a);
    }
    if (st.all_zero) {
        st.min_mag = 0.0;
        st.max_mag = 0.0;
    }
    return st;
}

std::uint8_t mantissa_bits_for(double eps) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw std::invalid_argument("mantissa_bits_for: eps must lie in (0, 1)");
    const double bits = std::ceil(-std::log2(eps)) - 1.0;
    return static_cast<std::uint8_t>(std::clamp(bits, 2.0, 52.0));
}

std::uint8_t exponent_bits_for(const BlockStats& stats) {
    if (stats.all_zero)
        return 2;
    const double span = std::log2(stats.max_mag) - std::log2(stats.min_mag) + 1.0;
    const double bits = std::ceil(std::log2(span + 1.0));
    return static_cast<std::uint8_t>(std::clamp(bits, 2.0, 11.0));
}

std::uint8_t exponent_bits_for(std::span<const double> values) {
    return exponent_bits_for(analyze(values));
}

FormatDescriptor make_descriptor(Scheme scheme, double eps, const BlockStats& stats) {
    return make_descriptor(scheme, eps, stats.all_zero ? 1.0 : stats.min_mag,
                           exponent_bits_for(stats));
}

FormatDescriptor make_descriptor(Scheme scheme, double eps, double scale,
                                 std::uint8_t exp_bits) {
    FormatDescriptor d;
    d.scheme = scheme;
    d.scale = scale;
    switch (scheme) {
        case Scheme::afl:
        case Scheme::aflp: d.exp_bits = exp_bits; break;
        case Scheme::bfl: d.exp_bits = 8; break;
        case Scheme::dfl: d.exp_bits = 11; break;
    }
    d.mant_bits = mantissa_bits_for(eps);
    if (scheme != Scheme::afl)
        d.mant_bits = align_mantissa(scheme, d.exp_bits, d.mant_bits);
    return d;
}

CompressedBuffer compress_block(std::span<const double> values, const FormatDescriptor& desc) {
    const unsigned e = desc.exp_bits;
    const unsigned m = desc.mant_bits;
    const unsigned width = desc.bit_width();
    const double inv_scale = 1.0 / desc.scale;
    const std::uint64_t max_offset = (1ull << e) - 1;
    // rounding increment: half an ulp of the kept precision (no-op at full width)
    const std::uint64_t round_add = (m < 52) ? (1ull << (51 - m)) : 0;

    CompressedBuffer buf;
    buf.descriptor = desc;
    buf.count = values.size();
    buf.payload.reserve((values.size() * width + 7) / 8);

    BitWriter writer(buf.payload);
    for (double v : values) {
        if (!std::isfinite(v))
            throw std::invalid_argument("compress: values must be finite");
        const std::uint64_t sign = std::signbit(v) ? 1u : 0u;
        std::uint64_t field = sign << (e + m);
        if (v != 0.0) {
            const double vp = std::abs(v) * inv_scale + 1.0; // >= 2
            std::uint64_t u = std::bit_cast<std::uint64_t>(vp) + round_add;
            std::uint64_t offset = (u >> 52) - fp64_bias;
            std::uint64_t mant = (u >> (52 - m)) & ((m == 52) ? fp64_mant_mask : ((1ull << m) - 1));
            if (offset > max_offset || !std::isfinite(vp)) {
                // dynamic range exceeds the exponent window (fixed-width
                // schemes only); saturate at the largest representable value
                offset = max_offset;
                mant = (1ull << m) - 1;
            }
            field |= (offset << m) | mant;
        }
        writer.put(field, width);
    }
    writer.flush();
    return buf;
}

CompressedBuffer compress(std::span<const double> values, double eps, Scheme scheme) {
    return compress_block(values, make_descriptor(scheme, eps, analyze(values)));
}

void decompress_into(const CompressedBuffer& buf, double* out) {
    const unsigned e = buf.descriptor.exp_bits;
    const unsigned m = buf.descriptor.mant_bits;
    const unsigned width = buf.descriptor.bit_width();
    const double scale = buf.descriptor.scale;
    const std::uint64_t exp_mask = (1ull << e) - 1;
    const std::uint64_t mant_mask = (m == 52) ? fp64_mant_mask : ((1ull << m) - 1);

    BitReader reader(buf.payload.data(), buf.payload.size());
    for (std::uint64_t i = 0; i < buf.count; ++i) {
        const std::uint64_t field = reader.get(width);
        const std::uint64_t sign = (field >> (e + m)) & 1u;
        const std::uint64_t offset = (field >> m) & exp_mask;
        const std::uint64_t mant = field & mant_mask;
        double v;
        if (offset == 0 && mant == 0) {
            v = 0.0;
        } else {
            // clamp to the largest finite exponent (saturated encodings)
            const std::uint64_t biased = std::min<std::uint64_t>(offset + fp64_bias, 2046);
            const std::uint64_t u = (biased << 52) | (mant << (52 - m));
            v = (std::bit_cast<double>(u) - 1.0) * scale;
        }
        out[i] = sign ? -v : v;
    }
}

std::vector<double> decompress(const CompressedBuffer& buf) {
    std::vector<double> out(buf.count);
    decompress_into(buf, out.data());
    return out;
}

std::size_t compressed_size(std::uint64_t count, const FormatDescriptor& desc) {
    return header_bytes + (count * desc.bit_width() + 7) / 8;
}

std::size_t CompressedBuffer::byte_size() const {
    return header_bytes + payload.size();
}

void serialize(const CompressedBuffer& buf, std::vector<std::uint8_t>& out) {
    out.push_back(static_cast<std::uint8_t>(buf.descriptor.scheme));
    out.push_back(buf.descriptor.exp_bits);
    out.push_back(buf.descriptor.mant_bits);
    out.push_back(0); // reserved
    std::uint8_t tmp[8];
    std::memcpy(tmp, &buf.descriptor.scale, 8);
    out.insert(out.end(), tmp, tmp + 8);
    const std::uint64_t n = buf.count;
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>((n >> (8 * i)) & 0xffu));
    out.insert(out.end(), buf.payload.begin(), buf.payload.end());
}

CompressedBuffer deserialize(const std::uint8_t* data, std::size_t size, std::size_t& offset) {
    if (size < offset || size - offset < header_bytes)
        throw corrupt_buffer_error("deserialize: truncated header");
    const std::uint8_t* p = data + offset;
    CompressedBuffer buf;
    if (p[0] > 3)
        throw corrupt_buffer_error("deserialize: unknown scheme tag");
    buf.descriptor.scheme = static_cast<Scheme>(p[0]);
    buf.descriptor.exp_bits = p[1];
    buf.descriptor.mant_bits = p[2];
    if (buf.descriptor.exp_bits < 2 || buf.descriptor.exp_bits > 11 ||
        buf.descriptor.mant_bits < 2 || buf.descriptor.mant_bits > 52)
        throw corrupt_buffer_error("deserialize: invalid bit widths");
    std::memcpy(&buf.descriptor.scale, p + 4, 8);
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i)
        n |= static_cast<std::uint64_t>(p[12 + i]) << (8 * i);
    buf.count = n;
    const std::size_t payload_len = (n * buf.descriptor.bit_width() + 7) / 8;
    if (size - offset - header_bytes < payload_len)
        throw corrupt_buffer_error("deserialize: truncated payload");
    buf.payload.assign(p + header_bytes, p + header_bytes + payload_len);
    offset += header_bytes + payload_len;
    return buf;
}

} // namespace hcmx::codec
