#ifndef HCMX_CODEC_HPP
#define HCMX_CODEC_HPP
//
// Project     : hcmx
// Module      : codec
// Description : bit-packed adaptive-precision floating point compression
//               (schemes AFL, AFLP, BFL, DFL)
//

#include <cstdint>
#include <span>
#include <vector>

#include "hcmx/common.hpp"

namespace hcmx::codec {

// AFL : adaptive exponent width, adaptive mantissa width, bit-packed
// AFLP: AFL with the mantissa widened so each value is byte aligned
// BFL : 8 exponent bits (FP32-like), byte-aligned mantissa
// DFL : 11 exponent bits (FP64-like), byte-aligned mantissa
enum class Scheme : std::uint8_t { afl = 0, aflp = 1, bfl = 2, dfl = 3 };

const char* scheme_name(Scheme s);

// Per-block storage layout: 1 sign bit, exp_bits exponent bits, mant_bits
// mantissa bits. Values are scaled by 1/scale and shifted by 1 before
// encoding, so nonzero values map to [2, inf) and only a small exponent
// offset above the exponent of 1.0 has to be stored. Zero encodes as
// offset 0 with zero mantissa.
//
// AFLP and BFL store whole bytes per value, DFL 16-bit units; the mantissa
// is widened to fill the padded width (capped at FP64's 52 bits, in which
// case the topmost bits of a value are zero padding).
struct FormatDescriptor {
    Scheme scheme = Scheme::afl;
    std::uint8_t exp_bits = 2;
    std::uint8_t mant_bits = 2;
    double scale = 1.0; // smallest nonzero magnitude of the encoded block

    static unsigned alignment_unit(Scheme s) {
        switch (s) {
            case Scheme::afl: return 1;
            case Scheme::aflp:
            case Scheme::bfl: return 8;
            case Scheme::dfl: return 16;
        }
        return 1;
    }

    unsigned bit_width() const {
        const unsigned unit = alignment_unit(scheme);
        const unsigned w = 1u + exp_bits + mant_bits;
        return w + (unit - w % unit) % unit;
    }
};

struct CompressedBuffer {
    FormatDescriptor descriptor;
    std::uint64_t count = 0;
    std::vector<std::uint8_t> payload;

    // serialized size (header + payload)
    std::size_t byte_size() const;
};

// magnitude statistics of one data block
struct BlockStats {
    double min_mag = 0.0; // smallest nonzero |v|, 0 if block is all zero
    double max_mag = 0.0;
    bool all_zero = true;
};

BlockStats analyze(std::span<const double> values);

// mantissa bits so that the format's unit roundoff 2^-(m+1) does not
// exceed eps; clamped to [2, 52]
std::uint8_t mantissa_bits_for(double eps);

// exponent bits covering the binary exponent span of the scaled-shifted
// block values; clamped to [2, 11]
std::uint8_t exponent_bits_for(std::span<const double> values);
std::uint8_t exponent_bits_for(const BlockStats& stats);

// resolves scheme rules (fixed exponent widths, byte alignment) into a
// concrete per-block layout
FormatDescriptor make_descriptor(Scheme scheme, double eps, const BlockStats& stats);

// layout with a caller-chosen exponent width and scale (per-column
// encoding); fixed-exponent schemes still force their own width
FormatDescriptor make_descriptor(Scheme scheme, double eps, double scale,
                                 std::uint8_t exp_bits);

CompressedBuffer compress(std::span<const double> values, double eps, Scheme scheme);

// compress with a fully pinned layout (used for per-column encoding)
CompressedBuffer compress_block(std::span<const double> values, const FormatDescriptor& desc);

std::vector<double> decompress(const CompressedBuffer& buf);
void decompress_into(const CompressedBuffer& buf, double* out);

// serialized size in bytes for `count` values in the given layout
std::size_t compressed_size(std::uint64_t count, const FormatDescriptor& desc);

// wire format: [u8 scheme][u8 e][u8 m][u8 reserved][f64 scale][u64 count][payload],
// integers little-endian
inline constexpr std::size_t header_bytes = 20;

void serialize(const CompressedBuffer& buf, std::vector<std::uint8_t>& out);
CompressedBuffer deserialize(const std::uint8_t* data, std::size_t size, std::size_t& offset);

} // namespace hcmx::codec

#endif // HCMX_CODEC_HPP
