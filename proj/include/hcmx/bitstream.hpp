#ifndef HCMX_BITSTREAM_HPP
#define HCMX_BITSTREAM_HPP
//
// Project     : hcmx
// Module      : bitstream
// Description : little-endian bit packing into byte buffers
//

#include <cstdint>
#include <vector>

#include "hcmx/common.hpp"

namespace hcmx::codec {

// Appends fields of up to 64 bits to a byte vector. Bits are placed
// LSB-first within each byte; values are stored back to back without
// per-value padding.
class BitWriter {
public:
    explicit BitWriter(std::vector<std::uint8_t>& out) : out_(out) {}

    void put(std::uint64_t value, unsigned width) {
        if (width > 32) {
            put_small(value & 0xffffffffu, 32);
            put_small(value >> 32, width - 32);
        } else {
            put_small(value, width);
        }
    }

    // pads the final partial byte with zero bits
    void flush() {
        while (nbits_ > 0) {
            out_.push_back(static_cast<std::uint8_t>(scratch_ & 0xffu));
            scratch_ >>= 8;
            nbits_ = nbits_ > 8 ? nbits_ - 8 : 0;
        }
        scratch_ = 0;
    }

private:
    void put_small(std::uint64_t value, unsigned width) {
        if (width == 0)
            return;
        value &= (width == 64) ? ~0ull : ((1ull << width) - 1);
        scratch_ |= value << nbits_;
        nbits_ += width;
        while (nbits_ >= 8) {
            out_.push_back(static_cast<std::uint8_t>(scratch_ & 0xffu));
            scratch_ >>= 8;
            nbits_ -= 8;
        }
    }

    std::vector<std::uint8_t>& out_;
    std::uint64_t scratch_ = 0;
    unsigned nbits_ = 0;
};

// Reads fields written by BitWriter. Throws corrupt_buffer_error when a
// read would pass the end of the buffer.
class BitReader {
public:
    BitReader(const std::uint8_t* data, std::size_t size) : data_(data), size_(size) {}

    std::uint64_t get(unsigned width) {
        if (width > 32) {
            const std::uint64_t lo = get_small(32);
            const std::uint64_t hi = get_small(width - 32);
            return lo | (hi << 32);
        }
        return get_small(width);
    }

private:
    std::uint64_t get_small(unsigned width) {
        if (width == 0)
            return 0;
        while (nbits_ < width) {
            if (pos_ >= size_)
                throw corrupt_buffer_error("bitstream: payload ends inside a value");
            scratch_ |= static_cast<std::uint64_t>(data_[pos_++]) << nbits_;
            nbits_ += 8;
        }
        const std::uint64_t v = scratch_ & ((width == 64) ? ~0ull : ((1ull << width) - 1));
        scratch_ >>= width;
        nbits_ -= width;
        return v;
    }

    const std::uint8_t* data_;
    std::size_t size_;
    std::size_t pos_ = 0;
    std::uint64_t scratch_ = 0;
    unsigned nbits_ = 0;
};

} // namespace hcmx::codec

#endif // HCMX_BITSTREAM_HPP
