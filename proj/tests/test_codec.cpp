#include <doctest.h>

#include <cmath>
#include <vector>

#include "hcmx/codec.hpp"
#include "oracles.hpp"

using namespace hcmx;
using codec::Scheme;

namespace {

const Scheme all_schemes[] = {Scheme::afl, Scheme::aflp, Scheme::bfl, Scheme::dfl};

std::vector<double> log_uniform_block(oracle::Rng& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v)
        x = rng.log_uniform_signed(lo, hi);
    return v;
}

} // namespace

TEST_CASE("mantissa_bits_for matches the IEEE format anchors") {
    // FP16 / TF32 roundoff 4.9e-4 -> 10 mantissa bits, FP32 roundoff 6.0e-8 -> 23
    CHECK(codec::mantissa_bits_for(4.9e-4) == 10);
    CHECK(codec::mantissa_bits_for(6.0e-8) == 23);
    CHECK(codec::mantissa_bits_for(0.5) == 2);    // clamped floor
    CHECK(codec::mantissa_bits_for(1e-300) == 52); // clamped ceiling
    CHECK_THROWS_AS(codec::mantissa_bits_for(0.0), std::invalid_argument);
    CHECK_THROWS_AS(codec::mantissa_bits_for(1.0), std::invalid_argument);
    CHECK_THROWS_AS(codec::mantissa_bits_for(-1e-4), std::invalid_argument);
}

TEST_CASE("mantissa width never shrinks as eps tightens") {
    int prev = 0;
    for (double eps = 0.5; eps > 1e-18; eps *= 0.35) {
        const int m = codec::mantissa_bits_for(eps);
        CHECK(m >= prev);
        if (eps >= 0x1p-53) // contract holds until the 52-bit clamp
            CHECK(std::ldexp(1.0, -(m + 1)) <= eps);
        prev = m;
    }
}

TEST_CASE("exponent_bits_for covers the scaled value span") {
    const std::vector<double> constant(10, 3.25);
    CHECK(codec::exponent_bits_for(constant) == 2); // zero span, clamped

    const std::vector<double> fp32_like = {1.0, std::ldexp(1.0, 127)};
    CHECK(codec::exponent_bits_for(fp32_like) == 8); // span s=128 -> 8 bits

    const std::vector<double> small_span = {1.0, 128.0}; // ratio 2^7, s=8
    CHECK(codec::exponent_bits_for(small_span) == 4);

    const std::vector<double> zeros(5, 0.0);
    CHECK(codec::exponent_bits_for(zeros) == 2);
    CHECK(codec::analyze(zeros).all_zero);
}

TEST_CASE("constant blocks and zeros round-trip exactly") {
    for (Scheme s : all_schemes) {
        const std::vector<double> block = {7.5, 7.5, 7.5, 7.5, 7.5};
        auto out = codec::decompress(codec::compress(block, 1e-2, s));
        for (std::size_t i = 0; i < block.size(); ++i)
            CHECK(out[i] == block[i]);

        const std::vector<double> mixed = {0.0, -1.25, 1.25, -0.0, 0.0};
        auto back = codec::decompress(codec::compress(mixed, 1e-4, s));
        CHECK(back[0] == 0.0);
        CHECK(!std::signbit(back[0]));
        CHECK(std::signbit(back[1]));
        CHECK(std::signbit(back[3])); // negative zero keeps its sign
        CHECK(back[2] == 1.25);
        CHECK(back[1] == -1.25);
    }
}

TEST_CASE("empty block round-trips to empty") {
    for (Scheme s : all_schemes) {
        auto buf = codec::compress({}, 1e-4, s);
        CHECK(buf.count == 0);
        CHECK(codec::decompress(buf).empty());
    }
}

TEST_CASE("AFL quantization equals the mantissa-masking oracle") {
    oracle::Rng rng(42);
    auto block = log_uniform_block(rng, 4096, 1.0, 1e4);
    const double eps = 1e-4;
    const unsigned m = codec::mantissa_bits_for(eps);

    auto buf = codec::compress(block, eps, Scheme::afl);
    auto out = codec::decompress(buf);
    const double min_mag = codec::analyze(block).min_mag;
    const double bound = std::ldexp(1.0, -static_cast<int>(m + 1));

    for (std::size_t i = 0; i < block.size(); ++i) {
        CHECK(out[i] == oracle::mask_mantissa(block[i], m, min_mag));
        CHECK(std::abs(out[i] - block[i]) <= bound * (std::abs(block[i]) + min_mag));
    }
}

TEST_CASE("element error bound holds across schemes, eps and spans") {
    oracle::Rng rng(7);
    for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
        const unsigned m = codec::mantissa_bits_for(eps);
        const double u = std::ldexp(1.0, -static_cast<int>(m + 1));
        for (Scheme s : all_schemes) {
            auto block = log_uniform_block(rng, 512, 1e-3, 1e3);
            block[17] = 0.0; // embed exact zeros
            const double min_mag = codec::analyze(block).min_mag;
            auto out = codec::decompress(codec::compress(block, eps, s));
            for (std::size_t i = 0; i < block.size(); ++i)
                CHECK(std::abs(out[i] - block[i]) <= u * (std::abs(block[i]) + min_mag));
        }
    }
}

TEST_CASE("compress rejects non-finite input") {
    std::vector<double> bad = {1.0, std::nan("")};
    CHECK_THROWS_AS(codec::compress(bad, 1e-4, Scheme::afl), std::invalid_argument);
    bad[1] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(codec::compress(bad, 1e-4, Scheme::dfl), std::invalid_argument);
}

TEST_CASE("format bit widths follow the alignment rules") {
    // span of 2^5 with eps giving 10 mantissa bits
    std::vector<double> block = {1.0, 32.0};
    const double eps = 4.9e-4;
    auto st = codec::analyze(block);
    CHECK(codec::exponent_bits_for(st) == 3);

    CHECK(codec::make_descriptor(Scheme::afl, eps, st).bit_width() == 14);
    CHECK(codec::make_descriptor(Scheme::aflp, eps, st).bit_width() == 16);
    CHECK(codec::make_descriptor(Scheme::bfl, eps, st).bit_width() == 24); // 1+8+15
    CHECK(codec::make_descriptor(Scheme::dfl, eps, st).bit_width() == 32); // 1+11+20
}

TEST_CASE("compressed_size is exact and ordered") {
    codec::FormatDescriptor afl{Scheme::afl, 3, 10, 1.0};
    CHECK(codec::compressed_size(0, afl) == codec::header_bytes);
    CHECK(codec::compressed_size(1000, afl) == codec::header_bytes + 1750);

    // size(AFL) <= size(AFLP) <= size(BFL) <= size(DFL) <= 8 bytes/value for e_r <= 8
    oracle::Rng rng(11);
    for (int er = 2; er <= 8; ++er) {
        for (int mb = 2; mb <= 52; mb += 5) {
            codec::BlockStats st{1.0, std::ldexp(1.0, (1 << er) - 2), false};
            const double eps = std::ldexp(1.0, -(mb + 1));
            if (!(eps > 0.0 && eps < 1.0))
                continue;
            const std::uint64_t n = 64 + 64 * static_cast<std::uint64_t>(rng.integer(0, 8));
            std::size_t prev = 0;
            for (Scheme s : all_schemes) {
                auto d = codec::make_descriptor(s, eps, st);
                const auto sz = codec::compressed_size(n, d);
                CHECK(sz >= prev);
                prev = sz;
            }
            CHECK(prev <= codec::header_bytes + 8 * n);
        }
    }
}

TEST_CASE("compression is deterministic") {
    oracle::Rng rng(3);
    auto block = log_uniform_block(rng, 333, 1e-2, 1e5);
    for (Scheme s : all_schemes) {
        auto a = codec::compress(block, 1e-5, s);
        auto b = codec::compress(block, 1e-5, s);
        CHECK(a.payload == b.payload);
        CHECK(a.descriptor.scale == b.descriptor.scale);
    }
}

TEST_CASE("serialization round-trips and rejects truncation") {
    oracle::Rng rng(5);
    auto block = log_uniform_block(rng, 100, 1.0, 1e3);
    auto buf = codec::compress(block, 1e-6, Scheme::aflp);

    std::vector<std::uint8_t> bytes;
    codec::serialize(buf, bytes);
    std::size_t off = 0;
    auto back = codec::deserialize(bytes.data(), bytes.size(), off);
    CHECK(off == bytes.size());
    CHECK(back.count == buf.count);
    CHECK(back.payload == buf.payload);
    CHECK(back.descriptor.scale == buf.descriptor.scale);

    std::size_t off2 = 0;
    CHECK_THROWS_AS(codec::deserialize(bytes.data(), bytes.size() - 4, off2),
                    corrupt_buffer_error);
    std::size_t off3 = 0;
    CHECK_THROWS_AS(codec::deserialize(bytes.data(), 10, off3), corrupt_buffer_error);
}
