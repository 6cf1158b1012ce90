#ifndef HCMX_MIXEDPREC_HPP
#define HCMX_MIXEDPREC_HPP
//
// Project     : hcmx
// Module      : mixedprec
// Description : precision-heterogeneous lowrank storage: per-group mixed
//               precision (FP64/FP32/FP16) and per-column adaptive
//               precision (APLR)
//

#include <array>
#include <cstdint>
#include <vector>

#include "hcmx/codec.hpp"
#include "hcmx/lowrank.hpp"

namespace hcmx::mp {

enum class MpFormat : std::uint8_t { fp64 = 0, fp32 = 1, fp16 = 2 };

// unit roundoffs of the FP64/FP32/FP16 ladder ("MP-D-S-H")
inline constexpr std::array<double, 3> mp_dsh_roundoffs = {1.1e-16, 6.0e-8, 4.9e-4};

inline constexpr std::size_t mp_element_bytes(MpFormat f) {
    switch (f) {
        case MpFormat::fp64: return 8;
        case MpFormat::fp32: return 4;
        case MpFormat::fp16: return 2;
    }
    return 8;
}

// column-major matrix slice held in one storage format
struct PackedSlice {
    MpFormat format = MpFormat::fp64;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    std::vector<std::uint8_t> data;

    static PackedSlice pack(const Eigen::MatrixXd& m, MpFormat f);
    Eigen::MatrixXd unpack() const;
    std::size_t byte_size() const { return data.size(); }
};

// W Sigma X^H with the columns of W and X grouped by storage format;
// sigma is always kept in FP64
struct MPLowrank {
    struct Group {
        MpFormat format = MpFormat::fp64;
        PackedSlice w; // rows x k_i
        PackedSlice x; // cols x k_i
    };
    std::vector<Group> groups;
    Eigen::VectorXd sigma;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;

    Eigen::Index rank() const { return sigma.size(); }
    std::size_t byte_size() const;

    Eigen::MatrixXd w_matrix() const; // rows x k, FP64
    Eigen::MatrixXd x_matrix() const; // cols x k, FP64
};

// W Sigma X^H with every column of W and X encoded at its own precision
// delta / sigma_i through the bit-packed codec
struct APLRLowrank {
    codec::Scheme scheme = codec::Scheme::afl;
    Eigen::VectorXd sigma;
    std::vector<codec::CompressedBuffer> w_cols;
    std::vector<codec::CompressedBuffer> x_cols;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;

    Eigen::Index rank() const { return sigma.size(); }
    std::size_t byte_size() const;
    std::size_t payload_bytes() const; // bit-packed bytes without headers

    Eigen::MatrixXd w_matrix() const;
    Eigen::MatrixXd x_matrix() const;
};

// Assigns each singular value to the coarsest format whose unit roundoff
// u_i still satisfies sigma * u_i <= delta; values at or below delta are
// dropped. Returns the group sizes (sigma is descending, so groups are
// contiguous).
std::vector<Eigen::Index> mp_partition(const Eigen::VectorXd& sigma, double delta,
                                       std::span<const double> roundoffs);

// (2p - 1 + sum_{i>=1} sqrt(r_i) u_i) * delta
double mp_error_bound(std::size_t p, std::span<const Eigen::Index> group_ranks,
                      std::span<const double> roundoffs, double delta);

MPLowrank mp_compress(const lr::LowrankBlock& block, double eps);
lr::LowrankBlock mp_decompress(const MPLowrank& rep);

APLRLowrank aplr_compress(const lr::LowrankBlock& block, double eps, codec::Scheme scheme);
lr::LowrankBlock aplr_decompress(const APLRLowrank& rep);

void serialize(const MPLowrank& rep, std::vector<std::uint8_t>& out);
MPLowrank deserialize_mp(const std::uint8_t* data, std::size_t size, std::size_t& offset,
                         std::uint32_t rows, std::uint32_t cols);

void serialize(const APLRLowrank& rep, std::vector<std::uint8_t>& out);
APLRLowrank deserialize_aplr(const std::uint8_t* data, std::size_t size, std::size_t& offset,
                             std::uint32_t rows, std::uint32_t cols);

} // namespace hcmx::mp

#endif // HCMX_MIXEDPREC_HPP
