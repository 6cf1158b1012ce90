#ifndef HCMX_HMATRIX_HPP
#define HCMX_HMATRIX_HPP
//
// Project     : hcmx
// Module      : hmatrix
// Description : hierarchical matrix container: assembly, storage-format
//               management, matrix-vector product and memory accounting
//

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "hcmx/clustering.hpp"
#include "hcmx/kernels.hpp"
#include "hcmx/lowrank.hpp"
#include "hcmx/mixedprec.hpp"

namespace hcmx {

struct IndexRange {
    std::uint32_t first = 0;
    std::uint32_t last = 0;

    std::uint32_t size() const { return last - first; }
    bool operator==(const IndexRange&) const = default;
};

// per-leaf storage selection
struct StorageMode {
    enum class Kind { fp64, codec, mp, aplr };
    Kind kind = Kind::fp64;
    codec::Scheme scheme = codec::Scheme::afl; // codec and aplr kinds

    static std::optional<StorageMode> parse(const std::string& name);
    std::string name() const;
    bool compressed() const { return kind != Kind::fp64; }
};

struct CodecDense {
    codec::CompressedBuffer buf; // column-major scan of the dense block
};

struct CodecLowrank {
    codec::CompressedBuffer u, v; // factors compressed independently
    std::uint32_t rank = 0;
};

class HMatrix {
public:
    using Children = std::array<std::unique_ptr<HMatrix>, 4>;
    using Payload = std::variant<Eigen::MatrixXd, CodecDense, lr::LowrankBlock,
                                 CodecLowrank, mp::MPLowrank, mp::APLRLowrank, Children>;

    IndexRange row_range;
    IndexRange col_range;
    Payload payload;

    std::uint32_t rows() const { return row_range.size(); }
    std::uint32_t cols() const { return col_range.size(); }

    bool is_structured() const { return std::holds_alternative<Children>(payload); }
    bool is_dense_leaf() const {
        return std::holds_alternative<Eigen::MatrixXd>(payload) ||
               std::holds_alternative<CodecDense>(payload);
    }
    bool is_lowrank_leaf() const { return !is_structured() && !is_dense_leaf(); }

    HMatrix& child(int i, int j) { return *std::get<Children>(payload)[2 * i + j]; }
    const HMatrix& child(int i, int j) const {
        return *std::get<Children>(payload)[2 * i + j];
    }

    // stored rank of a lowrank leaf (any representation)
    Eigen::Index leaf_rank() const;
};

struct AssemblyOptions {
    double eps = 1e-4;
    Eigen::Index k_max = -1; // default: min(rows, cols) / 2 per block
    unsigned threads = 1;
};

struct AssemblyReport {
    std::size_t rank_capped_blocks = 0;
    std::size_t lowrank_leaves = 0;
    std::size_t dense_leaves = 0;
};

// dense on inadmissible leaves, ACA on admissible ones; all payloads FP64
HMatrix assemble(const geom::BlockTree& bt, const kernel::KernelEvaluator& kernel,
                 const AssemblyOptions& opts, AssemblyReport* report = nullptr);

struct MemoryReport {
    std::size_t dense_raw = 0;
    std::size_t dense_compressed = 0;
    std::size_t lowrank_raw = 0;
    std::size_t lowrank_compressed = 0;
    std::size_t overhead = 0;
    std::size_t uncompressed_equivalent = 0; // FP64 bytes of the same content

    std::size_t payload_total() const {
        return dense_raw + dense_compressed + lowrank_raw + lowrank_compressed;
    }
    std::size_t total() const { return payload_total() + overhead; }
    double rate() const {
        const auto t = payload_total();
        return t == 0 ? 0.0 : static_cast<double>(uncompressed_equivalent) /
                                  static_cast<double>(t);
    }
};

// Converts every raw leaf into the requested storage. Lowrank factors are
// compressed independently of each other at the lowrank accuracy eps;
// dense leaves only when dense_too is set (never under the mp mode).
MemoryReport compress_in_place(HMatrix& m, double eps, const StorageMode& mode,
                               bool dense_too, unsigned threads = 1);

// restores raw FP64 payloads
void decompress_in_place(HMatrix& m);

MemoryReport memory_footprint(const HMatrix& m);

// y := alpha * op(M) * x + beta * y
void matvec(double alpha, const HMatrix& m, const Eigen::VectorXd& x, double beta,
            Eigen::VectorXd& y, bool transpose = false);

// materialized dense copy (tests and small problems only)
Eigen::MatrixXd to_dense(const HMatrix& m);

// histogram of per-data-block dynamic ranges in one-decade bins; every
// dense block and every lowrank factor contributes one sample
struct DynamicRangeHistogram {
    std::vector<std::size_t> bins;
    std::size_t samples = 0;
    double max_range = 0.0;

    void insert(double range_decades);
    // fraction of samples with range <= decades
    double fraction_below(double decades) const;
};

DynamicRangeHistogram dynamic_range_stats(const HMatrix& m);

void for_each_leaf(HMatrix& m, const std::function<void(HMatrix&)>& fn);
void for_each_leaf(const HMatrix& m, const std::function<void(const HMatrix&)>& fn);

// file format: "HCMX" magic, u32 version, preorder node records with
// payloads in the codec serialization
void save(const HMatrix& m, const std::string& path);
std::unique_ptr<HMatrix> load(const std::string& path);

} // namespace hcmx

#endif // HCMX_HMATRIX_HPP
