#ifndef HCMX_CLUSTERING_HPP
#define HCMX_CLUSTERING_HPP
//
// Project     : hcmx
// Module      : clustering
// Description : cluster trees over index sets and admissibility-labeled
//               block trees
//

#include <array>
#include <cstdint>
#include <functional>
#include <memory>

#include "hcmx/geometry.hpp"

namespace hcmx::geom {

struct BoundingBox {
    Point3 lo{0, 0, 0};
    Point3 hi{0, 0, 0};

    double diameter() const;
    static double distance(const BoundingBox& a, const BoundingBox& b);
};

// node of a binary cluster tree; owns a contiguous half-open range of the
// internal (permuted) index set
struct Cluster {
    std::uint32_t first = 0;
    std::uint32_t last = 0;
    BoundingBox bbox;
    std::array<std::unique_ptr<Cluster>, 2> child;

    std::uint32_t size() const { return last - first; }
    bool is_leaf() const { return !child[0]; }
};

struct ClusterTree {
    std::unique_ptr<Cluster> root;
    std::uint32_t n_min = 64;

    std::size_t depth() const;
    std::size_t leaf_count() const;
};

// Geometric construction: split along the longest bounding-box axis into
// two cardinality-balanced halves until a cluster holds at most n_min
// indices. Rewrites the point set's permutation.
ClusterTree build_cluster_tree(PointSet& points, std::uint32_t n_min);

// min{diam(t),diam(s)} <= eta * dist(t,s) on bounding boxes
bool standard_admissible(const Cluster& t, const Cluster& s, double eta);

// every off-diagonal block of one cluster tree is admissible
bool weak_admissible(const Cluster& t, const Cluster& s);

using Admissibility = std::function<bool(const Cluster&, const Cluster&)>;

Admissibility standard_admissibility(double eta);
Admissibility weak_admissibility();

// block tree node; children enumerate the (row child, col child) pairs in
// row-major order
struct Block {
    const Cluster* row = nullptr;
    const Cluster* col = nullptr;
    bool admissible = false;
    std::array<std::unique_ptr<Block>, 4> child;

    bool is_leaf() const { return !child[0]; }
    std::uint32_t rows() const { return row->size(); }
    std::uint32_t cols() const { return col->size(); }
};

struct BlockTree {
    std::unique_ptr<Block> root;
    const ClusterTree* row_tree = nullptr;
    const ClusterTree* col_tree = nullptr;

    std::size_t leaf_count() const;
    std::size_t admissible_leaf_count() const;
};

// recursion per the block-tree definition: a node is a leaf when it is
// admissible or either cluster is a leaf
BlockTree build_block_tree(const ClusterTree& rows, const ClusterTree& cols,
                           const Admissibility& adm);

void for_each_leaf(const Block& b, const std::function<void(const Block&)>& fn);

} // namespace hcmx::geom

#endif // HCMX_CLUSTERING_HPP
