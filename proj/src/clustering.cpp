//
// Project     : hcmx
// Module      : clustering
// Description : cluster tree and block tree construction
//

#include "hcmx/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hcmx::geom {

double BoundingBox::diameter() const {
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k)
        d2 += (hi[k] - lo[k]) * (hi[k] - lo[k]);
    return std::sqrt(d2);
}

double BoundingBox::distance(const BoundingBox& a, const BoundingBox& b) {
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double gap = std::max({0.0, b.lo[k] - a.hi[k], a.lo[k] - b.hi[k]});
        d2 += gap * gap;
    }
    return std::sqrt(d2);
}

namespace {

BoundingBox bbox_of(const PointSet& ps, const std::vector<std::uint32_t>& order,
                    std::uint32_t first, std::uint32_t last) {
    BoundingBox box;
    for (int k = 0; k < 3; ++k) {
        box.lo[k] = std::numeric_limits<double>::infinity();
        box.hi[k] = -std::numeric_limits<double>::infinity();
    }
    for (std::uint32_t i = first; i < last; ++i) {
        const Point3& p = ps.coords[order[i]];
        for (int k = 0; k < 3; ++k) {
            box.lo[k] = std::min(box.lo[k], p[k]);
            box.hi[k] = std::max(box.hi[k], p[k]);
        }
    }
    return box;
}

std::unique_ptr<Cluster> split(const PointSet& ps, std::vector<std::uint32_t>& order,
                               std::uint32_t first, std::uint32_t last,
                               std::uint32_t n_min) {
    auto node = std::make_unique<Cluster>();
    node->first = first;
    node->last = last;
    node->bbox = bbox_of(ps, order, first, last);
    if (last - first <= n_min)
        return node;

    int axis = 0;
    double extent = -1.0;
    for (int k = 0; k < 3; ++k) {
        const double e = node->bbox.hi[k] - node->bbox.lo[k];
        if (e > extent) {
            extent = e;
            axis = k;
        }
    }
    const std::uint32_t mid = first + (last - first) / 2;
    std::nth_element(order.begin() + first, order.begin() + mid, order.begin() + last,
                     [&](std::uint32_t a, std::uint32_t b) {
                         return ps.coords[a][axis] < ps.coords[b][axis];
                     });
    node->child[0] = split(ps, order, first, mid, n_min);
    node->child[1] = split(ps, order, mid, last, n_min);
    return node;
}

std::size_t depth_of(const Cluster& c) {
    if (c.is_leaf())
        return 1;
    return 1 + std::max(depth_of(*c.child[0]), depth_of(*c.child[1]));
}

std::size_t leaves_of(const Cluster& c) {
    if (c.is_leaf())
        return 1;
    return leaves_of(*c.child[0]) + leaves_of(*c.child[1]);
}

} // namespace

ClusterTree build_cluster_tree(PointSet& points, std::uint32_t n_min) {
    if (n_min == 0)
        throw std::invalid_argument("build_cluster_tree: n_min must be positive");
    const auto n = static_cast<std::uint32_t>(points.size());
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    ClusterTree tree;
    tree.n_min = n_min;
    tree.root = split(points, order, 0, n, n_min);

    points.i2e = order;
    points.e2i.resize(n);
    for (std::uint32_t i = 0; i < n; ++i)
        points.e2i[order[i]] = i;
    return tree;
}

std::size_t ClusterTree::depth() const { return root ? depth_of(*root) : 0; }
std::size_t ClusterTree::leaf_count() const { return root ? leaves_of(*root) : 0; }

bool standard_admissible(const Cluster& t, const Cluster& s, double eta) {
    const double d = std::min(t.bbox.diameter(), s.bbox.diameter());
    return d <= eta * BoundingBox::distance(t.bbox, s.bbox);
}

bool weak_admissible(const Cluster& t, const Cluster& s) { return &t != &s; }

Admissibility standard_admissibility(double eta) {
    return [eta](const Cluster& t, const Cluster& s) {
        return standard_admissible(t, s, eta);
    };
}

Admissibility weak_admissibility() {
    return [](const Cluster& t, const Cluster& s) { return weak_admissible(t, s); };
}

namespace {

std::unique_ptr<Block> build_block(const Cluster& t, const Cluster& s,
                                   const Admissibility& adm) {
    auto node = std::make_unique<Block>();
    node->row = &t;
    node->col = &s;
    node->admissible = adm(t, s);
    if (node->admissible || t.is_leaf() || s.is_leaf())
        return node;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            node->child[2 * i + j] = build_block(*t.child[i], *s.child[j], adm);
    return node;
}

} // namespace

BlockTree build_block_tree(const ClusterTree& rows, const ClusterTree& cols,
                           const Admissibility& adm) {
    BlockTree bt;
    bt.row_tree = &rows;
    bt.col_tree = &cols;
    bt.root = build_block(*rows.root, *cols.root, adm);
    return bt;
}

void for_each_leaf(const Block& b, const std::function<void(const Block&)>& fn) {
    if (b.is_leaf()) {
        fn(b);
        return;
    }
    for (const auto& c : b.child)
        for_each_leaf(*c, fn);
}

std::size_t BlockTree::leaf_count() const {
    std::size_t n = 0;
    for_each_leaf(*root, [&](const Block&) { ++n; });
    return n;
}

std::size_t BlockTree::admissible_leaf_count() const {
    std::size_t n = 0;
    for_each_leaf(*root, [&](const Block& b) { n += b.admissible ? 1 : 0; });
    return n;
}

} // namespace hcmx::geom
