#ifndef HCMX_GEOMETRY_HPP
#define HCMX_GEOMETRY_HPP
//
// Project     : hcmx
// Module      : geometry
// Description : model problem point sets on the unit sphere
//

#include <array>
#include <cstdint>
#include <vector>

#include "hcmx/common.hpp"

namespace hcmx::geom {

using Point3 = std::array<double, 3>;

enum class Problem { laplace_sphere, matern_random_sphere };

// Point cloud with an external-to-internal index permutation. The
// permutation starts as identity and is rewritten by build_cluster_tree so
// that every cluster owns a contiguous internal index range.
struct PointSet {
    std::vector<Point3> coords;       // by external index
    std::vector<double> areas;        // triangle areas (laplace_sphere only)
    std::vector<std::uint32_t> e2i;   // external -> internal
    std::vector<std::uint32_t> i2e;   // internal -> external

    std::size_t size() const { return coords.size(); }

    const Point3& point_at_internal(std::size_t i) const { return coords[i2e[i]]; }
    double area_at_internal(std::size_t i) const { return areas[i2e[i]]; }
};

// laplace_sphere: centroids and areas of a recursively subdivided
// icosahedron with at least n triangles, vertices reprojected to the
// sphere. matern_random_sphere: n points uniform on the unit sphere,
// reproducible from the seed.
PointSet generate_points(Problem problem, std::size_t n, std::uint64_t seed);

} // namespace hcmx::geom

#endif // HCMX_GEOMETRY_HPP
