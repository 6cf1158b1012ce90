//
// Project     : hcmx
// Module      : geometry
// Description : model problem point sets on the unit sphere
//

#include "hcmx/geometry.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace hcmx::geom {

namespace {

double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

PointSet random_sphere_points(std::size_t n, std::uint64_t seed) {
    PointSet ps;
    ps.coords.reserve(n);
    std::mt19937_64 gen(seed);
    for (std::size_t i = 0; i < n; ++i) {
        // area-preserving cylindrical map
        const double z = 2.0 * uniform01(gen) - 1.0;
        const double phi = 2.0 * M_PI * uniform01(gen);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        ps.coords.push_back({r * std::cos(phi), r * std::sin(phi), z});
    }
    return ps;
}

struct TriMesh {
    std::vector<Point3> vertices;
    std::vector<std::array<std::uint32_t, 3>> faces;
};

Point3 normalized(const Point3& p) {
    const double s = 1.0 / std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    return {p[0] * s, p[1] * s, p[2] * s};
}

TriMesh icosahedron() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    TriMesh m;
    const double verts[12][3] = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    for (auto& v : verts)
        m.vertices.push_back(normalized({v[0], v[1], v[2]}));
    m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
               {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
               {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
               {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    return m;
}

TriMesh subdivide(const TriMesh& in) {
    TriMesh out;
    out.vertices = in.vertices;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> midpoint;
    auto mid = [&](std::uint32_t a, std::uint32_t b) -> std::uint32_t {
        const auto key = std::minmax(a, b);
        auto it = midpoint.find(key);
        if (it != midpoint.end())
            return it->second;
        const Point3& pa = out.vertices[a];
        const Point3& pb = out.vertices[b];
        out.vertices.push_back(normalized(
            {(pa[0] + pb[0]) / 2, (pa[1] + pb[1]) / 2, (pa[2] + pb[2]) / 2}));
        const auto idx = static_cast<std::uint32_t>(out.vertices.size() - 1);
        midpoint.emplace(key, idx);
        return idx;
    };
    out.faces.reserve(in.faces.size() * 4);
    for (const auto& f : in.faces) {
        const auto ab = mid(f[0], f[1]);
        const auto bc = mid(f[1], f[2]);
        const auto ca = mid(f[2], f[0]);
        out.faces.push_back({f[0], ab, ca});
        out.faces.push_back({f[1], bc, ab});
        out.faces.push_back({f[2], ca, bc});
        out.faces.push_back({ab, bc, ca});
    }
    return out;
}

PointSet sphere_triangulation(std::size_t n) {
    TriMesh mesh = icosahedron();
    while (mesh.faces.size() < n)
        mesh = subdivide(mesh);

    PointSet ps;
    ps.coords.reserve(mesh.faces.size());
    ps.areas.reserve(mesh.faces.size());
    for (const auto& f : mesh.faces) {
        const Point3& a = mesh.vertices[f[0]];
        const Point3& b = mesh.vertices[f[1]];
        const Point3& c = mesh.vertices[f[2]];
        ps.coords.push_back({(a[0] + b[0] + c[0]) / 3, (a[1] + b[1] + c[1]) / 3,
                             (a[2] + b[2] + c[2]) / 3});
        const Point3 u = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
        const Point3 v = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
        const Point3 w = {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                          u[0] * v[1] - u[1] * v[0]};
        ps.areas.push_back(0.5 * std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]));
    }
    return ps;
}

} // namespace

PointSet generate_points(Problem problem, std::size_t n, std::uint64_t seed) {
    if (n == 0)
        throw std::invalid_argument("generate_points: n must be positive");
    PointSet ps = (problem == Problem::matern_random_sphere)
                      ? random_sphere_points(n, seed)
                      : sphere_triangulation(n);
    ps.e2i.resize(ps.size());
    ps.i2e.resize(ps.size());
    for (std::uint32_t i = 0; i < ps.size(); ++i) {
        ps.e2i[i] = i;
        ps.i2e[i] = i;
    }
    return ps;
}

} // namespace hcmx::geom
