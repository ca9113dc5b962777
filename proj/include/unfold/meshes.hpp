#pragma once
// Canonical test solids, seeded random convex polyhedra, and rotations.
//
// Random meshes are generated from a single 64-bit seed so every run of a
// given binary reproduces the same geometry. The hull builder is a plain
// incremental algorithm; it only ever sees point sets whose hull contains
// every point (sphere samples, solid vertex lists), so there is no interior
// point handling beyond a skip.

#include <array>
#include <cmath>
#include <random>
#include <utility>
#include <vector>

#include "unfold/errors.hpp"
#include "unfold/polyhedron.hpp"

namespace unfold {

inline std::vector<Point3> tetrahedron_vertices() {
    return {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
}

inline std::vector<Point3> cube_vertices() {
    std::vector<Point3> v;
    for (int i = 0; i < 8; ++i)
        v.push_back({i & 1 ? 1.0 : -1.0, i & 2 ? 1.0 : -1.0, i & 4 ? 1.0 : -1.0});
    return v;
}

inline std::vector<Point3> octahedron_vertices() {
    return {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
}

/// Permutations of (0, +-1, +-3) with matching signs: 12 vertices, 4 hexagon
/// and 4 triangle faces.
inline std::vector<Point3> truncated_tetrahedron_vertices() {
    std::vector<Point3> v;
    const std::array<std::array<int, 3>, 6> perms = {
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    for (double s : {1.0, -1.0}) {
        for (const auto& p : perms) {
            std::array<double, 3> base = {0.0, s * 1.0, s * 3.0};
            Point3 q{base[static_cast<std::size_t>(p[0])], base[static_cast<std::size_t>(p[1])],
                     base[static_cast<std::size_t>(p[2])]};
            bool dup = false;
            for (const auto& r : v) dup = dup || (r == q);
            if (!dup) v.push_back(q);
        }
    }
    return v;
}

namespace detail {

inline double volume6(Point3 a, Point3 b, Point3 c, Point3 d) {
    return dot(cross(b - a, c - a), d - a);
}

}  // namespace detail

/// Incremental convex hull over points in convex position. Returns outward
/// CCW triangles; coplanar triangles are merged later by build_polyhedron.
inline std::vector<std::vector<int>> convex_hull_faces(const std::vector<Point3>& pts) {
    const int n = static_cast<int>(pts.size());
    if (n < 4) throw DomainError("hull: need at least 4 points");
    double scale = 0;
    for (const auto& p : pts) scale = std::max({scale, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
    const double vol_eps = 1e-12 * scale * scale * scale;

    // Seed tetrahedron from the first affinely independent quadruple.
    std::array<int, 4> seed = {0, -1, -1, -1};
    for (int i = 1; i < n && seed[1] < 0; ++i)
        if (distance(pts[0], pts[i]) > 1e-12 * scale) seed[1] = i;
    if (seed[1] < 0) throw DomainError("hull: all points coincide");
    for (int i = 1; i < n && seed[2] < 0; ++i) {
        if (i == seed[1]) continue;
        if (norm(cross(pts[seed[1]] - pts[0], pts[i] - pts[0])) > 1e-12 * scale * scale) seed[2] = i;
    }
    if (seed[2] < 0) throw DomainError("hull: all points collinear");
    for (int i = 1; i < n && seed[3] < 0; ++i) {
        if (i == seed[1] || i == seed[2]) continue;
        if (std::abs(detail::volume6(pts[0], pts[seed[1]], pts[seed[2]], pts[i])) > vol_eps) seed[3] = i;
    }
    if (seed[3] < 0) throw DomainError("hull: all points coplanar");

    struct Tri {
        int a, b, c;
    };
    std::vector<Tri> faces;
    {
        int s0 = seed[0], s1 = seed[1], s2 = seed[2], s3 = seed[3];
        if (detail::volume6(pts[s0], pts[s1], pts[s2], pts[s3]) > 0) std::swap(s1, s2);
        // Now s3 is on the negative side of (s0,s1,s2): that triangle faces outward.
        faces = {{s0, s1, s2}, {s0, s3, s1}, {s1, s3, s2}, {s2, s3, s0}};
    }

    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (int s : seed) used[static_cast<std::size_t>(s)] = true;

    for (int p = 0; p < n; ++p) {
        if (used[static_cast<std::size_t>(p)]) continue;
        used[static_cast<std::size_t>(p)] = true;
        std::vector<bool> visible(faces.size());
        bool any = false;
        for (std::size_t f = 0; f < faces.size(); ++f) {
            visible[f] = detail::volume6(pts[faces[f].a], pts[faces[f].b], pts[faces[f].c], pts[p]) > vol_eps;
            any = any || visible[f];
        }
        if (!any) continue;  // on or inside the current hull
        // Horizon: directed edges of visible faces whose twin is invisible.
        std::vector<std::pair<int, int>> horizon;
        auto twin_visible = [&](int a, int b) {
            for (std::size_t f = 0; f < faces.size(); ++f) {
                const Tri& t = faces[f];
                const std::array<std::pair<int, int>, 3> es = {
                    {{t.a, t.b}, {t.b, t.c}, {t.c, t.a}}};
                for (const auto& e : es)
                    if (e.first == b && e.second == a) return visible[f];
            }
            throw InternalError("hull: open surface");
        };
        for (std::size_t f = 0; f < faces.size(); ++f) {
            if (!visible[f]) continue;
            const Tri& t = faces[f];
            const std::array<std::pair<int, int>, 3> es = {{{t.a, t.b}, {t.b, t.c}, {t.c, t.a}}};
            for (const auto& e : es)
                if (!twin_visible(e.first, e.second)) horizon.push_back(e);
        }
        std::vector<Tri> kept;
        for (std::size_t f = 0; f < faces.size(); ++f)
            if (!visible[f]) kept.push_back(faces[f]);
        for (const auto& e : horizon) kept.push_back({e.first, e.second, p});
        faces = std::move(kept);
    }

    std::vector<std::vector<int>> out;
    out.reserve(faces.size());
    for (const Tri& t : faces) out.push_back({t.a, t.b, t.c});
    return out;
}

inline Polyhedron make_tetrahedron(const Tolerance& tol = {}) {
    auto v = tetrahedron_vertices();
    return build_polyhedron(v, convex_hull_faces(v), tol);
}

inline Polyhedron make_cube(const Tolerance& tol = {}) {
    auto v = cube_vertices();
    return build_polyhedron(v, convex_hull_faces(v), tol);
}

inline Polyhedron make_octahedron(const Tolerance& tol = {}) {
    auto v = octahedron_vertices();
    return build_polyhedron(v, convex_hull_faces(v), tol);
}

inline Polyhedron make_truncated_tetrahedron(const Tolerance& tol = {}) {
    auto v = truncated_tetrahedron_vertices();
    return build_polyhedron(v, convex_hull_faces(v), tol);
}

struct Rotation {
    std::array<double, 9> m;  // row-major
    Point3 apply(Point3 p) const {
        return {m[0] * p.x + m[1] * p.y + m[2] * p.z, m[3] * p.x + m[4] * p.y + m[5] * p.z,
                m[6] * p.x + m[7] * p.y + m[8] * p.z};
    }
};

/// Uniform random rotation from a normalized quaternion.
inline Rotation random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    double w = g(rng), x = g(rng), y = g(rng), z = g(rng);
    double s = std::sqrt(w * w + x * x + y * y + z * z);
    if (s < 1e-300) return random_rotation(rng);
    w /= s;
    x /= s;
    y /= s;
    z /= s;
    return {{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
             2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
             2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}};
}

/// Same combinatorics, rigidly moved vertices.
inline Polyhedron transformed(const Polyhedron& P, const Rotation& R) {
    Polyhedron Q = P;
    for (auto& v : Q.vertices) v = R.apply(v);
    detail::recompute_geometry(Q);
    return Q;
}

/// Random polyhedron with n vertices: sphere samples under a mild anisotropic
/// scale, so every sample is a hull vertex.
inline Polyhedron random_convex_polyhedron(std::mt19937_64& rng, int n, const Tolerance& tol = {}) {
    if (n < 4) throw DomainError("random polyhedron needs n >= 4");
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> scale_dist(0.6, 1.4);
    const double sx = scale_dist(rng), sy = scale_dist(rng), sz = scale_dist(rng);
    std::vector<Point3> pts;
    pts.reserve(static_cast<std::size_t>(n));
    while (static_cast<int>(pts.size()) < n) {
        Point3 p{g(rng), g(rng), g(rng)};
        double r = norm(p);
        if (r < 1e-6) continue;
        p = (1.0 / r) * p;
        p = {p.x * sx, p.y * sy, p.z * sz};
        bool close = false;
        for (const auto& q : pts) close = close || distance(p, q) < 1e-3;
        if (!close) pts.push_back(p);
    }
    return build_polyhedron(pts, convex_hull_faces(pts), tol);
}

/// Rotates P until the direction u sees a unique top, a unique bottom, and no
/// horizontal edge. Throws after max_tries failures.
inline Polyhedron ensure_general_position(Polyhedron P, Point3 u, std::mt19937_64& rng,
                                          int max_tries = 64) {
    for (int t = 0; t < max_tries; ++t) {
        if (check_general_position(P, u).is_general) return P;
        P = transformed(P, random_rotation(rng));
    }
    throw GeneralPositionError("no general-position rotation found after " +
                               std::to_string(max_tries) + " tries");
}

}  // namespace unfold
