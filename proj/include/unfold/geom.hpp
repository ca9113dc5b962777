#pragma once

// Planar and ambient primitives: points, tolerances, the exact orientation
// predicate, segment intersection classification, and angle helpers.  Every
// topological decision elsewhere in the library routes through orient2d, so
// its sign is computed exactly (floating-point filter with an exact expansion
// fallback); metric decisions use the relative tolerances in Tolerance.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "unfold/errors.hpp"

namespace unfold {

// ---------------------------------------------------------------- tolerances

/// Relative tolerances for metric (not topological) decisions.
/// eps_len scales with the local length, eps_ang is in radians.
struct Tolerance {
    double eps_len = 1e-9;
    double eps_ang = 1e-9;

    Tolerance() = default;
    Tolerance(double len, double ang) : eps_len(len), eps_ang(ang) {
        if (!(len > 0.0 && len < 1e-3) || !(ang > 0.0 && ang < 1e-3))
            throw DomainError("tolerance out of range (0, 1e-3)");
    }
};

// -------------------------------------------------------------------- points

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Point3 operator*(double s, Point3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend bool operator==(Point3 a, Point3 b) { return a.x == b.x && a.y == b.y && a.z == b.z; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline Point3 cross(Point3 a, Point3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double norm(Point3 a) { return std::sqrt(dot(a, a)); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline double distance(Point3 a, Point3 b) { return norm(a - b); }

inline Point3 normalized(Point3 a) {
    const double n = norm(a);
    if (n == 0.0) throw DomainError("cannot normalize a zero vector");
    return (1.0 / n) * a;
}

// -------------------------------------------------------- exact orientation

namespace detail {

// Error-free transforms.  two_sum is Knuth's 6-op version; two_prod uses fma,
// which is exact in IEEE round-to-nearest.
inline void two_sum(double a, double b, double& x, double& y) {
    x = a + b;
    const double bv = x - a;
    const double av = x - bv;
    y = (a - av) + (b - bv);
}

inline void two_prod(double a, double b, double& x, double& y) {
    x = a * b;
    y = std::fma(a, b, -x);
}

// Adds b to the nonoverlapping expansion e (components in increasing
// magnitude), keeping it nonoverlapping.
inline void grow_expansion(std::array<double, 16>& e, int& n, double b) {
    double q = b;
    for (int i = 0; i < n; ++i) {
        double qn, r;
        two_sum(q, e[i], qn, r);
        e[i] = r;
        q = qn;
    }
    e[n++] = q;
}

// Sign of the exact value ax*by - ax*cy + bx*cy - bx*ay + cx*ay - cx*by.
inline int orient2d_exact(Point2 a, Point2 b, Point2 c) {
    std::array<double, 16> e{};
    int n = 0;
    const double fs[6][2] = {{a.x, b.y}, {-a.x, c.y}, {b.x, c.y},
                             {-b.x, a.y}, {c.x, a.y}, {-c.x, b.y}};
    for (const auto& f : fs) {
        double hi, lo;
        two_prod(f[0], f[1], hi, lo);
        grow_expansion(e, n, lo);
        grow_expansion(e, n, hi);
    }
    for (int i = n - 1; i >= 0; --i) {
        if (e[i] > 0.0) return +1;
        if (e[i] < 0.0) return -1;
    }
    return 0;
}

inline constexpr double kMachEps = 1.1102230246251565e-16;  // 2^-53
inline constexpr double kCcwErrBound = (3.0 + 16.0 * kMachEps) * kMachEps;

}  // namespace detail

/// Sign of the signed area of triangle (a, b, c): +1 if c lies strictly to the
/// left of the directed line a->b, -1 if strictly right, 0 if collinear.
/// Exact: a floating-point filter falls back to expansion arithmetic.
inline int orient2d(Point2 a, Point2 b, Point2 c) {
    const double detl = (b.x - a.x) * (c.y - a.y);
    const double detr = (b.y - a.y) * (c.x - a.x);
    const double det = detl - detr;
    double detsum;
    if (detl > 0.0) {
        if (detr <= 0.0) return det > 0.0 ? +1 : (det < 0.0 ? -1 : 0);
        detsum = detl + detr;
    } else if (detl < 0.0) {
        if (detr >= 0.0) return det > 0.0 ? +1 : (det < 0.0 ? -1 : 0);
        detsum = -detl - detr;
    } else {
        return det > 0.0 ? +1 : (det < 0.0 ? -1 : 0);
    }
    const double errbound = detail::kCcwErrBound * detsum;
    if (det >= errbound || -det >= errbound) return det > 0.0 ? +1 : -1;
    return detail::orient2d_exact(a, b, c);
}

// ------------------------------------------------------ segment intersection

enum class SegmentRelation { disjoint, endpoint_touch, proper_cross, overlap };

struct SegmentHit {
    SegmentRelation kind = SegmentRelation::disjoint;
    Point2 point{};  // witness for touch / cross / overlap
};

namespace detail {

inline bool within_bbox(Point2 p, Point2 a, Point2 b) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace detail

/// Classifies the intersection of segments [p1,p2] and [q1,q2].  Topology is
/// decided by orient2d; endpoint coincidence within eps_len * max segment
/// length also counts as endpoint_touch.  Zero-length segments are rejected.
inline SegmentHit segment_intersection(Point2 p1, Point2 p2, Point2 q1, Point2 q2,
                                       const Tolerance& tol = {}) {
    const double lp = distance(p1, p2), lq = distance(q1, q2);
    if (lp == 0.0 || lq == 0.0) throw DomainError("segment of zero length");

    const int d1 = orient2d(q1, q2, p1);
    const int d2 = orient2d(q1, q2, p2);
    const int d3 = orient2d(p1, p2, q1);
    const int d4 = orient2d(p1, p2, q2);

    if (d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0) {
        // Collinear: compare parameter intervals along the common line.
        const Point2 dir = p2 - p1;
        const double t1 = 0.0, t2 = dot(dir, dir);
        double s1 = dot(dir, q1 - p1), s2 = dot(dir, q2 - p1);
        if (s1 > s2) std::swap(s1, s2);
        const double lo = std::max(t1, s1), hi = std::min(t2, s2);
        const double span = hi - lo;                     // in units of |dir|^2
        const double touch_span = tol.eps_len * std::max(lp, lq) * lp;
        if (span > touch_span)
            return {SegmentRelation::overlap, p1 + (lo / t2) * dir};
        if (span >= -touch_span)
            return {SegmentRelation::endpoint_touch, p1 + (0.5 * (lo + hi) / t2) * dir};
        return {SegmentRelation::disjoint, {}};
    }

    const double coincide = tol.eps_len * std::max(lp, lq);
    for (Point2 pe : {p1, p2})
        for (Point2 qe : {q1, q2})
            if (distance(pe, qe) <= coincide) return {SegmentRelation::endpoint_touch, pe};

    if (d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0) {
        if (d1 != d2 && d3 != d4) {
            // Proper crossing; the point itself is only a witness.
            const double denom = cross(p2 - p1, q2 - q1);
            const double t = cross(q1 - p1, q2 - q1) / denom;
            return {SegmentRelation::proper_cross, p1 + t * (p2 - p1)};
        }
        return {SegmentRelation::disjoint, {}};
    }

    // One collinear endpoint: a touch if it lies within the other segment.
    if (d1 == 0 && detail::within_bbox(p1, q1, q2)) return {SegmentRelation::endpoint_touch, p1};
    if (d2 == 0 && detail::within_bbox(p2, q1, q2)) return {SegmentRelation::endpoint_touch, p2};
    if (d3 == 0 && detail::within_bbox(q1, p1, p2)) return {SegmentRelation::endpoint_touch, q1};
    if (d4 == 0 && detail::within_bbox(q2, p1, p2)) return {SegmentRelation::endpoint_touch, q2};
    return {SegmentRelation::disjoint, {}};
}

// -------------------------------------------------------------------- angles

/// Unsigned angle between nonzero vectors, in [0, pi].  atan2-based, stable
/// for nearly parallel and nearly opposite inputs.
inline double ambient_angle(Point3 u, Point3 v) {
    if (norm(u) == 0.0 || norm(v) == 0.0) throw DomainError("angle of a zero vector");
    return std::atan2(norm(cross(u, v)), dot(u, v));
}

inline double ambient_angle(Point2 u, Point2 v) {
    if (norm(u) == 0.0 || norm(v) == 0.0) throw DomainError("angle of a zero vector");
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

/// Counterclockwise angle from u to v in [0, 2*pi).
inline double ccw_angle(Point2 u, Point2 v) {
    if (norm(u) == 0.0 || norm(v) == 0.0) throw DomainError("angle of a zero vector");
    double a = std::atan2(cross(u, v), dot(u, v));
    if (a < 0.0) a += 2.0 * std::acos(-1.0);
    return a;
}

// ------------------------------------------------------------- rigid motions

/// Orientation-preserving planar isometry p -> R(p) + t.
struct RigidMotion2 {
    double c = 1.0, s = 0.0;  // rotation column (cos, sin)
    Point2 t{};

    [[nodiscard]] Point2 apply(Point2 p) const {
        return {c * p.x - s * p.y + t.x, s * p.x + c * p.y + t.y};
    }
};

/// Rigid motion (never a reflection) taking B's first edge onto A's first
/// edge: B[0] -> A[0] and direction(B[0]B[1]) -> direction(A[0]A[1]).
inline RigidMotion2 align_first_edge(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    if (a.size() < 2 || b.size() < 2) throw DomainError("alignment needs at least one edge");
    const Point2 da = a[1] - a[0], db = b[1] - b[0];
    const double na = norm(da), nb = norm(db);
    if (na == 0.0 || nb == 0.0) throw DomainError("alignment edge has zero length");
    const double c = (db.x * da.x + db.y * da.y) / (na * nb);
    const double s = (db.x * da.y - db.y * da.x) / (na * nb);
    RigidMotion2 m{c, s, {}};
    const Point2 rb0 = m.apply(b[0]);
    m.t = a[0] - rb0;
    return m;
}

/// Largest vertex-wise distance between equally long point sequences.
inline double max_deviation(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    if (a.size() != b.size()) throw DomainError("point sequences differ in length");
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) d = std::max(d, distance(a[i], b[i]));
    return d;
}

inline double diameter(const std::vector<Point2>& pts) {
    double lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
    bool first = true;
    for (const auto& p : pts) {
        if (first) {
            lo_x = hi_x = p.x;
            lo_y = hi_y = p.y;
            first = false;
        }
        lo_x = std::min(lo_x, p.x);
        hi_x = std::max(hi_x, p.x);
        lo_y = std::min(lo_y, p.y);
        hi_y = std::max(hi_y, p.y);
    }
    return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

}  // namespace unfold
