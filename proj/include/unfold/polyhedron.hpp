#pragma once

// Convex polyhedra with oriented faces, edge adjacency, and ordered vertex
// stars, plus the intrinsic angle calculus on them: total angles, left angles
// of surface paths, sidedness, and the height-preserving affine stretch.
//
// Conventions.  Faces are vertex cycles, counterclockwise seen from outside.
// The star of a vertex o is the fan of incident face corners; its positive
// direction (counterclockwise seen from outside) keeps the star on the left
// of its boundary.  Every point x of the star other than o has an angular
// coordinate in [0, total_angle(o)); the left angle of a corner [a, o, b] is
// the positive sweep from the ray through b to the ray through a, and equals
// total_angle(o) when the two rays coincide.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "unfold/errors.hpp"
#include "unfold/geom.hpp"

namespace unfold {

inline constexpr double kPi = std::numbers::pi_v<double>;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

/// Height of a point: the coordinate along the vertical direction.
inline double height(Point3 p) { return p.z; }
inline double height(Point3 p, Point3 u) { return dot(p, u); }

// ------------------------------------------------------------------ topology

struct MeshEdge {
    int a = -1, b = -1;        // endpoints, a < b
    int face_ab = -1;          // face whose cycle contains the directed edge a->b
    int face_ba = -1;
};

/// Ordered fan of face corners around a vertex.  spokes[t] is the t-th
/// neighbor in positive cyclic order; sector_face[t] lies between spokes[t]
/// and spokes[t+1]; coord[t] is the angular coordinate of spokes[t], with
/// coord[0] = 0.
struct VertexStar {
    std::vector<int> spokes;
    std::vector<int> sector_face;
    std::vector<double> sector_angle;
    std::vector<double> coord;
    double total = 0.0;

    [[nodiscard]] int degree() const { return static_cast<int>(spokes.size()); }
    [[nodiscard]] int find_spoke(int neighbor) const {
        for (size_t t = 0; t < spokes.size(); ++t)
            if (spokes[t] == neighbor) return static_cast<int>(t);
        return -1;
    }
};

struct Polyhedron {
    std::vector<Point3> vertices;
    std::vector<std::vector<int>> faces;   // CCW from outside
    std::vector<MeshEdge> edges;
    std::vector<VertexStar> stars;
    std::vector<Point3> face_normals;      // unit, outward
    double bbox_diag = 0.0;
    Tolerance tol;

    [[nodiscard]] int vertex_count() const { return static_cast<int>(vertices.size()); }
    [[nodiscard]] int edge_count() const { return static_cast<int>(edges.size()); }
    [[nodiscard]] int face_count() const { return static_cast<int>(faces.size()); }

    [[nodiscard]] int edge_between(int a, int b) const {
        const auto it = edge_lookup_.find(edge_key(a, b));
        return it == edge_lookup_.end() ? -1 : it->second;
    }

    /// Position of vertex v in the cycle of face f, or -1.
    [[nodiscard]] int corner_of(int f, int v) const {
        const auto& cyc = faces[f];
        for (size_t i = 0; i < cyc.size(); ++i)
            if (cyc[i] == v) return static_cast<int>(i);
        return -1;
    }

    static std::uint64_t edge_key(int a, int b) {
        const auto lo = static_cast<std::uint64_t>(std::min(a, b));
        const auto hi = static_cast<std::uint64_t>(std::max(a, b));
        return (hi << 32) | lo;
    }

    std::unordered_map<std::uint64_t, int> edge_lookup_;
};

// ------------------------------------------------------------ surface points

/// A point on the surface: a vertex, a point interior to an edge (parameter t
/// from endpoint a to endpoint b), or a convex combination of a face's
/// vertices.  The representation is combinatorial, so it transfers unchanged
/// to any affine image of the mesh.
struct SurfacePoint {
    enum class Kind { vertex, edge, face };
    Kind kind = Kind::vertex;
    int index = -1;
    double t = 0.0;
    std::vector<double> w;

    static SurfacePoint at_vertex(int v) { return {Kind::vertex, v, 0.0, {}}; }
    static SurfacePoint on_edge(int e, double t) { return {Kind::edge, e, t, {}}; }
    static SurfacePoint in_face(int f, std::vector<double> w) {
        return {Kind::face, f, 0.0, std::move(w)};
    }

    friend bool operator==(const SurfacePoint& p, const SurfacePoint& q) {
        return p.kind == q.kind && p.index == q.index && p.t == q.t && p.w == q.w;
    }
};

inline Point3 position(const Polyhedron& P, const SurfacePoint& sp) {
    switch (sp.kind) {
        case SurfacePoint::Kind::vertex:
            return P.vertices[sp.index];
        case SurfacePoint::Kind::edge: {
            const MeshEdge& e = P.edges[sp.index];
            return P.vertices[e.a] + sp.t * (P.vertices[e.b] - P.vertices[e.a]);
        }
        case SurfacePoint::Kind::face: {
            const auto& cyc = P.faces[sp.index];
            if (sp.w.size() != cyc.size()) throw DomainError("face point weight count mismatch");
            Point3 p{};
            for (size_t i = 0; i < cyc.size(); ++i) p = p + sp.w[i] * P.vertices[cyc[i]];
            return p;
        }
    }
    throw DomainError("invalid surface point");
}

inline double height(const Polyhedron& P, const SurfacePoint& sp, Point3 u) {
    return dot(position(P, sp), u);
}

/// True if the surface point lies on the closed edge segment e.
inline bool lies_on_edge(const Polyhedron& P, const SurfacePoint& sp, int e) {
    switch (sp.kind) {
        case SurfacePoint::Kind::vertex:
            return P.edges[e].a == sp.index || P.edges[e].b == sp.index;
        case SurfacePoint::Kind::edge:
            return sp.index == e;
        case SurfacePoint::Kind::face:
            return false;
    }
    return false;
}

// ------------------------------------------------------------- construction

namespace detail {

inline Point3 face_newell(const std::vector<Point3>& vs, const std::vector<int>& cyc) {
    Point3 n{};
    for (size_t i = 0; i < cyc.size(); ++i) {
        const Point3& p = vs[cyc[i]];
        const Point3& q = vs[cyc[(i + 1) % cyc.size()]];
        n.x += (p.y - q.y) * (p.z + q.z);
        n.y += (p.z - q.z) * (p.x + q.x);
        n.z += (p.x - q.x) * (p.y + q.y);
    }
    return n;
}

inline Point3 face_centroid(const std::vector<Point3>& vs, const std::vector<int>& cyc) {
    Point3 c{};
    for (int v : cyc) c = c + vs[v];
    return (1.0 / static_cast<double>(cyc.size())) * c;
}

inline double bbox_diagonal(const std::vector<Point3>& vs) {
    if (vs.empty()) return 0.0;
    Point3 lo = vs[0], hi = vs[0];
    for (const auto& p : vs) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    return norm(hi - lo);
}

// Rebuilds normals, sector angles, coordinates and the bounding box from the
// current vertex positions, keeping all combinatorial structure.
inline void recompute_geometry(Polyhedron& P) {
    P.bbox_diag = bbox_diagonal(P.vertices);
    P.face_normals.resize(P.faces.size());
    for (size_t f = 0; f < P.faces.size(); ++f) {
        const Point3 n = face_newell(P.vertices, P.faces[f]);
        const double len = norm(n);
        if (len == 0.0) throw FormatError("face " + std::to_string(f) + " has zero area");
        P.face_normals[f] = (1.0 / len) * n;
    }
    for (size_t v = 0; v < P.stars.size(); ++v) {
        VertexStar& st = P.stars[v];
        const int d = st.degree();
        st.sector_angle.resize(d);
        st.coord.resize(d);
        double acc = 0.0;
        for (int t = 0; t < d; ++t) {
            st.coord[t] = acc;
            const Point3 u1 = P.vertices[st.spokes[t]] - P.vertices[v];
            const Point3 u2 = P.vertices[st.spokes[(t + 1) % d]] - P.vertices[v];
            st.sector_angle[t] = ambient_angle(u1, u2);
            acc += st.sector_angle[t];
        }
        st.total = acc;
    }
}

}  // namespace detail

/// Builds a validated convex polyhedron from raw vertices and face cycles.
/// Faces are re-oriented outward if needed, and adjacent coplanar faces
/// (dihedral angle within tol.eps_ang) are merged, so that faces correspond
/// to the supporting facets.  Throws FormatError for malformed or
/// non-spherical input and ConvexityError (with an offending vertex) when the
/// vertices are not in convex position.
inline Polyhedron build_polyhedron(std::vector<Point3> vertices,
                                   std::vector<std::vector<int>> faces,
                                   const Tolerance& tol = {}) {
    const int nv = static_cast<int>(vertices.size());
    if (nv < 4) throw FormatError("a closed polyhedron needs at least 4 vertices");
    for (const auto& p : vertices)
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            throw FormatError("non-finite vertex coordinate");
    if (faces.size() < 4) throw FormatError("a closed polyhedron needs at least 4 faces");

    for (auto& cyc : faces) {
        if (cyc.size() < 3) throw FormatError("face with fewer than 3 vertices");
        std::vector<int> seen;
        for (int v : cyc) {
            if (v < 0 || v >= nv) throw FormatError("face references a missing vertex");
            for (int s : seen)
                if (s == v) throw FormatError("face repeats a vertex");
            seen.push_back(v);
        }
    }

    // Orientation: make face windings consistent across each shared edge,
    // then flip globally so the enclosed volume is positive.
    {
        std::unordered_map<std::uint64_t, std::vector<int>> edge_faces;
        for (size_t f = 0; f < faces.size(); ++f) {
            const auto& cyc = faces[f];
            for (size_t i = 0; i < cyc.size(); ++i)
                edge_faces[Polyhedron::edge_key(cyc[i], cyc[(i + 1) % cyc.size()])]
                    .push_back(static_cast<int>(f));
        }
        for (const auto& [key, fs] : edge_faces)
            if (fs.size() != 2) throw FormatError("surface is not closed: an edge borders " +
                                                  std::to_string(fs.size()) + " faces");

        auto directed = [&](int f, int a, int b) {
            const auto& cyc = faces[f];
            for (size_t i = 0; i < cyc.size(); ++i)
                if (cyc[i] == a && cyc[(i + 1) % cyc.size()] == b) return true;
            return false;
        };
        std::vector<int> state(faces.size(), 0);  // 0 unseen, 1 kept, 2 flipped
        std::vector<int> queue{0};
        state[0] = 1;
        while (!queue.empty()) {
            const int f = queue.back();
            queue.pop_back();
            const auto& cyc = faces[f];
            for (size_t i = 0; i < cyc.size(); ++i) {
                const int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
                const auto& fs = edge_faces[Polyhedron::edge_key(a, b)];
                const int g = fs[0] == f ? fs[1] : fs[0];
                const bool needs_flip = directed(g, a, b);  // same direction twice
                const int want = needs_flip ? 2 : 1;
                if (state[g] == 0) {
                    state[g] = want;
                    if (needs_flip) std::reverse(faces[g].begin(), faces[g].end());
                    queue.push_back(g);
                } else if (state[g] != want && state[g] + want != 3) {
                    throw FormatError("face orientations cannot be made consistent");
                }
            }
        }
        for (int s : state)
            if (s == 0) throw FormatError("surface is not connected");

        double vol6 = 0.0;
        for (const auto& cyc : faces)
            for (size_t i = 1; i + 1 < cyc.size(); ++i)
                vol6 += dot(vertices[cyc[0]], cross(vertices[cyc[i]], vertices[cyc[i + 1]]));
        if (vol6 == 0.0) throw FormatError("surface encloses no volume");
        if (vol6 < 0.0)
            for (auto& cyc : faces) std::reverse(cyc.begin(), cyc.end());
    }

    const double scale = detail::bbox_diagonal(vertices);
    if (scale == 0.0) throw FormatError("all vertices coincide");

    // Planarity and convexity of each face.
    for (size_t f = 0; f < faces.size(); ++f) {
        const auto& cyc = faces[f];
        const Point3 nraw = detail::face_newell(vertices, cyc);
        const double nlen = norm(nraw);
        if (nlen <= tol.eps_len * scale * scale)
            throw FormatError("face " + std::to_string(f) + " is degenerate");
        const Point3 n = (1.0 / nlen) * nraw;
        const Point3 c = detail::face_centroid(vertices, cyc);
        for (int v : cyc)
            if (std::abs(dot(n, vertices[v] - c)) > tol.eps_len * scale)
                throw FormatError("face " + std::to_string(f) + " is not planar");
        const int m = static_cast<int>(cyc.size());
        for (int i = 0; i < m; ++i) {
            const Point3 e1 = normalized(vertices[cyc[(i + 1) % m]] - vertices[cyc[i]]);
            const Point3 e2 = normalized(vertices[cyc[(i + 2) % m]] - vertices[cyc[(i + 1) % m]]);
            if (dot(cross(e1, e2), n) < -tol.eps_ang)
                throw FormatError("face " + std::to_string(f) + " is not convex");
        }
    }

    // Local convexity across every edge: each face stays weakly inside the
    // supporting plane of its neighbor.  For a closed genus-zero surface this
    // is equivalent to bounding a convex body, so together with the global
    // check below it rejects dents whose vertices remain in convex position.
    {
        std::unordered_map<std::uint64_t, std::vector<int>> ef;
        for (size_t f = 0; f < faces.size(); ++f) {
            const auto& cyc = faces[f];
            for (size_t i = 0; i < cyc.size(); ++i)
                ef[Polyhedron::edge_key(cyc[i], cyc[(i + 1) % cyc.size()])]
                    .push_back(static_cast<int>(f));
        }
        std::vector<Point3> normal(faces.size());
        std::vector<Point3> base(faces.size());
        for (size_t f = 0; f < faces.size(); ++f) {
            normal[f] = normalized(detail::face_newell(vertices, faces[f]));
            base[f] = detail::face_centroid(vertices, faces[f]);
        }
        for (const auto& [key, fs] : ef) {
            for (int side = 0; side < 2; ++side) {
                const int f = fs[side], g = fs[1 - side];
                for (int w : faces[g])
                    if (dot(normal[f], vertices[w] - base[f]) > tol.eps_len * scale)
                        throw ConvexityError("reflex edge: vertex " + std::to_string(w) +
                                                 " lies outside the plane of an adjacent face",
                                             w);
            }
        }
    }

    // Convex position: every vertex on or inside every supporting plane.
    for (size_t f = 0; f < faces.size(); ++f) {
        const Point3 n = normalized(detail::face_newell(vertices, faces[f]));
        const Point3 c = detail::face_centroid(vertices, faces[f]);
        double worst = 0.0;
        int worst_v = -1;
        for (int v = 0; v < nv; ++v) {
            const double s = dot(n, vertices[v] - c);
            if (s > worst) {
                worst = s;
                worst_v = v;
            }
        }
        if (worst > tol.eps_len * scale)
            throw ConvexityError("vertex " + std::to_string(worst_v) +
                                     " lies outside the plane of face " + std::to_string(f),
                                 worst_v);
    }

    // A vertex no face references is inside or on the hull boundary of the
    // others (the supporting-plane check above rules out "outside").
    {
        std::vector<bool> referenced(static_cast<std::size_t>(nv), false);
        for (const auto& cyc : faces)
            for (int v : cyc) referenced[static_cast<std::size_t>(v)] = true;
        for (int v = 0; v < nv; ++v)
            if (!referenced[static_cast<std::size_t>(v)])
                throw ConvexityError("vertex " + std::to_string(v) +
                                         " is not extreme (interior point)",
                                     v);
    }

    // Merge adjacent coplanar faces so faces become the true facets.
    {
        std::vector<int> group(faces.size());
        for (size_t f = 0; f < faces.size(); ++f) group[f] = static_cast<int>(f);
        std::vector<Point3> normal(faces.size());
        for (size_t f = 0; f < faces.size(); ++f)
            normal[f] = normalized(detail::face_newell(vertices, faces[f]));

        auto find = [&](int f) {
            while (group[f] != f) f = group[f] = group[group[f]];
            return f;
        };
        std::unordered_map<std::uint64_t, std::vector<int>> ef;
        for (size_t f = 0; f < faces.size(); ++f) {
            const auto& cyc = faces[f];
            for (size_t i = 0; i < cyc.size(); ++i)
                ef[Polyhedron::edge_key(cyc[i], cyc[(i + 1) % cyc.size()])]
                    .push_back(static_cast<int>(f));
        }
        for (const auto& [key, fs] : ef) {
            if (ambient_angle(normal[fs[0]], normal[fs[1]]) <= tol.eps_ang)
                group[find(fs[0])] = find(fs[1]);
        }

        std::unordered_map<int, std::vector<int>> members;
        for (size_t f = 0; f < faces.size(); ++f) members[find(static_cast<int>(f))].push_back(f);

        if (members.size() != faces.size()) {
            std::vector<std::vector<int>> merged;
            merged.reserve(members.size());
            for (auto& [root, fs] : members) {
                if (fs.size() == 1) {
                    merged.push_back(faces[fs[0]]);
                    continue;
                }
                // Boundary cycle of the merged region: directed edges whose
                // twin face lies outside the group.
                std::unordered_map<int, int> succ;
                for (int f : fs) {
                    const auto& cyc = faces[f];
                    for (size_t i = 0; i < cyc.size(); ++i) {
                        const int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
                        const auto& inc = ef[Polyhedron::edge_key(a, b)];
                        const int other = inc[0] == f ? inc[1] : inc[0];
                        if (find(other) != root) {
                            if (succ.count(a)) throw FormatError("merged face boundary is not a cycle");
                            succ[a] = b;
                        }
                    }
                }
                if (succ.empty()) throw FormatError("merged face has no boundary");
                std::vector<int> cyc;
                const int start = succ.begin()->first;
                int cur = start;
                do {
                    cyc.push_back(cur);
                    const auto it = succ.find(cur);
                    if (it == succ.end()) throw FormatError("merged face boundary is open");
                    cur = it->second;
                } while (cur != start && cyc.size() <= succ.size());
                if (cyc.size() != succ.size())
                    throw FormatError("merged face boundary is not a single cycle");
                merged.push_back(std::move(cyc));
            }
            faces = std::move(merged);
        }
    }

    // Merging may strip a vertex out of every face cycle: such a vertex lies
    // in the interior of a facet, so it is not a corner of the body.
    {
        std::vector<bool> referenced(static_cast<std::size_t>(nv), false);
        for (const auto& cyc : faces)
            for (int v : cyc) referenced[static_cast<std::size_t>(v)] = true;
        for (int v = 0; v < nv; ++v)
            if (!referenced[static_cast<std::size_t>(v)])
                throw ConvexityError("vertex " + std::to_string(v) +
                                         " is not extreme (interior to a facet)",
                                     v);
    }

    Polyhedron P;
    P.vertices = std::move(vertices);
    P.faces = std::move(faces);
    P.tol = tol;

    // Edge table.
    {
        std::unordered_map<std::uint64_t, int> lookup;
        for (size_t f = 0; f < P.faces.size(); ++f) {
            const auto& cyc = P.faces[f];
            for (size_t i = 0; i < cyc.size(); ++i) {
                const int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
                const std::uint64_t key = Polyhedron::edge_key(a, b);
                auto it = lookup.find(key);
                if (it == lookup.end()) {
                    MeshEdge e;
                    e.a = std::min(a, b);
                    e.b = std::max(a, b);
                    (a == e.a ? e.face_ab : e.face_ba) = static_cast<int>(f);
                    lookup[key] = P.edge_count();
                    P.edges.push_back(e);
                } else {
                    MeshEdge& e = P.edges[it->second];
                    int& slot = (a == e.a ? e.face_ab : e.face_ba);
                    if (slot != -1) throw FormatError("edge traversed twice in the same direction");
                    slot = static_cast<int>(f);
                }
            }
        }
        for (const MeshEdge& e : P.edges)
            if (e.face_ab == -1 || e.face_ba == -1)
                throw FormatError("edge with a single incident face");
        P.edge_lookup_ = std::move(lookup);
    }

    const int V = P.vertex_count(), E = P.edge_count(), F = P.face_count();
    if (V - E + F != 2) throw FormatError("surface is not a topological sphere");

    // Vertex stars: walk the fan of incident faces in positive order.
    {
        std::vector<std::vector<int>> vertex_faces(V);
        for (int f = 0; f < F; ++f)
            for (int v : P.faces[f]) vertex_faces[v].push_back(f);
        for (int v = 0; v < V; ++v) {
            if (vertex_faces[v].size() < 3)
                throw ConvexityError("vertex " + std::to_string(v) + " is not a corner", v);
        }

        P.stars.resize(V);
        for (int v = 0; v < V; ++v) {
            const int f0 = *std::min_element(vertex_faces[v].begin(), vertex_faces[v].end());
            VertexStar st;
            int f = f0;
            const auto& cyc0 = P.faces[f0];
            int w = cyc0[(P.corner_of(f0, v) + 1) % cyc0.size()];  // next of v in f0
            const int first_spoke = w;
            do {
                st.spokes.push_back(w);
                st.sector_face.push_back(f);
                const auto& cyc = P.faces[f];
                const int pos = P.corner_of(f, v);
                const int wnext = cyc[(pos + cyc.size() - 1) % cyc.size()];  // prev of v in f
                const int e = P.edge_between(v, wnext);
                const MeshEdge& er = P.edges[e];
                f = (er.face_ab == f) ? er.face_ba : er.face_ab;
                w = wnext;
                if (st.spokes.size() > vertex_faces[v].size())
                    throw FormatError("vertex " + std::to_string(v) + " has a non-disk link");
            } while (w != first_spoke || f != f0);
            if (st.spokes.size() != vertex_faces[v].size())
                throw FormatError("vertex " + std::to_string(v) + " has a non-disk link");
            P.stars[v] = std::move(st);
        }
    }

    detail::recompute_geometry(P);

    // Extremeness: a corner of a convex body has cone angle strictly below
    // 2*pi; flat vertices (inside a facet or an edge) fail this.
    for (int v = 0; v < V; ++v)
        if (P.stars[v].total >= kTwoPi - tol.eps_ang)
            throw ConvexityError("vertex " + std::to_string(v) + " is not extreme", v);

    // Angle defect identity for a convex sphere-like surface.
    {
        double defect = 0.0;
        for (int v = 0; v < V; ++v) defect += kTwoPi - P.stars[v].total;
        if (std::abs(defect - 4.0 * kPi) > tol.eps_ang * V)
            throw InternalError("angle defect sum deviates from 4*pi");
    }

    return P;
}

// ------------------------------------------------------------ angle calculus

/// Cone angle at vertex v: the length of the boundary of the projected star.
inline double total_angle(const Polyhedron& P, int v) { return P.stars[v].total; }

namespace detail {

/// Faces incident to vertex v (the star's sector faces).
inline const std::vector<int>& incident_faces(const Polyhedron& P, int v) {
    return P.stars[v].sector_face;
}

/// Angular coordinate of surface point x in the star of vertex o, in
/// [0, total).  Throws DomainError if x is o or lies outside the star.
inline double star_coordinate(const Polyhedron& P, int o, const SurfacePoint& x) {
    const VertexStar& st = P.stars[o];

    // A neighboring vertex or a point on a spoke edge sits on an exact ray.
    if (x.kind == SurfacePoint::Kind::vertex) {
        if (x.index == o) throw DomainError("angle leg coincides with the apex");
        const int t = st.find_spoke(x.index);
        if (t >= 0) return st.coord[t];
    } else if (x.kind == SurfacePoint::Kind::edge) {
        const MeshEdge& e = P.edges[x.index];
        const int other = (e.a == o) ? e.b : (e.b == o ? e.a : -1);
        if (other >= 0) {
            if (x.t <= 0.0 || x.t >= 1.0) throw DomainError("edge point parameter out of (0,1)");
            return st.coord[st.find_spoke(other)];
        }
    }

    // Otherwise locate a sector face containing x and measure inside it.
    const Point3 apex = P.vertices[o];
    for (int t = 0; t < st.degree(); ++t) {
        const int f = st.sector_face[t];
        bool on_face = false;
        switch (x.kind) {
            case SurfacePoint::Kind::vertex:
                on_face = P.corner_of(f, x.index) >= 0;
                break;
            case SurfacePoint::Kind::edge: {
                const MeshEdge& e = P.edges[x.index];
                on_face = (e.face_ab == f || e.face_ba == f);
                break;
            }
            case SurfacePoint::Kind::face:
                on_face = (x.index == f);
                break;
        }
        if (!on_face) continue;
        const Point3 dir = position(P, x) - apex;
        if (norm(dir) == 0.0) throw DomainError("angle leg coincides with the apex");
        const Point3 spoke = P.vertices[st.spokes[t]] - apex;
        const double beta = ambient_angle(spoke, dir);
        if (beta > st.sector_angle[t] + P.tol.eps_ang)
            continue;  // x is in this face but the ray falls in another sector
        return st.coord[t] + std::min(beta, st.sector_angle[t]);
    }
    throw DomainError("point is not in the star of vertex " + std::to_string(o));
}

inline double mod_total(double a, double total) {
    double r = std::fmod(a, total);
    if (r < 0.0) r += total;
    return r;
}

}  // namespace detail

/// Left angle of the corner [a, o, b]: the positive sweep from the ray
/// through b to the ray through a.  Returns total_angle(o) when the rays
/// coincide (within eps_ang).
inline double left_angle(const Polyhedron& P, const SurfacePoint& a, int o,
                         const SurfacePoint& b) {
    const double ca = detail::star_coordinate(P, o, a);
    const double cb = detail::star_coordinate(P, o, b);
    const double total = P.stars[o].total;
    const double d = detail::mod_total(ca - cb, total);
    if (d < P.tol.eps_ang || total - d < P.tol.eps_ang) return total;
    return d;
}

/// True if c lies strictly inside the left side of the corner [a, o, b],
/// rays through a and b excluded.
inline bool strictly_left_of(const Polyhedron& P, const SurfacePoint& c,
                             const SurfacePoint& a, int o, const SurfacePoint& b) {
    const double total = P.stars[o].total;
    const double ca = detail::star_coordinate(P, o, a);
    const double cb = detail::star_coordinate(P, o, b);
    const double cc = detail::star_coordinate(P, o, c);
    double lb = detail::mod_total(ca - cb, total);
    if (lb < P.tol.eps_ang || total - lb < P.tol.eps_ang) lb = total;  // coinciding rays
    const double lc = detail::mod_total(ca - cc, total);
    return lc > P.tol.eps_ang && lc < lb - P.tol.eps_ang;
}

namespace detail {

/// Counterclockwise angle from u to w about the face normal, in [0, 2*pi).
inline double ccw_about(const Point3& n, const Point3& u, const Point3& w) {
    double a = std::atan2(dot(n, cross(u, w)), dot(u, w));
    if (a < 0.0) a += kTwoPi;
    return a;
}

/// A face containing the whole segment [p, q], or -1.
inline int segment_face(const Polyhedron& P, const SurfacePoint& p, const SurfacePoint& q) {
    auto face_set = [&](const SurfacePoint& sp) -> std::vector<int> {
        switch (sp.kind) {
            case SurfacePoint::Kind::vertex:
                return incident_faces(P, sp.index);
            case SurfacePoint::Kind::edge:
                return {P.edges[sp.index].face_ab, P.edges[sp.index].face_ba};
            case SurfacePoint::Kind::face:
                return {sp.index};
        }
        return {};
    };
    for (int f : face_set(p))
        for (int g : face_set(q))
            if (f == g) return f;
    return -1;
}

}  // namespace detail

/// Intrinsic total angle of the surface at an arbitrary point: the cone angle
/// at a vertex, 2*pi elsewhere.
inline double total_angle(const Polyhedron& P, const SurfacePoint& sp) {
    return sp.kind == SurfacePoint::Kind::vertex ? P.stars[sp.index].total : kTwoPi;
}

/// Left angle of a path corner [prev, at, next] at an arbitrary surface
/// point.  Equal prev and next (the corner of a doubled-back path) give the
/// total angle at the point.
inline double surface_angle(const Polyhedron& P, const SurfacePoint& prev,
                            const SurfacePoint& at, const SurfacePoint& next) {
    if (prev == next) return total_angle(P, at);

    if (at.kind == SurfacePoint::Kind::vertex) {
        return left_angle(P, prev, at.index, next);
    }

    const Point3 m = position(P, at);
    const Point3 to_prev = position(P, prev) - m;
    const Point3 to_next = position(P, next) - m;
    if (norm(to_prev) == 0.0 || norm(to_next) == 0.0)
        throw DomainError("zero-length path segment at an angle evaluation");

    if (at.kind == SurfacePoint::Kind::face) {
        return detail::ccw_about(P.face_normals[at.index], to_next, to_prev);
    }

    // Point interior to an edge: sweep within the face of the outgoing
    // segment until the edge line, cross, and finish in the other face.
    const MeshEdge& e = P.edges[at.index];
    const int f_next = detail::segment_face(P, at, next);
    const int f_prev = detail::segment_face(P, at, prev);
    if (f_next < 0 || f_prev < 0)
        throw DomainError("path segment does not stay within one face");
    if (f_next == f_prev) return detail::ccw_about(P.face_normals[f_next], to_next, to_prev);

    const Point3 d = P.vertices[e.b] - P.vertices[e.a];
    const Point3& n1 = P.face_normals[f_next];
    const Point3& n2 = P.face_normals[f_prev];
    const double a_pos = detail::ccw_about(n1, to_next, d);
    const double a_neg = detail::ccw_about(n1, to_next, -1.0 * d);
    const Point3 r = (a_pos <= a_neg) ? d : -1.0 * d;
    return std::min(a_pos, a_neg) + detail::ccw_about(n2, r, to_prev);
}

// ------------------------------------------------------------ affine stretch

/// Height-preserving affine stretch along direction u with factor lambda:
/// p -> (p + (lambda - 1) <p, u> u) / lambda for unit u.  Heights along u are
/// preserved and no distance increases.  Requires lambda >= 1.
inline Polyhedron affine_stretch(const Polyhedron& P, Point3 u, double lambda) {
    if (lambda < 1.0) throw DomainError("stretch factor must be at least 1");
    const Point3 un = normalized(u);
    Polyhedron Q = P;
    for (Point3& p : Q.vertices) {
        const double h = dot(p, un);
        p = (1.0 / lambda) * (p + (lambda - 1.0) * h * un);
    }
    detail::recompute_geometry(Q);
    return Q;
}

// --------------------------------------------------------- general position

struct GeneralPositionReport {
    bool is_general = false;
    int top = -1;
    int bottom = -1;
    double min_height_gap = 0.0;  // over adjacent vertex pairs
    std::vector<std::string> violations;
};

/// Checks that heights along u single out a unique top vertex and a unique
/// bottom vertex and that no edge is horizontal.  Reports; never perturbs.
inline GeneralPositionReport check_general_position(const Polyhedron& P, Point3 u) {
    const Point3 un = normalized(u);
    GeneralPositionReport rep;
    const int V = P.vertex_count();
    std::vector<double> h(V);
    for (int v = 0; v < V; ++v) h[v] = dot(P.vertices[v], un);

    const double tie = P.tol.eps_len * P.bbox_diag;
    int top = 0, bottom = 0;
    for (int v = 1; v < V; ++v) {
        if (h[v] > h[top]) top = v;
        if (h[v] < h[bottom]) bottom = v;
    }
    rep.top = top;
    rep.bottom = bottom;
    for (int v = 0; v < V; ++v) {
        if (v != top && h[top] - h[v] <= tie)
            rep.violations.push_back("tied top vertex " + std::to_string(v));
        if (v != bottom && h[v] - h[bottom] <= tie)
            rep.violations.push_back("tied bottom vertex " + std::to_string(v));
    }

    rep.min_height_gap = std::numeric_limits<double>::infinity();
    for (const MeshEdge& e : P.edges) {
        const double gap = std::abs(h[e.a] - h[e.b]);
        rep.min_height_gap = std::min(rep.min_height_gap, gap);
        if (gap <= tie)
            rep.violations.push_back("horizontal edge (" + std::to_string(e.a) + ", " +
                                     std::to_string(e.b) + ")");
    }
    rep.is_general = rep.violations.empty();
    return rep;
}

}  // namespace unfold
