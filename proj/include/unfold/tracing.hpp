#pragma once
// Cutting the surface along a monotone tree: the cyclic boundary walk of the
// cut surface with its wedges and left angles, leaf/juncture markers, surface
// path algebra (concat / compose / inverse), tree branches, and the dual
// branches that climb from each leaf back to the top while avoiding the tree.
//
// Conventions.  The boundary walk keeps the cut surface on its left.  At each
// position the wedge spans the star sectors from the departure spoke
// counterclockwise to the arrival spoke; the left angle is the wedge's total
// angle, and the wedges over all occurrences of a vertex partition its star.
// The departure spoke is the first tree spoke clockwise from the arrival
// spoke, which is exactly what keeps the wedge tree-free inside.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "unfold/cut_tree.hpp"
#include "unfold/errors.hpp"
#include "unfold/polyhedron.hpp"

namespace unfold {

// -------------------------------------------------------------- surface path

/// A path on the surface: a sequence of combinatorial surface points.
struct SurfacePath {
    std::vector<SurfacePoint> points;

    [[nodiscard]] int size() const { return static_cast<int>(points.size()); }
    [[nodiscard]] bool closed() const {
        return points.size() >= 2 && points.front() == points.back();
    }
    friend bool operator==(const SurfacePath& a, const SurfacePath& b) {
        return a.points == b.points;
    }
};

inline SurfacePath inverse(SurfacePath p) {
    std::reverse(p.points.begin(), p.points.end());
    return p;
}

/// [g0..gk] * [w0..wl] -> [g0..gk, w1..wl]; requires gk == w0.
inline SurfacePath concat(const SurfacePath& g, const SurfacePath& w) {
    if (g.points.empty() || w.points.empty()) throw DomainError("concat of an empty path");
    if (!(g.points.back() == w.points.front()))
        throw DomainError("concat endpoint mismatch");
    SurfacePath out = g;
    out.points.insert(out.points.end(), w.points.begin() + 1, w.points.end());
    return out;
}

/// Concatenation with the largest doubled-back middle excised:
/// [g0..g{k-m}, w{m+1}..wl] for the largest m with g{k-i} == w{i}, i <= m.
inline SurfacePath compose(const SurfacePath& g, const SurfacePath& w) {
    if (g.points.empty() || w.points.empty()) throw DomainError("compose of an empty path");
    if (!(g.points.back() == w.points.front()))
        throw DomainError("compose endpoint mismatch");
    const int k = g.size() - 1, l = w.size() - 1;
    int m = 0;
    while (m + 1 <= std::min(k, l) && g.points[k - (m + 1)] == w.points[m + 1]) ++m;
    SurfacePath out;
    out.points.assign(g.points.begin(), g.points.begin() + (k - m) + 1);
    out.points.insert(out.points.end(), w.points.begin() + m + 1, w.points.end());
    return out;
}

/// The doubled path g * g^{-1}: out to the end and back.
inline SurfacePath doubled(const SurfacePath& g) { return concat(g, inverse(g)); }

// ------------------------------------------------------------- boundary walk

/// The cyclic boundary walk of the surface cut along a monotone tree.
/// Position 0 sits at the top leaf; the walk has 2(V-1) positions, one per
/// directed tree edge traversal.
struct TracingPath {
    Point3 direction;                  // normalized height direction
    int root = -1;
    std::vector<int> parent;           // tree parents toward the root
    std::vector<int> vertices;         // vertex at each position
    std::vector<int> in_spoke;         // arrival spoke index in the vertex star
    std::vector<int> out_spoke;        // departure spoke index
    std::vector<double> theta;         // left angle (wedge angle) per position
    std::vector<char> is_leaf;         // arrival ascending, departure descending
    std::vector<char> is_juncture;     // arrival descending, departure ascending
    std::vector<int> leaf_positions;   // in walk order; leaf_positions[0] == 0
    std::vector<int> juncture_positions;  // j_i between leaves i and i+1

    [[nodiscard]] int length() const { return static_cast<int>(vertices.size()); }
    [[nodiscard]] int leaf_count() const { return static_cast<int>(leaf_positions.size()); }

    /// Sectors covered by the wedge at a position, 1..degree many.
    [[nodiscard]] int wedge_span(const Polyhedron& P, int pos) const {
        const int d = P.stars[vertices[pos]].degree();
        const int s = (in_spoke[pos] - out_spoke[pos] + d) % d;
        return s == 0 ? d : s;
    }
};

inline TracingPath trace_boundary(const Polyhedron& P, const CutTree& T, Point3 u) {
    require_valid_tree(P, T, u);
    const Point3 un = normalized(u);
    const int V = P.vertex_count();

    TracingPath W;
    W.direction = un;
    W.root = T.root;
    W.parent = tree_parents(T, V);

    // Mark tree spokes per star.
    std::vector<std::vector<char>> is_tree(static_cast<std::size_t>(V));
    for (int v = 0; v < V; ++v)
        is_tree[static_cast<std::size_t>(v)].assign(P.stars[v].spokes.size(), 0);
    for (auto [a, b] : T.links) {
        const int sa = P.stars[a].find_spoke(b);
        const int sb = P.stars[b].find_spoke(a);
        if (sa < 0 || sb < 0) throw TreeError("tree link is not a star spoke");
        is_tree[static_cast<std::size_t>(a)][static_cast<std::size_t>(sa)] = 1;
        is_tree[static_cast<std::size_t>(b)][static_cast<std::size_t>(sb)] = 1;
    }

    int top = 0;
    for (int v = 1; v < V; ++v)
        if (dot(P.vertices[v], un) > dot(P.vertices[top], un)) top = v;
    {
        int deg = 0;
        for (char c : is_tree[static_cast<std::size_t>(top)]) deg += c;
        if (deg != 1) throw TreeError("top vertex is not a leaf of the tree");
    }

    const int n = 2 * (V - 1);
    int v = top;
    int t_in = -1;
    for (std::size_t s = 0; s < P.stars[top].spokes.size(); ++s)
        if (is_tree[static_cast<std::size_t>(top)][s]) t_in = static_cast<int>(s);

    for (int step = 0; step < n; ++step) {
        const VertexStar& st = P.stars[v];
        const int d = st.degree();
        int t_out = -1;
        for (int k = 1; k <= d; ++k) {
            const int t = (t_in - k % d + d) % d;
            if (is_tree[static_cast<std::size_t>(v)][static_cast<std::size_t>(t)]) {
                t_out = t;
                break;
            }
        }
        if (t_out < 0) throw InternalError("boundary walk found no departure spoke");
        const double th = (t_out == t_in)
                              ? st.total
                              : detail::mod_total(st.coord[static_cast<std::size_t>(t_in)] -
                                                      st.coord[static_cast<std::size_t>(t_out)],
                                                  st.total);
        W.vertices.push_back(v);
        W.in_spoke.push_back(t_in);
        W.out_spoke.push_back(t_out);
        W.theta.push_back(th);

        const int w = st.spokes[static_cast<std::size_t>(t_out)];
        const int back = P.stars[w].find_spoke(v);
        if (back < 0) throw InternalError("boundary walk lost the return spoke");
        v = w;
        t_in = back;
    }
    if (v != top) throw InternalError("boundary walk did not close up");

    // Markers from the vertical sense of the incoming and outgoing edges.
    for (int pos = 0; pos < n; ++pos) {
        const int prev = W.vertices[static_cast<std::size_t>((pos + n - 1) % n)];
        const int here = W.vertices[static_cast<std::size_t>(pos)];
        const int next = W.vertices[static_cast<std::size_t>((pos + 1) % n)];
        const bool asc_in = W.parent[static_cast<std::size_t>(here)] == prev;
        const bool asc_out = W.parent[static_cast<std::size_t>(next)] == here;
        W.is_leaf.push_back(asc_in && !asc_out);
        W.is_juncture.push_back(!asc_in && asc_out);
    }
    if (!W.is_leaf[0]) throw InternalError("walk start is not a leaf position");
    for (int pos = 0; pos < n; ++pos)
        if (W.is_leaf[static_cast<std::size_t>(pos)]) W.leaf_positions.push_back(pos);

    // Exactly one juncture between consecutive leaves, cyclically.
    const int k = W.leaf_count();
    for (int i = 0; i < k; ++i) {
        const int from = W.leaf_positions[static_cast<std::size_t>(i)];
        const int to = W.leaf_positions[static_cast<std::size_t>((i + 1) % k)];
        int found = -1;
        for (int pos = from + 1; pos != to; pos = (pos + 1) % n) {
            if (pos == from) break;
            if (W.is_juncture[static_cast<std::size_t>(pos % n)]) {
                if (found >= 0) throw InternalError("two junctures between consecutive leaves");
                found = pos % n;
            }
        }
        if (found < 0) throw InternalError("no juncture between consecutive leaves");
        W.juncture_positions.push_back(found);
    }
    return W;
}

/// Walk vertices from position `from` over `steps` edges (cyclic), as a path.
inline SurfacePath walk_segment(const TracingPath& W, int from, int steps) {
    if (steps < 0 || from < 0 || from >= W.length()) throw DomainError("bad walk segment");
    SurfacePath p;
    for (int s = 0; s <= steps; ++s)
        p.points.push_back(SurfacePoint::at_vertex(W.vertices[static_cast<std::size_t>((from + s) % W.length())]));
    return p;
}

/// Positive number of walk steps from position `from` forward to `to`.
inline int walk_distance(const TracingPath& W, int from, int to) {
    return (to - from + W.length()) % W.length();
}

// ------------------------------------------------------------- tree branches

/// The tree path from leaf i down to the root.
inline SurfacePath branch(const Polyhedron& P, const CutTree& T, const TracingPath& W, int i) {
    (void)P;
    (void)T;
    if (i < 0 || i >= W.leaf_count()) throw DomainError("branch index out of range");
    const int leaf = W.vertices[static_cast<std::size_t>(W.leaf_positions[static_cast<std::size_t>(i)])];
    SurfacePath p;
    for (int v : branch_to_root(W.parent, leaf)) p.points.push_back(SurfacePoint::at_vertex(v));
    return p;
}

/// The walk prefix from the top leaf to leaf i, concatenated with branch i.
inline SurfacePath descent_path(const Polyhedron& P, const CutTree& T, const TracingPath& W,
                                int i) {
    if (i < 0 || i >= W.leaf_count()) throw DomainError("descent path index out of range");
    const SurfacePath prefix =
        walk_segment(W, 0, W.leaf_positions[static_cast<std::size_t>(i)]);
    return concat(prefix, branch(P, T, W, i));
}

// -------------------------------------------------------------- dual branch

namespace detail {

inline double height_of(const Polyhedron& P, const SurfacePoint& sp, Point3 un) {
    return dot(position(P, sp), un);
}

/// Steepest strictly higher neighbor of v, ties by smallest index; -1 at top.
inline int steepest_ascent_neighbor(const Polyhedron& P, Point3 un, int v) {
    int best = -1;
    double best_slope = 0.0;
    for (int w : P.stars[v].spokes) {
        const double dh = dot(P.vertices[w] - P.vertices[v], un);
        if (dh <= 0.0) continue;
        const double slope = dh / distance(P.vertices[v], P.vertices[w]);
        if (best < 0 || slope > best_slope || (slope == best_slope && w < best)) {
            best = w;
            best_slope = slope;
        }
    }
    return best;
}

/// The walk position of vertex w whose wedge strictly contains spoke s.
inline int occurrence_of_spoke(const Polyhedron& P, const TracingPath& W, int w, int s) {
    const int d = P.stars[w].degree();
    int found = -1;
    for (int pos = 0; pos < W.length(); ++pos) {
        if (W.vertices[static_cast<std::size_t>(pos)] != w) continue;
        const int t_out = W.out_spoke[static_cast<std::size_t>(pos)];
        const int t_in = W.in_spoke[static_cast<std::size_t>(pos)];
        int span = (t_in - t_out + d) % d;
        if (span == 0) span = d;
        const int rel = (s - t_out + d) % d;
        if (rel > 0 && rel < span) {
            if (found >= 0) throw InternalError("spoke lies inside two wedges");
            found = pos;
        }
    }
    if (found < 0) throw InternalError("spoke lies inside no wedge");
    return found;
}

/// Face of the cut surface glued to the boundary edge between walk positions
/// q and q+1: the mesh face on the left of the forward walk direction.
inline int face_left_of_walk_edge(const Polyhedron& P, const TracingPath& W, int q) {
    const int a = W.vertices[static_cast<std::size_t>(q)];
    const int b = W.vertices[static_cast<std::size_t>((q + 1) % W.length())];
    const int e = P.edge_between(a, b);
    if (e < 0) throw InternalError("walk edge is not a mesh edge");
    return (P.edges[e].a == a) ? P.edges[e].face_ab : P.edges[e].face_ba;
}

/// Interior point of face f at fraction c of the way from the midpoint of
/// edge (a, b) toward the face centroid.
inline SurfacePoint face_point_off_edge_midpoint(const Polyhedron& P, int f, int a, int b,
                                                 double c) {
    const auto& cyc = P.faces[f];
    const std::size_t m = cyc.size();
    std::vector<double> wts(m, c / static_cast<double>(m));
    const int ia = P.corner_of(f, a), ib = P.corner_of(f, b);
    if (ia < 0 || ib < 0) throw InternalError("edge endpoints missing from face");
    wts[static_cast<std::size_t>(ia)] += (1.0 - c) * 0.5;
    wts[static_cast<std::size_t>(ib)] += (1.0 - c) * 0.5;
    return SurfacePoint::in_face(f, std::move(wts));
}

/// Point at fraction t of the way from surface point `from` to vertex v (or
/// from vertex v to `from` when from_vertex_first), staying on the carrier of
/// the segment: a mesh edge when `from` is a vertex, else `from`'s face.
inline SurfacePoint point_along(const Polyhedron& P, const SurfacePoint& from, int v, double t) {
    // Result = (1 - t) * from + t * v.
    switch (from.kind) {
        case SurfacePoint::Kind::vertex: {
            const int e = P.edge_between(from.index, v);
            if (e < 0) throw InternalError("segment between non-adjacent vertices");
            // Edge parameter runs a -> b.
            if (P.edges[e].a == from.index) return SurfacePoint::on_edge(e, t);
            return SurfacePoint::on_edge(e, 1.0 - t);
        }
        case SurfacePoint::Kind::face: {
            const int f = from.index;
            const int iv = P.corner_of(f, v);
            if (iv < 0) throw InternalError("vertex missing from the carrier face");
            std::vector<double> wts = from.w;
            for (double& x : wts) x *= (1.0 - t);
            wts[static_cast<std::size_t>(iv)] += t;
            return SurfacePoint::in_face(f, std::move(wts));
        }
        case SurfacePoint::Kind::edge:
            break;
    }
    throw InternalError("unsupported carrier for point_along");
}

struct DetourPlan {
    SurfacePoint entry;                // b: below the vertex, on the incoming edge
    std::vector<SurfacePoint> inner;   // spoke crossings and the switch point
    SurfacePoint exit;                 // a: above the vertex, on the outgoing edge
};

/// Builds the monotone corner detour around the occurrence of v at walk
/// position pos: entry point b below v, crossings of the wedge's descending
/// spokes, a switch point at v's height, crossings of the ascending spokes,
/// exit point a above v.
inline DetourPlan plan_vertex_detour(const Polyhedron& P, const TracingPath& W, Point3 un,
                                     int pos, const SurfacePoint& prev, const SurfacePoint& next) {
    const int v = W.vertices[static_cast<std::size_t>(pos)];
    const VertexStar& st = P.stars[v];
    const int d = st.degree();
    const double hv = dot(P.vertices[v], un);

    DetourPlan plan;
    plan.entry = point_along(P, prev, v, 2.0 / 3.0);
    plan.exit = point_along(P, next, v, 2.0 / 3.0);  // 1/3 of the way from v to next

    const double hb = height_of(P, plan.entry, un);
    const double ha = height_of(P, plan.exit, un);
    if (!(hb < hv && hv < ha)) throw InternalError("detour entry/exit do not bracket the vertex");

    const int t_out = W.out_spoke[static_cast<std::size_t>(pos)];
    int span = (W.in_spoke[static_cast<std::size_t>(pos)] - t_out + d) % d;
    if (span == 0) span = d;
    const double wedge_angle = W.theta[static_cast<std::size_t>(pos)];

    auto rel_of = [&](const SurfacePoint& sp) {
        const double c = star_coordinate(P, v, sp);
        return mod_total(c - st.coord[static_cast<std::size_t>(t_out)], st.total);
    };
    const double rel_b = rel_of(plan.entry);
    const double rel_a = rel_of(plan.exit);
    const double guard = P.tol.eps_ang;
    if (!(rel_b > guard && rel_b < wedge_angle - guard) ||
        !(rel_a > guard && rel_a < wedge_angle - guard))
        throw InternalError("detour endpoints fall outside the wedge");

    // Wedge spokes strictly between the two rays, in sweep order.
    struct Crossing {
        int spoke;
        double rel;
        double dh;  // height of the spoke end minus h(v)
    };
    std::vector<Crossing> crossings;
    const double lo = std::min(rel_b, rel_a), hi = std::max(rel_b, rel_a);
    for (int k = 1; k < span; ++k) {
        const int s = (t_out + k) % d;
        const double rel = mod_total(st.coord[static_cast<std::size_t>(s)] -
                                         st.coord[static_cast<std::size_t>(t_out)],
                                     st.total);
        if (rel <= lo || rel >= hi) continue;
        const int w = st.spokes[static_cast<std::size_t>(s)];
        crossings.push_back({s, rel, dot(P.vertices[w], un) - hv});
    }
    std::sort(crossings.begin(), crossings.end(),
              [&](const Crossing& x, const Crossing& y) { return x.rel < y.rel; });
    if (rel_a < rel_b) std::reverse(crossings.begin(), crossings.end());

    // Ascent directions at a convex corner form one contiguous arc, so the
    // sweep must cross descents first, then ascents.
    int m_desc = 0;
    for (std::size_t j = 0; j < crossings.size(); ++j) {
        if (crossings[j].dh == 0.0) throw InternalError("horizontal spoke inside a wedge");
        if (crossings[j].dh < 0.0) {
            if (static_cast<int>(j) != m_desc)
                throw InternalError("descending spoke after an ascending one in the sweep");
            ++m_desc;
        }
    }
    const int m_total = static_cast<int>(crossings.size());
    const int m_asc = m_total - m_desc;

    double c_gap = std::min(hv - hb, ha - hv);
    for (const Crossing& c : crossings) c_gap = std::min(c_gap, std::abs(c.dh));
    c_gap = 0.5 * c_gap / static_cast<double>(m_total + 2);
    if (!(c_gap > 0.0)) throw InternalError("degenerate height gaps in a detour");

    auto spoke_point_at_drop = [&](int s, double target_dh) {
        const int w = st.spokes[static_cast<std::size_t>(s)];
        const double dh_full = dot(P.vertices[w], un) - hv;
        const double t = target_dh / dh_full;  // same sign, |t| < 1/2 by construction
        if (!(t > 0.0 && t < 1.0)) throw InternalError("spoke crossing parameter out of range");
        const int e = P.edge_between(v, w);
        return (P.edges[e].a == v) ? SurfacePoint::on_edge(e, t)
                                   : SurfacePoint::on_edge(e, 1.0 - t);
    };

    for (int j = 0; j < m_desc; ++j)
        plan.inner.push_back(
            spoke_point_at_drop(crossings[static_cast<std::size_t>(j)].spoke,
                                -c_gap * static_cast<double>(m_desc - j + 1)));

    // Switch point at exactly h(v), inside the sector where the sweep flips
    // from descending to ascending.
    {
        int s_desc = -1, s_asc = -1;  // the sector's two spokes
        const bool ccw = rel_a > rel_b;
        if (m_total == 0 || (m_desc == 0 && m_asc > 0) || (m_desc > 0 && m_asc == 0) ||
            (m_desc > 0 && m_asc > 0)) {
            // Identify the mixed sector by its bounding spokes along the sweep.
            // Behind the flip lies the last descent (or the sector containing
            // b); ahead lies the first ascent (or the sector containing a).
            auto sector_bounds = [&](double rel_inside, int& lo_spoke, int& hi_spoke) {
                // Sector index whose angular interval contains rel_inside.
                double acc = 0.0;
                for (int k = 0; k < span; ++k) {
                    const int t = (t_out + k) % d;
                    const double next_acc = acc + st.sector_angle[static_cast<std::size_t>(t)];
                    if (rel_inside <= next_acc + P.tol.eps_ang || k == span - 1) {
                        lo_spoke = t;
                        hi_spoke = (t + 1) % d;
                        return;
                    }
                    acc = next_acc;
                }
            };
            int lo_s = -1, hi_s = -1;
            if (m_desc > 0 && m_asc > 0) {
                const Crossing& last_d = crossings[static_cast<std::size_t>(m_desc - 1)];
                const Crossing& first_a = crossings[static_cast<std::size_t>(m_desc)];
                lo_s = ccw ? last_d.spoke : first_a.spoke;
                hi_s = ccw ? first_a.spoke : last_d.spoke;
            } else if (m_desc > 0) {
                const Crossing& last_d = crossings[static_cast<std::size_t>(m_desc - 1)];
                // Sector between the last descent crossing and the exit ray.
                lo_s = ccw ? last_d.spoke : -1;
                hi_s = ccw ? -1 : last_d.spoke;
                int flo = -1, fhi = -1;
                sector_bounds(rel_a, flo, fhi);
                if (lo_s < 0) lo_s = flo;
                if (hi_s < 0) hi_s = fhi;
            } else if (m_asc > 0) {
                const Crossing& first_a = crossings[static_cast<std::size_t>(0)];
                lo_s = ccw ? -1 : first_a.spoke;
                hi_s = ccw ? first_a.spoke : -1;
                int flo = -1, fhi = -1;
                sector_bounds(rel_b, flo, fhi);
                if (lo_s < 0) lo_s = flo;
                if (hi_s < 0) hi_s = fhi;
            } else {
                sector_bounds(rel_b, lo_s, hi_s);
            }
            const double h_lo = dot(P.vertices[st.spokes[static_cast<std::size_t>(lo_s)]], un) - hv;
            const double h_hi = dot(P.vertices[st.spokes[static_cast<std::size_t>(hi_s)]], un) - hv;
            s_desc = h_lo < 0.0 ? lo_s : hi_s;
            s_asc = h_lo < 0.0 ? hi_s : lo_s;
            if (!(dot(P.vertices[st.spokes[static_cast<std::size_t>(s_desc)]], un) < hv &&
                  dot(P.vertices[st.spokes[static_cast<std::size_t>(s_asc)]], un) > hv))
                throw InternalError("switch sector is not mixed");
        }
        const int f = st.sector_face[static_cast<std::size_t>(std::min(s_desc, s_asc) ==
                                                                      (std::max(s_desc, s_asc) + 1) % d
                                                                  ? std::max(s_desc, s_asc)
                                                                  : std::min(s_desc, s_asc))];
        const int vd = st.spokes[static_cast<std::size_t>(s_desc)];
        const int va = st.spokes[static_cast<std::size_t>(s_asc)];
        const double bd = hv - dot(P.vertices[vd], un);
        const double ba = dot(P.vertices[va], un) - hv;
        double cd = ba, ca = bd;
        const double kappa = 0.25 / std::max(cd, ca);
        cd *= kappa;
        ca *= kappa;
        const auto& cyc = P.faces[f];
        std::vector<double> wts(cyc.size(), 0.0);
        const int iv = P.corner_of(f, v), id = P.corner_of(f, vd), ia = P.corner_of(f, va);
        if (iv < 0 || id < 0 || ia < 0) throw InternalError("switch sector face is missing corners");
        wts[static_cast<std::size_t>(iv)] = 1.0 - cd - ca;
        wts[static_cast<std::size_t>(id)] = cd;
        wts[static_cast<std::size_t>(ia)] = ca;
        plan.inner.push_back(SurfacePoint::in_face(f, std::move(wts)));
    }

    for (int j = 0; j < m_asc; ++j)
        plan.inner.push_back(
            spoke_point_at_drop(crossings[static_cast<std::size_t>(m_desc + j)].spoke,
                                c_gap * static_cast<double>(j + 1)));
    return plan;
}

}  // namespace detail

/// A strictly ascending path from leaf i to the top leaf whose interior is
/// disjoint from the tree: interior points lie on non-tree edges or inside
/// faces, never at vertices.
inline SurfacePath dual_branch(const Polyhedron& P, const CutTree& T, const TracingPath& W,
                               int i) {
    if (i < 0 || i >= W.leaf_count()) throw DomainError("dual branch index out of range");
    const Point3 un = W.direction;
    const int n = W.length();
    const int top = W.vertices[0];

    SurfacePath out;
    if (i == 0) {
        out.points.push_back(SurfacePoint::at_vertex(top));
        return out;
    }

    // Part I: climb inside the cut surface from the leaf occurrence to the
    // top, alternating non-tree ascent edges with ascending boundary runs.
    std::vector<int> nodes{W.leaf_positions[static_cast<std::size_t>(i)]};
    std::vector<int> boundary_step;  // per edge: the lower walk position, or -1 for ascents
    int guard = 0;
    while (W.vertices[static_cast<std::size_t>(nodes.back())] != top) {
        if (++guard > 4 * n + 2 * P.vertex_count())
            throw InternalError("dual branch climb does not terminate");
        const int pos = nodes.back();
        const int v = W.vertices[static_cast<std::size_t>(pos)];
        if (W.is_leaf[static_cast<std::size_t>(pos)]) {
            const int w = detail::steepest_ascent_neighbor(P, un, v);
            if (w < 0) throw InternalError("non-top leaf has no ascending neighbor");
            const int s = P.stars[w].find_spoke(v);
            const int next_pos = detail::occurrence_of_spoke(P, W, w, s);
            nodes.push_back(next_pos);
            boundary_step.push_back(-1);
        } else {
            const int fwd = (pos + 1) % n;
            const int bwd = (pos + n - 1) % n;
            const bool asc_fwd =
                W.parent[static_cast<std::size_t>(W.vertices[static_cast<std::size_t>(fwd)])] == v;
            const bool asc_bwd =
                W.parent[static_cast<std::size_t>(W.vertices[static_cast<std::size_t>(bwd)])] == v;
            if (asc_fwd == asc_bwd)
                throw InternalError("boundary occurrence without a unique ascending run");
            nodes.push_back(asc_fwd ? fwd : bwd);
            boundary_step.push_back(asc_fwd ? pos : bwd);
        }
    }

    // Part II, step 1: boundary edges detour through the interior of the
    // face glued to them, at a height between the edge endpoint heights.
    struct Atom {
        SurfacePoint point;
        int pos = -1;  // walk position for vertex atoms needing a detour
    };
    std::vector<Atom> atoms;
    atoms.push_back({SurfacePoint::at_vertex(
                         W.vertices[static_cast<std::size_t>(nodes[0])]),
                     -1});
    for (std::size_t j = 1; j < nodes.size(); ++j) {
        const int lo_v = W.vertices[static_cast<std::size_t>(nodes[j - 1]]);
        const int hi_v = W.vertices[static_cast<std::size_t>(nodes[j])];
        if (boundary_step[j - 1] >= 0) {
            const int q = boundary_step[j - 1];
            const int f = detail::face_left_of_walk_edge(P, W, q);
            const double h_lo = dot(P.vertices[lo_v], un);
            const double h_hi = dot(P.vertices[hi_v], un);
            double c = 0.25;
            SurfacePoint pe;
            bool placed = false;
            for (int tries = 0; tries < 20 && !placed; ++tries, c *= 0.5) {
                pe = detail::face_point_off_edge_midpoint(P, f, lo_v, hi_v, c);
                const double hp = detail::height_of(P, pe, un);
                placed = h_lo < hp && hp < h_hi;
            }
            if (!placed) throw InternalError("face detour point violates monotonicity");
            atoms.push_back({pe, -1});
        }
        atoms.push_back({SurfacePoint::at_vertex(hi_v), nodes[j]});
    }
    atoms.back().pos = -1;  // the top endpoint stays a vertex

    // Part II, step 2: detour around every interior vertex atom.
    out.points.push_back(atoms.front().point);
    for (std::size_t j = 1; j + 1 < atoms.size(); ++j) {
        if (atoms[j].point.kind != SurfacePoint::Kind::vertex) {
            out.points.push_back(atoms[j].point);
            continue;
        }
        const auto plan = detail::plan_vertex_detour(P, W, un, atoms[j].pos,
                                                     atoms[j - 1].point, atoms[j + 1].point);
        out.points.push_back(plan.entry);
        for (const auto& q : plan.inner) out.points.push_back(q);
        out.points.push_back(plan.exit);
    }
    out.points.push_back(atoms.back().point);
    return out;
}

/// The closed loop: walk prefix to leaf i, then the dual branch back to the
/// top.  For i == leaf_count the full boundary walk.
inline SurfacePath subdisk_loop(const Polyhedron& P, const CutTree& T, const TracingPath& W,
                                int i) {
    if (i < 1 || i > W.leaf_count()) throw DomainError("loop index out of range");
    if (i == W.leaf_count()) return walk_segment(W, 0, W.length());
    const SurfacePath prefix = walk_segment(W, 0, W.leaf_positions[static_cast<std::size_t>(i)]);
    return concat(prefix, dual_branch(P, T, W, i));
}

// ------------------------------------------------------------ path utilities

/// Heights of all path points along the trace direction.
inline std::vector<double> path_heights(const Polyhedron& P, const SurfacePath& p, Point3 u) {
    const Point3 un = normalized(u);
    std::vector<double> h;
    h.reserve(p.points.size());
    for (const auto& sp : p.points) h.push_back(dot(position(P, sp), un));
    return h;
}

/// True when every interior point avoids the tree: no vertex points, and
/// edge points only on non-tree edges.
inline bool interior_disjoint_from_tree(const Polyhedron& P, const CutTree& T,
                                        const SurfacePath& p) {
    std::vector<char> tree_edge(P.edges.size(), 0);
    for (auto [a, b] : T.links) {
        const int e = P.edge_between(a, b);
        if (e >= 0) tree_edge[static_cast<std::size_t>(e)] = 1;
    }
    for (int j = 1; j + 1 < p.size(); ++j) {
        const SurfacePoint& sp = p.points[static_cast<std::size_t>(j)];
        if (sp.kind == SurfacePoint::Kind::vertex) return false;
        if (sp.kind == SurfacePoint::Kind::edge && tree_edge[static_cast<std::size_t>(sp.index)])
            return false;
    }
    return true;
}

/// Every consecutive pair of path points must lie in a common face.
inline bool segments_face_supported(const Polyhedron& P, const SurfacePath& p) {
    for (int j = 0; j + 1 < p.size(); ++j)
        if (detail::segment_face(P, p.points[static_cast<std::size_t>(j)],
                                 p.points[static_cast<std::size_t>(j + 1)]) < 0)
            return false;
    return true;
}

}  // namespace unfold
