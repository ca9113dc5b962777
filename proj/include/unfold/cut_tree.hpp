#pragma once
// Monotone spanning edge trees: downhill-walk and steepest-edge construction,
// validation, exhaustive enumeration of spanning trees, and a line-based
// serialization.
//
// A tree is monotone for a direction u when the height along u strictly
// decreases on every branch toward the root; the root is then the unique
// bottom vertex.  Both constructors chain strict descents, so their output is
// monotone whenever the mesh is in general position for u.

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "unfold/errors.hpp"
#include "unfold/polyhedron.hpp"

namespace unfold {

/// Spanning edge tree, stored as undirected vertex pairs so that invalid
/// candidates (non-edges, cycles) can be represented and then diagnosed.
struct CutTree {
    int root = -1;
    std::vector<std::pair<int, int>> links;

    friend bool operator==(const CutTree& a, const CutTree& b) {
        return a.root == b.root && a.links == b.links;
    }
};

struct CutTreeReport {
    bool spanning = false;
    bool acyclic = false;
    bool adjacent = false;
    bool monotone = false;
    std::vector<std::string> violations;

    [[nodiscard]] bool is_valid() const { return spanning && acyclic && adjacent && monotone; }
};

namespace detail {

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int a) {
        while (p[a] != a) a = p[a] = p[p[a]];
        return a;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[a] = b;
        return true;
    }
};

inline std::vector<std::vector<int>> link_adjacency(int V,
                                                    const std::vector<std::pair<int, int>>& links) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(V));
    for (auto [a, b] : links) {
        adj[static_cast<std::size_t>(a)].push_back(b);
        adj[static_cast<std::size_t>(b)].push_back(a);
    }
    return adj;
}

/// The strictly lower neighbor of v with the steepest descent slope, ties by
/// smallest index; -1 when no neighbor lies below (v is the bottom vertex).
inline int steepest_descent_neighbor(const Polyhedron& P, Point3 un, int v) {
    int best = -1;
    double best_slope = 0.0;
    for (int w : P.stars[v].spokes) {
        const double dh = dot(P.vertices[v] - P.vertices[w], un);
        if (dh <= 0.0) continue;
        const double slope = dh / distance(P.vertices[v], P.vertices[w]);
        if (best < 0 || slope > best_slope || (slope == best_slope && w < best)) {
            best = w;
            best_slope = slope;
        }
    }
    return best;
}

inline void require_general(const Polyhedron& P, Point3 u) {
    const auto rep = check_general_position(P, u);
    if (rep.is_general) return;
    std::string msg = "mesh is not in general position for this direction:";
    for (const auto& v : rep.violations) msg += " [" + v + "]";
    throw GeneralPositionError(msg);
}

}  // namespace detail

/// Tree parents oriented toward the root.  parent[root] = -1.  Throws
/// TreeError when the links do not form a spanning tree on V vertices.
inline std::vector<int> tree_parents(const CutTree& T, int V) {
    if (T.root < 0 || T.root >= V) throw TreeError("tree root out of range");
    for (auto [a, b] : T.links)
        if (a < 0 || a >= V || b < 0 || b >= V || a == b)
            throw TreeError("tree link out of range");
    if (static_cast<int>(T.links.size()) != V - 1)
        throw TreeError("tree has " + std::to_string(T.links.size()) + " links, expected " +
                        std::to_string(V - 1));
    const auto adj = detail::link_adjacency(V, T.links);
    std::vector<int> parent(static_cast<std::size_t>(V), -2);
    std::vector<int> stack{T.root};
    parent[static_cast<std::size_t>(T.root)] = -1;
    int seen = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[static_cast<std::size_t>(v)]) {
            if (parent[static_cast<std::size_t>(w)] != -2) continue;
            parent[static_cast<std::size_t>(w)] = v;
            ++seen;
            stack.push_back(w);
        }
    }
    if (seen != V) throw TreeError("tree does not span the mesh");
    return parent;
}

/// Vertices of tree-degree one, the root excluded, in index order.
inline std::vector<int> tree_leaves(const CutTree& T, int V) {
    const auto adj = detail::link_adjacency(V, T.links);
    std::vector<int> leaves;
    for (int v = 0; v < V; ++v)
        if (v != T.root && adj[static_cast<std::size_t>(v)].size() == 1) leaves.push_back(v);
    return leaves;
}

/// Vertex path from v to the root along tree parents, both ends included.
inline std::vector<int> branch_to_root(const std::vector<int>& parent, int v) {
    std::vector<int> path;
    for (int w = v; w != -1; w = parent[static_cast<std::size_t>(w)]) {
        path.push_back(w);
        if (path.size() > parent.size()) throw TreeError("parent chain does not reach the root");
    }
    return path;
}

// -------------------------------------------------------------- construction

/// Union-of-walks construction: the first walk descends from the top vertex
/// to the bottom; each later walk starts at the highest vertex not yet
/// covered and descends until it meets a covered vertex.  Each descent step
/// picks the steepest strictly lower neighbor, ties by smallest index.
inline CutTree build_downhill_tree(const Polyhedron& P, Point3 u) {
    detail::require_general(P, u);
    const Point3 un = normalized(u);
    const int V = P.vertex_count();
    std::vector<double> h(static_cast<std::size_t>(V));
    for (int v = 0; v < V; ++v) h[static_cast<std::size_t>(v)] = dot(P.vertices[v], un);

    const int top = static_cast<int>(std::max_element(h.begin(), h.end()) - h.begin());
    const int bottom = static_cast<int>(std::min_element(h.begin(), h.end()) - h.begin());

    CutTree T;
    T.root = bottom;
    std::vector<char> covered(static_cast<std::size_t>(V), 0);
    auto walk_down = [&](int start) {
        int v = start;
        covered[static_cast<std::size_t>(v)] = 1;
        while (true) {
            const int w = detail::steepest_descent_neighbor(P, un, v);
            if (w < 0) break;  // only the bottom vertex has no descent
            T.links.push_back({v, w});
            if (covered[static_cast<std::size_t>(w)]) break;
            covered[static_cast<std::size_t>(w)] = 1;
            v = w;
        }
    };
    walk_down(top);

    std::vector<int> order(static_cast<std::size_t>(V));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return h[static_cast<std::size_t>(a)] > h[static_cast<std::size_t>(b)];
    });
    for (int v : order)
        if (!covered[static_cast<std::size_t>(v)]) walk_down(v);

    if (static_cast<int>(T.links.size()) != V - 1)
        throw InternalError("downhill walks did not produce a spanning tree");
    return T;
}

/// Every non-bottom vertex links to its steepest strictly lower neighbor.
inline CutTree build_steepest_edge_tree(const Polyhedron& P, Point3 u) {
    detail::require_general(P, u);
    const Point3 un = normalized(u);
    const int V = P.vertex_count();
    int bottom = 0;
    for (int v = 1; v < V; ++v)
        if (dot(P.vertices[v], un) < dot(P.vertices[bottom], un)) bottom = v;

    CutTree T;
    T.root = bottom;
    for (int v = 0; v < V; ++v) {
        if (v == bottom) continue;
        const int w = detail::steepest_descent_neighbor(P, un, v);
        if (w < 0)
            throw InternalError("vertex " + std::to_string(v) +
                                " has no descending neighbor but is not the bottom");
        T.links.push_back({v, w});
    }
    return T;
}

// ---------------------------------------------------------------- validation

/// Diagnoses a candidate tree: spanning, acyclic, all links mesh edges, and
/// strict branch monotonicity along u.  Reports; never throws.
inline CutTreeReport validate_cut_tree(const Polyhedron& P, const CutTree& T, Point3 u) {
    const Point3 un = normalized(u);
    const int V = P.vertex_count();
    CutTreeReport rep;

    bool ranges_ok = true;
    if (T.root < 0 || T.root >= V) {
        rep.violations.push_back("root out of range");
        ranges_ok = false;
    }
    for (auto [a, b] : T.links)
        if (a < 0 || a >= V || b < 0 || b >= V || a == b) {
            rep.violations.push_back("link (" + std::to_string(a) + ", " + std::to_string(b) +
                                     ") out of range");
            ranges_ok = false;
        }
    if (!ranges_ok) return rep;

    rep.adjacent = true;
    for (auto [a, b] : T.links)
        if (P.edge_between(a, b) < 0) {
            rep.adjacent = false;
            rep.violations.push_back("link (" + std::to_string(a) + ", " + std::to_string(b) +
                                     ") is not a mesh edge");
        }

    detail::UnionFind uf(V);
    rep.acyclic = true;
    for (auto [a, b] : T.links)
        if (!uf.unite(a, b)) {
            rep.acyclic = false;
            rep.violations.push_back("link (" + std::to_string(a) + ", " + std::to_string(b) +
                                     ") closes a cycle");
        }
    rep.spanning = true;
    for (int v = 0; v < V; ++v)
        if (uf.find(v) != uf.find(T.root)) {
            rep.spanning = false;
            rep.violations.push_back("vertex " + std::to_string(v) +
                                     " is not connected to the root");
        }
    if (static_cast<int>(T.links.size()) != V - 1)
        rep.violations.push_back("tree has " + std::to_string(T.links.size()) +
                                 " links, expected " + std::to_string(V - 1));

    if (rep.spanning && rep.acyclic) {
        rep.monotone = true;
        const auto parent = tree_parents(T, V);
        for (int v = 0; v < V; ++v) {
            const int p = parent[static_cast<std::size_t>(v)];
            if (p < 0) continue;
            if (dot(P.vertices[p], un) >= dot(P.vertices[v], un)) {
                rep.monotone = false;
                rep.violations.push_back("uphill parent link at vertex " + std::to_string(v));
            }
        }
        for (int v = 0; v < V; ++v)
            if (v != T.root && dot(P.vertices[v], un) <= dot(P.vertices[T.root], un)) {
                rep.monotone = false;
                rep.violations.push_back("vertex " + std::to_string(v) +
                                         " lies at or below the root");
            }
    } else {
        rep.violations.push_back("monotonicity not evaluated on a broken tree");
    }
    return rep;
}

/// Throws TreeError with the first violations when the tree is not a valid
/// monotone cut tree for u.
inline void require_valid_tree(const Polyhedron& P, const CutTree& T, Point3 u) {
    const auto rep = validate_cut_tree(P, T, u);
    if (rep.is_valid()) return;
    std::string msg = "invalid cut tree:";
    for (const auto& v : rep.violations) msg += " [" + v + "]";
    throw TreeError(msg);
}

// --------------------------------------------------------------- enumeration

struct TreeEnumeration {
    std::vector<CutTree> trees;
    bool truncated = false;
};

namespace detail {

inline void enumerate_rec(int V, const std::vector<std::pair<int, int>>& edges, int root,
                          std::size_t i, int chosen, UnionFind uf, std::vector<std::size_t>& picks,
                          TreeEnumeration& out, std::size_t limit) {
    if (out.truncated) return;
    if (chosen == V - 1) {
        if (out.trees.size() >= limit) {
            out.truncated = true;
            return;
        }
        CutTree T;
        T.root = root;
        for (std::size_t k : picks) T.links.push_back(edges[k]);
        out.trees.push_back(std::move(T));
        return;
    }
    if (i >= edges.size()) return;

    // Prune: the remaining edges must still be able to connect everything.
    {
        UnionFind probe = uf;
        int comps = V - chosen;
        for (std::size_t j = i; j < edges.size() && comps > 1; ++j)
            if (probe.unite(edges[j].first, edges[j].second)) --comps;
        if (comps > 1) return;
    }

    if (UnionFind next = uf; next.unite(edges[i].first, edges[i].second)) {
        picks.push_back(i);
        enumerate_rec(V, edges, root, i + 1, chosen + 1, std::move(next), picks, out, limit);
        picks.pop_back();
    }
    enumerate_rec(V, edges, root, i + 1, chosen, std::move(uf), picks, out, limit);
}

}  // namespace detail

/// All spanning trees of an abstract graph, in lexicographic order of chosen
/// edge indices; stops at `limit` trees and flags truncation.
inline TreeEnumeration enumerate_spanning_trees_graph(
    int V, const std::vector<std::pair<int, int>>& edges, int root, std::size_t limit) {
    if (V <= 0 || root < 0 || root >= V) throw DomainError("bad enumeration arguments");
    TreeEnumeration out;
    std::vector<std::size_t> picks;
    detail::enumerate_rec(V, edges, root, 0, 0, detail::UnionFind(V), picks, out, limit);
    return out;
}

/// All spanning trees of the mesh edge graph, rooted at the lowest vertex
/// along u (ties by smallest index).
inline TreeEnumeration enumerate_spanning_trees(const Polyhedron& P, std::size_t limit,
                                                Point3 u = {0, 0, 1}) {
    const Point3 un = normalized(u);
    int root = 0;
    for (int v = 1; v < P.vertex_count(); ++v)
        if (dot(P.vertices[v], un) < dot(P.vertices[root], un)) root = v;
    std::vector<std::pair<int, int>> edges;
    edges.reserve(P.edges.size());
    for (const MeshEdge& e : P.edges) edges.push_back({e.a, e.b});
    return enumerate_spanning_trees_graph(P.vertex_count(), edges, root, limit);
}

// ------------------------------------------------------------- serialization

inline void write_tree(std::ostream& out, const CutTree& T) {
    out << "root " << T.root << '\n';
    for (auto [a, b] : T.links) out << a << ' ' << b << '\n';
}

inline CutTree read_tree(std::istream& in) {
    CutTree T;
    std::string kw;
    if (!(in >> kw) || kw != "root" || !(in >> T.root))
        throw FormatError("tree: expected a 'root <index>' record");
    int a = 0, b = 0;
    while (in >> a) {
        if (!(in >> b)) throw FormatError("tree: link line with a single index");
        T.links.push_back({a, b});
    }
    return T;
}

}  // namespace unfold
