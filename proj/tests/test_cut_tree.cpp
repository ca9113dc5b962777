#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "unfold/cut_tree.hpp"
#include "unfold/meshes.hpp"

using namespace unfold;

namespace {

// Number of spanning trees by the matrix-tree theorem: determinant of the
// Laplacian with the first row and column deleted.  Independent of the
// enumeration code path.
double matrix_tree_count(int V, const std::vector<std::pair<int, int>>& edges) {
    const int n = V - 1;
    std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
    for (auto [a, b] : edges) {
        if (a != 0) L[a - 1][a - 1] += 1.0;
        if (b != 0) L[b - 1][b - 1] += 1.0;
        if (a != 0 && b != 0) {
            L[a - 1][b - 1] -= 1.0;
            L[b - 1][a - 1] -= 1.0;
        }
    }
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int pivot = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(L[r][c]) > std::abs(L[pivot][c])) pivot = r;
        if (L[pivot][c] == 0.0) return 0.0;
        if (pivot != c) {
            std::swap(L[pivot], L[c]);
            det = -det;
        }
        det *= L[c][c];
        for (int r = c + 1; r < n; ++r) {
            const double m = L[r][c] / L[c][c];
            for (int k = c; k < n; ++k) L[r][k] -= m * L[c][k];
        }
    }
    return std::round(std::abs(det));
}

std::vector<std::pair<int, int>> mesh_edge_pairs(const Polyhedron& P) {
    std::vector<std::pair<int, int>> edges;
    for (const MeshEdge& e : P.edges) edges.push_back({e.a, e.b});
    return edges;
}

}  // namespace

TEST_CASE("downhill tree on a fixed tetrahedron") {
    const Polyhedron P = make_tetrahedron();
    const Point3 u{0.2, 0.3, 0.9};
    // Heights (unnormalized): v0 = 1.4, v1 = -1.0, v2 = -0.8, v3 = 0.4.
    REQUIRE(check_general_position(P, u).is_general);

    const CutTree T = build_downhill_tree(P, u);
    CHECK(T.root == 1);
    REQUIRE(T.links.size() == 3);
    // Walks: top 0 descends straight to the bottom 1; then 3 and 2 attach.
    CHECK(T.links[0] == std::pair<int, int>(0, 1));
    CHECK(T.links[1] == std::pair<int, int>(3, 1));
    CHECK(T.links[2] == std::pair<int, int>(2, 1));

    const auto rep = validate_cut_tree(P, T, u);
    CHECK(rep.is_valid());
    CHECK(rep.violations.empty());
    CHECK(tree_leaves(T, 4) == std::vector<int>{0, 2, 3});
}

TEST_CASE("steepest edge tree links every vertex to its steepest descent") {
    const Polyhedron P = make_tetrahedron();
    const Point3 u{0.2, 0.3, 0.9};
    const CutTree T = build_steepest_edge_tree(P, u);
    CHECK(T.root == 1);
    REQUIRE(T.links.size() == 3);
    // All three vertices see the bottom as the steepest neighbor here.
    for (auto [a, b] : T.links) CHECK(b == 1);
    CHECK(validate_cut_tree(P, T, u).is_valid());
}

TEST_CASE("trees on a generically rotated cube") {
    std::mt19937_64 rng(424242);
    const Point3 u{0, 0, 1};
    const Polyhedron P = ensure_general_position(make_cube(), u, rng);
    for (const CutTree& T : {build_downhill_tree(P, u), build_steepest_edge_tree(P, u)}) {
        CHECK(T.links.size() == 7);
        const auto rep = validate_cut_tree(P, T, u);
        CHECK(rep.is_valid());
        // Every branch strictly decreases toward the root.
        const auto parent = tree_parents(T, 8);
        for (int v = 0; v < 8; ++v) {
            const auto path = branch_to_root(parent, v);
            for (size_t i = 0; i + 1 < path.size(); ++i)
                CHECK(P.vertices[path[i]].z > P.vertices[path[i + 1]].z);
            CHECK(path.back() == T.root);
        }
    }
}

TEST_CASE("degenerate direction raises GeneralPositionError") {
    const Polyhedron P = make_cube();
    CHECK_THROWS_AS(build_downhill_tree(P, {0, 0, 1}), GeneralPositionError);
    CHECK_THROWS_AS(build_steepest_edge_tree(P, {0, 0, 1}), GeneralPositionError);
}

TEST_CASE("validation pinpoints specific defects") {
    const Polyhedron P = make_tetrahedron();
    const Point3 u{0.2, 0.3, 0.9};
    const CutTree good = build_downhill_tree(P, u);

    SECTION("uphill parent link") {
        CutTree T = good;
        T.links[2] = {2, 0};  // vertex 0 is above vertex 2
        const auto rep = validate_cut_tree(P, T, u);
        CHECK(rep.spanning);
        CHECK(rep.acyclic);
        CHECK(rep.adjacent);
        CHECK_FALSE(rep.monotone);
        REQUIRE_FALSE(rep.violations.empty());
        CHECK(rep.violations[0].find("uphill") != std::string::npos);
    }
    SECTION("non-edge link on a cube") {
        std::mt19937_64 rng(7);
        const Polyhedron C = ensure_general_position(make_cube(), u, rng);
        CutTree T = build_downhill_tree(C, u);
        // Replace one link with a space diagonal of the cube.
        const auto far_pair = [&] {
            for (int a = 0; a < 8; ++a)
                for (int b = a + 1; b < 8; ++b)
                    if (C.edge_between(a, b) < 0 &&
                        std::abs(distance(C.vertices[a], C.vertices[b]) - 2 * std::sqrt(3.0)) <
                            1e-9)
                        return std::pair<int, int>(a, b);
            return std::pair<int, int>(-1, -1);
        }();
        REQUIRE(far_pair.first >= 0);
        T.links[0] = far_pair;
        const auto rep = validate_cut_tree(C, T, u);
        CHECK_FALSE(rep.adjacent);
        bool found = false;
        for (const auto& v : rep.violations) found = found || v.find("not a mesh edge") != std::string::npos;
        CHECK(found);
    }
    SECTION("missing link breaks spanning") {
        CutTree T = good;
        T.links.pop_back();
        const auto rep = validate_cut_tree(P, T, u);
        CHECK_FALSE(rep.spanning);
        CHECK_FALSE(rep.is_valid());
    }
    SECTION("duplicate link closes a cycle") {
        CutTree T = good;
        T.links.push_back(T.links[0]);
        const auto rep = validate_cut_tree(P, T, u);
        CHECK_FALSE(rep.acyclic);
    }
    SECTION("out-of-range link") {
        CutTree T = good;
        T.links[0] = {0, 11};
        const auto rep = validate_cut_tree(P, T, u);
        CHECK_FALSE(rep.is_valid());
    }
}

TEST_CASE("spanning tree enumeration matches closed-form counts") {
    SECTION("triangle graph") {
        const auto res = enumerate_spanning_trees_graph(3, {{0, 1}, {1, 2}, {0, 2}}, 0, 100);
        CHECK_FALSE(res.truncated);
        CHECK(res.trees.size() == 3);
    }
    SECTION("complete graph on four vertices") {
        const Polyhedron P = make_tetrahedron();
        const auto res = enumerate_spanning_trees(P, 100);
        CHECK_FALSE(res.truncated);
        CHECK(res.trees.size() == 16);  // Cayley: 4^2
        // No duplicates: sorted link lists must all differ.
        std::vector<std::vector<std::pair<int, int>>> canon;
        for (const CutTree& T : res.trees) {
            auto links = T.links;
            for (auto& [a, b] : links)
                if (a > b) std::swap(a, b);
            std::sort(links.begin(), links.end());
            canon.push_back(links);
        }
        std::sort(canon.begin(), canon.end());
        CHECK(std::adjacent_find(canon.begin(), canon.end()) == canon.end());
        // Every enumerated tree is structurally sound on the mesh.
        for (const CutTree& T : res.trees) {
            const auto rep = validate_cut_tree(P, T, {0.2, 0.3, 0.9});
            CHECK(rep.spanning);
            CHECK(rep.acyclic);
            CHECK(rep.adjacent);
        }
    }
    SECTION("cube graph against the matrix-tree oracle") {
        const Polyhedron P = make_cube();
        const auto edges = mesh_edge_pairs(P);
        CHECK(matrix_tree_count(8, edges) == 384.0);
        const auto res = enumerate_spanning_trees(P, 1000);
        CHECK_FALSE(res.truncated);
        CHECK(res.trees.size() == 384);
    }
    SECTION("truncated tetrahedron graph against the matrix-tree oracle") {
        const Polyhedron P = make_truncated_tetrahedron();
        const auto edges = mesh_edge_pairs(P);
        const double expected = matrix_tree_count(12, edges);
        const auto res = enumerate_spanning_trees(P, 100000);
        CHECK_FALSE(res.truncated);
        CHECK(static_cast<double>(res.trees.size()) == expected);
    }
    SECTION("limit truncates the stream") {
        const Polyhedron P = make_cube();
        const auto res = enumerate_spanning_trees(P, 10);
        CHECK(res.truncated);
        CHECK(res.trees.size() == 10);
        const auto all = enumerate_spanning_trees(P, 384);
        CHECK_FALSE(all.truncated);
        const auto one_less = enumerate_spanning_trees(P, 383);
        CHECK(one_less.truncated);
        CHECK(one_less.trees.size() == 383);
    }
}

TEST_CASE("monotone tree count equals the product of descent choices") {
    // For edge trees, monotone == every non-root vertex picks a strictly
    // lower neighbor as parent, and any such assignment is acyclic.  So the
    // count is the product over non-root vertices of their lower-degree.
    const Polyhedron P = make_tetrahedron();
    const Point3 u{0.2, 0.3, 0.9};
    const Point3 un = normalized(u);

    long expected = 1;
    for (int v = 0; v < 4; ++v) {
        if (v == 1) continue;  // bottom
        long below = 0;
        for (int w : P.stars[v].spokes)
            if (dot(P.vertices[w], un) < dot(P.vertices[v], un)) ++below;
        expected *= below;
    }
    CHECK(expected == 6);

    long monotone = 0;
    for (const CutTree& T : enumerate_spanning_trees(P, 1000, u).trees)
        if (validate_cut_tree(P, T, u).is_valid()) ++monotone;
    CHECK(monotone == expected);
}

TEST_CASE("tree serialization round-trips") {
    const Polyhedron P = make_tetrahedron();
    const CutTree T = build_downhill_tree(P, {0.2, 0.3, 0.9});
    std::stringstream ss;
    write_tree(ss, T);
    const CutTree back = read_tree(ss);
    CHECK(back == T);

    std::istringstream bad1("notroot 3\n0 1\n");
    CHECK_THROWS_AS(read_tree(bad1), FormatError);
    std::istringstream bad2("root 1\n0 1\n2\n");
    CHECK_THROWS_AS(read_tree(bad2), FormatError);
}
