#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <sstream>

#include "unfold/mesh_io.hpp"
#include "unfold/meshes.hpp"
#include "unfold/polyhedron.hpp"

using namespace unfold;

namespace {

// Unit cube with vertex 0 at the origin and explicitly outward face cycles,
// so star layouts are reproducible: at vertex 0 the fan starts in the bottom
// face and runs spokes +y, +x, +z at coordinates 0, pi/2, pi.
Polyhedron unit_cube() {
    std::vector<Point3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
                             {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
    std::vector<std::vector<int>> f = {{0, 2, 3, 1}, {4, 5, 7, 6}, {0, 1, 5, 4},
                                       {2, 6, 7, 3}, {0, 4, 6, 2}, {1, 3, 7, 5}};
    return build_polyhedron(std::move(v), std::move(f));
}

}  // namespace

TEST_CASE("canonical solids have the expected counts and cone angles") {
    const Polyhedron tet = make_tetrahedron();
    REQUIRE(tet.vertex_count() == 4);
    REQUIRE(tet.edge_count() == 6);
    REQUIRE(tet.face_count() == 4);
    for (int v = 0; v < 4; ++v) CHECK(total_angle(tet, v) == Catch::Approx(kPi).epsilon(1e-12));

    const Polyhedron cube = make_cube();
    REQUIRE(cube.vertex_count() == 8);
    REQUIRE(cube.edge_count() == 12);
    REQUIRE(cube.face_count() == 6);
    for (int v = 0; v < 8; ++v)
        CHECK(total_angle(cube, v) == Catch::Approx(3 * kPi / 2).epsilon(1e-12));

    const Polyhedron octa = make_octahedron();
    REQUIRE(octa.vertex_count() == 6);
    REQUIRE(octa.edge_count() == 12);
    REQUIRE(octa.face_count() == 8);
    for (int v = 0; v < 6; ++v)
        CHECK(total_angle(octa, v) == Catch::Approx(4 * kPi / 3).epsilon(1e-12));

    const Polyhedron tt = make_truncated_tetrahedron();
    REQUIRE(tt.vertex_count() == 12);
    REQUIRE(tt.edge_count() == 18);
    REQUIRE(tt.face_count() == 8);
    for (int v = 0; v < 12; ++v)
        CHECK(total_angle(tt, v) == Catch::Approx(5 * kPi / 3).epsilon(1e-12));
}

TEST_CASE("triangulated OFF input comes back with merged facets") {
    std::ostringstream off;
    off << "OFF\n# triangulated cube\n";
    const auto verts = cube_vertices();
    const auto tris = convex_hull_faces(verts);
    off << verts.size() << ' ' << tris.size() << " 0\n";
    for (const auto& p : verts) off << p.x << ' ' << p.y << ' ' << p.z << '\n';
    for (const auto& t : tris) off << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';

    std::istringstream in(off.str());
    const RawMesh raw = read_off(in);
    REQUIRE(raw.faces.size() == 12);
    const Polyhedron P = build_polyhedron(raw.vertices, raw.faces);
    CHECK(P.face_count() == 6);
    CHECK(P.edge_count() == 12);
    for (const auto& f : P.faces) CHECK(f.size() == 4);
}

TEST_CASE("obj input with slash references and negative indices") {
    const std::string obj =
        "# tetra\nv 1 1 1\nv 1 -1 -1\nv -1 1 -1\nv -1 -1 1\n"
        "f 1/1 2/2 3/3\nf 1//1 3//2 4//3\nf -4 -1 -3\nf 2 4 3\n";
    std::istringstream in(obj);
    const RawMesh raw = read_obj(in);
    REQUIRE(raw.vertices.size() == 4);
    REQUIRE(raw.faces.size() == 4);
    CHECK(raw.faces[2] == std::vector<int>{0, 3, 1});
    CHECK_NOTHROW(build_polyhedron(raw.vertices, raw.faces));
}

TEST_CASE("face orientations are repaired from inconsistent input") {
    std::vector<Point3> v = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0},
                             {0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 1}};
    // Half the faces deliberately wound the wrong way.
    std::vector<std::vector<int>> f = {{0, 2, 3, 1}, {6, 7, 5, 4}, {0, 1, 5, 4},
                                       {3, 7, 6, 2}, {0, 4, 6, 2}, {5, 7, 3, 1}};
    const Polyhedron P = build_polyhedron(std::move(v), std::move(f));
    // Outward top-face normal points up.
    for (int fi = 0; fi < P.face_count(); ++fi) {
        bool top = true;
        for (int vi : P.faces[fi]) top = top && P.vertices[vi].z == 1.0;
        if (top) CHECK(P.face_normals[fi].z == Catch::Approx(1.0));
    }
    double vol6 = 0.0;
    for (const auto& cyc : P.faces)
        for (size_t i = 1; i + 1 < cyc.size(); ++i)
            vol6 += dot(P.vertices[cyc[0]], cross(P.vertices[cyc[i]], P.vertices[cyc[i + 1]]));
    CHECK(vol6 == Catch::Approx(6.0));  // unit volume
}

TEST_CASE("malformed input is rejected") {
    auto v = tetrahedron_vertices();
    SECTION("missing vertex reference") {
        CHECK_THROWS_AS(build_polyhedron(v, {{0, 1, 9}, {0, 2, 1}, {0, 3, 2}, {1, 2, 3}}),
                        FormatError);
    }
    SECTION("open surface") {
        CHECK_THROWS_AS(build_polyhedron(v, {{0, 2, 1}, {0, 3, 2}, {1, 2, 3}, {1, 2, 3}}),
                        FormatError);
    }
    SECTION("repeated vertex in a face") {
        CHECK_THROWS_AS(build_polyhedron(v, {{0, 1, 1}, {0, 2, 1}, {0, 3, 2}, {1, 2, 3}}),
                        FormatError);
    }
    SECTION("too small") {
        CHECK_THROWS_AS(build_polyhedron({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 2}}),
                        FormatError);
    }
}

TEST_CASE("non-convex and non-extreme inputs raise ConvexityError") {
    SECTION("dented cube corner") {
        auto v = cube_vertices();
        const auto f = convex_hull_faces(v);  // triangles from the true cube
        v[7] = {0.2, 0.2, 0.2};               // pull one corner inside the hull
        try {
            build_polyhedron(v, f);
            FAIL("expected ConvexityError");
        } catch (const ConvexityError& e) {
            CHECK(e.vertex >= 0);
        }
    }
    SECTION("vertex in the middle of an edge") {
        std::vector<Point3> v = {{0, 1, 1}};  // midpoint of a cube edge, listed first
        for (const auto& p : cube_vertices()) v.push_back(p);
        CHECK_THROWS_AS(build_polyhedron(v, convex_hull_faces(v)), ConvexityError);
    }
    SECTION("vertex in the middle of a face") {
        std::vector<Point3> v = {{0, 0, 1}};  // center of the cube top, listed first
        for (const auto& p : cube_vertices()) v.push_back(p);
        CHECK_THROWS_AS(build_polyhedron(v, convex_hull_faces(v)), ConvexityError);
    }
    SECTION("interior point referenced by no face") {
        std::vector<Point3> v = tetrahedron_vertices();
        v.push_back({0, 0, 0});
        CHECK_THROWS_AS(build_polyhedron(v, convex_hull_faces(tetrahedron_vertices())),
                        ConvexityError);
    }
}

TEST_CASE("cube corner star: spokes, coordinates, left angles") {
    const Polyhedron P = unit_cube();
    const VertexStar& st = P.stars[0];
    REQUIRE(st.degree() == 3);
    CHECK(st.spokes == std::vector<int>{2, 1, 4});
    CHECK(st.coord[0] == Catch::Approx(0.0).margin(1e-15));
    CHECK(st.coord[1] == Catch::Approx(kPi / 2));
    CHECK(st.coord[2] == Catch::Approx(kPi));
    CHECK(st.total == Catch::Approx(3 * kPi / 2));

    const auto A = SurfacePoint::at_vertex(1);  // +x neighbor
    const auto B = SurfacePoint::at_vertex(2);  // +y neighbor
    const auto C = SurfacePoint::at_vertex(4);  // +z neighbor

    CHECK(left_angle(P, A, 0, B) == Catch::Approx(kPi / 2));
    CHECK(left_angle(P, B, 0, A) == Catch::Approx(kPi));
    CHECK(left_angle(P, A, 0, B) + left_angle(P, B, 0, A) ==
          Catch::Approx(total_angle(P, 0)));
    CHECK(left_angle(P, A, 0, A) == Catch::Approx(3 * kPi / 2));  // coinciding rays
    CHECK(left_angle(P, C, 0, B) == Catch::Approx(kPi));

    // Additivity through an intermediate ray.
    CHECK(left_angle(P, C, 0, A) + left_angle(P, A, 0, B) ==
          Catch::Approx(left_angle(P, C, 0, B)));
}

TEST_CASE("angular coordinates of edge and face points") {
    const Polyhedron P = unit_cube();
    const int e13 = P.edge_between(1, 3);
    REQUIRE(e13 >= 0);
    // Midpoint of the bottom-right edge, seen from the origin corner.
    const auto mid = SurfacePoint::on_edge(e13, 0.5);
    const auto A = SurfacePoint::at_vertex(1);
    CHECK(left_angle(P, A, 0, mid) == Catch::Approx(std::atan(0.5)));

    // Center of the bottom face.
    const auto c = SurfacePoint::in_face(0, {0.25, 0.25, 0.25, 0.25});
    const auto B = SurfacePoint::at_vertex(2);
    CHECK(left_angle(P, A, 0, c) == Catch::Approx(kPi / 4));
    CHECK(left_angle(P, c, 0, B) == Catch::Approx(kPi / 4));
}

TEST_CASE("strict sidedness in a corner") {
    const Polyhedron P = unit_cube();
    const auto A = SurfacePoint::at_vertex(1);
    const auto B = SurfacePoint::at_vertex(2);
    const auto C = SurfacePoint::at_vertex(4);
    const auto bottom_center = SurfacePoint::in_face(0, {0.25, 0.25, 0.25, 0.25});

    // Bottom-face center is interior to the left side of corner [a=+x, o, b=+y].
    CHECK(strictly_left_of(P, bottom_center, A, 0, B));
    CHECK_FALSE(strictly_left_of(P, C, A, 0, B));
    CHECK(strictly_left_of(P, C, B, 0, A));
    // Points on a bounding ray are not strictly inside.
    CHECK_FALSE(strictly_left_of(P, A, A, 0, B));
    CHECK_FALSE(strictly_left_of(P, B, A, 0, B));
}

TEST_CASE("surface angles at interior points of faces and edges") {
    const Polyhedron P = unit_cube();
    const auto bottom_center = SurfacePoint::in_face(0, {0.25, 0.25, 0.25, 0.25});

    SECTION("straight through a face point") {
        CHECK(surface_angle(P, SurfacePoint::at_vertex(0), bottom_center,
                            SurfacePoint::at_vertex(3)) == Catch::Approx(kPi));
    }
    SECTION("quarter turn at a face point") {
        CHECK(surface_angle(P, SurfacePoint::at_vertex(0), bottom_center,
                            SurfacePoint::at_vertex(1)) == Catch::Approx(kPi / 2));
        CHECK(surface_angle(P, SurfacePoint::at_vertex(1), bottom_center,
                            SurfacePoint::at_vertex(0)) == Catch::Approx(3 * kPi / 2));
    }
    SECTION("straight across an edge") {
        const int e13 = P.edge_between(1, 3);
        const auto mid = SurfacePoint::on_edge(e13, 0.5);
        const auto p_bottom = SurfacePoint::in_face(0, {0.25, 0.25, 0.25, 0.25});
        // Right-face point straight opposite the bottom centre over the hinge.
        const int right = [&] {
            for (int f = 0; f < P.face_count(); ++f) {
                bool all = true;
                for (int v : P.faces[f]) all = all && P.vertices[v].x == 1.0;
                if (all) return f;
            }
            return -1;
        }();
        REQUIRE(right >= 0);
        std::vector<double> w(P.faces[right].size(), 0.25);
        const auto p_right = SurfacePoint::in_face(right, w);
        CHECK(surface_angle(P, p_bottom, mid, p_right) == Catch::Approx(kPi));
        CHECK(surface_angle(P, p_right, mid, p_bottom) == Catch::Approx(kPi));
    }
    SECTION("doubling back measures the full angle") {
        CHECK(surface_angle(P, SurfacePoint::at_vertex(0), bottom_center,
                            SurfacePoint::at_vertex(0)) == Catch::Approx(kTwoPi));
        CHECK(surface_angle(P, SurfacePoint::at_vertex(1), SurfacePoint::at_vertex(0),
                            SurfacePoint::at_vertex(1)) == Catch::Approx(3 * kPi / 2));
    }
    SECTION("total angle off vertices is flat") {
        CHECK(total_angle(P, bottom_center) == Catch::Approx(kTwoPi));
        const auto mid = SurfacePoint::on_edge(0, 0.5);
        CHECK(total_angle(P, mid) == Catch::Approx(kTwoPi));
    }
}

TEST_CASE("affine stretch scales horizontals and preserves heights") {
    SECTION("axis-aligned example") {
        std::vector<Point3> v = {{2, 4, 6}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
        const Polyhedron P = build_polyhedron(v, convex_hull_faces(v));
        const Polyhedron Q = affine_stretch(P, {0, 0, 1}, 2.0);
        CHECK(distance(Q.vertices[0], {1, 2, 6}) < 1e-12);
    }
    SECTION("general direction: heights exact, no length grows") {
        std::mt19937_64 rng(7);
        const Polyhedron P = random_convex_polyhedron(rng, 12);
        const Point3 u = normalized({0.3, -0.5, 0.8});
        const Polyhedron Q = affine_stretch(P, u, 8.0);
        for (int i = 0; i < P.vertex_count(); ++i)
            CHECK(dot(Q.vertices[i], u) == Catch::Approx(dot(P.vertices[i], u)).margin(1e-12));
        for (const MeshEdge& e : P.edges)
            CHECK(distance(Q.vertices[e.a], Q.vertices[e.b]) <=
                  distance(P.vertices[e.a], P.vertices[e.b]) + 1e-12);
        // Combinatorics carry over untouched.
        for (int v = 0; v < P.vertex_count(); ++v) CHECK(Q.stars[v].spokes == P.stars[v].spokes);
        CHECK(Q.faces == P.faces);
    }
    SECTION("identity and domain") {
        const Polyhedron P = make_cube();
        const Polyhedron Q = affine_stretch(P, {0, 0, 1}, 1.0);
        for (int i = 0; i < 8; ++i) CHECK(Q.vertices[i] == P.vertices[i]);
        CHECK_THROWS_AS(affine_stretch(P, {0, 0, 1}, 0.5), DomainError);
    }
    SECTION("cone angle limits under strong stretching") {
        // Along u, vertex 0 is the global bottom and vertex 1 sits at an
        // intermediate height: their cone angles approach 0 and 2*pi.
        const Polyhedron P = unit_cube();
        const Point3 u = normalized({0.3, 0.2, 0.9});
        const Polyhedron Q = affine_stretch(P, u, 4096.0);
        CHECK(total_angle(Q, 0) < 0.01);
        CHECK(total_angle(Q, 1) < kTwoPi);
        CHECK(kTwoPi - total_angle(Q, 1) < 2e-3);
    }
}

TEST_CASE("general position report") {
    const Polyhedron cube = unit_cube();
    SECTION("axis direction fails on ties and horizontal edges") {
        const auto rep = check_general_position(cube, {0, 0, 1});
        CHECK_FALSE(rep.is_general);
        CHECK_FALSE(rep.violations.empty());
    }
    SECTION("tilted direction is general for the cube") {
        const auto rep = check_general_position(cube, {0.3, 0.2, 0.9});
        CHECK(rep.is_general);
        CHECK(rep.top == 7);
        CHECK(rep.bottom == 0);
        CHECK(rep.min_height_gap == Catch::Approx(0.2 / norm(Point3{0.3, 0.2, 0.9})));
    }
    SECTION("tetra along z has tied extremes") {
        const auto rep = check_general_position(make_tetrahedron(), {0, 0, 1});
        CHECK_FALSE(rep.is_general);
    }
    SECTION("random rotation reaches general position") {
        std::mt19937_64 rng(42);
        const Polyhedron P = ensure_general_position(make_octahedron(), {0, 0, 1}, rng);
        CHECK(check_general_position(P, {0, 0, 1}).is_general);
    }
}

TEST_CASE("random hulls satisfy the angle defect identity") {
    std::mt19937_64 rng(20260821);
    for (int trial = 0; trial < 8; ++trial) {
        const Polyhedron P = random_convex_polyhedron(rng, 4 + 3 * trial);
        double defect = 0.0;
        for (int v = 0; v < P.vertex_count(); ++v) defect += kTwoPi - total_angle(P, v);
        CHECK(defect == Catch::Approx(4 * kPi).epsilon(1e-9));
        CHECK(P.vertex_count() - P.edge_count() + P.face_count() == 2);
    }
}
