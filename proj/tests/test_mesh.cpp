#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hmmrd/errors.hpp"
#include "hmmrd/mesh.hpp"
#include "test_helpers.hpp"

using namespace hmmrd;

namespace {

PolytopalMesh unit_square_cell() {
  return PolytopalMesh::from_arrays({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2, 3}});
}

}  // namespace

TEST_CASE("uniform triangulation: counts and measures") {
  const PolytopalMesh mesh = build_uniform_triangular(1.0, 1);
  CHECK(mesh.n_cells() == 4);
  CHECK(mesh.n_faces() == 8);
  CHECK(mesh.n_boundary_faces() == 4);
  CHECK(mesh.n_interior_faces() == 4);
  CHECK(mesh.domain_measure() == doctest::Approx(4.0).epsilon(1e-14));
  mesh.verify_geometry(4.0);
}

TEST_CASE("uniform triangulation: closed-surface identity per cell") {
  const PolytopalMesh mesh = build_uniform_triangular(1.0, 2);
  CHECK(mesh.n_cells() == 16);
  for (int k = 0; k < mesh.n_cells(); ++k) {
    Vec2 closure = Vec2::Zero();
    double perimeter = 0.0;
    for (size_t j = 0; j < mesh.cell(k).faces.size(); ++j) {
      closure += mesh.face(mesh.cell(k).faces[j]).measure * mesh.normal(k, static_cast<int>(j));
      perimeter += mesh.face(mesh.cell(k).faces[j]).measure;
    }
    CHECK(closure.norm() <= 1e-12 * perimeter);
  }
}

TEST_CASE("the documented spiral-experiment mesh has 3600 cells") {
  // 4 n^2 with n = 30; the closest admissible count to the reported 3584,
  // which no symmetric 4-per-square split can produce
  const PolytopalMesh mesh = build_uniform_triangular(30.0, 30);
  CHECK(mesh.n_cells() == 3600);
  CHECK(mesh.domain_measure() == doctest::Approx(3600.0).epsilon(1e-13));
  mesh.verify_geometry(3600.0);
}

TEST_CASE("from_arrays: single quad cell") {
  const PolytopalMesh mesh = unit_square_cell();
  CHECK(mesh.n_cells() == 1);
  CHECK(mesh.n_faces() == 4);
  CHECK(mesh.n_boundary_faces() == 4);
  CHECK(mesh.cell(0).measure == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(mesh.cell(0).center.x() == doctest::Approx(0.5));
  CHECK(mesh.cell(0).center.y() == doctest::Approx(0.5));
  // d_{K,sigma} = 1/2 for every face
  for (int j = 0; j < 4; ++j) CHECK(mesh.distance(0, j) == doctest::Approx(0.5).epsilon(1e-14));
  mesh.verify_geometry(1.0);
}

TEST_CASE("from_arrays: two triangles share one interior face") {
  const PolytopalMesh mesh =
      PolytopalMesh::from_arrays({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}});
  CHECK(mesh.n_cells() == 2);
  CHECK(mesh.n_faces() == 5);
  CHECK(mesh.n_interior_faces() == 1);
  int interior = -1;
  for (int s = 0; s < mesh.n_faces(); ++s)
    if (!mesh.is_boundary(s)) interior = s;
  REQUIRE(interior >= 0);
  CHECK(mesh.face(interior).owner == 0);
  CHECK(mesh.face(interior).neighbor == 1);
}

TEST_CASE("interior normals are exactly opposite") {
  const PolytopalMesh mesh = test::perturbed_triangular(1.0, 3, 7u);
  for (int k = 0; k < mesh.n_cells(); ++k)
    for (size_t j = 0; j < mesh.cell(k).faces.size(); ++j) {
      const int s = mesh.cell(k).faces[j];
      if (mesh.is_boundary(s)) continue;
      const int other = mesh.face(s).owner == k ? mesh.face(s).neighbor : mesh.face(s).owner;
      int jo = -1;
      for (size_t i = 0; i < mesh.cell(other).faces.size(); ++i)
        if (mesh.cell(other).faces[i] == s) jo = static_cast<int>(i);
      REQUIRE(jo >= 0);
      // one stored record, opposite signs: bitwise negation
      CHECK(mesh.normal(k, static_cast<int>(j)) == -mesh.normal(other, jo));
    }
}

TEST_CASE("from_arrays error paths") {
  SUBCASE("bow-tie quad is degenerate") {
    CHECK_THROWS_AS(PolytopalMesh::from_arrays({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, {{0, 1, 2, 3}}),
                    DegenerateCell);
  }
  SUBCASE("clockwise cell is rejected") {
    CHECK_THROWS_AS(PolytopalMesh::from_arrays({{0, 0}, {1, 0}, {1, 1}}, {{0, 2, 1}}),
                    DegenerateCell);
  }
  SUBCASE("face shared by three cells") {
    CHECK_THROWS_AS(PolytopalMesh::from_arrays({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {2, 0.5}},
                                               {{0, 1, 2}, {0, 2, 3}, {1, 2, 0}}),
                    NonConformingFace);
  }
  SUBCASE("center outside the cell is not star-shaped") {
    CHECK_THROWS_AS(PolytopalMesh::from_arrays({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2, 3}},
                                               std::vector<Vec2>{Vec2(2.0, 2.0)}),
                    NonStarShaped);
  }
  SUBCASE("vertex index out of range") {
    CHECK_THROWS_AS(PolytopalMesh::from_arrays({{0, 0}, {1, 0}, {1, 1}}, {{0, 1, 5}}),
                    ValidationError);
  }
}

TEST_CASE("regularity: single square cell") {
  const MeshRegularity reg = regularity(unit_square_cell());
  // h_K = sqrt(2), d = 1/2 on all faces, 4 faces, no interior-face term
  CHECK(reg.theta == doctest::Approx(2.0 * std::sqrt(2.0) + 4.0).epsilon(1e-14));
  CHECK(reg.cell_face_count[0] == 4);
  CHECK(reg.interior_distance_ratio.empty());
}

TEST_CASE("regularity is invariant under uniform refinement") {
  PolytopalMesh mesh = build_uniform_triangular(1.0, 2);
  const double theta0 = regularity(mesh).theta;
  CHECK(theta0 >= 1.0);
  for (int level = 0; level < 2; ++level) {
    mesh = refine_uniform(mesh);
    CHECK(regularity(mesh).theta == doctest::Approx(theta0).epsilon(1e-12));
  }
}

TEST_CASE("regularity blows up on needle triangles") {
  double prev = 0.0;
  for (double aspect : {1.0, 10.0, 100.0, 1000.0}) {
    const PolytopalMesh mesh =
        PolytopalMesh::from_arrays({{0, 0}, {1, 0}, {0.5, 1.0 / aspect}}, {{0, 1, 2}});
    const double theta = regularity(mesh).theta;
    CHECK(theta > prev);
    prev = theta;
  }
  CHECK(prev > 1000.0);
}

TEST_CASE("regularity grows as the center approaches a face") {
  const std::vector<Vec2> quad{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  double prev = 0.0;
  for (double y : {0.5, 0.3, 0.1, 0.02}) {
    const PolytopalMesh mesh =
        PolytopalMesh::from_arrays(quad, {{0, 1, 2, 3}}, std::vector<Vec2>{Vec2(0.5, y)});
    const double flat = regularity(mesh).cell_flatness[0];
    CHECK(flat > prev);
    prev = flat;
  }
}

TEST_CASE("uniform refinement: counts, sizes, conservation") {
  const PolytopalMesh coarse = build_uniform_triangular(1.0, 1);
  const PolytopalMesh fine = refine_uniform(coarse);
  CHECK(fine.n_cells() == 16);
  CHECK(fine.mesh_size() == doctest::Approx(0.5 * coarse.mesh_size()).epsilon(1e-15));
  CHECK(fine.domain_measure() == doctest::Approx(coarse.domain_measure()).epsilon(1e-13));
  fine.verify_geometry(coarse.domain_measure());
}

TEST_CASE("uniform refinement rejects polygons") {
  CHECK_THROWS_AS(refine_uniform(unit_square_cell()), UnsupportedCellType);
}

TEST_CASE("perturbed meshes satisfy every construction invariant") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const PolytopalMesh mesh = test::perturbed_triangular(1.5, 4, seed);
    mesh.verify_geometry(9.0);
    // diamonds partition each cell
    for (int k = 0; k < mesh.n_cells(); ++k) {
      double sum = 0.0;
      for (size_t j = 0; j < mesh.cell(k).faces.size(); ++j)
        sum += mesh.diamond_measure(k, static_cast<int>(j));
      CHECK(sum == doctest::Approx(mesh.cell(k).measure).epsilon(1e-12));
    }
  }
}

TEST_CASE("mesh hash separates meshes and is reproducible") {
  const PolytopalMesh a = build_uniform_triangular(1.0, 2);
  const PolytopalMesh b = build_uniform_triangular(1.0, 2);
  const PolytopalMesh c = build_uniform_triangular(1.0, 3);
  CHECK(a.hash() == b.hash());
  CHECK(a.hash() != c.hash());
}
