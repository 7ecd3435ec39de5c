// Polytopal meshes in 2D: cells are star-shaped polygons, faces are straight
// segments shared by one (boundary) or two (interior) cells. The mesh stores
// every geometric quantity the hybrid operators need: cell measures, centers
// and diameters, face measures, centers of mass and normals, and per
// (cell,face) incidence the orthogonal distance d_{K,sigma} and the diamond
// measure |D_{K,sigma}| = |sigma| d_{K,sigma} / d.
//
// A mesh is immutable after construction and safe for concurrent reads.

#ifndef HMMRD_MESH_HPP
#define HMMRD_MESH_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace hmmrd {

inline constexpr int kDim = 2;

using Vec2 = Eigen::Vector2d;

struct Cell {
  std::vector<int> vertices;  ///< counter-clockwise vertex ids
  std::vector<int> faces;     ///< face ids, ordered so face j joins vertices j and j+1
  Vec2 center = Vec2::Zero(); ///< x_K (star-shaped point)
  double measure = 0.0;       ///< |K|
  double diameter = 0.0;      ///< h_K
};

struct Face {
  std::array<int, 2> vertices{-1, -1};
  double measure = 0.0;       ///< |sigma| (length)
  double diameter = 0.0;      ///< h_sigma (= measure in 2D)
  Vec2 center = Vec2::Zero(); ///< centre of mass
  Vec2 normal = Vec2::Zero(); ///< unit normal, outward from the owner cell
  int owner = -1;             ///< cell with n_{K,sigma} = +normal
  int neighbor = -1;          ///< second cell, or -1 on the boundary
};

class PolytopalMesh {
public:
  /// Builds a general polygonal mesh from vertex coordinates and per-cell
  /// counter-clockwise vertex lists. Cell centers default to centroids.
  /// Throws DegenerateCell, NonStarShaped or NonConformingFace.
  static PolytopalMesh from_arrays(std::vector<Vec2> vertices,
                                   const std::vector<std::vector<int>>& cell_vertices,
                                   const std::optional<std::vector<Vec2>>& cell_centers = std::nullopt);

  int n_cells() const { return static_cast<int>(cells_.size()); }
  int n_faces() const { return static_cast<int>(faces_.size()); }
  int n_vertices() const { return static_cast<int>(vertices_.size()); }
  int n_boundary_faces() const { return n_boundary_faces_; }
  int n_interior_faces() const { return n_faces() - n_boundary_faces_; }

  const Cell& cell(int k) const { return cells_[k]; }
  const Face& face(int s) const { return faces_[s]; }
  const Vec2& vertex(int v) const { return vertices_[v]; }
  bool is_boundary(int s) const { return faces_[s].neighbor < 0; }

  /// Outward unit normal n_{K,sigma} for local face j of cell k.
  Vec2 normal(int k, int j) const {
    const Face& f = faces_[cells_[k].faces[j]];
    return (f.owner == k ? 1.0 : -1.0) * f.normal;
  }
  /// Orthogonal distance d_{K,sigma} from x_K to the line of local face j.
  double distance(int k, int j) const { return inc_distance_[inc_offset_[k] + j]; }
  /// Diamond measure |D_{K,sigma}| of local face j.
  double diamond_measure(int k, int j) const { return inc_diamond_[inc_offset_[k] + j]; }
  /// Vertices of the diamond triangle (x_K, a, b) of local face j.
  std::pair<Vec2, Vec2> face_span(int k, int j) const {
    const Face& f = faces_[cells_[k].faces[j]];
    return {vertices_[f.vertices[0]], vertices_[f.vertices[1]]};
  }

  /// Flat index of the (cell, local face) incidence; diamond fields use it.
  int incidence_index(int k, int j) const { return inc_offset_[k] + j; }
  int n_incidences() const { return static_cast<int>(inc_distance_.size()); }

  double domain_measure() const { return domain_measure_; }
  double mesh_size() const { return mesh_size_; }  ///< h_M = max h_K
  bool all_triangles() const { return all_triangles_; }

  /// FNV-1a digest of the defining arrays; stable across runs.
  std::uint64_t hash() const;

  /// Checks the construction identities (closed-surface sums, diamond
  /// partition, positivity, face sharing) and throws ValidationError on
  /// violation. `expected_measure`, when positive, also checks sum |K|.
  void verify_geometry(double expected_measure = -1.0) const;

private:
  PolytopalMesh() = default;

  std::vector<Vec2> vertices_;
  std::vector<Cell> cells_;
  std::vector<Face> faces_;
  std::vector<int> inc_offset_;        // per-cell start into the incidence arrays
  std::vector<double> inc_distance_;   // d_{K,sigma}
  std::vector<double> inc_diamond_;    // |D_{K,sigma}|
  int n_boundary_faces_ = 0;
  double domain_measure_ = 0.0;
  double mesh_size_ = 0.0;
  bool all_triangles_ = true;
};

/// Conforming triangulation of [-L,L]^2: n x n squares, each split by both
/// diagonals into four triangles with apex at the square center (4 n^2 cells).
PolytopalMesh build_uniform_triangular(double half_width, int subdivisions);

/// Same construction on a general axis-aligned rectangle.
PolytopalMesh build_rectangle_triangular(double x0, double x1, double y0, double y1,
                                         int nx, int ny);

/// Splits every triangle into four via edge midpoints. h_M halves, the cell
/// count quadruples, and similarity preserves the regularity measure.
/// Throws UnsupportedCellType on non-triangular cells.
PolytopalMesh refine_uniform(const PolytopalMesh& mesh);

struct MeshRegularity {
  double theta = 0.0;                           ///< theta_M
  std::vector<double> cell_flatness;            ///< per cell: max_sigma h_K / d_{K,sigma}
  std::vector<int> cell_face_count;             ///< per cell: Card(E_K)
  std::vector<double> interior_distance_ratio;  ///< per interior face: max(dK/dL, dL/dK)
};

/// theta_M = max_K (max_sigma h_K/d_{K,sigma} + Card(E_K))
///         + max_{interior sigma} (d_{K,sigma}/d_{L,sigma} + d_{L,sigma}/d_{K,sigma}).
MeshRegularity regularity(const PolytopalMesh& mesh);

}  // namespace hmmrd

#endif
