#include "hmmrd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <sstream>

#include "hmmrd/errors.hpp"

namespace hmmrd {

namespace {

double signed_area(const std::vector<Vec2>& pts, const std::vector<int>& poly) {
  double a = 0.0;
  const int nv = static_cast<int>(poly.size());
  for (int i = 0; i < nv; ++i) {
    const Vec2& p = pts[poly[i]];
    const Vec2& q = pts[poly[(i + 1) % nv]];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& pts, const std::vector<int>& poly, double area) {
  Vec2 c = Vec2::Zero();
  const int nv = static_cast<int>(poly.size());
  for (int i = 0; i < nv; ++i) {
    const Vec2& p = pts[poly[i]];
    const Vec2& q = pts[poly[(i + 1) % nv]];
    const double cross = p.x() * q.y() - q.x() * p.y();
    c += cross * (p + q);
  }
  return c / (6.0 * area);
}

double polygon_diameter(const std::vector<Vec2>& pts, const std::vector<int>& poly) {
  double d = 0.0;
  for (size_t i = 0; i < poly.size(); ++i)
    for (size_t j = i + 1; j < poly.size(); ++j)
      d = std::max(d, (pts[poly[i]] - pts[poly[j]]).norm());
  return d;
}

}  // namespace

PolytopalMesh PolytopalMesh::from_arrays(std::vector<Vec2> vertices,
                                         const std::vector<std::vector<int>>& cell_vertices,
                                         const std::optional<std::vector<Vec2>>& cell_centers) {
  PolytopalMesh mesh;
  mesh.vertices_ = std::move(vertices);
  const int nv = mesh.n_vertices();
  const int nc = static_cast<int>(cell_vertices.size());
  if (nc == 0) throw ValidationError("mesh needs at least one cell");
  if (cell_centers && static_cast<int>(cell_centers->size()) != nc)
    throw ValidationError("cell_centers size does not match cell count");

  mesh.cells_.resize(nc);
  // cell geometry
  for (int k = 0; k < nc; ++k) {
    const auto& poly = cell_vertices[k];
    if (poly.size() < 3)
      throw DegenerateCell("cell " + std::to_string(k) + " has fewer than 3 vertices");
    for (int v : poly)
      if (v < 0 || v >= nv)
        throw ValidationError("cell " + std::to_string(k) + " references vertex " + std::to_string(v) +
                              " out of range");
    const double area = signed_area(mesh.vertices_, poly);
    if (!(area > 0.0))
      throw DegenerateCell("cell " + std::to_string(k) + " has non-positive area " + std::to_string(area) +
                           " (vertices must be counter-clockwise and non-self-intersecting)");
    Cell& cell = mesh.cells_[k];
    cell.vertices = poly;
    cell.measure = area;
    cell.diameter = polygon_diameter(mesh.vertices_, poly);
    cell.center = cell_centers ? (*cell_centers)[k] : polygon_centroid(mesh.vertices_, poly, area);
    mesh.all_triangles_ = mesh.all_triangles_ && poly.size() == 3;
  }

  // faces: one record per undirected vertex pair, owner = first claimant
  std::map<std::pair<int, int>, int> face_of_edge;
  for (int k = 0; k < nc; ++k) {
    Cell& cell = mesh.cells_[k];
    const int m = static_cast<int>(cell.vertices.size());
    cell.faces.resize(m);
    for (int j = 0; j < m; ++j) {
      const int a = cell.vertices[j];
      const int b = cell.vertices[(j + 1) % m];
      if (a == b) throw DegenerateCell("cell " + std::to_string(k) + " repeats a vertex");
      const std::pair<int, int> key = std::minmax(a, b);
      auto it = face_of_edge.find(key);
      if (it == face_of_edge.end()) {
        Face f;
        f.vertices = {a, b};
        const Vec2 edge = mesh.vertices_[b] - mesh.vertices_[a];
        f.measure = edge.norm();
        if (!(f.measure > 0.0)) throw DegenerateCell("zero-length face in cell " + std::to_string(k));
        f.diameter = f.measure;
        f.center = 0.5 * (mesh.vertices_[a] + mesh.vertices_[b]);
        // outward normal of the owner: CCW edge direction rotated by -90 degrees
        f.normal = Vec2(edge.y(), -edge.x()) / f.measure;
        f.owner = k;
        const int id = static_cast<int>(mesh.faces_.size());
        mesh.faces_.push_back(f);
        face_of_edge.emplace(key, id);
        cell.faces[j] = id;
      } else {
        Face& f = mesh.faces_[it->second];
        if (f.neighbor >= 0)
          throw NonConformingFace("face between vertices " + std::to_string(key.first) + " and " +
                                  std::to_string(key.second) + " is shared by more than two cells");
        f.neighbor = k;
        cell.faces[j] = it->second;
      }
    }
  }

  // incidence quantities: distance d_{K,sigma} and diamond measure
  mesh.inc_offset_.assign(nc + 1, 0);
  for (int k = 0; k < nc; ++k)
    mesh.inc_offset_[k + 1] = mesh.inc_offset_[k] + static_cast<int>(mesh.cells_[k].faces.size());
  mesh.inc_distance_.assign(mesh.inc_offset_[nc], 0.0);
  mesh.inc_diamond_.assign(mesh.inc_offset_[nc], 0.0);
  for (int k = 0; k < nc; ++k) {
    const Cell& cell = mesh.cells_[k];
    for (size_t j = 0; j < cell.faces.size(); ++j) {
      const Face& f = mesh.faces_[cell.faces[j]];
      const double d = (f.center - cell.center).dot(mesh.normal(k, static_cast<int>(j)));
      if (!(d > 0.0))
        throw NonStarShaped("cell " + std::to_string(k) + " is not strictly star-shaped around its center" +
                            " (d_{K,sigma} = " + std::to_string(d) + ")");
      const int idx = mesh.inc_offset_[k] + static_cast<int>(j);
      mesh.inc_distance_[idx] = d;
      mesh.inc_diamond_[idx] = f.measure * d / kDim;
    }
  }

  mesh.n_boundary_faces_ = 0;
  for (const Face& f : mesh.faces_)
    if (f.neighbor < 0) ++mesh.n_boundary_faces_;
  mesh.domain_measure_ = 0.0;
  mesh.mesh_size_ = 0.0;
  for (const Cell& c : mesh.cells_) {
    mesh.domain_measure_ += c.measure;
    mesh.mesh_size_ = std::max(mesh.mesh_size_, c.diameter);
  }
  return mesh;
}

void PolytopalMesh::verify_geometry(double expected_measure) const {
  double sum_measure = 0.0;
  for (int k = 0; k < n_cells(); ++k) {
    const Cell& c = cells_[k];
    sum_measure += c.measure;
    Vec2 closure = Vec2::Zero();
    double perimeter = 0.0;
    double diamond_sum = 0.0;
    for (size_t j = 0; j < c.faces.size(); ++j) {
      const Face& f = faces_[c.faces[j]];
      closure += f.measure * normal(k, static_cast<int>(j));
      perimeter += f.measure;
      diamond_sum += diamond_measure(k, static_cast<int>(j));
      if (!(distance(k, static_cast<int>(j)) > 0.0))
        throw ValidationError("non-positive d_{K,sigma} in cell " + std::to_string(k));
    }
    if (closure.lpNorm<Eigen::Infinity>() > 1e-12 * perimeter)
      throw ValidationError("closed-surface identity violated in cell " + std::to_string(k));
    if (std::abs(diamond_sum - c.measure) > 1e-12 * c.measure)
      throw ValidationError("diamond partition violated in cell " + std::to_string(k));
  }
  for (int s = 0; s < n_faces(); ++s) {
    const Face& f = faces_[s];
    if (f.owner < 0 || f.owner >= n_cells())
      throw ValidationError("face " + std::to_string(s) + " has no owner");
    if (f.neighbor >= 0 && f.neighbor == f.owner)
      throw ValidationError("face " + std::to_string(s) + " repeats its owner");
    if (!std::isfinite(f.measure) || !(f.measure > 0.0))
      throw ValidationError("face " + std::to_string(s) + " has invalid measure");
  }
  if (expected_measure > 0.0 && std::abs(sum_measure - expected_measure) > 1e-12 * expected_measure)
    throw ValidationError("cells do not partition the domain: sum |K| = " + std::to_string(sum_measure) +
                          ", expected " + std::to_string(expected_measure));
}

std::uint64_t PolytopalMesh::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  auto feed = [&h](std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (word >> (8 * byte)) & 0xffULL;
      h *= 1099511628211ULL;
    }
  };
  auto feed_double = [&](double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, sizeof(bits));
    feed(bits);
  };
  feed(static_cast<std::uint64_t>(n_vertices()));
  feed(static_cast<std::uint64_t>(n_cells()));
  feed(static_cast<std::uint64_t>(n_faces()));
  for (const Vec2& v : vertices_) {
    feed_double(v.x());
    feed_double(v.y());
  }
  for (const Cell& c : cells_) {
    feed(static_cast<std::uint64_t>(c.vertices.size()));
    for (int v : c.vertices) feed(static_cast<std::uint64_t>(v));
    feed_double(c.center.x());
    feed_double(c.center.y());
  }
  return h;
}

PolytopalMesh build_rectangle_triangular(double x0, double x1, double y0, double y1,
                                         int nx, int ny) {
  if (!(x1 > x0) || !(y1 > y0)) throw ValidationError("empty rectangle");
  if (nx < 1 || ny < 1) throw ValidationError("subdivision counts must be >= 1");
  const double sx = (x1 - x0) / nx;
  const double sy = (y1 - y0) / ny;

  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<size_t>((nx + 1) * (ny + 1) + nx * ny));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      vertices.emplace_back(x0 + i * sx, y0 + j * sy);
  const int center_base = (nx + 1) * (ny + 1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      vertices.emplace_back(x0 + (i + 0.5) * sx, y0 + (j + 0.5) * sy);

  auto corner = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<size_t>(4 * nx * ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int c00 = corner(i, j);
      const int c10 = corner(i + 1, j);
      const int c11 = corner(i + 1, j + 1);
      const int c01 = corner(i, j + 1);
      const int mid = center_base + j * nx + i;
      cells.push_back({c00, c10, mid});  // bottom
      cells.push_back({c10, c11, mid});  // right
      cells.push_back({c11, c01, mid});  // top
      cells.push_back({c01, c00, mid});  // left
    }
  }
  return PolytopalMesh::from_arrays(std::move(vertices), cells);
}

PolytopalMesh build_uniform_triangular(double half_width, int subdivisions) {
  if (!(half_width > 0.0)) throw ValidationError("half-width must be positive");
  return build_rectangle_triangular(-half_width, half_width, -half_width, half_width,
                                    subdivisions, subdivisions);
}

PolytopalMesh refine_uniform(const PolytopalMesh& mesh) {
  if (!mesh.all_triangles())
    throw UnsupportedCellType("uniform refinement is only implemented for triangular meshes");

  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<size_t>(mesh.n_vertices() + mesh.n_faces()));
  for (int v = 0; v < mesh.n_vertices(); ++v) vertices.push_back(mesh.vertex(v));

  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const std::pair<int, int> key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (mesh.vertex(a) + mesh.vertex(b)));
    midpoint.emplace(key, id);
    return id;
  };

  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<size_t>(4 * mesh.n_cells()));
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const auto& tri = mesh.cell(k).vertices;
    const int a = tri[0], b = tri[1], c = tri[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    cells.push_back({a, ab, ca});
    cells.push_back({ab, b, bc});
    cells.push_back({ca, bc, c});
    cells.push_back({ab, bc, ca});
  }
  return PolytopalMesh::from_arrays(std::move(vertices), cells);
}

MeshRegularity regularity(const PolytopalMesh& mesh) {
  MeshRegularity reg;
  reg.cell_flatness.resize(mesh.n_cells());
  reg.cell_face_count.resize(mesh.n_cells());

  double cell_term = 0.0;
  // distances per face and side, to form the interior ratios
  std::vector<double> d_owner(mesh.n_faces(), 0.0);
  std::vector<double> d_neighbor(mesh.n_faces(), 0.0);
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const Cell& c = mesh.cell(k);
    double flat = 0.0;
    for (size_t j = 0; j < c.faces.size(); ++j) {
      const double d = mesh.distance(k, static_cast<int>(j));
      flat = std::max(flat, c.diameter / d);
      if (mesh.face(c.faces[j]).owner == k)
        d_owner[c.faces[j]] = d;
      else
        d_neighbor[c.faces[j]] = d;
    }
    reg.cell_flatness[k] = flat;
    reg.cell_face_count[k] = static_cast<int>(c.faces.size());
    cell_term = std::max(cell_term, flat + static_cast<double>(c.faces.size()));
  }

  double face_term = 0.0;
  reg.interior_distance_ratio.reserve(mesh.n_interior_faces());
  for (int s = 0; s < mesh.n_faces(); ++s) {
    if (mesh.is_boundary(s)) continue;
    const double r = d_owner[s] / d_neighbor[s];
    reg.interior_distance_ratio.push_back(std::max(r, 1.0 / r));
    face_term = std::max(face_term, r + 1.0 / r);
  }

  reg.theta = cell_term + face_term;
  return reg;
}

}  // namespace hmmrd
