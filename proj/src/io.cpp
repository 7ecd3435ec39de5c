#include "hmmrd/io.hpp"

#include <array>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "hmmrd/errors.hpp"

namespace hmmrd {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  return out;
}

double to_double(const std::string& token, const std::string& context) {
  char* end = nullptr;
  const double x = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size())
    throw ValidationError(context + ": malformed number '" + token + "'");
  return x;
}

}  // namespace

void write_mesh(const PolytopalMesh& mesh, std::ostream& out) {
  out << "# polytopal mesh, one vertex / cell record per line\n";
  out << "cells " << mesh.n_cells() << " faces " << mesh.n_faces() << " vertices "
      << mesh.n_vertices() << " dim 2\n";
  for (int v = 0; v < mesh.n_vertices(); ++v)
    out << fmt(mesh.vertex(v).x()) << " " << fmt(mesh.vertex(v).y()) << "\n";
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const auto& verts = mesh.cell(k).vertices;
    out << verts.size();
    for (int v : verts) out << " " << v;
    out << "\n";
  }
}

PolytopalMesh read_mesh(std::istream& in) {
  auto next_line = [&in](std::string& line) -> bool {
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      std::stringstream probe(line);
      std::string token;
      if (probe >> token) return true;
    }
    return false;
  };

  std::string line;
  if (!next_line(line)) throw ValidationError("mesh file: missing header");
  std::stringstream header(line);
  std::string kw_cells, kw_faces, kw_vertices, kw_dim;
  int n_cells = 0, n_faces = 0, n_vertices = 0, dim = 0;
  header >> kw_cells >> n_cells >> kw_faces >> n_faces >> kw_vertices >> n_vertices >> kw_dim >> dim;
  if (header.fail() || kw_cells != "cells" || kw_faces != "faces" || kw_vertices != "vertices" ||
      kw_dim != "dim")
    throw ValidationError("mesh file: header must read 'cells N faces M vertices V dim 2'");
  if (dim != 2) throw ValidationError("mesh file: only dim 2 is supported");
  if (n_cells < 1 || n_vertices < 3) throw ValidationError("mesh file: empty mesh");

  std::vector<Vec2> vertices(n_vertices);
  for (int v = 0; v < n_vertices; ++v) {
    if (!next_line(line)) throw ValidationError("mesh file: missing vertex " + std::to_string(v));
    std::stringstream ss(line);
    std::string sx, sy;
    ss >> sx >> sy;
    if (ss.fail())
      throw ValidationError("mesh file: vertex " + std::to_string(v) + " needs two coordinates");
    vertices[v] = {to_double(sx, "mesh vertex"), to_double(sy, "mesh vertex")};
  }
  std::vector<std::vector<int>> cells(n_cells);
  for (int k = 0; k < n_cells; ++k) {
    if (!next_line(line)) throw ValidationError("mesh file: missing cell " + std::to_string(k));
    std::stringstream ss(line);
    int count = 0;
    ss >> count;
    if (ss.fail() || count < 3)
      throw ValidationError("mesh file: cell " + std::to_string(k) + " has a bad vertex count");
    cells[k].resize(count);
    for (int i = 0; i < count; ++i) ss >> cells[k][i];
    if (ss.fail())
      throw ValidationError("mesh file: cell " + std::to_string(k) + " is truncated");
  }

  PolytopalMesh mesh = PolytopalMesh::from_arrays(std::move(vertices), cells);
  if (mesh.n_faces() != n_faces)
    throw ValidationError("mesh file: header declares " + std::to_string(n_faces) +
                          " faces but the cells induce " + std::to_string(mesh.n_faces()));
  return mesh;
}

void write_mesh_file(const PolytopalMesh& mesh, const std::string& path) {
  auto out = open_out(path);
  write_mesh(mesh, out);
}

PolytopalMesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_snapshot_csv(const SimulationState& state, const PolytopalMesh& mesh,
                        const std::string& path) {
  auto out = open_out(path);
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016" PRIx64, mesh.hash());
  out << "# time = " << fmt(state.t) << "\n";
  out << "# step = " << state.step << "\n";
  out << "# mesh = " << hash_buf << "\n";
  out << "cell,x1,x2,u,v\n";
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const Vec2& c = mesh.cell(k).center;
    out << k << "," << fmt(c.x()) << "," << fmt(c.y()) << "," << fmt(state.u.cell[k]) << ","
        << fmt(state.v.cell[k]) << "\n";
  }
}

SnapshotData read_snapshot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open snapshot '" + path + "'");
  SnapshotData data;
  std::string line;
  std::vector<std::array<double, 4>> rows;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.rfind("# time =", 0) == 0) {
      data.time = to_double(line.substr(8), "snapshot time");
    } else if (line.rfind("# step =", 0) == 0) {
      data.step = static_cast<int>(to_double(line.substr(8), "snapshot step"));
    } else if (line.rfind("# mesh =", 0) == 0) {
      data.mesh_hash = std::strtoull(line.substr(9).c_str(), nullptr, 16);
    } else if (line.rfind("cell,", 0) == 0) {
      header_seen = true;
    } else if (!line.empty()) {
      std::stringstream ss(line);
      std::string token;
      std::vector<std::string> tokens;
      while (std::getline(ss, token, ',')) tokens.push_back(token);
      if (tokens.size() != 5) throw ValidationError("snapshot row with " +
                                                    std::to_string(tokens.size()) + " columns");
      rows.push_back({to_double(tokens[1], "snapshot"), to_double(tokens[2], "snapshot"),
                      to_double(tokens[3], "snapshot"), to_double(tokens[4], "snapshot")});
    }
  }
  if (!header_seen) throw ValidationError("snapshot '" + path + "' lacks the column header");
  const int n = static_cast<int>(rows.size());
  data.x1.resize(n);
  data.x2.resize(n);
  data.u.resize(n);
  data.v.resize(n);
  for (int i = 0; i < n; ++i) {
    data.x1[i] = rows[i][0];
    data.x2[i] = rows[i][1];
    data.u[i] = rows[i][2];
    data.v[i] = rows[i][3];
  }
  return data;
}

void write_snapshot_vtk(const SimulationState& state, const PolytopalMesh& mesh,
                        const std::string& path) {
  auto out = open_out(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "hmmrd snapshot t=" << fmt(state.t) << "\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (int v = 0; v < mesh.n_vertices(); ++v)
    out << fmt(mesh.vertex(v).x()) << " " << fmt(mesh.vertex(v).y()) << " 0\n";
  int list_size = 0;
  for (int k = 0; k < mesh.n_cells(); ++k)
    list_size += 1 + static_cast<int>(mesh.cell(k).vertices.size());
  out << "CELLS " << mesh.n_cells() << " " << list_size << "\n";
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const auto& verts = mesh.cell(k).vertices;
    out << verts.size();
    for (int v : verts) out << " " << v;
    out << "\n";
  }
  out << "CELL_TYPES " << mesh.n_cells() << "\n";
  for (int k = 0; k < mesh.n_cells(); ++k)
    out << (mesh.cell(k).vertices.size() == 3 ? 5 : 7) << "\n";  // triangle / polygon
  out << "CELL_DATA " << mesh.n_cells() << "\n";
  out << "SCALARS u double 1\nLOOKUP_TABLE default\n";
  for (int k = 0; k < mesh.n_cells(); ++k) out << fmt(state.u.cell[k]) << "\n";
  out << "SCALARS v double 1\nLOOKUP_TABLE default\n";
  for (int k = 0; k < mesh.n_cells(); ++k) out << fmt(state.v.cell[k]) << "\n";
}

void write_provenance(const RunConfig& config, const PolytopalMesh& mesh,
                      const std::string& path) {
  auto out = open_out(path);
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016" PRIx64, mesh.hash());
  out << "# resolved configuration\n";
  out << serialize_config(config);
  out << "# mesh\n";
  out << "mesh_hash = " << hash_buf << "\n";
  out << "mesh_cells = " << mesh.n_cells() << "\n";
  out << "mesh_faces = " << mesh.n_faces() << "\n";
  out << "# tolerances\n";
  out << "tolerance_fixed_point = " << fmt(config.fp_tol) << "\n";
  out << "tolerance_linear = " << fmt(config.linear_tol) << "\n";
}

void write_excited_series_csv(const ExcitedSeries& series, const std::string& path) {
  auto out = open_out(path);
  out << "t,excited_fraction,max_u\n";
  for (size_t i = 0; i < series.t.size(); ++i)
    out << fmt(series.t[i]) << "," << fmt(series.fraction[i]) << "," << fmt(series.max_u[i])
        << "\n";
}

}  // namespace hmmrd
