// File formats: the line-based mesh exchange format, CSV and legacy-VTK
// snapshot writers, and the provenance record. Exact grammars are documented
// in docs/formats.md. CSV carries 17 significant digits so that identical
// runs diff bitwise and read-back reproduces every double exactly.

#ifndef HMMRD_IO_HPP
#define HMMRD_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hmmrd/config.hpp"
#include "hmmrd/mesh.hpp"
#include "hmmrd/timestepper.hpp"

namespace hmmrd {

void write_mesh(const PolytopalMesh& mesh, std::ostream& out);
PolytopalMesh read_mesh(std::istream& in);
void write_mesh_file(const PolytopalMesh& mesh, const std::string& path);
PolytopalMesh read_mesh_file(const std::string& path);

void write_snapshot_csv(const SimulationState& state, const PolytopalMesh& mesh,
                        const std::string& path);

struct SnapshotData {
  double time = 0.0;
  int step = 0;
  std::uint64_t mesh_hash = 0;
  Eigen::VectorXd x1, x2, u, v;
};

SnapshotData read_snapshot_csv(const std::string& path);

/// Legacy ASCII unstructured grid with cell data arrays `u` then `v`.
void write_snapshot_vtk(const SimulationState& state, const PolytopalMesh& mesh,
                        const std::string& path);

/// Resolved config echo, mesh hash, and the tolerance set of the run.
void write_provenance(const RunConfig& config, const PolytopalMesh& mesh,
                      const std::string& path);

void write_excited_series_csv(const ExcitedSeries& series, const std::string& path);

}  // namespace hmmrd

#endif
