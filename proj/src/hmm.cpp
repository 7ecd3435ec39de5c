#include "hmmrd/hmm.hpp"

#include <cmath>

#include "hmmrd/errors.hpp"

namespace hmmrd {

Eigen::VectorXd HmmCellOperator::restrict_local(const PolytopalMesh& mesh,
                                                const HybridVector& u) const {
  const Cell& c = mesh.cell(cell);
  Eigen::VectorXd loc(1 + c.faces.size());
  loc[0] = u.cell[cell];
  for (size_t j = 0; j < c.faces.size(); ++j) loc[1 + j] = u.face[c.faces[j]];
  return loc;
}

HmmCellOperator assemble_cell(const PolytopalMesh& mesh, int k, double mu, double beta) {
  if (!(mu > 0.0)) throw ValidationError("diffusion coefficient must be positive");
  if (!(beta > 0.0)) throw ValidationError("stabilisation scaling must be positive");
  const Cell& cell = mesh.cell(k);
  const int m = static_cast<int>(cell.faces.size());

  HmmCellOperator op;
  op.cell = k;
  op.gradient = Eigen::Matrix2Xd::Zero(2, 1 + m);
  for (int j = 0; j < m; ++j)
    op.gradient.col(1 + j) = (mesh.face(cell.faces[j]).measure / cell.measure) * mesh.normal(k, j);

  op.residual = Eigen::MatrixXd::Zero(m, 1 + m);
  for (int j = 0; j < m; ++j) {
    const Vec2 xj = mesh.face(cell.faces[j]).center - cell.center;
    op.residual(j, 0) = -1.0;
    op.residual(j, 1 + j) += 1.0;
    op.residual.row(j) -= xj.transpose() * op.gradient;
  }

  op.stabilisation.resize(m);
  for (int j = 0; j < m; ++j) {
    const double d = mesh.distance(k, j);
    op.stabilisation[j] = beta * mu * mesh.diamond_measure(k, j) * kDim / (d * d);
  }

  op.stiffness = mu * cell.measure * op.gradient.transpose() * op.gradient +
                 op.residual.transpose() * op.stabilisation.asDiagonal() * op.residual;
  return op;
}

GlobalDiffusion assemble_global(const PolytopalMesh& mesh, double mu, double beta) {
  const int nc = mesh.n_cells();
  const int nf = mesh.n_faces();
  std::vector<linsolve::Triplet> entries;
  entries.reserve(static_cast<size_t>(mesh.n_incidences()) * 6);

  for (int k = 0; k < nc; ++k) {
    const HmmCellOperator op = assemble_cell(mesh, k, mu, beta);
    const auto& faces = mesh.cell(k).faces;
    const int m = static_cast<int>(faces.size());
    auto global_dof = [&](int local) { return local == 0 ? k : nc + faces[local - 1]; };
    for (int a = 0; a <= m; ++a)
      for (int b = a; b <= m; ++b) {
        const int ga = global_dof(a);
        const int gb = global_dof(b);
        entries.push_back({std::min(ga, gb), std::max(ga, gb), op.stiffness(a, b)});
      }
  }
  return {linsolve::SparseSymMatrix(nc + nf, std::move(entries)), nc, nf, mu};
}

double GlobalDiffusion::quadratic_form(const HybridVector& u) const {
  Eigen::VectorXd x(n_cells + n_faces);
  x.head(n_cells) = u.cell;
  x.tail(n_faces) = u.face;
  return x.dot(matrix.multiply(x));
}

Eigen::VectorXd fluxes(const PolytopalMesh& mesh, const HmmCellOperator& op,
                       const Eigen::VectorXd& local_u) {
  const Cell& cell = mesh.cell(op.cell);
  const Eigen::VectorXd r = op.stiffness * local_u;
  Eigen::VectorXd f(cell.faces.size());
  for (size_t j = 0; j < cell.faces.size(); ++j)
    f[j] = -r[1 + j] / mesh.face(cell.faces[j]).measure;
  return f;
}

Eigen::VectorXd flux_conservativity_residual(const PolytopalMesh& mesh, const HybridVector& u,
                                             double mu, double beta) {
  Eigen::VectorXd residual = Eigen::VectorXd::Zero(mesh.n_faces());
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const HmmCellOperator op = assemble_cell(mesh, k, mu, beta);
    const Eigen::VectorXd f = fluxes(mesh, op, op.restrict_local(mesh, u));
    const auto& faces = mesh.cell(k).faces;
    for (size_t j = 0; j < faces.size(); ++j) residual[faces[j]] += f[j];
  }
  return residual;
}

SchurFaceSystem::SchurFaceSystem(const GlobalDiffusion& global,
                                 const Eigen::VectorXd& cell_block_diag)
    : n_cells_(global.n_cells), n_faces_(global.n_faces) {
  if (cell_block_diag.size() != n_cells_)
    throw ValidationError("cell block diagonal size mismatch");
  for (int k = 0; k < n_cells_; ++k)
    if (!(cell_block_diag[k] > 0.0))
      throw SingularBlock("non-positive cell block entry at cell " + std::to_string(k));

  // split the hybrid matrix into the diagonal cell block, the cell-face
  // coupling rows and the face-face block
  cell_diag_ = cell_block_diag;
  std::vector<std::vector<std::pair<int, double>>> rows(n_cells_);
  std::vector<linsolve::Triplet> ff_entries;
  for (const linsolve::Triplet& t : global.matrix.upper()) {
    const bool row_cell = t.row < n_cells_;
    const bool col_cell = t.col < n_cells_;
    if (row_cell && col_cell) {
      if (t.row != t.col)
        throw ValidationError("unexpected cell-cell coupling in the hybrid matrix");
      cell_diag_[t.row] += t.value;
    } else if (row_cell) {
      rows[t.row].emplace_back(t.col - n_cells_, t.value);
    } else {
      ff_entries.push_back({t.row - n_cells_, t.col - n_cells_, t.value});
    }
  }
  for (int k = 0; k < n_cells_; ++k)
    if (!(cell_diag_[k] > 0.0))
      throw SingularBlock("condensation pivot vanished at cell " + std::to_string(k));

  row_offset_.assign(n_cells_ + 1, 0);
  for (int k = 0; k < n_cells_; ++k)
    row_offset_[k + 1] = row_offset_[k] + static_cast<int>(rows[k].size());
  row_face_.resize(row_offset_[n_cells_]);
  row_coeff_.resize(row_offset_[n_cells_]);
  for (int k = 0; k < n_cells_; ++k)
    for (size_t i = 0; i < rows[k].size(); ++i) {
      row_face_[row_offset_[k] + i] = rows[k][i].first;
      row_coeff_[row_offset_[k] + i] = rows[k][i].second;
    }

  // S = A_ff - A_fc D^{-1} A_cf, one rank-one update per cell
  for (int k = 0; k < n_cells_; ++k) {
    const double inv_d = 1.0 / cell_diag_[k];
    for (int i = row_offset_[k]; i < row_offset_[k + 1]; ++i)
      for (int j = i; j < row_offset_[k + 1]; ++j) {
        const int fa = std::min(row_face_[i], row_face_[j]);
        const int fb = std::max(row_face_[i], row_face_[j]);
        ff_entries.push_back({fa, fb, -row_coeff_[i] * row_coeff_[j] * inv_d});
      }
  }
  face_matrix_.emplace(n_faces_, std::move(ff_entries));
}

Eigen::VectorXd SchurFaceSystem::reduce_rhs(const Eigen::VectorXd& b_cells,
                                            const Eigen::VectorXd& b_faces) const {
  Eigen::VectorXd rhs = b_faces;
  for (int k = 0; k < n_cells_; ++k) {
    const double scaled = b_cells[k] / cell_diag_[k];
    for (int i = row_offset_[k]; i < row_offset_[k + 1]; ++i)
      rhs[row_face_[i]] -= row_coeff_[i] * scaled;
  }
  return rhs;
}

Eigen::VectorXd SchurFaceSystem::recover_cells(const Eigen::VectorXd& b_cells,
                                               const Eigen::VectorXd& x_faces) const {
  Eigen::VectorXd cells(n_cells_);
  for (int k = 0; k < n_cells_; ++k) {
    double acc = b_cells[k];
    for (int i = row_offset_[k]; i < row_offset_[k + 1]; ++i)
      acc -= row_coeff_[i] * x_faces[row_face_[i]];
    cells[k] = acc / cell_diag_[k];
  }
  return cells;
}

SchurFaceSystem schur_face_system(const GlobalDiffusion& global,
                                  const Eigen::VectorXd& cell_block_diag) {
  return SchurFaceSystem(global, cell_block_diag);
}

}  // namespace hmmrd
