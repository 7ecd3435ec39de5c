// Per-cell assembly of the stabilised hybrid bilinear form, the global
// diffusion matrix, the flux operators F_{K,sigma} and their conservativity
// residuals, and the static condensation onto the face unknowns.
//
// Local dof order in every cell block: [cell value, face values in E_K order].
// Global dof order: cells 0..nc-1, then faces nc..nc+nf-1.
//
// With the default stabilisation B_K = beta mu diag(|D_{K,sigma}| d /
// d_{K,sigma}^2) and beta = 1, the local form equals mu times the diamond-wise
// integral of grad_D u . grad_D w exactly, which ties this module to the
// reconstruction formulas of gdm.hpp.

#ifndef HMMRD_HMM_HPP
#define HMMRD_HMM_HPP

#include <optional>
#include <vector>

#include "hmmrd/linsolve.hpp"
#include "hmmrd/mesh.hpp"
#include "hmmrd/vectors.hpp"

namespace hmmrd {

struct HmmCellOperator {
  int cell = -1;
  Eigen::Matrix2Xd gradient;      ///< G_K: local dofs -> grad_K (cell column is zero)
  Eigen::MatrixXd residual;       ///< R_K: local dofs -> per-face residuals
  Eigen::VectorXd stabilisation;  ///< diagonal of B_K
  Eigen::MatrixXd stiffness;      ///< A_K = mu |K| G^T G + R^T B_K R

  /// Restriction of a hybrid vector to the local dofs of this cell.
  Eigen::VectorXd restrict_local(const PolytopalMesh& mesh, const HybridVector& u) const;
};

HmmCellOperator assemble_cell(const PolytopalMesh& mesh, int k, double mu, double beta = 1.0);

struct GlobalDiffusion {
  linsolve::SparseSymMatrix matrix;
  int n_cells;
  int n_faces;
  double mu;

  double quadratic_form(const HybridVector& u) const;
};

GlobalDiffusion assemble_global(const PolytopalMesh& mesh, double mu, double beta = 1.0);

/// Fluxes F_{K,sigma}(u) of one cell, defined by
///   sum_sigma |sigma| F_{K,sigma}(u) (w_K - w_sigma) = mu int_K grad_D u . grad_D w
/// for every local w; reads off as -(A_K u)_sigma / |sigma|.
Eigen::VectorXd fluxes(const PolytopalMesh& mesh, const HmmCellOperator& op,
                       const Eigen::VectorXd& local_u);

/// Per-face conservativity defect: F_K + F_L on interior faces, F_K on
/// boundary faces. Vanishes (to solver tolerance) at solutions of one
/// implicit step; arbitrary vectors return their raw residuals.
Eigen::VectorXd flux_conservativity_residual(const PolytopalMesh& mesh, const HybridVector& u,
                                             double mu, double beta = 1.0);

/// Static condensation of [diag(c) + A_cc, A_cf; A_fc, A_ff] onto the faces.
/// The cell block of the diffusion matrix is diagonal (cells only couple
/// through faces), so elimination is exact and cheap.
class SchurFaceSystem {
public:
  SchurFaceSystem(const GlobalDiffusion& global, const Eigen::VectorXd& cell_block_diag);

  const linsolve::SparseSymMatrix& face_matrix() const { return *face_matrix_; }

  /// Reduced right-hand side b_f - A_fc D^{-1} b_c.
  Eigen::VectorXd reduce_rhs(const Eigen::VectorXd& b_cells, const Eigen::VectorXd& b_faces) const;

  /// Cell values D^{-1} (b_c - A_cf x_f).
  Eigen::VectorXd recover_cells(const Eigen::VectorXd& b_cells, const Eigen::VectorXd& x_faces) const;

private:
  int n_cells_;
  int n_faces_;
  Eigen::VectorXd cell_diag_;          // D = cell_block_diag + diag(A_cc)
  std::vector<int> row_offset_;        // per-cell slice of the A_cf rows
  std::vector<int> row_face_;          // face ids (global face numbering)
  std::vector<double> row_coeff_;
  std::optional<linsolve::SparseSymMatrix> face_matrix_;
};

SchurFaceSystem schur_face_system(const GlobalDiffusion& global,
                                  const Eigen::VectorXd& cell_block_diag);

}  // namespace hmmrd

#endif
