// Elements of the discrete spaces: hybrid vectors (one value per cell and one
// per face), cell vectors, and the reconstructed fields they map to.

#ifndef HMMRD_VECTORS_HPP
#define HMMRD_VECTORS_HPP

#include <Eigen/Dense>

#include "hmmrd/mesh.hpp"

namespace hmmrd {

/// Element of X_D: (phi_K)_K together with (phi_sigma)_sigma.
struct HybridVector {
  Eigen::VectorXd cell;
  Eigen::VectorXd face;

  static HybridVector zero(const PolytopalMesh& mesh) {
    return {Eigen::VectorXd::Zero(mesh.n_cells()), Eigen::VectorXd::Zero(mesh.n_faces())};
  }
  static HybridVector constant(const PolytopalMesh& mesh, double c) {
    return {Eigen::VectorXd::Constant(mesh.n_cells(), c), Eigen::VectorXd::Constant(mesh.n_faces(), c)};
  }
};

/// Element of Y_D: one value per cell.
struct CellVector {
  Eigen::VectorXd cell;

  static CellVector zero(const PolytopalMesh& mesh) {
    return {Eigen::VectorXd::Zero(mesh.n_cells())};
  }
  static CellVector constant(const PolytopalMesh& mesh, double c) {
    return {Eigen::VectorXd::Constant(mesh.n_cells(), c)};
  }
};

/// The L^2 function Pi_D phi (or Pi_D' psi): constant on each cell.
struct PiecewiseConstantField {
  Eigen::VectorXd values;
};

/// The field grad_D phi: one constant vector per diamond D_{K,sigma},
/// integrated with weight |D_{K,sigma}|. Column i holds the vector of the
/// incidence with flat index i (see PolytopalMesh::incidence_index).
struct DiamondGradientField {
  Eigen::Matrix2Xd vectors;
};

}  // namespace hmmrd

#endif
