// Reconstruction operators, interpolants, discrete norms, and the computable
// quality measures of a hybrid gradient discretisation:
//
//   grad_K phi = (1/|K|) sum_sigma |sigma| phi_sigma n_{K,sigma}
//   R_{K,sigma}(phi) = phi_sigma - phi_K - grad_K phi . (x_sigma - x_K)
//   grad_D phi = grad_K phi + (sqrt(d)/d_{K,sigma}) R_{K,sigma}(phi) n_{K,sigma}
//
// on each diamond D_{K,sigma}; Pi_D and Pi_D' are the piecewise-constant
// cell-value reconstructions. The quality measures S_D, S_D' and W_D are
// evaluated exactly on Hilbert surrogates of the defining min/sup problems
// (one sparse SPD solve each; the surrogate is equivalent to the sum-of-norms
// form within a factor sqrt(2), which leaves decay orders unchanged).

#ifndef HMMRD_GDM_HPP
#define HMMRD_GDM_HPP

#include <functional>

#include "hmmrd/linsolve.hpp"
#include "hmmrd/mesh.hpp"
#include "hmmrd/vectors.hpp"

namespace hmmrd {

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

// ---------------------------------------------------------------- quadrature

/// Degree-2 exact rule: the 3-point edge-midpoint rule on triangular cells,
/// and its diamond-wise application on general polygons.
double integrate_cell(const PolytopalMesh& mesh, int k, const ScalarField& f);

/// Componentwise degree-2 rule over the diamond triangle of incidence (k, j).
Vec2 integrate_diamond_vector(const PolytopalMesh& mesh, int k, int j, const VectorField& f);
double integrate_diamond(const PolytopalMesh& mesh, int k, int j, const ScalarField& f);

// ------------------------------------------------------ reconstruction ops

Vec2 cell_gradient(const PolytopalMesh& mesh, const HybridVector& phi, int k);

/// R_K(phi), ordered like the cell's face list.
Eigen::VectorXd stabilisation_residual(const PolytopalMesh& mesh, const HybridVector& phi, int k);

DiamondGradientField reconstruct_gradient(const PolytopalMesh& mesh, const HybridVector& phi);

PiecewiseConstantField pi_d(const PolytopalMesh& mesh, const HybridVector& phi);
PiecewiseConstantField pi_d_prime(const PolytopalMesh& mesh, const CellVector& psi);

// ------------------------------------------------------------- interpolants

/// Face-value convention of the interpolant J_D. Face-center sampling keeps
/// ||grad_D J_D u|| bounded under refinement; the zero convention reproduces
/// the bare cell-average interpolant and is kept for fidelity experiments.
enum class FaceInterpolation { CenterValue, Zero };

HybridVector interpolate_initial_u(const PolytopalMesh& mesh, const ScalarField& u_ini,
                                   FaceInterpolation mode = FaceInterpolation::CenterValue);
CellVector interpolate_initial_v(const PolytopalMesh& mesh, const ScalarField& v_ini);

/// Samples phi at cell centers and face centers; reproduces affine functions
/// exactly through the reconstruction operators.
HybridVector interpolate_centers(const PolytopalMesh& mesh, const ScalarField& phi);

// -------------------------------------------------------------------- norms

double l2_norm_cells(const PolytopalMesh& mesh, const Eigen::VectorXd& cell_values);
double l2_norm_gradient(const PolytopalMesh& mesh, const DiamondGradientField& grad);

/// || Pi_D phi ||_{L2} + || grad_D phi ||_{L2}.
double discrete_norm(const PolytopalMesh& mesh, const HybridVector& phi);

// ---------------------------------------------------------- quality measures

struct MeasureOptions {
  double solver_tol = 1e-12;
  int max_iterations = 200000;
  int dense_threshold = 1200;  ///< below this dof count, solve directly
};

/// Gram matrix of the surrogate inner product (Pi_D w, Pi_D w)_{L2} +
/// (grad_D w, grad_D w)_{L2} over the hybrid dofs (cells first, then faces).
linsolve::SparseSymMatrix gram_matrix(const PolytopalMesh& mesh);

/// (||Pi_D w - phi||^2 + ||grad_D w - grad phi||^2)^{1/2} by quadrature;
/// consistency_measure_u returns its minimum over w.
double approximation_distance(const PolytopalMesh& mesh, const HybridVector& w,
                              const ScalarField& phi, const VectorField& grad_phi);

/// Consistency measure for the u-space: the exact minimum over w in X_D of
/// (||Pi_D w - phi||^2 + ||grad_D w - grad phi||^2)^{1/2}.
double consistency_measure_u(const PolytopalMesh& mesh, const ScalarField& phi,
                             const VectorField& grad_phi, const MeasureOptions& opts = {});

/// Consistency measure for the v-space; the minimizer is the cell-average
/// interpolant, so this is || psi - cell averages ||_{L2} by quadrature.
double consistency_measure_v(const PolytopalMesh& mesh, const ScalarField& psi);

/// Limit-conformity measure: the dual norm of
///   w -> integral( grad_D w . psi + Pi_D w div psi )
/// with respect to the surrogate inner product. Requires psi.n = 0 on the
/// boundary (checked at face centers); throws ValidationError otherwise.
double limit_conformity_measure(const PolytopalMesh& mesh, const VectorField& psi,
                                const ScalarField& div_psi, const MeasureOptions& opts = {});

}  // namespace hmmrd

#endif
