#include "hmmrd/gdm.hpp"

#include <cmath>

#include "hmmrd/errors.hpp"
#include "hmmrd/hmm.hpp"

namespace hmmrd {

namespace {

const double kSqrtDim = std::sqrt(static_cast<double>(kDim));

// 3-point edge-midpoint rule on a triangle, exact for quadratics
template <typename F>
auto triangle_rule(const Vec2& a, const Vec2& b, const Vec2& c, const F& f) {
  const double area = 0.5 * std::abs((b - a).x() * (c - a).y() - (c - a).x() * (b - a).y());
  const double w = area / 3.0;
  return (f(0.5 * (a + b)) + f(0.5 * (b + c)) + f(0.5 * (c + a))) * w;
}

}  // namespace

double integrate_cell(const PolytopalMesh& mesh, int k, const ScalarField& f) {
  const Cell& cell = mesh.cell(k);
  if (cell.vertices.size() == 3) {
    const Vec2& a = mesh.vertex(cell.vertices[0]);
    const Vec2& b = mesh.vertex(cell.vertices[1]);
    const Vec2& c = mesh.vertex(cell.vertices[2]);
    return triangle_rule(a, b, c, f);
  }
  // general polygon: fan of diamond triangles around the cell center
  double sum = 0.0;
  for (size_t j = 0; j < cell.faces.size(); ++j) {
    const auto [a, b] = mesh.face_span(k, static_cast<int>(j));
    sum += triangle_rule(cell.center, a, b, f);
  }
  return sum;
}

Vec2 integrate_diamond_vector(const PolytopalMesh& mesh, int k, int j, const VectorField& f) {
  const auto [a, b] = mesh.face_span(k, j);
  return triangle_rule(mesh.cell(k).center, a, b, f);
}

double integrate_diamond(const PolytopalMesh& mesh, int k, int j, const ScalarField& f) {
  const auto [a, b] = mesh.face_span(k, j);
  return triangle_rule(mesh.cell(k).center, a, b, f);
}

Vec2 cell_gradient(const PolytopalMesh& mesh, const HybridVector& phi, int k) {
  const Cell& cell = mesh.cell(k);
  Vec2 g = Vec2::Zero();
  for (size_t j = 0; j < cell.faces.size(); ++j) {
    const Face& f = mesh.face(cell.faces[j]);
    g += f.measure * phi.face[cell.faces[j]] * mesh.normal(k, static_cast<int>(j));
  }
  return g / cell.measure;
}

Eigen::VectorXd stabilisation_residual(const PolytopalMesh& mesh, const HybridVector& phi, int k) {
  const Cell& cell = mesh.cell(k);
  const Vec2 grad = cell_gradient(mesh, phi, k);
  Eigen::VectorXd r(cell.faces.size());
  for (size_t j = 0; j < cell.faces.size(); ++j) {
    const Face& f = mesh.face(cell.faces[j]);
    r[j] = phi.face[cell.faces[j]] - phi.cell[k] - grad.dot(f.center - cell.center);
  }
  return r;
}

DiamondGradientField reconstruct_gradient(const PolytopalMesh& mesh, const HybridVector& phi) {
  DiamondGradientField field;
  field.vectors.resize(2, mesh.n_incidences());
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const Cell& cell = mesh.cell(k);
    const Vec2 grad = cell_gradient(mesh, phi, k);
    const Eigen::VectorXd res = stabilisation_residual(mesh, phi, k);
    for (size_t j = 0; j < cell.faces.size(); ++j) {
      const int jj = static_cast<int>(j);
      field.vectors.col(mesh.incidence_index(k, jj)) =
          grad + (kSqrtDim / mesh.distance(k, jj)) * res[j] * mesh.normal(k, jj);
    }
  }
  return field;
}

PiecewiseConstantField pi_d(const PolytopalMesh&, const HybridVector& phi) {
  return {phi.cell};
}

PiecewiseConstantField pi_d_prime(const PolytopalMesh&, const CellVector& psi) {
  return {psi.cell};
}

HybridVector interpolate_initial_u(const PolytopalMesh& mesh, const ScalarField& u_ini,
                                   FaceInterpolation mode) {
  HybridVector w = HybridVector::zero(mesh);
  for (int k = 0; k < mesh.n_cells(); ++k)
    w.cell[k] = integrate_cell(mesh, k, u_ini) / mesh.cell(k).measure;
  if (mode == FaceInterpolation::CenterValue)
    for (int s = 0; s < mesh.n_faces(); ++s)
      w.face[s] = u_ini(mesh.face(s).center);
  return w;
}

CellVector interpolate_initial_v(const PolytopalMesh& mesh, const ScalarField& v_ini) {
  CellVector w = CellVector::zero(mesh);
  for (int k = 0; k < mesh.n_cells(); ++k)
    w.cell[k] = integrate_cell(mesh, k, v_ini) / mesh.cell(k).measure;
  return w;
}

HybridVector interpolate_centers(const PolytopalMesh& mesh, const ScalarField& phi) {
  HybridVector w = HybridVector::zero(mesh);
  for (int k = 0; k < mesh.n_cells(); ++k) w.cell[k] = phi(mesh.cell(k).center);
  for (int s = 0; s < mesh.n_faces(); ++s) w.face[s] = phi(mesh.face(s).center);
  return w;
}

double l2_norm_cells(const PolytopalMesh& mesh, const Eigen::VectorXd& cell_values) {
  double sum = 0.0;
  for (int k = 0; k < mesh.n_cells(); ++k)
    sum += mesh.cell(k).measure * cell_values[k] * cell_values[k];
  return std::sqrt(sum);
}

double l2_norm_gradient(const PolytopalMesh& mesh, const DiamondGradientField& grad) {
  double sum = 0.0;
  for (int k = 0; k < mesh.n_cells(); ++k)
    for (size_t j = 0; j < mesh.cell(k).faces.size(); ++j) {
      const int jj = static_cast<int>(j);
      sum += mesh.diamond_measure(k, jj) * grad.vectors.col(mesh.incidence_index(k, jj)).squaredNorm();
    }
  return std::sqrt(sum);
}

double discrete_norm(const PolytopalMesh& mesh, const HybridVector& phi) {
  return l2_norm_cells(mesh, phi.cell) + l2_norm_gradient(mesh, reconstruct_gradient(mesh, phi));
}

// ---------------------------------------------------------- quality measures

namespace {

// For cell k, accumulates into b the dof coefficients of the linear form
//   w -> sum_j (grad_D w)|_{D_{K,j}} . I_j
// where I[j] is a given per-diamond vector (an integral of some field).
// Hybrid dof layout: cells first, then faces.
void accumulate_gradient_form(const PolytopalMesh& mesh, int k, const std::vector<Vec2>& I,
                              Eigen::VectorXd& b) {
  const Cell& cell = mesh.cell(k);
  const int m = static_cast<int>(cell.faces.size());
  const int nc = mesh.n_cells();

  // grad_K columns: zero for the cell dof, |sigma|/|K| n for face dofs
  std::vector<Vec2> gcol(m);
  for (int j = 0; j < m; ++j)
    gcol[j] = (mesh.face(cell.faces[j]).measure / cell.measure) * mesh.normal(k, j);

  for (int j = 0; j < m; ++j) {
    const Vec2 nj = mesh.normal(k, j);
    const double scale = kSqrtDim / mesh.distance(k, j);
    const Vec2 xj = mesh.face(cell.faces[j]).center - cell.center;
    // cell dof: R_{j,cell} = -1
    b[k] += scale * (-1.0) * nj.dot(I[j]);
    for (int l = 0; l < m; ++l) {
      // face dof l: grad part + residual part (delta_{jl} - x_j . gcol_l)
      const double r = (j == l ? 1.0 : 0.0) - xj.dot(gcol[l]);
      b[nc + cell.faces[l]] += (gcol[l] + scale * r * nj).dot(I[j]);
    }
  }
}

Eigen::VectorXd solve_gram(const linsolve::SparseSymMatrix& G, const Eigen::VectorXd& b,
                           const MeasureOptions& opts) {
  if (G.dim() <= opts.dense_threshold) return linsolve::dense_solve(G, b);
  auto [x, report] = linsolve::cg_solve(G, b, opts.solver_tol, opts.max_iterations,
                                        linsolve::Preconditioner::Jacobi);
  if (!report.converged)
    throw NonConvergence("gram system stalled at relative residual " +
                         std::to_string(report.relative_residual) + " after " +
                         std::to_string(report.iterations) + " iterations");
  return x;
}

}  // namespace

linsolve::SparseSymMatrix gram_matrix(const PolytopalMesh& mesh) {
  // (Pi_D w, Pi_D w) + (grad_D w, grad_D w): cell mass plus the unit-diffusion
  // stiffness, whose quadratic form is exactly the diamond-wise integral.
  GlobalDiffusion stiffness = assemble_global(mesh, 1.0);
  std::vector<linsolve::Triplet> entries = stiffness.matrix.upper();
  for (int k = 0; k < mesh.n_cells(); ++k)
    entries.push_back({k, k, mesh.cell(k).measure});
  return {stiffness.matrix.dim(), std::move(entries)};
}

double consistency_measure_u(const PolytopalMesh& mesh, const ScalarField& phi,
                             const VectorField& grad_phi, const MeasureOptions& opts) {
  const int nc = mesh.n_cells();
  const int ndof = nc + mesh.n_faces();
  const linsolve::SparseSymMatrix G = gram_matrix(mesh);

  Eigen::VectorXd b = Eigen::VectorXd::Zero(ndof);
  for (int k = 0; k < nc; ++k) {
    b[k] += integrate_cell(mesh, k, phi);
    const int m = static_cast<int>(mesh.cell(k).faces.size());
    std::vector<Vec2> I(m);
    for (int j = 0; j < m; ++j) I[j] = integrate_diamond_vector(mesh, k, j, grad_phi);
    accumulate_gradient_form(mesh, k, I, b);
  }

  const Eigen::VectorXd w = solve_gram(G, b, opts);
  // evaluate the minimized functional at the solution (no cancellation)
  return approximation_distance(mesh, {w.head(nc), w.tail(mesh.n_faces())}, phi, grad_phi);
}

double approximation_distance(const PolytopalMesh& mesh, const HybridVector& w,
                              const ScalarField& phi, const VectorField& grad_phi) {
  double mass_part = 0.0;
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const double wk = w.cell[k];
    mass_part += integrate_cell(mesh, k, [&](const Vec2& x) {
      const double diff = wk - phi(x);
      return diff * diff;
    });
  }
  double grad_part = 0.0;
  const DiamondGradientField grad = reconstruct_gradient(mesh, w);
  for (int k = 0; k < mesh.n_cells(); ++k)
    for (size_t j = 0; j < mesh.cell(k).faces.size(); ++j) {
      const int jj = static_cast<int>(j);
      const Vec2 g = grad.vectors.col(mesh.incidence_index(k, jj));
      grad_part += integrate_diamond(mesh, k, jj, [&](const Vec2& x) {
        return (g - grad_phi(x)).squaredNorm();
      });
    }
  return std::sqrt(mass_part + grad_part);
}

double consistency_measure_v(const PolytopalMesh& mesh, const ScalarField& psi) {
  double sum = 0.0;
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const double avg = integrate_cell(mesh, k, psi) / mesh.cell(k).measure;
    sum += integrate_cell(mesh, k, [&](const Vec2& x) {
      const double diff = avg - psi(x);
      return diff * diff;
    });
  }
  return std::sqrt(sum);
}

double limit_conformity_measure(const PolytopalMesh& mesh, const VectorField& psi,
                                const ScalarField& div_psi, const MeasureOptions& opts) {
  // the measure is defined on fields with vanishing normal trace
  double scale = 1.0;
  for (int s = 0; s < mesh.n_faces(); ++s) scale = std::max(scale, psi(mesh.face(s).center).norm());
  for (int s = 0; s < mesh.n_faces(); ++s) {
    if (!mesh.is_boundary(s)) continue;
    const Face& f = mesh.face(s);
    if (std::abs(psi(f.center).dot(f.normal)) > 1e-10 * scale)
      throw ValidationError("limit-conformity measure requires psi.n = 0 on the boundary");
  }

  const int nc = mesh.n_cells();
  const int ndof = nc + mesh.n_faces();
  const linsolve::SparseSymMatrix G = gram_matrix(mesh);

  Eigen::VectorXd b = Eigen::VectorXd::Zero(ndof);
  for (int k = 0; k < nc; ++k) {
    b[k] += integrate_cell(mesh, k, div_psi);
    const int m = static_cast<int>(mesh.cell(k).faces.size());
    std::vector<Vec2> I(m);
    for (int j = 0; j < m; ++j) I[j] = integrate_diamond_vector(mesh, k, j, psi);
    accumulate_gradient_form(mesh, k, I, b);
  }

  const Eigen::VectorXd w = solve_gram(G, b, opts);
  return std::sqrt(std::max(0.0, b.dot(w)));
}

}  // namespace hmmrd
