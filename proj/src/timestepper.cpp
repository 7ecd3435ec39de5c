#include "hmmrd/timestepper.hpp"

#include <cmath>
#include <string>

#include "hmmrd/errors.hpp"

namespace hmmrd {

TimeGrid TimeGrid::uniform(double final_time, double dt) {
  if (!(final_time > 0.0)) throw ValidationError("final time must be positive");
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  if (dt > final_time) dt = final_time;
  TimeGrid grid;
  const int n_full = static_cast<int>(std::floor(final_time / dt * (1.0 + 1e-12)));
  grid.times.reserve(n_full + 2);
  for (int n = 0; n <= n_full; ++n) grid.times.push_back(n * dt);
  if (grid.times.back() < final_time - 1e-9 * dt)
    grid.times.push_back(final_time);
  else
    grid.times.back() = final_time;
  return grid;
}

double TimeGrid::max_step() const {
  double m = 0.0;
  for (int n = 0; n < n_steps(); ++n) m = std::max(m, step(n));
  return m;
}

ImplicitDiffusionSolver::ImplicitDiffusionSolver(const PolytopalMesh& mesh,
                                                 const GlobalDiffusion& global, double dt,
                                                 const StepperConfig& config)
    : mesh_(&mesh),
      dt_(dt),
      config_(config),
      schur_(global, [&] {
        Eigen::VectorXd diag(mesh.n_cells());
        for (int k = 0; k < mesh.n_cells(); ++k) diag[k] = mesh.cell(k).measure / dt;
        return diag;
      }()) {
  if (!(dt > 0.0)) throw ValidationError("time step must be positive");
  const int ndof = mesh.n_cells() + mesh.n_faces();
  dense_ = config.linear_solver == LinearSolverKind::Dense ||
           (config.linear_solver == LinearSolverKind::Auto && ndof <= config.dense_threshold);
  if (dense_) {
    face_factor_.compute(schur_.face_matrix().dense());
    if (face_factor_.info() != Eigen::Success)
      throw LinearSolverFailure("Cholesky factorization of the face system failed");
  }
}

HybridVector ImplicitDiffusionSolver::solve(const Eigen::VectorXd& rhs_cells,
                                            const HybridVector& warm_start) const {
  const Eigen::VectorXd rhs_faces =
      schur_.reduce_rhs(rhs_cells, Eigen::VectorXd::Zero(mesh_->n_faces()));
  Eigen::VectorXd x_faces;
  if (dense_) {
    x_faces = face_factor_.solve(rhs_faces);
  } else {
    auto [x, report] =
        linsolve::cg_solve(schur_.face_matrix(), rhs_faces, config_.linear_tol,
                           config_.linear_max_iters, linsolve::Preconditioner::Jacobi,
                           &warm_start.face);
    if (!report.converged)
      throw LinearSolverFailure("face system CG stalled at relative residual " +
                                std::to_string(report.relative_residual));
    x_faces = std::move(x);
  }
  return {schur_.recover_cells(rhs_cells, x_faces), std::move(x_faces)};
}

namespace {

double relative_change(const PolytopalMesh& mesh, const Eigen::VectorXd& next,
                       const Eigen::VectorXd& prev) {
  const double num = l2_norm_cells(mesh, next - prev);
  const double den = std::max(l2_norm_cells(mesh, next), l2_norm_cells(mesh, prev));
  return den > 0.0 ? num / den : 0.0;
}

Eigen::VectorXd reaction_rhs_cells(const PolytopalMesh& mesh, const ImplicitDiffusionSolver& solver,
                                   const AffineReaction& reaction, const SimulationState& state,
                                   const Eigen::VectorXd& frozen_u, const Eigen::VectorXd& frozen_v) {
  Eigen::VectorXd rhs(mesh.n_cells());
  const double inv_dt = 1.0 / solver.dt();
  for (int k = 0; k < mesh.n_cells(); ++k) {
    const double mk = mesh.cell(k).measure;
    rhs[k] = mk * (inv_dt * state.u.cell[k] + reaction.f(frozen_u[k], frozen_v[k]));
  }
  return rhs;
}

Eigen::VectorXd v_update(const PolytopalMesh& mesh, double dt, const AffineReaction& reaction,
                         const Eigen::VectorXd& v_old, const Eigen::VectorXd& frozen_u,
                         const Eigen::VectorXd& frozen_v) {
  Eigen::VectorXd v(mesh.n_cells());
  for (int k = 0; k < mesh.n_cells(); ++k)
    v[k] = v_old[k] + dt * reaction.g(frozen_u[k], frozen_v[k]);
  return v;
}

}  // namespace

SimulationState step_implicit(const PolytopalMesh& mesh, const ImplicitDiffusionSolver& solver,
                              const AffineReaction& reaction, const SimulationState& state,
                              const StepperConfig& config) {
  const double dt = solver.dt();
  Eigen::VectorXd frozen_u = state.u.cell;
  Eigen::VectorXd frozen_v = state.v.cell;
  HybridVector u_next = state.u;

  for (int it = 0; it < config.max_fixed_point_iters; ++it) {
    u_next = solver.solve(reaction_rhs_cells(mesh, solver, reaction, state, frozen_u, frozen_v),
                          u_next);
    Eigen::VectorXd v_next = v_update(mesh, dt, reaction, state.v.cell, frozen_u, frozen_v);
    const double du = relative_change(mesh, u_next.cell, frozen_u);
    const double dv = relative_change(mesh, v_next, frozen_v);
    frozen_u = u_next.cell;
    frozen_v = std::move(v_next);
    if (du <= config.fixed_point_tol && dv <= config.fixed_point_tol)
      return {std::move(u_next), {std::move(frozen_v)}, state.t + dt, state.step + 1};
  }
  throw FixedPointDivergence("fixed-point iteration did not settle within " +
                             std::to_string(config.max_fixed_point_iters) + " iterations");
}

SimulationState step_semi_implicit(const PolytopalMesh& mesh, const ImplicitDiffusionSolver& solver,
                                   const AffineReaction& reaction, const SimulationState& state,
                                   const StepperConfig&) {
  const double dt = solver.dt();
  HybridVector u_next =
      solver.solve(reaction_rhs_cells(mesh, solver, reaction, state, state.u.cell, state.v.cell),
                   state.u);
  Eigen::VectorXd v_next = v_update(mesh, dt, reaction, state.v.cell, state.u.cell, state.v.cell);
  return {std::move(u_next), {std::move(v_next)}, state.t + dt, state.step + 1};
}

RunResult run(const PolytopalMesh& mesh, const GlobalDiffusion& global,
              const AffineReaction& reaction, const ScalarField& u_ini, const ScalarField& v_ini,
              const TimeGrid& grid, const StepperConfig& config,
              const std::vector<Observer>& observers, FaceInterpolation face_mode) {
  SimulationState state{interpolate_initial_u(mesh, u_ini, face_mode),
                        interpolate_initial_v(mesh, v_ini), 0.0, 0};

  TrajectoryStats stats;
  auto record = [&](const SimulationState& s) {
    stats.t.push_back(s.t);
    stats.l2_u.push_back(l2_norm_cells(mesh, s.u.cell));
    stats.l2_v.push_back(l2_norm_cells(mesh, s.v.cell));
    stats.l2_grad_u.push_back(l2_norm_gradient(mesh, reconstruct_gradient(mesh, s.u)));
  };
  record(state);
  for (const Observer& obs : observers) obs(state, state.step, state.t);

  std::optional<ImplicitDiffusionSolver> solver;
  for (int n = 0; n < grid.n_steps(); ++n) {
    const double dt = grid.step(n);
    if (!solver || std::abs(solver->dt() - dt) > 1e-14 * dt)
      solver.emplace(mesh, global, dt, config);

    SimulationState next = config.scheme == Scheme::ImplicitFixedPoint
                               ? step_implicit(mesh, *solver, reaction, state, config)
                               : step_semi_implicit(mesh, *solver, reaction, state, config);
    stats.l2_dudt.push_back(l2_norm_cells(mesh, (next.u.cell - state.u.cell) / dt));
    state = std::move(next);
    record(state);
    for (const Observer& obs : observers) obs(state, state.step, state.t);
  }
  return {std::move(state), std::move(stats)};
}

EnergyEstimateReport energy_estimate_check(const TrajectoryStats& stats) {
  EnergyEstimateReport report;
  if (stats.t.empty()) return report;
  report.finite = true;
  report.monotone_l2_u = true;
  for (size_t n = 0; n < stats.t.size(); ++n) {
    report.sup_l2_u = std::max(report.sup_l2_u, stats.l2_u[n]);
    report.sup_l2_v = std::max(report.sup_l2_v, stats.l2_v[n]);
    report.finite = report.finite && std::isfinite(stats.l2_u[n]) && std::isfinite(stats.l2_v[n]) &&
                    std::isfinite(stats.l2_grad_u[n]);
  }
  double grad_sq = 0.0;
  for (size_t n = 0; n + 1 < stats.t.size(); ++n) {
    const double dt = stats.t[n + 1] - stats.t[n];
    grad_sq += dt * stats.l2_grad_u[n + 1] * stats.l2_grad_u[n + 1];
    const double prev = stats.l2_u[n];
    const double increase = stats.l2_u[n + 1] - prev;
    if (increase > 1e-12 * std::max(prev, 1.0)) {
      report.monotone_l2_u = false;
      report.max_relative_increase =
          std::max(report.max_relative_increase, increase / std::max(prev, 1e-300));
    }
  }
  report.l2l2_grad_u = std::sqrt(grad_sq);
  report.finite = report.finite && std::isfinite(report.l2l2_grad_u);
  return report;
}

GradientEstimateReport gradient_estimate_check(const TrajectoryStats& stats) {
  GradientEstimateReport report;
  if (stats.t.empty()) return report;
  double dudt_sq = 0.0;
  for (size_t n = 0; n + 1 < stats.t.size(); ++n) {
    const double dt = stats.t[n + 1] - stats.t[n];
    dudt_sq += dt * stats.l2_dudt[n] * stats.l2_dudt[n];
  }
  report.l2_dudt = std::sqrt(dudt_sq);
  for (double g : stats.l2_grad_u) report.sup_l2_grad_u = std::max(report.sup_l2_grad_u, g);
  report.finite = std::isfinite(report.l2_dudt) && std::isfinite(report.sup_l2_grad_u);
  return report;
}

}  // namespace hmmrd
