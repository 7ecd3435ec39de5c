// Time integration of the gradient scheme. The u-equation is always treated
// implicitly in the diffusion term (face unknowns carry no time derivative,
// so an explicit hybrid step would be ill-posed); the reaction terms are
// either frozen at the previous step (semi-implicit) or iterated to a fixed
// point of the linearized coupled system (implicit).
//
// Every step solves one SPD linear system that is condensed onto the face
// unknowns; the solver is precomputed per time-step size.

#ifndef HMMRD_TIMESTEPPER_HPP
#define HMMRD_TIMESTEPPER_HPP

#include <functional>
#include <optional>
#include <vector>

#include "hmmrd/gdm.hpp"
#include "hmmrd/hmm.hpp"
#include "hmmrd/mesh.hpp"
#include "hmmrd/reaction.hpp"
#include "hmmrd/vectors.hpp"

namespace hmmrd {

struct TimeGrid {
  std::vector<double> times;  ///< t0 = 0 < t1 < ... < tN = T

  static TimeGrid uniform(double final_time, double dt);

  int n_steps() const { return static_cast<int>(times.size()) - 1; }
  double final_time() const { return times.back(); }
  double step(int n) const { return times[n + 1] - times[n]; }
  double max_step() const;
};

struct SimulationState {
  HybridVector u;
  CellVector v;
  double t = 0.0;
  int step = 0;
};

enum class Scheme { ImplicitFixedPoint, SemiImplicit };
enum class LinearSolverKind { Auto, ConjugateGradient, Dense };

struct StepperConfig {
  Scheme scheme = Scheme::SemiImplicit;
  double fixed_point_tol = 1e-8;   ///< relative change of Pi_D u and Pi_D' v
  int max_fixed_point_iters = 50;
  double linear_tol = 1e-11;
  int linear_max_iters = 200000;
  LinearSolverKind linear_solver = LinearSolverKind::Auto;
  int dense_threshold = 2000;      ///< Auto picks the dense path up to this dof count
};

/// Solver for (M/dt + A) u = rhs with rhs supported on cells, via static
/// condensation onto the faces. Reusable across steps of the same size.
class ImplicitDiffusionSolver {
public:
  ImplicitDiffusionSolver(const PolytopalMesh& mesh, const GlobalDiffusion& global,
                          double dt, const StepperConfig& config);

  HybridVector solve(const Eigen::VectorXd& rhs_cells, const HybridVector& warm_start) const;
  double dt() const { return dt_; }

private:
  const PolytopalMesh* mesh_;
  double dt_;
  StepperConfig config_;
  SchurFaceSystem schur_;
  bool dense_ = false;
  Eigen::LLT<Eigen::MatrixXd> face_factor_;
};

/// One step of the linearized fixed-point scheme: iterate
///   (reaction frozen at the previous iterate) -> linear solve for u,
///   per-cell update for v,
/// from (u^n, v^n) until the iterates settle. Throws FixedPointDivergence
/// when the iteration budget is exhausted.
SimulationState step_implicit(const PolytopalMesh& mesh, const ImplicitDiffusionSolver& solver,
                              const AffineReaction& reaction, const SimulationState& state,
                              const StepperConfig& config);

/// One step with the reaction frozen at (u^n, v^n): a single linear solve and
/// the forward per-cell v update.
SimulationState step_semi_implicit(const PolytopalMesh& mesh, const ImplicitDiffusionSolver& solver,
                                   const AffineReaction& reaction, const SimulationState& state,
                                   const StepperConfig& config);

/// Per-step norm series accumulated along a run; the a-priori estimate checks
/// read these instead of storing whole trajectories.
struct TrajectoryStats {
  std::vector<double> t;          ///< size N+1
  std::vector<double> l2_u;       ///< ||Pi_D u^(n)||_{L2}
  std::vector<double> l2_v;       ///< ||Pi_D' v^(n)||_{L2}
  std::vector<double> l2_grad_u;  ///< ||grad_D u^(n)||_{L2}
  std::vector<double> l2_dudt;    ///< size N: ||delta u^(n+1/2)||_{L2}
};

using Observer = std::function<void(const SimulationState&, int step, double t)>;

struct RunResult {
  SimulationState state;
  TrajectoryStats stats;
};

/// Advances the scheme over the grid from interpolated initial data, firing
/// every observer after the initial state and after each step.
RunResult run(const PolytopalMesh& mesh, const GlobalDiffusion& global,
              const AffineReaction& reaction, const ScalarField& u_ini, const ScalarField& v_ini,
              const TimeGrid& grid, const StepperConfig& config,
              const std::vector<Observer>& observers = {},
              FaceInterpolation face_mode = FaceInterpolation::CenterValue);

/// The three norms of the discrete energy bound, plus a per-step monotonicity
/// audit of ||Pi_D u||_{L2} (sharp for pure diffusion).
struct EnergyEstimateReport {
  double sup_l2_u = 0.0;
  double sup_l2_v = 0.0;
  double l2l2_grad_u = 0.0;  ///< ||grad_D u||_{L2(Omega x (0,T))}
  bool finite = false;
  bool monotone_l2_u = false;
  double max_relative_increase = 0.0;
};

EnergyEstimateReport energy_estimate_check(const TrajectoryStats& stats);

/// Norms of the discrete time derivative and the sup-in-time gradient.
struct GradientEstimateReport {
  double l2_dudt = 0.0;       ///< ||delta_D u||_{L2(Omega x (0,T))}
  double sup_l2_grad_u = 0.0; ///< ||grad_D u||_{Linf(0,T;L2)}
  bool finite = false;
};

GradientEstimateReport gradient_estimate_check(const TrajectoryStats& stats);

}  // namespace hmmrd

#endif
