#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "hmmrd/errors.hpp"
#include "hmmrd/gdm.hpp"
#include "hmmrd/timestepper.hpp"
#include "test_helpers.hpp"

using namespace hmmrd;

namespace {

double total_mass(const PolytopalMesh& mesh, const Eigen::VectorXd& cells) {
  double m = 0.0;
  for (int k = 0; k < mesh.n_cells(); ++k) m += mesh.cell(k).measure * cells[k];
  return m;
}

ScalarField smooth_bump() {
  return [](const Vec2& x) { return std::exp(-x.squaredNorm()) + 0.1 * x.x(); };
}

}  // namespace

TEST_CASE("uniform time grids") {
  SUBCASE("exact division") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.1);
    CHECK(grid.n_steps() == 10);
    CHECK(grid.final_time() == 1.0);
    CHECK(grid.max_step() == doctest::Approx(0.1).epsilon(1e-12));
  }
  SUBCASE("trailing fractional step") {
    const TimeGrid grid = TimeGrid::uniform(1.0, 0.3);
    CHECK(grid.n_steps() == 4);
    CHECK(grid.times.back() == 1.0);
    for (int n = 0; n < grid.n_steps(); ++n) CHECK(grid.step(n) > 0.0);
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(TimeGrid::uniform(-1.0, 0.1), ValidationError);
    CHECK_THROWS_AS(TimeGrid::uniform(1.0, 0.0), ValidationError);
  }
}

TEST_CASE("pure diffusion decays and leaves v untouched") {
  const PolytopalMesh mesh = build_uniform_triangular(1.0, 4);
  const GlobalDiffusion global = assemble_global(mesh, 1.0);
  StepperConfig config;
  config.scheme = Scheme::ImplicitFixedPoint;
  const TimeGrid grid = TimeGrid::uniform(0.1, 0.01);
  const RunResult result = run(mesh, global, zero_reaction(), smooth_bump(),
                               [](const Vec2&) { return 0.75; }, grid, config);

  for (size_t n = 0; n + 1 < result.stats.l2_u.size(); ++n)
    CHECK(result.stats.l2_u[n + 1] <= result.stats.l2_u[n] * (1.0 + 1e-12));
  CHECK((result.state.v.cell.array() - 0.75).abs().maxCoeff() <= 1e-13);
  const EnergyEstimateReport report = energy_estimate_check(result.stats);
  CHECK(report.finite);
  CHECK(report.monotone_l2_u);
}

TEST_CASE("the rest state of the Barkley kinetics is an exact fixed point") {
  const PolytopalMesh mesh = build_uniform_triangular(1.0, 3);
  const GlobalDiffusion global = assemble_global(mesh, 1.0);
  const AffineReaction kinetics = barkley({0.005, 0.3, 0.01, 0.1});
  StepperConfig config;
  const ImplicitDiffusionSolver solver(mesh, global, 0.001, config);
  const SimulationState rest{HybridVector::zero(mesh), CellVector::zero(mesh), 0.0, 0};

  const SimulationState after_implicit = step_implicit(mesh, solver, kinetics, rest, config);
  CHECK(after_implicit.u.cell.norm() == 0.0);
  CHECK(after_implicit.u.face.norm() == 0.0);
  CHECK(after_implicit.v.cell.norm() == 0.0);

  const SimulationState after_semi = step_semi_implicit(mesh, solver, kinetics, rest, config);
  CHECK(after_semi.u.cell.norm() == 0.0);
  CHECK(after_semi.v.cell.norm() == 0.0);
}

TEST_CASE("mass is conserved without reaction") {
  const PolytopalMesh mesh = build_uniform_triangular(1.0, 10);
  const GlobalDiffusion global = assemble_global(mesh, 1.0);

  SUBCASE("production path: conjugate gradients") {
    StepperConfig config;
    config.linear_solver = LinearSolverKind::ConjugateGradient;
    config.linear_tol = 1e-12;
    const ImplicitDiffusionSolver solver(mesh, global, 0.01, config);
    SimulationState state{interpolate_initial_u(mesh, smooth_bump()), CellVector::zero(mesh), 0.0, 0};
    const double mass0 = total_mass(mesh, state.u.cell);
    for (int n = 0; n < 100; ++n)
      state = step_semi_implicit(mesh, solver, zero_reaction(), state, config);
    CHECK(std::abs(total_mass(mesh, state.u.cell) - mass0) <= 1e-9 * std::abs(mass0));
  }
  SUBCASE("dense path") {
    StepperConfig config;
    config.linear_solver = LinearSolverKind::Dense;
    const ImplicitDiffusionSolver solver(mesh, global, 0.01, config);
    SimulationState state{interpolate_initial_u(mesh, smooth_bump()), CellVector::zero(mesh), 0.0, 0};
    const double mass0 = total_mass(mesh, state.u.cell);
    for (int n = 0; n < 100; ++n)
      state = step_semi_implicit(mesh, solver, zero_reaction(), state, config);
    CHECK(std::abs(total_mass(mesh, state.u.cell) - mass0) <= 1e-10 * std::abs(mass0));
  }
}

TEST_CASE("schemes coincide exactly for constant kinetics") {
  const PolytopalMesh mesh = build_uniform_triangular(1.0, 4);
  const GlobalDiffusion global = assemble_global(mesh, 1.0);
  AffineReaction constant;
  constant.f1 = [](double) { return 0.7; };
  constant.f2 = [](double) { return 0.0; };
  constant.g1 = [](double) { return -0.3; };
  constant.alpha = 0.0;
  StepperConfig config;
  const ImplicitDiffusionSolver solver(mesh, global, 0.02, config);
  const SimulationState state{interpolate_initial_u(mesh, smooth_bump()),
                              interpolate_initial_v(mesh, [](const Vec2& x) { return x.y(); }),
                              0.0, 0};
  const SimulationState a = step_implicit(mesh, solver, constant, state, config);
  const SimulationState b = step_semi_implicit(mesh, solver, constant, state, config);
  CHECK(a.u.cell == b.u.cell);
  CHECK(a.u.face == b.u.face);
  CHECK(a.v.cell == b.v.cell);
}

TEST_CASE("semi-implicit agrees with the fixed point at second order in dt") {
  const PolytopalMesh mesh = build_uniform_triangular(1.0, 4);
  const GlobalDiffusion global = assemble_global(mesh, 1.0);
  const AffineReaction kinetics = barkley({0.5, 0.3, 0.01, 0.1});  // mild stiffness
  StepperConfig config;
  config.fixed_point_tol = 1e-12;
  const SimulationState state{
      interpolate_initial_u(mesh, [](const Vec2& x) { return 0.5 + 0.3 * std::sin(x.x()); }),
      interpolate_initial_v(mesh, [](const Vec2&) { return 0.2; }), 0.0, 0};

  auto one_step_gap = [&](double dt) {
    const ImplicitDiffusionSolver solver(mesh, global, dt, config);
    const SimulationState a = step_implicit(mesh, solver, kinetics, state, config);
    const SimulationState b = step_semi_implicit(mesh, solver, kinetics, state, config);
    return l2_norm_cells(mesh, a.u.cell - b.u.cell) + l2_norm_cells(mesh, a.v.cell - b.v.cell);
  };
  const double gap_h = one_step_gap(0.02);
  const double gap_h2 = one_step_gap(0.01);
  CHECK(gap_h / gap_h2 >= 3.0);  // one-step defect scales like dt^2
  CHECK(gap_h / gap_h2 <= 5.0);
}

TEST_CASE("fixed-point divergence is reported, never silent") {
  const PolytopalMesh mesh = build_uniform_triangular(1.0, 3);
  const GlobalDiffusion global = assemble_global(mesh, 1.0);
  // stiff linear feedback: Picard amplification dt * 100 = 10 per sweep
  AffineReaction stiff;
  stiff.f1 = [](double s) { return 100.0 * s; };
  stiff.f2 = [](double) { return 0.0; };
  stiff.g1 = [](double) { return 0.0; };
  stiff.alpha = 0.0;
  StepperConfig config;
  config.max_fixed_point_iters = 8;
  const ImplicitDiffusionSolver solver(mesh, global, 0.1, config);
  const SimulationState state{interpolate_initial_u(mesh, [](const Vec2&) { return 0.4; }),
                              CellVector::zero(mesh), 0.0, 0};
  CHECK_THROWS_AS(step_implicit(mesh, solver, stiff, state, config), FixedPointDivergence);
}

TEST_CASE("run: trivial trajectories and observer contract") {
  const PolytopalMesh mesh = build_uniform_triangular(1.0, 2);
  const GlobalDiffusion global = assemble_global(mesh, 1.0);
  StepperConfig config;

  SUBCASE("zero data stays identically zero") {
    const TimeGrid grid = TimeGrid::uniform(0.05, 0.01);
    const RunResult result = run(mesh, global, zero_reaction(), [](const Vec2&) { return 0.0; },
                                 [](const Vec2&) { return 0.0; }, grid, config);
    CHECK(result.state.u.cell.norm() == 0.0);
    CHECK(result.state.v.cell.norm() == 0.0);
    for (double norm : result.stats.l2_u) CHECK(norm == 0.0);
  }
  SUBCASE("a one-step grid equals a single step") {
    const TimeGrid grid = TimeGrid::uniform(0.01, 0.01);
    const RunResult result = run(mesh, global, zero_reaction(), smooth_bump(),
                                 [](const Vec2&) { return 0.0; }, grid, config);
    const ImplicitDiffusionSolver solver(mesh, global, 0.01, config);
    const SimulationState start{interpolate_initial_u(mesh, smooth_bump()),
                                CellVector::zero(mesh), 0.0, 0};
    const SimulationState expected = step_semi_implicit(mesh, solver, zero_reaction(), start, config);
    CHECK(result.state.u.cell == expected.u.cell);
    CHECK(result.state.u.face == expected.u.face);
  }
  SUBCASE("observers fire once per state, initial state included") {
    const TimeGrid grid = TimeGrid::uniform(0.05, 0.01);
    int calls = 0;
    double last_t = -1.0;
    int last_step = -1;
    const std::vector<Observer> observers{[&](const SimulationState&, int step, double t) {
      ++calls;
      CHECK(t > last_t - 1e-15);
      last_t = t;
      last_step = step;
    }};
    run(mesh, global, zero_reaction(), smooth_bump(), [](const Vec2&) { return 0.0; }, grid,
        config, observers);
    CHECK(calls == grid.n_steps() + 1);
    CHECK(last_step == grid.n_steps());
    CHECK(last_t == doctest::Approx(0.05));
  }
}

TEST_CASE("estimate checks") {
  SUBCASE("stationary data with zero kinetics has zero discrete time derivative") {
    const PolytopalMesh mesh = build_uniform_triangular(1.0, 3);
    const GlobalDiffusion global = assemble_global(mesh, 1.0);
    StepperConfig config;
    const TimeGrid grid = TimeGrid::uniform(0.05, 0.01);
    const RunResult result = run(mesh, global, zero_reaction(), [](const Vec2&) { return 2.0; },
                                 [](const Vec2&) { return 0.0; }, grid, config);
    const GradientEstimateReport report = gradient_estimate_check(result.stats);
    CHECK(report.finite);
    CHECK(report.l2_dudt <= 1e-8);
    CHECK(report.sup_l2_grad_u <= 1e-8);
  }
  SUBCASE("diffusion run: both gradient norms stay bounded under refinement") {
    StepperConfig config;
    std::vector<GradientEstimateReport> reports;
    for (int n : {4, 8}) {
      const PolytopalMesh mesh = build_uniform_triangular(1.0, n);
      const GlobalDiffusion global = assemble_global(mesh, 1.0);
      const TimeGrid grid = TimeGrid::uniform(0.1, n == 4 ? 0.01 : 0.005);
      const RunResult result = run(mesh, global, zero_reaction(), smooth_bump(),
                                   [](const Vec2&) { return 0.0; }, grid, config);
      reports.push_back(gradient_estimate_check(result.stats));
    }
    CHECK(reports[1].l2_dudt <= 2.0 * reports[0].l2_dudt + 1e-12);
    CHECK(reports[1].sup_l2_grad_u <= 2.0 * reports[0].sup_l2_grad_u + 1e-12);
  }
  SUBCASE("injected blow-up trips the energy audit (negative control)") {
    TrajectoryStats stats;
    stats.t = {0.0, 0.1, 0.2};
    stats.l2_u = {1.0, 2.0, 4.0};
    stats.l2_v = {1.0, 1.0, 1.0};
    stats.l2_grad_u = {1.0, 1.0, 1.0};
    stats.l2_dudt = {10.0, 20.0};
    const EnergyEstimateReport report = energy_estimate_check(stats);
    CHECK_FALSE(report.monotone_l2_u);
    CHECK(report.max_relative_increase > 0.5);
  }
  SUBCASE("non-finite norms are flagged") {
    TrajectoryStats stats;
    stats.t = {0.0, 0.1};
    stats.l2_u = {1.0, std::numeric_limits<double>::quiet_NaN()};
    stats.l2_v = {1.0, 1.0};
    stats.l2_grad_u = {1.0, 1.0};
    stats.l2_dudt = {1.0};
    CHECK_FALSE(energy_estimate_check(stats).finite);
  }
}
