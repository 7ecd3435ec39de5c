// Spiral-wave experiment presets for the Barkley model, excited-area
// diagnostics with boundary-interaction classification, and the manufactured
// pure-diffusion convergence study.

#ifndef HMMRD_EXPERIMENTS_HPP
#define HMMRD_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "hmmrd/mesh.hpp"
#include "hmmrd/reaction.hpp"
#include "hmmrd/timestepper.hpp"

namespace hmmrd {

/// A complete spiral-wave setup on the square [-L, L]^2. The initial
/// excitation profile is
///   u0(x) = (1 + exp(4(|x1| - alpha1)))^-2 - (1 + exp(4(|x1| - alpha2)))^-2
/// masked to zero where x1 < 0 or x2 > u_mask_x2, and the recovery variable
/// starts at alpha3 inside {x1 < v_mask_x1, x2 < v_mask_x2}, zero elsewhere.
struct SpiralPreset {
  std::string name;
  double half_width = 0.0;  ///< L
  int subdivisions = 30;    ///< squares per side of the triangulation
  BarkleyParams barkley;
  double mu = 1.0;
  double beta = 1.0;
  double alpha1 = 0.0, alpha2 = 0.0, alpha3 = 0.0;
  double u_mask_x2 = 5.0;
  double v_mask_x1 = 0.0, v_mask_x2 = 0.0;
  double final_time = 0.0;
  double dt = 0.0;  ///< default rho / 5
  std::vector<double> snapshot_times;

  double u_ini(const Vec2& x) const;
  double v_ini(const Vec2& x) const;
  ScalarField u_ini_field() const;
  ScalarField v_ini_field() const;
};

SpiralPreset preset_example1();
SpiralPreset preset_example2();
SpiralPreset preset_by_name(const std::string& name);

/// Excited-area fraction |{K : u_K > delta}| weighted by |K|/|Omega|, sampled
/// along a run.
struct ExcitedSeries {
  std::vector<double> t;
  std::vector<double> fraction;
  std::vector<double> max_u;
};

/// Observer recording the excited series at a fixed time interval (and at the
/// initial and final states).
class ExcitedAreaRecorder {
public:
  ExcitedAreaRecorder(const PolytopalMesh& mesh, double delta, double sample_interval,
                      double final_time);
  void operator()(const SimulationState& state, int step, double t);
  const ExcitedSeries& series() const { return series_; }

private:
  const PolytopalMesh* mesh_;
  double delta_;
  double interval_;
  double final_time_;
  double next_sample_ = 0.0;
  ExcitedSeries series_;
};

enum class SpiralOutcome { Reflected, Annihilated, Indeterminate };

struct SpiralClassifierOptions {
  int min_local_maxima = 3;       ///< sustained rotation witness
  double final_window = 0.05;     ///< fraction of T checked for extinction
  double maxima_prominence = 1e-4;
  double zero_fraction = 0.0;     ///< fraction at or below this counts as extinct
};

struct SpiralDiagnostics {
  ExcitedSeries series;
  double final_fraction = 0.0;
  double peak_fraction = 0.0;
  bool extinct_in_final_window = false;
  int local_maxima = 0;
  SpiralOutcome outcome = SpiralOutcome::Indeterminate;
};

/// Classifies a run: `Annihilated` when the excited area dies out by the end
/// after having been positive, `Reflected` when excitation persists at the
/// final time with repeated area oscillations, `Indeterminate` otherwise.
SpiralDiagnostics spiral_diagnostics(const ExcitedSeries& series,
                                     const SpiralClassifierOptions& options = {});

const char* to_string(SpiralOutcome outcome);

/// One refinement level of the pure-diffusion study against
///   u(x, t) = cos(pi x1) cos(pi x2) exp(-2 mu pi^2 t)   on [0,1]^2,
/// which satisfies the homogeneous Neumann condition on all sides.
struct HeatConvergenceRow {
  double h = 0.0;
  int cells = 0;
  double dt = 0.0;
  double cell_error = 0.0;  ///< sqrt(sum |K| (u_K - u(x_K, T))^2)
  double grad_error = 0.0;  ///< ||grad_D u - grad u(., T)||_{L2}
  double cell_order = 0.0;  ///< log2 ratio against the previous row
  double grad_order = 0.0;
};

struct HeatConvergenceOptions {
  int initial_subdivisions = 4;
  double final_time = 0.1;
  double mu = 1.0;
  double dt_coarse = 5e-3;  ///< scaled by 1/4 per level so time error tracks h^2
  StepperConfig stepper{};
};

std::vector<HeatConvergenceRow> heat_convergence_study(int levels,
                                                       const HeatConvergenceOptions& options = {});

}  // namespace hmmrd

#endif
