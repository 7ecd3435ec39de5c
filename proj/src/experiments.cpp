#include "hmmrd/experiments.hpp"

#include <cmath>

#include "hmmrd/errors.hpp"
#include "hmmrd/gdm.hpp"

namespace hmmrd {

namespace {

double excitation_profile(double x1, double alpha1, double alpha2) {
  const double outer = 1.0 + std::exp(4.0 * (std::abs(x1) - alpha1));
  const double inner = 1.0 + std::exp(4.0 * (std::abs(x1) - alpha2));
  return 1.0 / (outer * outer) - 1.0 / (inner * inner);
}

}  // namespace

double SpiralPreset::u_ini(const Vec2& x) const {
  if (x.x() < 0.0 || x.y() > u_mask_x2) return 0.0;
  return excitation_profile(x.x(), alpha1, alpha2);
}

double SpiralPreset::v_ini(const Vec2& x) const {
  return (x.x() < v_mask_x1 && x.y() < v_mask_x2) ? alpha3 : 0.0;
}

ScalarField SpiralPreset::u_ini_field() const {
  return [preset = *this](const Vec2& x) { return preset.u_ini(x); };
}

ScalarField SpiralPreset::v_ini_field() const {
  return [preset = *this](const Vec2& x) { return preset.v_ini(x); };
}

SpiralPreset preset_example1() {
  SpiralPreset p;
  p.name = "example1";
  p.half_width = 30.0;
  p.subdivisions = 30;
  p.barkley = {0.005, 0.3, 0.01, 0.1};
  p.mu = 1.0;
  p.alpha1 = 5.0;
  p.alpha2 = 1.0;
  p.alpha3 = 0.1;
  p.u_mask_x2 = 5.0;
  p.v_mask_x1 = 1.0;
  p.v_mask_x2 = 10.0;
  p.final_time = 100.0;
  p.dt = p.barkley.rho / 5.0;
  p.snapshot_times = {5, 10, 20, 30, 40, 60, 80, 100};
  return p;
}

SpiralPreset preset_example2() {
  SpiralPreset p;
  p.name = "example2";
  p.half_width = 7.5;
  p.subdivisions = 30;
  p.barkley = {0.0208, 0.52, 0.05, 0.1};
  p.mu = 1.0;
  p.alpha1 = 3.0;
  p.alpha2 = 1.0;
  p.alpha3 = 0.25;
  p.u_mask_x2 = 5.0;
  p.v_mask_x1 = -1.0;
  p.v_mask_x2 = 3.0;
  p.final_time = 3.0;
  p.dt = p.barkley.rho / 5.0;
  p.snapshot_times = {0.2, 0.5, 1.0, 1.5, 2.0, 3.0};
  return p;
}

SpiralPreset preset_by_name(const std::string& name) {
  if (name == "example1") return preset_example1();
  if (name == "example2") return preset_example2();
  throw ValidationError("unknown preset '" + name + "' (available: example1, example2)");
}

ExcitedAreaRecorder::ExcitedAreaRecorder(const PolytopalMesh& mesh, double delta,
                                         double sample_interval, double final_time)
    : mesh_(&mesh), delta_(delta), interval_(sample_interval), final_time_(final_time) {
  if (!(sample_interval > 0.0)) throw ValidationError("sample interval must be positive");
}

void ExcitedAreaRecorder::operator()(const SimulationState& state, int, double t) {
  const bool final = t >= final_time_ - 1e-12 * std::max(final_time_, 1.0);
  if (t + 1e-12 < next_sample_ && !final) return;
  double excited = 0.0;
  double max_u = 0.0;
  for (int k = 0; k < mesh_->n_cells(); ++k) {
    if (state.u.cell[k] > delta_) excited += mesh_->cell(k).measure;
    max_u = std::max(max_u, state.u.cell[k]);
  }
  series_.t.push_back(t);
  series_.fraction.push_back(excited / mesh_->domain_measure());
  series_.max_u.push_back(max_u);
  while (next_sample_ <= t + 1e-12) next_sample_ += interval_;
}

SpiralDiagnostics spiral_diagnostics(const ExcitedSeries& series,
                                     const SpiralClassifierOptions& options) {
  SpiralDiagnostics diag;
  diag.series = series;
  if (series.t.empty()) return diag;

  const double t_final = series.t.back();
  const double window_start = t_final - options.final_window * (t_final - series.t.front());
  diag.final_fraction = series.fraction.back();
  diag.extinct_in_final_window = true;
  for (size_t i = 0; i < series.t.size(); ++i) {
    diag.peak_fraction = std::max(diag.peak_fraction, series.fraction[i]);
    if (series.t[i] >= window_start && series.fraction[i] > options.zero_fraction)
      diag.extinct_in_final_window = false;
  }

  // local maxima of the area series, ignoring wiggles below the prominence
  int maxima = 0;
  double last_extreme = series.fraction.front();
  bool rising = false;
  for (size_t i = 1; i < series.fraction.size(); ++i) {
    const double f = series.fraction[i];
    if (rising && f < last_extreme - options.maxima_prominence) {
      ++maxima;
      rising = false;
      last_extreme = f;
    } else if (!rising && f > last_extreme + options.maxima_prominence) {
      rising = true;
      last_extreme = f;
    } else if ((rising && f > last_extreme) || (!rising && f < last_extreme)) {
      last_extreme = f;
    }
  }
  diag.local_maxima = maxima;

  const bool was_excited = diag.peak_fraction > options.zero_fraction;
  if (was_excited && diag.final_fraction <= options.zero_fraction)
    diag.outcome = SpiralOutcome::Annihilated;
  else if (diag.final_fraction > options.zero_fraction && maxima >= options.min_local_maxima)
    diag.outcome = SpiralOutcome::Reflected;
  else
    diag.outcome = SpiralOutcome::Indeterminate;
  return diag;
}

const char* to_string(SpiralOutcome outcome) {
  switch (outcome) {
    case SpiralOutcome::Reflected: return "reflected";
    case SpiralOutcome::Annihilated: return "annihilated";
    default: return "indeterminate";
  }
}

std::vector<HeatConvergenceRow> heat_convergence_study(int levels,
                                                       const HeatConvergenceOptions& options) {
  if (levels < 1) throw ValidationError("the study needs at least one level");
  const double mu = options.mu;
  const double pi = std::acos(-1.0);
  const double T = options.final_time;

  auto exact = [&](const Vec2& x, double t) {
    return std::cos(pi * x.x()) * std::cos(pi * x.y()) * std::exp(-2.0 * mu * pi * pi * t);
  };
  auto exact_grad = [&](const Vec2& x, double t) -> Vec2 {
    const double decay = std::exp(-2.0 * mu * pi * pi * t);
    return {-pi * std::sin(pi * x.x()) * std::cos(pi * x.y()) * decay,
            -pi * std::cos(pi * x.x()) * std::sin(pi * x.y()) * decay};
  };

  std::vector<HeatConvergenceRow> rows;
  PolytopalMesh mesh = build_rectangle_triangular(0.0, 1.0, 0.0, 1.0,
                                                  options.initial_subdivisions,
                                                  options.initial_subdivisions);
  double dt = options.dt_coarse;
  for (int level = 0; level < levels; ++level) {
    const GlobalDiffusion global = assemble_global(mesh, mu);
    const TimeGrid grid = TimeGrid::uniform(T, dt);
    StepperConfig config = options.stepper;
    config.scheme = Scheme::SemiImplicit;  // zero kinetics: identical to the implicit scheme
    const RunResult result = run(mesh, global, zero_reaction(),
                                 [&](const Vec2& x) { return exact(x, 0.0); },
                                 [](const Vec2&) { return 0.0; }, grid, config);

    HeatConvergenceRow row;
    row.h = mesh.mesh_size();
    row.cells = mesh.n_cells();
    row.dt = dt;
    double cell_sq = 0.0;
    for (int k = 0; k < mesh.n_cells(); ++k) {
      const double diff = result.state.u.cell[k] - exact(mesh.cell(k).center, T);
      cell_sq += mesh.cell(k).measure * diff * diff;
    }
    row.cell_error = std::sqrt(cell_sq);
    const DiamondGradientField grad = reconstruct_gradient(mesh, result.state.u);
    double grad_sq = 0.0;
    for (int k = 0; k < mesh.n_cells(); ++k)
      for (size_t j = 0; j < mesh.cell(k).faces.size(); ++j) {
        const int jj = static_cast<int>(j);
        const Vec2 g = grad.vectors.col(mesh.incidence_index(k, jj));
        grad_sq += integrate_diamond(mesh, k, jj, [&](const Vec2& x) {
          return (g - exact_grad(x, T)).squaredNorm();
        });
      }
    row.grad_error = std::sqrt(grad_sq);
    if (!rows.empty()) {
      row.cell_order = std::log2(rows.back().cell_error / row.cell_error);
      row.grad_order = std::log2(rows.back().grad_error / row.grad_error);
    }
    rows.push_back(row);

    if (level + 1 < levels) {
      mesh = refine_uniform(mesh);
      dt /= 4.0;
    }
  }
  return rows;
}

}  // namespace hmmrd
