#include "hmmrd/cli.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "hmmrd/config.hpp"
#include "hmmrd/errors.hpp"
#include "hmmrd/experiments.hpp"
#include "hmmrd/gdm.hpp"
#include "hmmrd/io.hpp"

namespace hmmrd {

namespace {

namespace fs = std::filesystem;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

/// Observer writing snapshots the first time the trajectory reaches each
/// requested time.
class SnapshotWriter {
public:
  SnapshotWriter(const PolytopalMesh& mesh, std::vector<double> targets,
                 std::vector<std::string> formats, std::string dir)
      : mesh_(&mesh), targets_(std::move(targets)), formats_(std::move(formats)),
        dir_(std::move(dir)) {
    std::sort(targets_.begin(), targets_.end());
  }

  void operator()(const SimulationState& state, int, double t) {
    while (next_ < targets_.size() && t >= targets_[next_] - 1e-9 * std::max(1.0, targets_[next_])) {
      char name[32];
      std::snprintf(name, sizeof(name), "snapshot_%03zu", next_);
      for (const std::string& format : formats_) {
        const std::string path = dir_ + "/" + name + "." + format;
        if (format == "csv")
          write_snapshot_csv(state, *mesh_, path);
        else
          write_snapshot_vtk(state, *mesh_, path);
      }
      ++next_;
    }
  }

private:
  const PolytopalMesh* mesh_;
  std::vector<double> targets_;
  std::vector<std::string> formats_;
  std::string dir_;
  size_t next_ = 0;
};

int command_run(const RunConfig& config, std::ostream& out) {
  const PolytopalMesh mesh = build_uniform_triangular(config.half_width, config.subdivisions);
  const AffineReaction reaction =
      config.kinetics == "barkley" ? barkley(config.barkley) : zero_reaction();
  const GlobalDiffusion global = assemble_global(mesh, config.mu, config.beta);
  const TimeGrid grid = TimeGrid::uniform(config.final_time, config.dt);
  const SpiralPreset setup = experiment_setup(config);

  fs::create_directories(config.output_dir);
  write_provenance(config, mesh, config.output_dir + "/provenance.txt");

  const double interval =
      config.diag_interval > 0.0 ? config.diag_interval : config.final_time / 400.0;
  auto recorder = std::make_shared<ExcitedAreaRecorder>(mesh, config.barkley.delta, interval,
                                                        config.final_time);
  auto snapshots = std::make_shared<SnapshotWriter>(mesh, config.snapshot_times, config.formats,
                                                    config.output_dir);
  std::vector<Observer> observers{
      [recorder](const SimulationState& s, int n, double t) { (*recorder)(s, n, t); },
      [snapshots](const SimulationState& s, int n, double t) { (*snapshots)(s, n, t); }};

  out << "run: " << setup.name << " on " << mesh.n_cells() << " cells / " << mesh.n_faces()
      << " faces, " << grid.n_steps() << " steps of " << config.scheme << "\n";
  const RunResult result = run(mesh, global, reaction, setup.u_ini_field(), setup.v_ini_field(),
                               grid, stepper_config(config), observers,
                               face_interpolation(config));

  const SpiralDiagnostics diag = spiral_diagnostics(recorder->series());
  const EnergyEstimateReport energy = energy_estimate_check(result.stats);
  const GradientEstimateReport gradient = gradient_estimate_check(result.stats);

  write_excited_series_csv(recorder->series(), config.output_dir + "/diagnostics.csv");
  {
    std::ofstream summary(config.output_dir + "/summary.txt");
    summary << "outcome = " << to_string(diag.outcome) << "\n";
    summary << "final_excited_fraction = " << fmt(diag.final_fraction) << "\n";
    summary << "peak_excited_fraction = " << fmt(diag.peak_fraction) << "\n";
    summary << "local_maxima = " << diag.local_maxima << "\n";
    summary << "sup_l2_u = " << fmt(energy.sup_l2_u) << "\n";
    summary << "sup_l2_v = " << fmt(energy.sup_l2_v) << "\n";
    summary << "l2l2_grad_u = " << fmt(energy.l2l2_grad_u) << "\n";
    summary << "l2_dudt = " << fmt(gradient.l2_dudt) << "\n";
    summary << "sup_l2_grad_u = " << fmt(gradient.sup_l2_grad_u) << "\n";
    summary << "norms_finite = " << (energy.finite && gradient.finite ? 1 : 0) << "\n";
  }

  out << "outcome: " << to_string(diag.outcome) << " (final excited fraction "
      << diag.final_fraction << ", " << diag.local_maxima << " area maxima)\n";
  out << "energy norms: sup||u|| = " << energy.sup_l2_u << ", sup||v|| = " << energy.sup_l2_v
      << ", ||grad u||_{L2(0,T)} = " << energy.l2l2_grad_u << "\n";
  out << "wrote " << config.output_dir << "/\n";
  return 0;
}

int command_converge(int levels, const std::string& out_path, std::ostream& out) {
  const auto rows = heat_convergence_study(levels);
  out << "pure-diffusion study, u = cos(pi x1) cos(pi x2) exp(-2 mu pi^2 t) on [0,1]^2\n";
  out << std::setw(10) << "h" << std::setw(8) << "cells" << std::setw(12) << "dt" << std::setw(14)
      << "cell error" << std::setw(8) << "order" << std::setw(14) << "grad error" << std::setw(8)
      << "order" << "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out << std::setw(10) << std::setprecision(4) << r.h << std::setw(8) << r.cells << std::setw(12)
        << r.dt << std::setw(14) << std::setprecision(4) << std::scientific << r.cell_error
        << std::defaultfloat << std::setw(8) << std::setprecision(3) << (i ? r.cell_order : 0.0)
        << std::setw(14) << std::setprecision(4) << std::scientific << r.grad_error
        << std::defaultfloat << std::setw(8) << std::setprecision(3) << (i ? r.grad_order : 0.0)
        << "\n";
  }
  if (!out_path.empty()) {
    std::ofstream file(out_path);
    if (!file) throw ValidationError("cannot open '" + out_path + "'");
    file << "h,cells,dt,cell_error,cell_order,grad_error,grad_order\n";
    for (const auto& r : rows)
      file << fmt(r.h) << "," << r.cells << "," << fmt(r.dt) << "," << fmt(r.cell_error) << ","
           << fmt(r.cell_order) << "," << fmt(r.grad_error) << "," << fmt(r.grad_order) << "\n";
  }
  return 0;
}

int command_diagnose(int levels, std::ostream& out) {
  const double pi = std::acos(-1.0);
  auto phi = [pi](const Vec2& x) { return std::cos(pi * x.x()) * std::cos(pi * x.y()); };
  auto grad_phi = [pi](const Vec2& x) -> Vec2 {
    return {-pi * std::sin(pi * x.x()) * std::cos(pi * x.y()),
            -pi * std::cos(pi * x.x()) * std::sin(pi * x.y())};
  };
  // divergence-free curl field with psi . n = 0 on the unit square
  auto p = [](double s) { return (s * s - s) * (s * s - s); };
  auto dp = [](double s) { return 2.0 * (s * s - s) * (2.0 * s - 1.0); };
  auto psi = [&](const Vec2& x) -> Vec2 { return {-p(x.x()) * dp(x.y()), dp(x.x()) * p(x.y())}; };
  auto div_psi = [](const Vec2&) { return 0.0; };

  out << "GD-quality decay on [0,1]^2 (triangulated, refined " << levels << "x)\n";
  out << std::setw(10) << "h" << std::setw(10) << "theta" << std::setw(13) << "S_D" << std::setw(8)
      << "order" << std::setw(13) << "S_D'" << std::setw(8) << "order" << std::setw(13) << "W_D"
      << std::setw(8) << "order" << "\n";
  PolytopalMesh mesh = build_rectangle_triangular(0.0, 1.0, 0.0, 1.0, 4, 4);
  double prev_s = 0.0, prev_sv = 0.0, prev_w = 0.0;
  for (int level = 0; level < levels; ++level) {
    const double s = consistency_measure_u(mesh, phi, grad_phi);
    const double sv = consistency_measure_v(mesh, phi);
    const double w = limit_conformity_measure(mesh, psi, div_psi);
    const double theta = regularity(mesh).theta;
    out << std::setw(10) << std::setprecision(4) << mesh.mesh_size() << std::setw(10) << theta
        << std::setw(13) << std::scientific << std::setprecision(3) << s << std::defaultfloat
        << std::setw(8) << std::setprecision(3) << (level ? std::log2(prev_s / s) : 0.0)
        << std::setw(13) << std::scientific << sv << std::defaultfloat << std::setw(8)
        << (level ? std::log2(prev_sv / sv) : 0.0) << std::setw(13) << std::scientific << w
        << std::defaultfloat << std::setw(8) << (level ? std::log2(prev_w / w) : 0.0) << "\n";
    prev_s = s;
    prev_sv = sv;
    prev_w = w;
    if (level + 1 < levels) mesh = refine_uniform(mesh);
  }
  return 0;
}

int command_mesh_info(const std::string& mesh_path, double half_width, int subdivisions,
                      const std::string& export_path, std::ostream& out) {
  const PolytopalMesh mesh = mesh_path.empty()
                                 ? build_uniform_triangular(half_width, subdivisions)
                                 : read_mesh_file(mesh_path);
  mesh.verify_geometry();
  const MeshRegularity reg = regularity(mesh);
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016" PRIx64, mesh.hash());
  out << "cells:          " << mesh.n_cells() << "\n";
  out << "faces:          " << mesh.n_faces() << " (" << mesh.n_interior_faces() << " interior, "
      << mesh.n_boundary_faces() << " boundary)\n";
  out << "vertices:       " << mesh.n_vertices() << "\n";
  out << "domain measure: " << fmt(mesh.domain_measure()) << "\n";
  out << "h_M:            " << fmt(mesh.mesh_size()) << "\n";
  out << "theta_M:        " << fmt(reg.theta) << "\n";
  out << "max h_K/d_K:    "
      << fmt(*std::max_element(reg.cell_flatness.begin(), reg.cell_flatness.end())) << "\n";
  out << "mesh hash:      " << hash_buf << "\n";
  if (!export_path.empty()) {
    write_mesh_file(mesh, export_path);
    out << "exported to " << export_path << "\n";
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hybrid mimetic mixed solver for two-species reaction-diffusion systems"};
  app.require_subcommand(1);

  // run
  auto* cmd_run = app.add_subcommand("run", "Simulate a preset or explicit configuration");
  std::string preset_name, config_path, out_dir, scheme, formats;
  double dt_override = 0.0, time_override = 0.0;
  auto* opt_preset = cmd_run->add_option("--preset", preset_name, "Preset name (example1, example2)");
  auto* opt_config = cmd_run->add_option("--config", config_path, "Configuration file");
  opt_preset->excludes(opt_config);
  cmd_run->add_option("--out", out_dir, "Output directory");
  cmd_run->add_option("--dt", dt_override, "Override the time step");
  cmd_run->add_option("--T", time_override, "Override the final time");
  cmd_run->add_option("--scheme", scheme, "semi-implicit or implicit-fixedpoint");
  cmd_run->add_option("--formats", formats, "Comma-separated output formats (csv, vtk)");

  // converge
  auto* cmd_converge = app.add_subcommand("converge", "Pure-diffusion convergence study");
  int levels = 4;
  std::string table_path;
  cmd_converge->add_option("--levels", levels, "Refinement levels")->check(CLI::Range(1, 8));
  cmd_converge->add_option("--out", table_path, "Also write the table as CSV");

  // diagnose
  auto* cmd_diagnose = app.add_subcommand("diagnose", "Consistency / limit-conformity decay table");
  int diag_levels = 4;
  cmd_diagnose->add_option("--levels", diag_levels, "Refinement levels")->check(CLI::Range(1, 8));

  // mesh-info
  auto* cmd_mesh = app.add_subcommand("mesh-info", "Geometry and regularity report");
  std::string mesh_path, export_path;
  double half_width = 1.0;
  int subdivisions = 0;
  auto* opt_mesh = cmd_mesh->add_option("--mesh", mesh_path, "Read the mesh from a file");
  auto* opt_n = cmd_mesh->add_option("--n", subdivisions, "Built-in triangulation: squares per side");
  cmd_mesh->add_option("--half-width", half_width, "Built-in triangulation: domain half-width L");
  cmd_mesh->add_option("--export", export_path, "Write the mesh in the exchange format");
  opt_mesh->excludes(opt_n);

  try {
    app.parse(argc, argv);

    if (cmd_run->parsed()) {
      RunConfig config;
      if (!config_path.empty())
        config = parse_config_file(config_path);
      else if (!preset_name.empty())
        config = config_from_preset(preset_by_name(preset_name));
      else
        throw ValidationError("run needs --preset or --config");
      if (!out_dir.empty()) config.output_dir = out_dir;
      if (dt_override > 0.0) config.dt = dt_override;
      if (time_override > 0.0) config.final_time = time_override;
      if (!scheme.empty()) config.scheme = scheme;
      if (!formats.empty()) {
        config.formats.clear();
        std::stringstream ss(formats);
        std::string item;
        while (std::getline(ss, item, ',')) config.formats.push_back(item);
      }
      validate_config(config);
      return command_run(config, out);
    }
    if (cmd_converge->parsed()) return command_converge(levels, table_path, out);
    if (cmd_diagnose->parsed()) return command_diagnose(diag_levels, out);
    if (cmd_mesh->parsed()) {
      if (mesh_path.empty() && subdivisions < 1)
        throw ValidationError("mesh-info needs --mesh or --n (with optional --half-width)");
      return command_mesh_info(mesh_path, half_width, subdivisions, export_path, out);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help and friends
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cli_main(int argc, const char* const* argv) {
  return cli_main(argc, argv, std::cout, std::cerr);
}

}  // namespace hmmrd
