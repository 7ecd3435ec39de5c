#include "hmmrd/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <tuple>

#include "hmmrd/errors.hpp"

namespace hmmrd {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double parse_double(const std::string& value, int line_no) {
  const std::string v = trim(value);
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size())
    throw ValidationError("line " + std::to_string(line_no) + ": malformed number '" + v + "'");
  return x;
}

int parse_int(const std::string& value, int line_no) {
  const double x = parse_double(value, line_no);
  if (x != std::floor(x) || std::abs(x) > 1e9)
    throw ValidationError("line " + std::to_string(line_no) + ": expected an integer, got '" +
                          trim(value) + "'");
  return static_cast<int>(x);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

void apply_key(RunConfig& c, const std::string& key, const std::string& value, int line_no) {
  if (key == "preset") c.preset = trim(value);
  else if (key == "L") c.half_width = parse_double(value, line_no);
  else if (key == "n") c.subdivisions = parse_int(value, line_no);
  else if (key == "kinetics") c.kinetics = trim(value);
  else if (key == "rho") c.barkley.rho = parse_double(value, line_no);
  else if (key == "a") c.barkley.a = parse_double(value, line_no);
  else if (key == "b") c.barkley.b = parse_double(value, line_no);
  else if (key == "delta") c.barkley.delta = parse_double(value, line_no);
  else if (key == "mu") c.mu = parse_double(value, line_no);
  else if (key == "beta") c.beta = parse_double(value, line_no);
  else if (key == "alpha1") c.alpha1 = parse_double(value, line_no);
  else if (key == "alpha2") c.alpha2 = parse_double(value, line_no);
  else if (key == "alpha3") c.alpha3 = parse_double(value, line_no);
  else if (key == "u_mask_x2") c.u_mask_x2 = parse_double(value, line_no);
  else if (key == "v_mask_x1") c.v_mask_x1 = parse_double(value, line_no);
  else if (key == "v_mask_x2") c.v_mask_x2 = parse_double(value, line_no);
  else if (key == "T") c.final_time = parse_double(value, line_no);
  else if (key == "dt") c.dt = parse_double(value, line_no);
  else if (key == "scheme") c.scheme = trim(value);
  else if (key == "fp_tol") c.fp_tol = parse_double(value, line_no);
  else if (key == "fp_max_iters") c.fp_max_iters = parse_int(value, line_no);
  else if (key == "linear_tol") c.linear_tol = parse_double(value, line_no);
  else if (key == "linear_max_iters") c.linear_max_iters = parse_int(value, line_no);
  else if (key == "face_values") c.face_values = trim(value);
  else if (key == "snapshot_times") {
    c.snapshot_times.clear();
    for (const std::string& item : split_list(value))
      c.snapshot_times.push_back(parse_double(item, line_no));
  } else if (key == "diag_interval") c.diag_interval = parse_double(value, line_no);
  else if (key == "out") c.output_dir = trim(value);
  else if (key == "formats") c.formats = split_list(value);
  else
    throw ValidationError("line " + std::to_string(line_no) + ": unknown configuration key '" +
                          key + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  // first pass: find the preset (if any) so its values seed the defaults
  std::vector<std::tuple<std::string, std::string, int>> pairs;
  {
    std::stringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw ValidationError("line " + std::to_string(line_no) + ": expected 'key = value'");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty())
        throw ValidationError("line " + std::to_string(line_no) + ": empty key");
      pairs.emplace_back(key, value, line_no);
    }
  }

  RunConfig config;
  for (const auto& [key, value, line_no] : pairs)
    if (key == "preset") config = config_from_preset(preset_by_name(trim(value)));
  for (const auto& [key, value, line_no] : pairs) apply_key(config, key, value, line_no);
  validate_config(config);
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  if (!c.preset.empty()) out << "preset = " << c.preset << "\n";
  out << "L = " << format_double(c.half_width) << "\n";
  out << "n = " << c.subdivisions << "\n";
  out << "kinetics = " << c.kinetics << "\n";
  out << "rho = " << format_double(c.barkley.rho) << "\n";
  out << "a = " << format_double(c.barkley.a) << "\n";
  out << "b = " << format_double(c.barkley.b) << "\n";
  out << "delta = " << format_double(c.barkley.delta) << "\n";
  out << "mu = " << format_double(c.mu) << "\n";
  out << "beta = " << format_double(c.beta) << "\n";
  out << "alpha1 = " << format_double(c.alpha1) << "\n";
  out << "alpha2 = " << format_double(c.alpha2) << "\n";
  out << "alpha3 = " << format_double(c.alpha3) << "\n";
  out << "u_mask_x2 = " << format_double(c.u_mask_x2) << "\n";
  out << "v_mask_x1 = " << format_double(c.v_mask_x1) << "\n";
  out << "v_mask_x2 = " << format_double(c.v_mask_x2) << "\n";
  out << "T = " << format_double(c.final_time) << "\n";
  out << "dt = " << format_double(c.dt) << "\n";
  out << "scheme = " << c.scheme << "\n";
  out << "fp_tol = " << format_double(c.fp_tol) << "\n";
  out << "fp_max_iters = " << c.fp_max_iters << "\n";
  out << "linear_tol = " << format_double(c.linear_tol) << "\n";
  out << "linear_max_iters = " << c.linear_max_iters << "\n";
  out << "face_values = " << c.face_values << "\n";
  out << "snapshot_times = ";
  for (size_t i = 0; i < c.snapshot_times.size(); ++i)
    out << (i ? "," : "") << format_double(c.snapshot_times[i]);
  out << "\n";
  out << "diag_interval = " << format_double(c.diag_interval) << "\n";
  out << "out = " << c.output_dir << "\n";
  out << "formats = ";
  for (size_t i = 0; i < c.formats.size(); ++i) out << (i ? "," : "") << c.formats[i];
  out << "\n";
  return out.str();
}

void validate_config(const RunConfig& c) {
  if (!(c.half_width > 0.0)) throw ValidationError("L must be positive");
  if (c.subdivisions < 1) throw ValidationError("n must be at least 1");
  if (c.kinetics != "barkley" && c.kinetics != "off")
    throw ValidationError("kinetics must be 'barkley' or 'off'");
  if (c.kinetics == "barkley" &&
      (!(c.barkley.rho > 0.0) || !(c.barkley.a > 0.0) || !(c.barkley.b > 0.0)))
    throw ValidationError("Barkley parameters rho, a, b must be positive");
  if (!(c.mu > 0.0)) throw ValidationError("mu must be positive");
  if (!(c.beta > 0.0)) throw ValidationError("beta must be positive");
  if (!(c.final_time > 0.0)) throw ValidationError("T must be positive");
  if (!(c.dt > 0.0)) throw ValidationError("dt must be positive");
  if (c.scheme != "semi-implicit" && c.scheme != "implicit-fixedpoint")
    throw ValidationError("scheme must be 'semi-implicit' or 'implicit-fixedpoint'");
  if (!(c.fp_tol > 0.0) || !(c.linear_tol > 0.0))
    throw ValidationError("tolerances must be positive");
  if (c.fp_max_iters < 1 || c.linear_max_iters < 1)
    throw ValidationError("iteration limits must be positive");
  if (c.face_values != "center" && c.face_values != "zero")
    throw ValidationError("face_values must be 'center' or 'zero'");
  for (double t : c.snapshot_times)
    if (!(t >= 0.0) || t > c.final_time * (1.0 + 1e-12))
      throw ValidationError("snapshot time " + std::to_string(t) + " outside [0, T]");
  if (c.diag_interval < 0.0) throw ValidationError("diag_interval must be non-negative");
  for (const std::string& f : c.formats)
    if (f != "csv" && f != "vtk")
      throw ValidationError("unknown output format '" + f + "' (available: csv, vtk)");
}

RunConfig config_from_preset(const SpiralPreset& p) {
  RunConfig c;
  c.preset = p.name;
  c.half_width = p.half_width;
  c.subdivisions = p.subdivisions;
  c.kinetics = "barkley";
  c.barkley = p.barkley;
  c.mu = p.mu;
  c.beta = p.beta;
  c.alpha1 = p.alpha1;
  c.alpha2 = p.alpha2;
  c.alpha3 = p.alpha3;
  c.u_mask_x2 = p.u_mask_x2;
  c.v_mask_x1 = p.v_mask_x1;
  c.v_mask_x2 = p.v_mask_x2;
  c.final_time = p.final_time;
  c.dt = p.dt;
  c.snapshot_times = p.snapshot_times;
  return c;
}

StepperConfig stepper_config(const RunConfig& c) {
  StepperConfig s;
  s.scheme = c.scheme == "implicit-fixedpoint" ? Scheme::ImplicitFixedPoint : Scheme::SemiImplicit;
  s.fixed_point_tol = c.fp_tol;
  s.max_fixed_point_iters = c.fp_max_iters;
  s.linear_tol = c.linear_tol;
  s.linear_max_iters = c.linear_max_iters;
  return s;
}

SpiralPreset experiment_setup(const RunConfig& c) {
  SpiralPreset p;
  p.name = c.preset.empty() ? "custom" : c.preset;
  p.half_width = c.half_width;
  p.subdivisions = c.subdivisions;
  p.barkley = c.barkley;
  p.mu = c.mu;
  p.beta = c.beta;
  p.alpha1 = c.alpha1;
  p.alpha2 = c.alpha2;
  p.alpha3 = c.alpha3;
  p.u_mask_x2 = c.u_mask_x2;
  p.v_mask_x1 = c.v_mask_x1;
  p.v_mask_x2 = c.v_mask_x2;
  p.final_time = c.final_time;
  p.dt = c.dt;
  p.snapshot_times = c.snapshot_times;
  return p;
}

FaceInterpolation face_interpolation(const RunConfig& c) {
  return c.face_values == "zero" ? FaceInterpolation::Zero : FaceInterpolation::CenterValue;
}

}  // namespace hmmrd
