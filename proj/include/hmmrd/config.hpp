// Run configuration: a flat key = value text format with '#' comments.
// Unknown keys are rejected; a `preset` key loads the named experiment first
// and the remaining keys override it. The exact grammar is documented in
// docs/formats.md.

#ifndef HMMRD_CONFIG_HPP
#define HMMRD_CONFIG_HPP

#include <string>
#include <vector>

#include "hmmrd/experiments.hpp"
#include "hmmrd/reaction.hpp"
#include "hmmrd/timestepper.hpp"

namespace hmmrd {

struct RunConfig {
  std::string preset;                    ///< empty for fully explicit configs
  double half_width = 1.0;               ///< L of the domain [-L, L]^2
  int subdivisions = 8;                  ///< n squares per side
  std::string kinetics = "barkley";      ///< "barkley" or "off"
  BarkleyParams barkley;
  double mu = 1.0;
  double beta = 1.0;
  double alpha1 = 5.0, alpha2 = 1.0, alpha3 = 0.1;
  double u_mask_x2 = 5.0;
  double v_mask_x1 = 1.0, v_mask_x2 = 10.0;
  double final_time = 1.0;
  double dt = 0.001;
  std::string scheme = "semi-implicit";  ///< or "implicit-fixedpoint"
  double fp_tol = 1e-8;
  int fp_max_iters = 50;
  double linear_tol = 1e-11;
  int linear_max_iters = 200000;
  std::string face_values = "center";    ///< initial face interpolation: "center" or "zero"
  std::vector<double> snapshot_times;
  double diag_interval = 0.0;            ///< 0 picks final_time / 400
  std::string output_dir = "out";
  std::vector<std::string> formats = {"csv"};

  bool operator==(const RunConfig&) const = default;
};

/// Parses the text form; throws ValidationError naming the offending line or
/// key. Validation runs on the resolved result.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Full-precision serialization; parse(serialize(c)) == c holds bit for bit.
std::string serialize_config(const RunConfig& config);

/// Range/consistency checks; throws ValidationError.
void validate_config(const RunConfig& config);

RunConfig config_from_preset(const SpiralPreset& preset);

// views of the config used by the solver layers
StepperConfig stepper_config(const RunConfig& config);
SpiralPreset experiment_setup(const RunConfig& config);
FaceInterpolation face_interpolation(const RunConfig& config);

}  // namespace hmmrd

#endif
