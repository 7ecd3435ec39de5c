#include "hmmrd/reaction.hpp"

#include <algorithm>
#include <cmath>

#include "hmmrd/errors.hpp"

namespace hmmrd {

AffineReaction zero_reaction() {
  auto zero = [](double) { return 0.0; };
  return {zero, zero, zero, 0.0};
}

AffineReaction barkley(const BarkleyParams& p) {
  if (!(p.rho > 0.0) || !(p.a > 0.0) || !(p.b > 0.0))
    throw ValidationError("Barkley parameters rho, a, b must be positive");
  const double inv_rho = 1.0 / p.rho;
  const double a = p.a;
  const double b = p.b;
  AffineReaction r;
  // f(u,v) = (1/rho) u(1-u)(u - (v+b)/a) split into its v-affine parts
  r.f1 = [inv_rho, a, b](double s) { return inv_rho * s * (1.0 - s) * (s - b / a); };
  r.f2 = [inv_rho, a](double s) { return -inv_rho * s * (1.0 - s) / a; };
  r.g1 = [](double s) { return s; };
  r.alpha = -1.0;
  return r;
}

NullclineDiagnostics nullcline_diagnostics(const BarkleyParams& p) {
  NullclineDiagnostics d;
  d.fixed_points = {std::pair{0.0, 0.0}, std::pair{1.0, 1.0}};
  d.threshold = [a = p.a, b = p.b](double v) { return (v + b) / a; };
  return d;
}

GrowthBoundReport growth_admissibility_check(const AffineReaction& r, double s_min, double s_max) {
  if (!(s_max > s_min)) throw ValidationError("empty sampling interval");
  GrowthBoundReport report;
  report.s_min = s_min;
  report.s_max = s_max;

  const int samples = 2001;
  auto fit_linear_bound = [&](const std::function<double(double)>& h, double& c_const, double& c_slope) {
    c_const = 0.0;
    c_slope = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double s = s_min + (s_max - s_min) * i / (samples - 1);
      const double v = std::abs(h(s));
      if (std::abs(s) <= 1.0)
        c_const = std::max(c_const, v);
      else
        c_slope = std::max(c_slope, v / std::abs(s));
    }
  };
  fit_linear_bound(r.f1, report.c1, report.c2);
  fit_linear_bound(r.g1, report.c4, report.c5);
  for (int i = 0; i < samples; ++i) {
    const double s = s_min + (s_max - s_min) * i / (samples - 1);
    report.c3 = std::max(report.c3, std::abs(r.f2(s)));
  }

  // superlinearity probe: |f1(s)|/|s| must stay bounded for a global bound
  const double slope_far = std::abs(r.f1(1e4)) / 1e4;
  const double slope_near = std::max(std::abs(r.f1(1e2)) / 1e2, 1e-300);
  report.globally_admissible = slope_far / slope_near < 10.0;
  return report;
}

}  // namespace hmmrd
