// Reaction kinetics with the affine-in-recovery structure
//   f(s, xi) = f1(s) + f2(s) xi,   g(s, xi) = g1(s) + alpha xi,
// including the Barkley excitable-medium model.

#ifndef HMMRD_REACTION_HPP
#define HMMRD_REACTION_HPP

#include <array>
#include <functional>
#include <utility>

namespace hmmrd {

struct AffineReaction {
  std::function<double(double)> f1;
  std::function<double(double)> f2;
  std::function<double(double)> g1;
  double alpha = 0.0;

  double f(double s, double xi) const { return f1(s) + f2(s) * xi; }
  double g(double s, double xi) const { return g1(s) + alpha * xi; }
};

/// Kinetics switched off: f = g = 0 (pure diffusion in u, constant v).
AffineReaction zero_reaction();

struct BarkleyParams {
  double rho = 0.005;  ///< time-scale separation of the fast variable
  double a = 0.3;      ///< excitation-duration parameter
  double b = 0.01;     ///< threshold parameter
  double delta = 0.1;  ///< excitation threshold used by diagnostics only

  bool operator==(const BarkleyParams&) const = default;
};

/// Barkley kinetics f = (1/rho) u (1-u) (u - (v+b)/a), g = u - v, decomposed
/// into the affine form above.
AffineReaction barkley(const BarkleyParams& params);

struct NullclineDiagnostics {
  // u-nullclines are the lines u = 0, u = 1 and u = (v+b)/a; the v-nullcline
  // is u = v. Intersections give the rest state and the excited state.
  std::array<std::pair<double, double>, 2> fixed_points;  ///< (0,0) and (1,1)
  std::function<double(double)> threshold;                ///< u_th(v) = (v+b)/a
};

NullclineDiagnostics nullcline_diagnostics(const BarkleyParams& params);

/// Smallest linear growth constants |f1| <= c1 + c2 |s|, |f2| <= c3,
/// |g1| <= c4 + c5 |s| valid on a sampled interval, plus a superlinearity
/// probe: cubic kinetics like Barkley's admit no global linear bound.
struct GrowthBoundReport {
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0, c5 = 0;
  double s_min = 0, s_max = 0;
  bool globally_admissible = true;
};

GrowthBoundReport growth_admissibility_check(const AffineReaction& r, double s_min, double s_max);

}  // namespace hmmrd

#endif
