// Shared helpers for the test suites.

#ifndef HMMRD_TEST_HELPERS_HPP
#define HMMRD_TEST_HELPERS_HPP

#include <random>
#include <vector>

#include "hmmrd/mesh.hpp"

namespace hmmrd::test {

/// Triangulation of [-L, L]^2 with interior vertices jittered by up to
/// `amount` of the half grid spacing; keeps boundary vertices fixed so the
/// domain (and its measure) is unchanged. Deterministic in the seed.
inline PolytopalMesh perturbed_triangular(double L, int n, unsigned seed, double amount = 0.35) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jitter(-amount, amount);
  const double s = 2.0 * L / n;

  std::vector<Vec2> vertices;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      Vec2 v(-L + i * s, -L + j * s);
      if (i > 0 && i < n && j > 0 && j < n)
        v += Vec2(jitter(rng), jitter(rng)) * (0.5 * s);
      vertices.push_back(v);
    }
  const int center_base = (n + 1) * (n + 1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      Vec2 v(-L + (i + 0.5) * s, -L + (j + 0.5) * s);
      v += Vec2(jitter(rng), jitter(rng)) * (0.5 * s);
      vertices.push_back(v);
    }

  auto corner = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int c00 = corner(i, j), c10 = corner(i + 1, j);
      const int c11 = corner(i + 1, j + 1), c01 = corner(i, j + 1);
      const int mid = center_base + j * n + i;
      cells.push_back({c00, c10, mid});
      cells.push_back({c10, c11, mid});
      cells.push_back({c11, c01, mid});
      cells.push_back({c01, c00, mid});
    }
  return PolytopalMesh::from_arrays(std::move(vertices), cells);
}

}  // namespace hmmrd::test

#endif
