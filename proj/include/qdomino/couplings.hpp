#pragma once

#include "qdomino/error.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace qdomino {

enum class Geometry { chain, ring };

inline const char *geometry_name(Geometry g) {
  return g == Geometry::chain ? "chain" : "ring";
}

/// Largest neighbor order M that is meaningful for the geometry: n-1 for a
/// chain, floor(n/2) for a ring (beyond that circular distances repeat).
inline int max_neighbors(Geometry g, int n) {
  return g == Geometry::chain ? n - 1 : n / 2;
}

/// Separation of sites a and b (1-based); circular distance on a ring.
inline int separation(Geometry g, int n, int a, int b) {
  const int d = std::abs(a - b);
  return g == Geometry::chain ? d : std::min(d, n - d);
}

/// Maps any integer site label onto 1..n cyclically (0 -> n, n+1 -> 1).
inline int wrap_site(int n, int site) { return ((site - 1) % n + n) % n + 1; }

struct CouplingTable {
  struct Pair {
    int first;  // first < second
    int second;
    int separation;
    double d;
  };

  std::vector<Pair> pairs;

  std::optional<double> find(int a, int b) const {
    if (a > b) std::swap(a, b);
    for (const auto &p : pairs)
      if (p.first == a && p.second == b) return p.d;
    return std::nullopt;
  }

  /// Coupling of the pair, zero when the pair is beyond the truncation.
  double operator()(int a, int b) const { return find(a, b).value_or(0.0); }
};

/// Nearest-neighbor-normalized distance profile: 1/q^3 on a chain,
/// [sin(pi/n)/sin(pi q/n)]^3 on a ring.
inline double distance_profile(Geometry g, int n, int q) {
  if (g == Geometry::chain) return 1.0 / (double(q) * q * q);
  const double pi = std::numbers::pi;
  const double ratio = std::sin(pi / n) / std::sin(pi * q / n);
  return ratio * ratio * ratio;
}

/// ZZ couplings D_mn = d1 * profile(q) for every pair with separation
/// q <= m_neighbors.
inline CouplingTable coupling_profile(Geometry g, int n, double d1,
                                      int m_neighbors) {
  if (n < 2)
    throw InvalidArgument("coupling profile needs at least 2 spins");
  if (m_neighbors < 1 || m_neighbors > max_neighbors(g, n))
    throw InvalidArgument("m_neighbors must be in 1.." +
                          std::to_string(max_neighbors(g, n)) + " for a " +
                          geometry_name(g) + " of " + std::to_string(n) +
                          " spins");
  CouplingTable t;
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      const int q = separation(g, n, a, b);
      if (q <= m_neighbors)
        t.pairs.push_back({a, b, q, d1 * distance_profile(g, n, q)});
    }
  return t;
}

struct DipoleGeometry {
  double r;     // distance
  double theta; // angle between the pair vector and the static field
};

/// Secular dipolar coupling gamma_m gamma_n (1 - 3 cos^2 theta) / (2 r^3).
inline double dipolar_coupling(double gamma_m, double gamma_n,
                               const DipoleGeometry &geom) {
  if (!(geom.r > 0.0))
    throw InvalidArgument("dipolar distance must be positive");
  const double c = std::cos(geom.theta);
  return gamma_m * gamma_n * (1.0 - 3.0 * c * c) /
         (2.0 * geom.r * geom.r * geom.r);
}

/// Distance between sites separated by q in units of the nearest-neighbor
/// spacing; the chord length on a ring.
inline double pair_distance(Geometry g, int n, int q) {
  if (g == Geometry::chain) return q;
  const double pi = std::numbers::pi;
  return std::sin(pi * q / n) / std::sin(pi / n);
}

} // namespace qdomino
