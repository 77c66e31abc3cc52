#pragma once

#include <algorithm>
#include <cmath>

#include "lbgraph/manifold.hpp"

namespace lbgraph::detail {

// Monotone surrogates for geodesic distance, cheap enough for hot
// nearest-point loops (no trig on the circle/torus, no acos on the
// sphere). surrogate_to_distance inverts them exactly.

inline double surrogate(const ManifoldModel& m, const ManifoldPoint& a,
                        const ManifoldPoint& b) {
  switch (m.kind) {
    case ManifoldKind::circle: {
      const double d = std::fabs(a.x[0] - b.x[0]);
      return std::min(d, 2.0 * M_PI - d);
    }
    case ManifoldKind::flat_torus2: {
      double dx = std::fabs(a.x[0] - b.x[0]);
      dx = std::min(dx, m.lx - dx);
      double dy = std::fabs(a.x[1] - b.x[1]);
      dy = std::min(dy, m.ly - dy);
      return dx * dx + dy * dy;
    }
    case ManifoldKind::sphere2:
      return -(a.x[0] * b.x[0] + a.x[1] * b.x[1] + a.x[2] * b.x[2]);
  }
  return 0.0;
}

inline double surrogate_to_distance(const ManifoldModel& m, double s) {
  switch (m.kind) {
    case ManifoldKind::circle:
      return m.radius * s;
    case ManifoldKind::flat_torus2:
      return std::sqrt(s);
    case ManifoldKind::sphere2:
      return m.radius * std::acos(std::clamp(-s, -1.0, 1.0));
  }
  return 0.0;
}

inline double distance_to_surrogate(const ManifoldModel& m, double d) {
  switch (m.kind) {
    case ManifoldKind::circle:
      return d / m.radius;
    case ManifoldKind::flat_torus2:
      return d * d;
    case ManifoldKind::sphere2:
      return d >= M_PI * m.radius ? 1.0 : -std::cos(d / m.radius);
  }
  return 0.0;
}

// Index of the nearest point, ties broken by lowest index.
inline std::size_t nearest_index(const ManifoldModel& m,
                                 const std::vector<ManifoldPoint>& pts,
                                 const ManifoldPoint& q,
                                 double* best_surrogate = nullptr) {
  std::size_t best = 0;
  double s_best = surrogate(m, pts[0], q);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double s = surrogate(m, pts[i], q);
    if (s < s_best) {
      s_best = s;
      best = i;
    }
  }
  if (best_surrogate) *best_surrogate = s_best;
  return best;
}

}  // namespace lbgraph::detail
