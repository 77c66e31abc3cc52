#include "lbgraph/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "lbgraph/errors.hpp"
#include "lbgraph/rng.hpp"

namespace lbgraph {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t = 0.0;
  return t;
}

double wrap_coord(double v, double period) {
  double t = std::fmod(v, period);
  if (t < 0.0) t += period;
  if (t >= period) t = 0.0;
  return t;
}

double axis_distance(double a, double b, double period) {
  const double d = std::fabs(a - b);
  return std::min(d, period - d);
}

// Normalized associated Legendre P~_l^m(x) such that the real spherical
// harmonics are Y_l0 = P~_l^0, Y_lm = sqrt(2) P~_l^m cos(m phi),
// Y_l,-m = sqrt(2) P~_l^m sin(m phi), orthonormal over the unit sphere.
double normalized_plm(int l, int m, double x) {
  // P~_m^m by the stable product form, then upward recurrence in l.
  double pmm = std::sqrt(1.0 / (4.0 * M_PI));
  if (m > 0) {
    const double s = std::sqrt((1.0 - x) * (1.0 + x));  // sin(theta)
    for (int i = 1; i <= m; ++i)
      pmm *= -std::sqrt((2.0 * i + 1.0) / (2.0 * i)) * s;
  }
  if (l == m) return pmm;
  double pmmp1 = x * std::sqrt(2.0 * m + 3.0) * pmm;
  if (l == m + 1) return pmmp1;
  double plm = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    const double a = std::sqrt((4.0 * ll * ll - 1.0) /
                               (static_cast<double>(ll * ll - m * m)));
    const double b = std::sqrt(((ll - 1.0) * (ll - 1.0) - m * m) /
                               (4.0 * (ll - 1.0) * (ll - 1.0) - 1.0));
    plm = a * (x * pmmp1 - b * pmm);
    pmm = pmmp1;
    pmmp1 = plm;
  }
  return plm;
}

}  // namespace

std::string kind_name(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::circle:
      return "circle";
    case ManifoldKind::flat_torus2:
      return "flat_torus2";
    case ManifoldKind::sphere2:
      return "sphere2";
  }
  return "unknown";
}

ManifoldModel ManifoldModel::circle(double radius) {
  if (!(radius > 0.0)) throw invalid_input("circle radius must be positive");
  ManifoldModel m;
  m.kind = ManifoldKind::circle;
  m.radius = radius;
  return m;
}

ManifoldModel ManifoldModel::flat_torus2(double lx, double ly) {
  if (!(lx > 0.0) || !(ly > 0.0))
    throw invalid_input("torus side lengths must be positive");
  ManifoldModel m;
  m.kind = ManifoldKind::flat_torus2;
  m.lx = lx;
  m.ly = ly;
  return m;
}

ManifoldModel ManifoldModel::sphere2(double radius) {
  if (!(radius > 0.0)) throw invalid_input("sphere radius must be positive");
  ManifoldModel m;
  m.kind = ManifoldKind::sphere2;
  m.radius = radius;
  return m;
}

double ManifoldModel::volume() const {
  switch (kind) {
    case ManifoldKind::circle:
      return kTwoPi * radius;
    case ManifoldKind::flat_torus2:
      return lx * ly;
    case ManifoldKind::sphere2:
      return 4.0 * M_PI * radius * radius;
  }
  return 0.0;
}

double ManifoldModel::diameter() const {
  switch (kind) {
    case ManifoldKind::circle:
      return M_PI * radius;
    case ManifoldKind::flat_torus2:
      return 0.5 * std::hypot(lx, ly);
    case ManifoldKind::sphere2:
      return M_PI * radius;
  }
  return 0.0;
}

double ManifoldModel::injectivity_radius() const {
  switch (kind) {
    case ManifoldKind::circle:
      return M_PI * radius;
    case ManifoldKind::flat_torus2:
      return 0.5 * std::min(lx, ly);
    case ManifoldKind::sphere2:
      return M_PI * radius;
  }
  return 0.0;
}

double ManifoldModel::curvature_bound() const {
  return kind == ManifoldKind::sphere2 ? 1.0 / (radius * radius) : 0.0;
}

bool ManifoldModel::operator==(const ManifoldModel& other) const {
  if (kind != other.kind) return false;
  switch (kind) {
    case ManifoldKind::circle:
    case ManifoldKind::sphere2:
      return radius == other.radius;
    case ManifoldKind::flat_torus2:
      return lx == other.lx && ly == other.ly;
  }
  return false;
}

ManifoldPoint circle_point(double theta) {
  ManifoldPoint p;
  p.kind = ManifoldKind::circle;
  p.x[0] = wrap_angle(theta);
  return p;
}

ManifoldPoint torus_point(const ManifoldModel& model, double x, double y) {
  if (model.kind != ManifoldKind::flat_torus2)
    throw invalid_input("torus_point requires a flat_torus2 model");
  ManifoldPoint p;
  p.kind = ManifoldKind::flat_torus2;
  p.x[0] = wrap_coord(x, model.lx);
  p.x[1] = wrap_coord(y, model.ly);
  return p;
}

ManifoldPoint sphere_point(double x, double y, double z) {
  const double norm = std::sqrt(x * x + y * y + z * z);
  if (!(norm > 0.0)) throw invalid_input("sphere point must be a nonzero vector");
  if (std::fabs(norm - 1.0) > 1e-12) {
    x /= norm;
    y /= norm;
    z /= norm;
  }
  ManifoldPoint p;
  p.kind = ManifoldKind::sphere2;
  p.x = {x, y, z};
  return p;
}

double geodesic_distance(const ManifoldModel& model, const ManifoldPoint& p,
                         const ManifoldPoint& q) {
  if (p.kind != model.kind || q.kind != model.kind)
    throw invalid_input("point kind does not match the manifold model");
  switch (model.kind) {
    case ManifoldKind::circle: {
      const double d = std::fabs(p.x[0] - q.x[0]);
      return model.radius * std::min(d, kTwoPi - d);
    }
    case ManifoldKind::flat_torus2: {
      const double dx = axis_distance(p.x[0], q.x[0], model.lx);
      const double dy = axis_distance(p.x[1], q.x[1], model.ly);
      return std::hypot(dx, dy);
    }
    case ManifoldKind::sphere2: {
      double dot = p.x[0] * q.x[0] + p.x[1] * q.x[1] + p.x[2] * q.x[2];
      dot = std::clamp(dot, -1.0, 1.0);
      return model.radius * std::acos(dot);
    }
  }
  return 0.0;
}

std::vector<ManifoldPoint> sample_uniform(const ManifoldModel& model,
                                          std::size_t count,
                                          std::uint64_t seed) {
  if (count == 0) throw invalid_input("sample count must be at least 1");
  Rng rng(seed);
  std::vector<ManifoldPoint> pts;
  pts.reserve(count);
  switch (model.kind) {
    case ManifoldKind::circle:
      for (std::size_t i = 0; i < count; ++i)
        pts.push_back(circle_point(rng.uniform(0.0, kTwoPi)));
      break;
    case ManifoldKind::flat_torus2:
      for (std::size_t i = 0; i < count; ++i) {
        const double x = rng.uniform(0.0, model.lx);
        const double y = rng.uniform(0.0, model.ly);
        pts.push_back(torus_point(model, x, y));
      }
      break;
    case ManifoldKind::sphere2:
      for (std::size_t i = 0; i < count; ++i) {
        double x, y, z, n2;
        do {
          x = rng.normal();
          y = rng.normal();
          z = rng.normal();
          n2 = x * x + y * y + z * z;
        } while (n2 < 1e-30);
        pts.push_back(sphere_point(x, y, z));
      }
      break;
  }
  return pts;
}

namespace {

// Enumeration is pure in (lx, ly, min_total); memoized because basis
// evaluation calls it per point.
struct TorusLevelCache {
  std::mutex mutex;
  std::map<std::pair<double, double>,
           std::pair<std::size_t, std::vector<TorusLevel>>>
      entries;  // (lx, ly) -> (covered multiplicity, levels)
};

std::vector<TorusLevel> enumerate_torus_levels(const ManifoldModel& model,
                                               std::size_t min_total_multiplicity) {
  int range = 4;
  for (;;) {
    // All lattice points (p,q) with |p|,|q| <= range cover every
    // eigenvalue up to the completeness cutoff below.
    const double cutoff =
        4.0 * M_PI * M_PI * range * range /
        (std::max(model.lx, model.ly) * std::max(model.lx, model.ly));
    std::map<long long, TorusLevel> classes;  // key: rounded scaled eigenvalue
    for (int p = -range; p <= range; ++p) {
      for (int q = -range; q <= range; ++q) {
        const double lam = 4.0 * M_PI * M_PI *
                           (static_cast<double>(p) * p / (model.lx * model.lx) +
                            static_cast<double>(q) * q / (model.ly * model.ly));
        if (lam > cutoff) continue;
        const long long key = std::llround(lam * 1e9);
        auto& cls = classes[key];
        cls.eigenvalue = lam;
        const bool canonical = (p > 0) || (p == 0 && q >= 0);
        if (canonical) cls.reps.push_back({p, q});
      }
    }
    std::vector<TorusLevel> levels;
    std::size_t total = 0;
    for (auto& [key, cls] : classes) {
      std::sort(cls.reps.begin(), cls.reps.end());
      levels.push_back(cls);
      total += (cls.eigenvalue == 0.0) ? 1 : 2 * cls.reps.size();
      if (total >= min_total_multiplicity) return levels;
    }
    range *= 2;
    if (range > 4096)
      throw invalid_input("torus level enumeration range exhausted");
  }
}

}  // namespace

std::vector<TorusLevel> torus_levels(const ManifoldModel& model,
                                     std::size_t min_total_multiplicity) {
  if (model.kind != ManifoldKind::flat_torus2)
    throw invalid_input("torus_levels requires a flat_torus2 model");
  static TorusLevelCache cache;
  std::lock_guard<std::mutex> lock(cache.mutex);
  auto& slot = cache.entries[{model.lx, model.ly}];
  if (slot.first < min_total_multiplicity) {
    slot.second = enumerate_torus_levels(model, min_total_multiplicity);
    slot.first = min_total_multiplicity;
  }
  // Slice to what this request would have produced so the result does
  // not depend on earlier, larger queries.
  std::vector<TorusLevel> out;
  std::size_t total = 0;
  for (const auto& cls : slot.second) {
    out.push_back(cls);
    total += (cls.eigenvalue == 0.0) ? 1 : 2 * cls.reps.size();
    if (total >= min_total_multiplicity) break;
  }
  return out;
}

std::vector<ExactSpectrumEntry> exact_spectrum(const ManifoldModel& model,
                                               std::size_t count) {
  if (count == 0) throw invalid_input("spectrum count must be at least 1");
  std::vector<ExactSpectrumEntry> entries;
  std::size_t total = 0;
  switch (model.kind) {
    case ManifoldKind::circle: {
      const double r2 = model.radius * model.radius;
      for (int m = 0; total < count; ++m) {
        ExactSpectrumEntry e;
        e.eigenvalue = static_cast<double>(m) * m / r2;
        e.multiplicity = (m == 0) ? 1 : 2;
        e.level = m;
        entries.push_back(e);
        total += e.multiplicity;
      }
      break;
    }
    case ManifoldKind::flat_torus2: {
      const auto levels = torus_levels(model, count);
      for (std::size_t i = 0; i < levels.size() && total < count; ++i) {
        ExactSpectrumEntry e;
        e.eigenvalue = levels[i].eigenvalue;
        e.multiplicity = (levels[i].eigenvalue == 0.0)
                             ? 1
                             : static_cast<int>(2 * levels[i].reps.size());
        e.level = static_cast<int>(i);
        entries.push_back(e);
        total += e.multiplicity;
      }
      break;
    }
    case ManifoldKind::sphere2: {
      const double r2 = model.radius * model.radius;
      for (int l = 0; total < count; ++l) {
        ExactSpectrumEntry e;
        e.eigenvalue = static_cast<double>(l) * (l + 1) / r2;
        e.multiplicity = 2 * l + 1;
        e.level = l;
        entries.push_back(e);
        total += e.multiplicity;
      }
      break;
    }
  }
  return entries;
}

std::vector<double> expand_spectrum(const std::vector<ExactSpectrumEntry>& entries,
                                    std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  for (const auto& e : entries) {
    for (int i = 0; i < e.multiplicity && out.size() < count; ++i)
      out.push_back(e.eigenvalue);
    if (out.size() >= count) break;
  }
  return out;
}

std::vector<double> eigenspace_basis_eval(const ManifoldModel& model, int level,
                                          const ManifoldPoint& p) {
  if (p.kind != model.kind)
    throw invalid_input("point kind does not match the manifold model");
  if (level < 0) throw invalid_input("eigenspace level must be nonnegative");
  switch (model.kind) {
    case ManifoldKind::circle: {
      // L2-orthonormal on a circle of radius R.
      const double theta = p.x[0];
      const int m = level;
      if (m == 0) return {1.0 / std::sqrt(kTwoPi * model.radius)};
      const double scale = 1.0 / std::sqrt(M_PI * model.radius);
      return {scale * std::cos(m * theta), scale * std::sin(m * theta)};
    }
    case ManifoldKind::flat_torus2: {
      if (level > 4096)
        throw invalid_input("torus eigenspace level out of supported range");
      const auto levels = torus_levels(model, 2 * (level + 2) * (level + 2));
      if (level >= static_cast<int>(levels.size()))
        throw invalid_input("unknown torus eigenspace level");
      const auto& cls = levels[level];
      const double vol = model.volume();
      if (cls.eigenvalue == 0.0) return {1.0 / std::sqrt(vol)};
      std::vector<double> vals;
      vals.reserve(2 * cls.reps.size());
      const double scale = std::sqrt(2.0 / vol);
      for (const auto& rep : cls.reps) {
        const double phase = kTwoPi * (rep[0] * p.x[0] / model.lx +
                                       rep[1] * p.x[1] / model.ly);
        vals.push_back(scale * std::cos(phase));
        vals.push_back(scale * std::sin(phase));
      }
      return vals;
    }
    case ManifoldKind::sphere2: {
      const int l = level;
      const double ct = p.x[2];
      const double phi = std::atan2(p.x[1], p.x[0]);
      // Real spherical harmonics, rescaled for sphere radius R.
      const double scale = 1.0 / model.radius;
      std::vector<double> vals;
      vals.reserve(2 * l + 1);
      vals.push_back(scale * normalized_plm(l, 0, ct));
      for (int m = 1; m <= l; ++m) {
        const double plm = normalized_plm(l, m, ct);
        vals.push_back(scale * M_SQRT2 * plm * std::cos(m * phi));
        vals.push_back(scale * M_SQRT2 * plm * std::sin(m * phi));
      }
      return vals;
    }
  }
  throw invalid_input("unknown manifold kind");
}

}  // namespace lbgraph
