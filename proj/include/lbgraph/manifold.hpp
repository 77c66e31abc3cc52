#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lbgraph {

enum class ManifoldKind { circle, flat_torus2, sphere2 };

std::string kind_name(ManifoldKind kind);

// An analytic closed manifold with known geometry and spectrum.
// Supported models: a circle of radius R, a flat rectangular 2-torus,
// and a round 2-sphere of radius R.
struct ManifoldModel {
  ManifoldKind kind = ManifoldKind::circle;
  double radius = 1.0;  // circle / sphere
  double lx = 1.0;      // torus
  double ly = 1.0;

  static ManifoldModel circle(double radius);
  static ManifoldModel flat_torus2(double lx, double ly);
  static ManifoldModel sphere2(double radius);

  int dimension() const { return kind == ManifoldKind::circle ? 1 : 2; }
  double volume() const;
  double diameter() const;
  double injectivity_radius() const;
  // Upper bound on |sectional curvature| (0 for circle/torus, 1/R^2 sphere).
  double curvature_bound() const;

  bool operator==(const ManifoldModel& other) const;
};

// Chart coordinates: circle stores the angle in x[0] (normalized to
// [0, 2pi)); the torus stores (x, y) in the fundamental domain; the
// sphere stores a unit 3-vector.
struct ManifoldPoint {
  ManifoldKind kind = ManifoldKind::circle;
  std::array<double, 3> x{0.0, 0.0, 0.0};
};

ManifoldPoint circle_point(double theta);
ManifoldPoint torus_point(const ManifoldModel& model, double x, double y);
ManifoldPoint sphere_point(double x, double y, double z);

// One distinct eigenvalue of -Laplace on the model.
// `level` is the rank of the eigenvalue among distinct ones; for the
// circle it equals the Fourier mode m, for the sphere the degree l.
struct ExactSpectrumEntry {
  double eigenvalue = 0.0;
  int multiplicity = 1;
  int level = 0;
};

double geodesic_distance(const ManifoldModel& model, const ManifoldPoint& p,
                         const ManifoldPoint& q);

std::vector<ManifoldPoint> sample_uniform(const ManifoldModel& model,
                                          std::size_t count,
                                          std::uint64_t seed);

// Distinct eigenvalues in ascending order, covering at least `count`
// eigenvalues when expanded with multiplicity.
std::vector<ExactSpectrumEntry> exact_spectrum(const ManifoldModel& model,
                                               std::size_t count);

// Flattens entries into an ascending eigenvalue list with multiplicity.
std::vector<double> expand_spectrum(const std::vector<ExactSpectrumEntry>& entries,
                                    std::size_t count);

// Values at `p` of an L2-orthonormal real basis of the eigenspace at
// the given level. Size is the eigenspace dimension (multiplicity).
std::vector<double> eigenspace_basis_eval(const ManifoldModel& model, int level,
                                          const ManifoldPoint& p);

// The lattice frequency classes behind the torus spectrum; exposed so
// eigenspace evaluation and tests can enumerate class members.
struct TorusLevel {
  double eigenvalue = 0.0;
  // Canonical representatives (p, q): one per +/- pair, (0,0) for level 0.
  std::vector<std::array<int, 2>> reps;
};
std::vector<TorusLevel> torus_levels(const ManifoldModel& model,
                                     std::size_t min_total_multiplicity);

}  // namespace lbgraph
