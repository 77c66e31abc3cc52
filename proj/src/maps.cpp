#include "lbgraph/maps.hpp"

#include <cmath>
#include <memory>

#include "lbgraph/errors.hpp"
#include "lbgraph/graph.hpp"
#include "metric.hpp"

namespace lbgraph {

namespace {

double kahan_sum(const double* data, std::size_t n) {
  double sum = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = data[i] - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

double kernel_psi(int n, double t) {
  if (n < 1) throw invalid_input("kernel_psi requires n >= 1");
  if (t < 0.0) throw invalid_input("kernel_psi requires t >= 0");
  if (t >= 1.0) return 0.0;
  return (n + 2) / (2.0 * unit_ball_volume(n)) * (1.0 - t * t);
}

Eigen::VectorXd discretize(const WeightedNet& wnet, const FieldFunction& f) {
  if (wnet.samples.empty())
    throw invalid_input("weighted net carries no quadrature samples");
  const std::size_t n = wnet.size();
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(n);
  for (std::size_t s = 0; s < wnet.samples.size(); ++s) {
    const double v = f(wnet.samples[s]);
    if (!std::isfinite(v))
      throw invalid_input("field function is non-finite at sample " +
                          std::to_string(s));
    sums[wnet.cell[s]] += v;
  }
  Eigen::VectorXd means(n);
  for (std::size_t i = 0; i < n; ++i)
    means[i] = sums[i] / static_cast<double>(wnet.counts[i]);
  return means;
}

FieldFunction extend(const WeightedNet& wnet, const Eigen::VectorXd& u) {
  if (u.size() != static_cast<Eigen::Index>(wnet.size()))
    throw invalid_input("vector length does not match net size");
  const ManifoldModel model = wnet.net.model;
  const std::vector<ManifoldPoint> points = wnet.net.points;
  const Eigen::VectorXd values = u;
  return [model, points, values](const ManifoldPoint& y) {
    return values[detail::nearest_index(model, points, y)];
  };
}

Eigen::VectorXd extend_on_samples(const WeightedNet& wnet,
                                  const Eigen::VectorXd& u) {
  if (u.size() != static_cast<Eigen::Index>(wnet.size()))
    throw invalid_input("vector length does not match net size");
  Eigen::VectorXd out(wnet.samples.size());
  for (std::size_t s = 0; s < wnet.samples.size(); ++s)
    out[s] = u[wnet.cell[s]];
  return out;
}

double theta(const WeightedNet& wnet, const KernelParams& params,
             const ManifoldPoint& x) {
  if (!(params.r > 0.0)) throw invalid_input("smoothing radius must be positive");
  if (wnet.samples.empty())
    throw invalid_input("weighted net carries no quadrature samples");
  const ManifoldModel& model = wnet.net.model;
  const double psi_scale = (params.n + 2) / (2.0 * unit_ball_volume(params.n));
  double acc = 0.0;
  bool hit = false;
  for (const auto& y : wnet.samples) {
    const double t = geodesic_distance(model, x, y) / params.r;
    if (t < 1.0) {
      acc += psi_scale * (1.0 - t * t);
      hit = true;
    }
  }
  if (!hit) throw invalid_input("kernel support empty: no sample within r of x");
  return acc * wnet.sample_mass() / std::pow(params.r, params.n);
}

Interpolant::Interpolant(const WeightedNet& wnet, Eigen::MatrixXd columns,
                         double rho, double epsilon)
    : wnet_(&wnet), columns_(std::move(columns)) {
  r_ = rho - 2.0 * epsilon;
  if (!(r_ > 0.0)) throw invalid_input("interpolation needs rho - 2 eps > 0");
  if (columns_.rows() != static_cast<Eigen::Index>(wnet.size()))
    throw invalid_input("column length does not match net size");
  if (wnet.samples.empty())
    throw invalid_input("weighted net carries no quadrature samples");
  // Bucket sample indices by cell for support queries.
  const std::size_t n = wnet.size();
  cell_offset_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i)
    cell_offset_[i + 1] = cell_offset_[i] + static_cast<std::size_t>(wnet.counts[i]);
  cell_sample_.resize(wnet.samples.size());
  std::vector<std::size_t> cursor(cell_offset_.begin(), cell_offset_.end() - 1);
  for (std::size_t s = 0; s < wnet.samples.size(); ++s)
    cell_sample_[cursor[wnet.cell[s]]++] = static_cast<std::uint32_t>(s);
}

Eigen::VectorXd Interpolant::operator()(const ManifoldPoint& x) const {
  const ManifoldModel& model = wnet_->net.model;
  // Samples of cells whose centers lie beyond r + max assignment
  // distance cannot enter the kernel support.
  const double reach = r_ + wnet_->max_assign_distance;
  const double s_reach =
      detail::distance_to_surrogate(model, std::min(reach, model.diameter()));
  const double inv_r = 1.0 / r_;

  Eigen::VectorXd num = Eigen::VectorXd::Zero(columns_.cols());
  Eigen::VectorXd ref;
  double den = 0.0;
  bool have_ref = false;
  for (std::size_t i = 0; i < wnet_->size(); ++i) {
    if (detail::surrogate(model, x, wnet_->net.points[i]) > s_reach) continue;
    if (!have_ref) {
      // Centering against the first candidate cell keeps constants
      // exact: the numerator vanishes identically for constant columns.
      ref = columns_.row(i).transpose();
      have_ref = true;
    }
    const Eigen::VectorXd delta = columns_.row(i).transpose() - ref;
    double cell_mass = 0.0;
    for (std::size_t c = cell_offset_[i]; c < cell_offset_[i + 1]; ++c) {
      const double t =
          geodesic_distance(model, x, wnet_->samples[cell_sample_[c]]) * inv_r;
      if (t < 1.0) cell_mass += 1.0 - t * t;
    }
    if (cell_mass > 0.0) {
      den += cell_mass;
      num += cell_mass * delta;
    }
  }
  if (!(den > 0.0))
    throw invalid_input("kernel support empty: no sample within r of x");
  return ref + num / den;
}

FieldFunction interpolate(const WeightedNet& wnet, const Eigen::VectorXd& u,
                          double rho, double epsilon) {
  auto interp = std::make_shared<Interpolant>(wnet, Eigen::MatrixXd(u), rho,
                                              epsilon);
  return [interp](const ManifoldPoint& x) { return (*interp)(x)[0]; };
}

double dispersion(const ManifoldModel& model, const FieldFunction& f, double r,
                  std::size_t sample_count, std::uint64_t seed) {
  if (!(r > 0.0)) throw invalid_input("dispersion radius must be positive");
  if (sample_count < 1000)
    throw invalid_input("dispersion needs at least 1000 samples");
  const auto pool = sample_uniform(model, sample_count, seed);
  std::vector<double> values(sample_count);
  for (std::size_t s = 0; s < sample_count; ++s) {
    values[s] = f(pool[s]);
    if (!std::isfinite(values[s]))
      throw invalid_input("field function is non-finite at sample " +
                          std::to_string(s));
  }
  const double s_r = detail::distance_to_surrogate(model, r);
  double acc = 0.0, comp = 0.0;
  for (std::size_t s = 0; s < sample_count; ++s) {
    for (std::size_t t = s + 1; t < sample_count; ++t) {
      if (detail::surrogate(model, pool[s], pool[t]) <= s_r) {
        const double d = values[t] - values[s];
        const double y = 2.0 * d * d - comp;
        const double tt = acc + y;
        comp = (tt - acc) - y;
        acc = tt;
      }
    }
  }
  const double mass = model.volume() / static_cast<double>(sample_count);
  return acc * mass * mass;
}

double empirical_inner(const WeightedNet& wnet, const Eigen::VectorXd& a,
                       const Eigen::VectorXd& b) {
  if (a.size() != b.size() ||
      a.size() != static_cast<Eigen::Index>(wnet.samples.size()))
    throw invalid_input("sample value arrays must match the quadrature size");
  std::vector<double> terms(a.size());
  for (Eigen::Index s = 0; s < a.size(); ++s) terms[s] = a[s] * b[s];
  return kahan_sum(terms.data(), terms.size()) * wnet.sample_mass();
}

double l2x_inner(const WeightedNet& wnet, const Eigen::VectorXd& u,
                 const Eigen::VectorXd& v) {
  if (u.size() != v.size() || u.size() != static_cast<Eigen::Index>(wnet.size()))
    throw invalid_input("vector length does not match net size");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) acc += wnet.mu[i] * u[i] * v[i];
  return acc;
}

}  // namespace lbgraph
