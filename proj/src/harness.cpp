#include "lbgraph/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

#include <json.hpp>

#include "lbgraph/errors.hpp"
#include "lbgraph/io.hpp"

namespace lbgraph {

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Scores each eigenvector column against its exact eigenspace over a
// fresh uniform quadrature; the exact basis is orthonormalized in the
// same empirical inner product, so scores are honest projections.
std::vector<double> score_columns(const ManifoldModel& model,
                                  const WeightedNet& wnet,
                                  const Eigen::MatrixXd& columns,
                                  const std::vector<int>& levels, double rho,
                                  double epsilon, std::size_t sample_count,
                                  std::uint64_t seed) {
  if (static_cast<Eigen::Index>(levels.size()) != columns.cols())
    throw invalid_input("one exact level per eigenvector column required");
  if (sample_count < 1000)
    throw invalid_input("alignment needs at least 1000 quadrature points");

  const Interpolant interp(wnet, columns, rho, epsilon);
  const auto outer = sample_uniform(model, sample_count, seed);
  const auto m = static_cast<Eigen::Index>(columns.cols());
  const auto T = static_cast<Eigen::Index>(sample_count);

  Eigen::MatrixXd iu(T, m);
  std::map<int, Eigen::MatrixXd> basis_values;
  for (int level : levels) {
    if (basis_values.count(level)) continue;
    const auto probe = eigenspace_basis_eval(model, level, outer[0]);
    basis_values[level] =
        Eigen::MatrixXd(T, static_cast<Eigen::Index>(probe.size()));
  }
  for (Eigen::Index t = 0; t < T; ++t) {
    iu.row(t) = interp(outer[t]).transpose();
    for (auto& [level, mat] : basis_values) {
      const auto vals = eigenspace_basis_eval(model, level, outer[t]);
      for (Eigen::Index j = 0; j < mat.cols(); ++j) mat(t, j) = vals[j];
    }
  }

  std::vector<double> scores(levels.size());
  for (Eigen::Index c = 0; c < m; ++c) {
    const Eigen::MatrixXd& basis = basis_values.at(levels[c]);
    const Eigen::MatrixXd gram = basis.transpose() * basis;
    const Eigen::VectorXd b = basis.transpose() * iu.col(c);
    const double norm2 = iu.col(c).squaredNorm();
    if (!(norm2 > 0.0)) {
      scores[c] = 0.0;
      continue;
    }
    // Projection norm in the empirical inner product; the vol/T factors
    // cancel between gram, b and norm2.
    const Eigen::VectorXd y = gram.ldlt().solve(b);
    scores[c] = std::sqrt(std::max(0.0, b.dot(y) / norm2));
  }
  return scores;
}

int match_level(const ManifoldModel& model,
                const std::vector<ExactSpectrumEntry>& entries, double lambda) {
  double best = std::numeric_limits<double>::infinity();
  double second = std::numeric_limits<double>::infinity();
  int best_level = -1, second_level = -1;
  for (const auto& e : entries) {
    const double d = std::fabs(lambda - e.eigenvalue);
    if (d < best) {
      second = best;
      second_level = best_level;
      best = d;
      best_level = e.level;
    } else if (d < second) {
      second = d;
      second_level = e.level;
    }
  }
  if (second_level >= 0 &&
      std::fabs(best - second) <= 1e-9 * std::max(1.0, std::fabs(lambda)))
    throw invalid_input(
        "ambiguous cluster match for eigenvalue " + fmt_g(lambda) +
        ": levels " + std::to_string(best_level) + " and " +
        std::to_string(second_level) + " are equidistant");
  (void)model;
  return best_level;
}

}  // namespace

std::vector<double> alignment_scores_against_levels(
    const ManifoldModel& model, const WeightedNet& wnet,
    const Eigen::MatrixXd& eigenvectors, const std::vector<int>& levels,
    double rho, double epsilon, std::size_t sample_count, std::uint64_t seed) {
  return score_columns(model, wnet, eigenvectors, levels, rho, epsilon,
                       sample_count, seed);
}

std::vector<double> eigenspace_alignment(const ManifoldModel& model,
                                         const WeightedNet& wnet,
                                         const Spectrum& spectrum, int k_lo,
                                         int k_hi, double rho, double epsilon,
                                         std::size_t sample_count,
                                         std::uint64_t seed) {
  if (k_lo < 1 || k_hi < k_lo ||
      k_hi > static_cast<int>(spectrum.eigenvalues.size()))
    throw invalid_input("alignment k range out of bounds");
  const auto entries = exact_spectrum(model, static_cast<std::size_t>(k_hi) + 8);
  std::vector<int> levels;
  for (int k = k_lo; k <= k_hi; ++k)
    levels.push_back(match_level(model, entries, spectrum.eigenvalues[k - 1]));
  const Eigen::MatrixXd columns =
      spectrum.eigenvectors.middleCols(k_lo - 1, k_hi - k_lo + 1);
  return score_columns(model, wnet, columns, levels, rho, epsilon, sample_count,
                       seed);
}

std::string ConvergenceReport::csv() const {
  std::ostringstream out;
  out << "k,lambda_exact,lambda_graph,abs_err,rel_err,alignment\n";
  for (const auto& row : rows) {
    out << row.k << ',' << fmt_g(row.lambda_exact) << ','
        << fmt_g(row.lambda_graph) << ',' << fmt_g(row.abs_err) << ','
        << fmt_g(row.rel_err) << ',';
    if (row.has_alignment) out << fmt_g(row.alignment);
    out << '\n';
  }
  return out.str();
}

std::string ConvergenceReport::metadata_json() const {
  nlohmann::json j;
  j["model"] = model_name;
  j["n_points"] = n_points;
  j["samples"] = samples;
  j["rho"] = rho;
  j["epsilon_estimate"] = epsilon_estimate;
  j["epsilon_working"] = epsilon_working;
  j["eps_over_rho"] = eps_over_rho;
  j["seed"] = seed;
  j["kernel"] = kernel_name;
  j["measure_checked"] = measure_checked;
  j["measure_feasible"] = measure_feasible;
  j["measure_deficit"] = measure_deficit;
  j["graph_components"] = graph_components;
  j["solver"] = {{"iterations", solver.iterations},
                 {"tolerance", solver.tolerance},
                 {"method", solver.method}};
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

ConvergenceReport run_pipeline(const RunConfig& config) {
  if (config.n_points < 1) throw invalid_input("pipeline needs n_points >= 1");
  if (!(config.rho > 0.0)) throw invalid_input("pipeline needs rho > 0");
  if (config.k < 1) throw invalid_input("pipeline needs k >= 1");

  ConvergenceReport report;
  report.model_name = kind_name(config.model.kind);
  report.n_points = config.n_points;
  report.samples = config.samples;
  report.rho = config.rho;
  report.seed = config.seed;
  report.kernel_name = config.kernel ? config.kernel->name() : "none";

  auto relabel = [](const char* name, const invalid_input& e) {
    return invalid_input(std::string(name) + " stage: " + e.what());
  };

  Net net;
  try {
    net = farthest_point_sample(config.model, config.n_points, config.seed);
  } catch (const invalid_input& e) {
    throw relabel("net", e);
  }
  report.epsilon_estimate = net.epsilon_estimate;
  report.epsilon_working = 1.1 * net.epsilon_estimate;
  report.eps_over_rho = report.epsilon_working / config.rho;

  const double ratio_limit =
      std::min(1.0 / config.model.dimension(), 1.0 / 3.0);
  if (report.eps_over_rho >= ratio_limit)
    report.warnings.push_back("eps/rho = " + fmt_g(report.eps_over_rho) +
                              " violates eps/rho < min(1/n, 1/3)");
  if (config.rho >= 0.5 * config.model.injectivity_radius())
    report.warnings.push_back("rho exceeds half the injectivity radius");

  WeightedNet wnet;
  try {
    wnet = monte_carlo_voronoi_weights(config.model, net, config.samples,
                                       config.seed + 1);
  } catch (const invalid_input& e) {
    throw relabel("weights", e);
  }

  if (config.verify_measure) {
    try {
      VerifyOptions opts;
      opts.compute_epsilon_star = false;
      const auto check = verify_volume_approximation(
          config.model, wnet, report.epsilon_working, opts);
      report.measure_checked = true;
      report.measure_feasible = check.feasible;
      report.measure_deficit = check.flow_deficit;
      if (!check.feasible)
        report.warnings.push_back(
            "volume approximation infeasible at eps = " +
            fmt_g(report.epsilon_working) + " (deficit " +
            fmt_g(check.flow_deficit) + ")");
    } catch (const invalid_input& e) {
      report.warnings.push_back(std::string("measure check skipped: ") +
                                e.what());
    }
  }

  ProximityGraph graph;
  try {
    graph = build_proximity_graph(wnet, config.rho, config.kernel);
  } catch (const invalid_input& e) {
    throw relabel("graph", e);
  }
  report.graph_components = graph.component_count;
  if (!graph.connected())
    report.warnings.push_back("proximity graph has " +
                              std::to_string(graph.component_count) +
                              " components; spectrum may double up");

  const int k_eff =
      std::min<int>(config.k, static_cast<int>(graph.vertex_count()));
  Spectrum spectrum;
  try {
    spectrum = smallest_eigenpairs(graph, k_eff, config.tol, config.max_iter,
                                   config.seed + 2);
  } catch (const invalid_input& e) {
    throw relabel("spectrum", e);
  }
  report.solver = spectrum.info;

  std::vector<double> scores;
  if (config.alignment_samples > 0) {
    try {
      scores = eigenspace_alignment(config.model, wnet, spectrum, 1, k_eff,
                                    config.rho, report.epsilon_working,
                                    config.alignment_samples, config.seed + 3);
    } catch (const invalid_input& e) {
      throw relabel("align", e);
    }
  }

  const auto exact =
      expand_spectrum(exact_spectrum(config.model, k_eff), k_eff);
  for (int k = 1; k <= k_eff; ++k) {
    ReportRow row;
    row.k = k;
    row.lambda_exact = exact[k - 1];
    row.lambda_graph = spectrum.eigenvalues[k - 1];
    row.abs_err = std::fabs(row.lambda_graph - row.lambda_exact);
    row.rel_err =
        row.lambda_exact != 0.0 ? row.abs_err / row.lambda_exact : row.abs_err;
    if (!scores.empty()) {
      row.alignment = scores[k - 1];
      row.has_alignment = true;
    }
    report.rows.push_back(row);
  }

  if (!config.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    const fs::path dir(config.out_dir);
    save_net(net, (dir / "net.txt").string(), (dir / "net.json").string());
    save_weighted_net(wnet, (dir / "weights.json").string(),
                      (dir / "assignment.bin").string());
    save_graph(graph, (dir / "graph.txt").string());
    save_spectrum(spectrum, (dir / "spectrum.json").string(),
                  (dir / "eigenvectors.txt").string());
    write_text_file((dir / "report.csv").string(), report.csv());
    write_text_file((dir / "report.json").string(), report.metadata_json());
  }
  return report;
}

std::string SweepResult::csv() const {
  std::ostringstream out;
  out << "rho,n_points,eps_over_rho,k,lambda_exact,lambda_graph,abs_err,rel_err\n";
  for (const auto& row : rows) {
    for (const auto& r : row.report.rows) {
      out << fmt_g(row.rho) << ',' << row.n_points << ','
          << fmt_g(row.eps_over_rho) << ',' << r.k << ','
          << fmt_g(r.lambda_exact) << ',' << fmt_g(r.lambda_graph) << ','
          << fmt_g(r.abs_err) << ',' << fmt_g(r.rel_err) << '\n';
    }
  }
  return out.str();
}

SweepResult run_convergence_sweep(const RunConfig& base,
                                  const std::vector<double>& rho_list,
                                  double eps_over_rho) {
  if (rho_list.empty()) throw invalid_input("sweep needs at least one rho");
  for (std::size_t i = 1; i < rho_list.size(); ++i)
    if (!(rho_list[i] < rho_list[i - 1]))
      throw invalid_input("sweep rho values must be strictly descending");
  if (!(eps_over_rho > 0.0)) throw invalid_input("eps/rho ratio must be positive");

  const int dim = base.model.dimension();
  // Covering-radius model eps ~ c / N^{1/n}, calibrated from realized nets.
  double c_est = dim == 1 ? 0.5 * base.model.volume()
                          : 0.8 * std::sqrt(base.model.volume());

  SweepResult result;
  for (double rho : rho_list) {
    // The working epsilon downstream is 1.1x the estimate.
    const double eps_target = eps_over_rho * rho / 1.1;
    std::size_t n_points = base.n_points;
    for (int attempt = 0; attempt < 4; ++attempt) {
      n_points = std::max<std::size_t>(
          8, static_cast<std::size_t>(std::llround(
                 std::pow(c_est / eps_target, static_cast<double>(dim)))));
      const Net probe = farthest_point_sample(base.model, n_points, base.seed);
      c_est = probe.epsilon_estimate *
              std::pow(static_cast<double>(n_points), 1.0 / dim);
      const double realized = 1.1 * probe.epsilon_estimate / rho;
      if (std::fabs(realized - eps_over_rho) <= 0.15 * eps_over_rho) break;
    }

    RunConfig config = base;
    config.n_points = n_points;
    config.rho = rho;
    config.out_dir.clear();
    SweepRow row;
    row.rho = rho;
    row.n_points = n_points;
    try {
      row.report = run_pipeline(config);
    } catch (const std::exception& e) {
      result.aborted = true;
      result.abort_reason = e.what();
      break;
    }
    row.eps_over_rho = row.report.eps_over_rho;
    for (const auto& r : row.report.rows) row.rel_errors.push_back(r.rel_err);
    row.max_rel_error =
        *std::max_element(row.rel_errors.begin(), row.rel_errors.end());
    result.rows.push_back(std::move(row));
  }

  // Log-log error slope per k over the completed rows.
  if (result.rows.size() >= 2) {
    const std::size_t k_count = result.rows.front().rel_errors.size();
    for (std::size_t k = 0; k < k_count; ++k) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      std::size_t m = 0;
      for (const auto& row : result.rows) {
        if (k >= row.rel_errors.size() || !(row.rel_errors[k] > 0.0)) continue;
        const double x = std::log(row.rho);
        const double y = std::log(row.rel_errors[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
      }
      const double denom = m * sxx - sx * sx;
      result.slopes.push_back(
          m >= 2 && std::fabs(denom) > 0.0 ? (m * sxy - sx * sy) / denom : 0.0);
    }
  }
  return result;
}

}  // namespace lbgraph
