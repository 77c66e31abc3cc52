#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lbgraph/graph.hpp"
#include "lbgraph/maps.hpp"
#include "lbgraph/spectra.hpp"

namespace lbgraph {

struct RunConfig {
  ManifoldModel model;
  std::size_t n_points = 0;
  double rho = 0.0;
  std::size_t samples = 0;  // shared quadrature size S
  int k = 1;
  std::uint64_t seed = 0;
  std::optional<KernelSpec> kernel;
  std::string out_dir;            // empty: nothing persisted
  std::size_t alignment_samples = 20000;  // 0 disables alignment scores
  double tol = 1e-10;
  int max_iter = 1200;  // generous budget; eigenvalue clusters need it
  bool verify_measure = true;
};

struct ReportRow {
  int k = 0;  // 1-based
  double lambda_exact = 0.0;
  double lambda_graph = 0.0;
  double abs_err = 0.0;
  // Relative to lambda_exact when nonzero, absolute for the zero mode.
  double rel_err = 0.0;
  double alignment = 0.0;
  bool has_alignment = false;
};

struct ConvergenceReport {
  std::vector<ReportRow> rows;
  std::string model_name;
  std::size_t n_points = 0;
  std::size_t samples = 0;
  double rho = 0.0;
  double epsilon_estimate = 0.0;
  double epsilon_working = 0.0;  // 1.1 * estimate, used downstream
  double eps_over_rho = 0.0;
  std::uint64_t seed = 0;
  std::string kernel_name = "none";
  bool measure_checked = false;
  bool measure_feasible = false;
  double measure_deficit = 0.0;
  int graph_components = 1;
  SolverInfo solver;
  std::vector<std::string> warnings;

  std::string csv() const;
  std::string metadata_json() const;
};

// net -> weights -> measure check -> graph -> spectrum -> comparison
// against the exact spectrum (+ alignment scores when enabled).
ConvergenceReport run_pipeline(const RunConfig& config);

// Projection norm fraction of each interpolated eigenvector on the
// exact eigenspace matched to its eigenvalue. Columns k_lo..k_hi of
// the spectrum (1-based, inclusive).
std::vector<double> eigenspace_alignment(const ManifoldModel& model,
                                         const WeightedNet& wnet,
                                         const Spectrum& spectrum, int k_lo,
                                         int k_hi, double rho, double epsilon,
                                         std::size_t sample_count,
                                         std::uint64_t seed);

// Same score for explicitly chosen exact levels (one per column);
// used for mismatched-cluster controls.
std::vector<double> alignment_scores_against_levels(
    const ManifoldModel& model, const WeightedNet& wnet,
    const Eigen::MatrixXd& eigenvectors, const std::vector<int>& levels,
    double rho, double epsilon, std::size_t sample_count, std::uint64_t seed);

struct SweepRow {
  double rho = 0.0;
  std::size_t n_points = 0;
  double eps_over_rho = 0.0;
  std::vector<double> rel_errors;  // per k
  double max_rel_error = 0.0;
  ConvergenceReport report;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<double> slopes;  // per k, log-log fit; empty for one row
  bool aborted = false;
  std::string abort_reason;

  std::string csv() const;
};

// Reruns the pipeline per rho, resizing the net so the realized
// eps/rho stays near the requested ratio.
SweepResult run_convergence_sweep(const RunConfig& base,
                                  const std::vector<double>& rho_list,
                                  double eps_over_rho);

}  // namespace lbgraph
