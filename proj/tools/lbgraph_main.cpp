#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "lbgraph/errors.hpp"
#include "lbgraph/harness.hpp"
#include "lbgraph/io.hpp"

namespace fs = std::filesystem;
using namespace lbgraph;

namespace {

struct ModelFlags {
  std::string model = "circle";
  double radius = 1.0;
  double lx = 1.0;
  double ly = 1.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", model, "circle | torus | sphere")
        ->check(CLI::IsMember({"circle", "torus", "sphere"}));
    cmd->add_option("--radius", radius, "circle/sphere radius");
    cmd->add_option("--lx", lx, "torus x side");
    cmd->add_option("--ly", ly, "torus y side");
  }

  ManifoldModel build() const {
    if (model == "circle") return ManifoldModel::circle(radius);
    if (model == "torus") return ManifoldModel::flat_torus2(lx, ly);
    return ManifoldModel::sphere2(radius);
  }
};

std::optional<KernelSpec> parse_kernel(const std::string& name) {
  if (name.empty() || name == "none") return std::nullopt;
  return KernelSpec::from_name(name);
}

Net load_dir_net(const std::string& dir) {
  const fs::path d(dir);
  const fs::path sidecar = d / "net.json";
  return load_net((d / "net.txt").string(),
                  fs::exists(sidecar) ? sidecar.string() : "");
}

WeightedNet load_dir_weights(const std::string& dir) {
  const fs::path d(dir);
  return load_weighted_net(load_dir_net(dir), (d / "weights.json").string(),
                           (d / "assignment.bin").string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Discretize the Laplacian of an analytic manifold as a weighted "
      "proximity-graph operator on an epsilon-net and study its spectrum"};
  app.require_subcommand(1);

  // --- net ---
  auto* cmd_net = app.add_subcommand("net", "farthest-point net construction");
  ModelFlags net_model;
  net_model.attach(cmd_net);
  std::size_t n_points = 100;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  cmd_net->add_option("--n-points", n_points, "net size");
  cmd_net->add_option("--seed", seed, "rng seed");
  cmd_net->add_option("--out", out_dir, "output directory");

  // --- weights ---
  auto* cmd_weights =
      app.add_subcommand("weights", "Monte Carlo Voronoi vertex weights");
  std::size_t samples = 100000;
  bool exact_circle = false;
  cmd_weights->add_option("--samples", samples, "quadrature size S");
  cmd_weights->add_option("--seed", seed, "rng seed");
  cmd_weights->add_option("--out", out_dir, "working directory");
  cmd_weights->add_flag("--exact-circle", exact_circle,
                        "use exact arc weights (circle only)");

  // --- verify-measure ---
  auto* cmd_verify = app.add_subcommand(
      "verify-measure", "transport feasibility of the vertex weights");
  double epsilon = 0.0;
  bool no_epsilon_star = false;
  bool no_shortcut = false;
  cmd_verify->add_option("--epsilon", epsilon,
                         "tested epsilon (default 1.1 x covering estimate)");
  cmd_verify->add_flag("--no-epsilon-star", no_epsilon_star,
                       "skip the bisection for the minimal feasible epsilon");
  cmd_verify->add_flag("--no-shortcut", no_shortcut,
                       "always run the flow solver");
  cmd_verify->add_option("--out", out_dir, "working directory");

  // --- graph ---
  auto* cmd_graph = app.add_subcommand("graph", "weighted proximity graph");
  double rho = 0.1;
  std::string kernel_name = "none";
  std::string dm_file, dm_weights;
  int dm_dim = 2;
  double dm_vol = 0.0;
  cmd_graph->add_option("--rho", rho, "proximity radius");
  cmd_graph->add_option("--kernel", kernel_name, "flat | quadratic")
      ->check(CLI::IsMember({"none", "flat", "quadratic"}));
  cmd_graph->add_option("--distance-matrix", dm_file,
                        "external pairwise distance matrix");
  cmd_graph->add_option("--weights", dm_weights,
                        "vertex weights for --distance-matrix");
  cmd_graph->add_option("--dim", dm_dim, "intrinsic dimension for external data");
  cmd_graph->add_option("--vol", dm_vol, "total mass for external data");
  cmd_graph->add_option("--out", out_dir, "working directory");

  // --- spectrum ---
  auto* cmd_spectrum =
      app.add_subcommand("spectrum", "smallest eigenpairs of the graph");
  int k = 7;
  double tol = 1e-10;
  int max_iter = 0;
  cmd_spectrum->add_option("--k", k, "number of eigenpairs");
  cmd_spectrum->add_option("--tol", tol, "residual tolerance");
  cmd_spectrum->add_option("--max-iter", max_iter,
                           "Lanczos budget (0: 10k + 200)");
  cmd_spectrum->add_option("--seed", seed, "rng seed");
  cmd_spectrum->add_option("--out", out_dir, "working directory");

  // --- compare ---
  auto* cmd_compare =
      app.add_subcommand("compare", "spectrum vs the exact eigenvalues");
  cmd_compare->add_option("--out", out_dir, "working directory");

  // --- align ---
  auto* cmd_align = app.add_subcommand(
      "align", "eigenspace alignment of interpolated eigenvectors");
  std::size_t align_samples = 20000;
  cmd_align->add_option("--samples", align_samples, "alignment quadrature size");
  cmd_align->add_option("--seed", seed, "rng seed");
  cmd_align->add_option("--out", out_dir, "working directory");

  // --- converge ---
  auto* cmd_converge =
      app.add_subcommand("converge", "error-vs-rho convergence sweep");
  ModelFlags sweep_model;
  sweep_model.attach(cmd_converge);
  std::vector<double> rho_list;
  double ratio = 0.1;
  cmd_converge->add_option("--rho-list", rho_list, "descending rho values")
      ->delimiter(',');
  cmd_converge->add_option("--ratio", ratio, "target eps/rho");
  cmd_converge->add_option("--n-points", n_points, "base net size");
  cmd_converge->add_option("--samples", samples, "quadrature size per run");
  cmd_converge->add_option("--k", k, "eigenpairs per run");
  cmd_converge->add_option("--seed", seed, "rng seed");
  cmd_converge->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    const fs::path dir(out_dir);

    if (cmd_net->parsed()) {
      fs::create_directories(dir);
      const Net net = farthest_point_sample(net_model.build(), n_points, seed);
      save_net(net, (dir / "net.txt").string(), (dir / "net.json").string());
      std::cout << "net: N=" << net.size()
                << " epsilon_estimate=" << net.epsilon_estimate
                << " separation=" << net.separation << "\n";
    } else if (cmd_weights->parsed()) {
      const Net net = load_dir_net(out_dir);
      const WeightedNet wnet =
          exact_circle ? exact_circle_weights(net.model, net)
                       : monte_carlo_voronoi_weights(net.model, net, samples, seed);
      save_weighted_net(wnet, (dir / "weights.json").string(),
                        (dir / "assignment.bin").string());
      std::cout << "weights: N=" << wnet.size() << " S=" << wnet.sample_count()
                << " total_mass=" << wnet.total_mass
                << " max_assign_distance=" << wnet.max_assign_distance << "\n";
    } else if (cmd_verify->parsed()) {
      const WeightedNet wnet = load_dir_weights(out_dir);
      double eps = epsilon;
      if (!(eps > 0.0)) eps = 1.1 * wnet.net.epsilon_estimate;
      VerifyOptions opts;
      opts.compute_epsilon_star = !no_epsilon_star;
      opts.allow_identity_shortcut = !no_shortcut;
      const auto report =
          verify_volume_approximation(wnet.net.model, wnet, eps, opts);
      nlohmann::json j;
      j["epsilon_tested"] = report.epsilon_tested;
      j["feasible"] = report.feasible;
      j["epsilon_star"] = report.epsilon_star;
      j["flow_deficit"] = report.flow_deficit;
      write_text_file((dir / "verify.json").string(), j.dump(2) + "\n");
      std::cout << "verify-measure: epsilon=" << report.epsilon_tested
                << " feasible=" << (report.feasible ? "yes" : "no")
                << " deficit=" << report.flow_deficit;
      if (opts.compute_epsilon_star)
        std::cout << " epsilon_star=" << report.epsilon_star;
      std::cout << "\n";
    } else if (cmd_graph->parsed()) {
      fs::create_directories(dir);
      ProximityGraph graph;
      if (!dm_file.empty()) {
        if (dm_weights.empty())
          throw invalid_input("--distance-matrix requires --weights");
        auto input = load_distance_matrix(dm_file, dm_weights, dm_dim, dm_vol);
        if (input.vol_total <= 0.0) {
          input.vol_total = 0.0;
          for (double m : input.mu) input.vol_total += m;
        }
        graph = build_proximity_graph(input, rho, parse_kernel(kernel_name));
      } else {
        const WeightedNet wnet = load_dir_weights(out_dir);
        graph = build_proximity_graph(wnet, rho, parse_kernel(kernel_name));
      }
      save_graph(graph, (dir / "graph.txt").string());
      std::cout << "graph: N=" << graph.vertex_count()
                << " edges=" << graph.edge_count()
                << " components=" << graph.component_count << "\n";
      if (!graph.connected())
        std::cout << "warning: proximity graph is disconnected\n";
    } else if (cmd_spectrum->parsed()) {
      const ProximityGraph graph = load_graph((dir / "graph.txt").string());
      const Spectrum spectrum =
          smallest_eigenpairs(graph, k, tol, max_iter, seed);
      save_spectrum(spectrum, (dir / "spectrum.json").string(),
                    (dir / "eigenvectors.txt").string());
      std::cout << "spectrum (" << spectrum.info.method << "):";
      for (Eigen::Index i = 0; i < spectrum.eigenvalues.size(); ++i)
        std::cout << ' ' << spectrum.eigenvalues[i];
      std::cout << "\n";
    } else if (cmd_compare->parsed()) {
      const Net net = load_dir_net(out_dir);
      const Spectrum spectrum =
          load_spectrum((dir / "spectrum.json").string(),
                        (dir / "eigenvectors.txt").string());
      const auto kk = static_cast<std::size_t>(spectrum.eigenvalues.size());
      const auto exact = expand_spectrum(exact_spectrum(net.model, kk), kk);
      ConvergenceReport report;
      report.model_name = kind_name(net.model.kind);
      report.n_points = net.size();
      report.epsilon_estimate = net.epsilon_estimate;
      for (std::size_t i = 0; i < kk; ++i) {
        ReportRow row;
        row.k = static_cast<int>(i) + 1;
        row.lambda_exact = exact[i];
        row.lambda_graph = spectrum.eigenvalues[i];
        row.abs_err = std::fabs(row.lambda_graph - row.lambda_exact);
        row.rel_err = row.lambda_exact != 0.0 ? row.abs_err / row.lambda_exact
                                              : row.abs_err;
        report.rows.push_back(row);
      }
      write_text_file((dir / "report.csv").string(), report.csv());
      std::cout << report.csv();
    } else if (cmd_align->parsed()) {
      const WeightedNet wnet = load_dir_weights(out_dir);
      const ProximityGraph graph = load_graph((dir / "graph.txt").string());
      const Spectrum spectrum =
          load_spectrum((dir / "spectrum.json").string(),
                        (dir / "eigenvectors.txt").string());
      const int kk = static_cast<int>(spectrum.eigenvalues.size());
      const double eps = 1.1 * wnet.net.epsilon_estimate;
      const auto scores =
          eigenspace_alignment(wnet.net.model, wnet, spectrum, 1, kk, graph.rho,
                               eps, align_samples, seed);
      nlohmann::json j;
      j["scores"] = scores;
      j["epsilon"] = eps;
      j["rho"] = graph.rho;
      write_text_file((dir / "alignment.json").string(), j.dump(2) + "\n");
      std::cout << "alignment:";
      for (double s : scores) std::cout << ' ' << s;
      std::cout << "\n";
    } else if (cmd_converge->parsed()) {
      fs::create_directories(dir);
      RunConfig base;
      base.model = sweep_model.build();
      base.n_points = n_points;
      base.samples = samples;
      base.k = k;
      base.seed = seed;
      base.alignment_samples = 0;
      if (rho_list.empty())
        throw invalid_input("converge requires --rho-list");
      base.rho = rho_list.front();
      const SweepResult sweep = run_convergence_sweep(base, rho_list, ratio);
      write_text_file((dir / "sweep.csv").string(), sweep.csv());
      nlohmann::json j;
      j["slopes"] = sweep.slopes;
      j["aborted"] = sweep.aborted;
      if (sweep.aborted) j["abort_reason"] = sweep.abort_reason;
      write_text_file((dir / "sweep.json").string(), j.dump(2) + "\n");
      std::cout << sweep.csv();
      if (!sweep.slopes.empty()) {
        std::cout << "log-log slopes per k:";
        for (double s : sweep.slopes) std::cout << ' ' << s;
        std::cout << "\n";
      }
      if (sweep.aborted) {
        std::cerr << "sweep aborted: " << sweep.abort_reason << "\n";
        return 1;
      }
    }
  } catch (const solver_failure& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const invalid_input& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
