#include "lbgraph/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lbgraph/errors.hpp"
#include "metric.hpp"

namespace lbgraph {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json model_to_json(const ManifoldModel& model) {
  nlohmann::json j;
  j["kind"] = kind_name(model.kind);
  switch (model.kind) {
    case ManifoldKind::circle:
    case ManifoldKind::sphere2:
      j["radius"] = model.radius;
      break;
    case ManifoldKind::flat_torus2:
      j["lx"] = model.lx;
      j["ly"] = model.ly;
      break;
  }
  return j;
}

ManifoldModel model_from_header(const std::string& header) {
  std::istringstream in(header);
  std::string kind;
  in >> kind;
  if (kind == "circle") {
    double radius;
    if (!(in >> radius)) throw invalid_input("bad circle header: " + header);
    return ManifoldModel::circle(radius);
  }
  if (kind == "flat_torus2") {
    double lx, ly;
    if (!(in >> lx >> ly)) throw invalid_input("bad torus header: " + header);
    return ManifoldModel::flat_torus2(lx, ly);
  }
  if (kind == "sphere2") {
    double radius;
    if (!(in >> radius)) throw invalid_input("bad sphere header: " + header);
    return ManifoldModel::sphere2(radius);
  }
  throw invalid_input("unknown model kind in header: " + header);
}

std::string model_header(const ManifoldModel& model) {
  switch (model.kind) {
    case ManifoldKind::circle:
      return "circle " + fmt17(model.radius);
    case ManifoldKind::flat_torus2:
      return "flat_torus2 " + fmt17(model.lx) + " " + fmt17(model.ly);
    case ManifoldKind::sphere2:
      return "sphere2 " + fmt17(model.radius);
  }
  throw invalid_input("unknown model kind");
}

ManifoldPoint parse_point(const ManifoldModel& model, const std::string& line) {
  std::istringstream in(line);
  switch (model.kind) {
    case ManifoldKind::circle: {
      double theta;
      if (!(in >> theta)) throw invalid_input("bad circle point: " + line);
      return circle_point(theta);
    }
    case ManifoldKind::flat_torus2: {
      double x, y;
      if (!(in >> x >> y)) throw invalid_input("bad torus point: " + line);
      return torus_point(model, x, y);
    }
    case ManifoldKind::sphere2: {
      double x, y, z;
      if (!(in >> x >> y >> z)) throw invalid_input("bad sphere point: " + line);
      return sphere_point(x, y, z);
    }
  }
  throw invalid_input("unknown model kind");
}

std::string format_point(const ManifoldModel& model, const ManifoldPoint& p) {
  switch (model.kind) {
    case ManifoldKind::circle:
      return fmt17(p.x[0]);
    case ManifoldKind::flat_torus2:
      return fmt17(p.x[0]) + " " + fmt17(p.x[1]);
    case ManifoldKind::sphere2:
      return fmt17(p.x[0]) + " " + fmt17(p.x[1]) + " " + fmt17(p.x[2]);
  }
  throw invalid_input("unknown model kind");
}

}  // namespace

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot open for writing: " + path);
  out << content;
  if (!out) throw invalid_input("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw invalid_input("cannot open for reading: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void save_net(const Net& net, const std::string& points_path,
              const std::string& sidecar_json_path) {
  std::ostringstream out;
  out << model_header(net.model) << '\n';
  for (const auto& p : net.points) out << format_point(net.model, p) << '\n';
  write_text_file(points_path, out.str());

  if (!sidecar_json_path.empty()) {
    nlohmann::json j;
    j["epsilon_estimate"] = net.epsilon_estimate;
    j["separation"] = net.separation;
    j["seed"] = net.seed;
    j["n_points"] = net.points.size();
    write_text_file(sidecar_json_path, j.dump(2) + "\n");
  }
}

Net load_net(const std::string& points_path,
             const std::string& sidecar_json_path) {
  std::istringstream in(read_text_file(points_path));
  std::string header;
  if (!std::getline(in, header)) throw invalid_input("empty net file");
  Net net;
  net.model = model_from_header(header);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    net.points.push_back(parse_point(net.model, line));
  }
  if (net.points.empty()) throw invalid_input("net file has no points");
  if (!sidecar_json_path.empty()) {
    const auto j = nlohmann::json::parse(read_text_file(sidecar_json_path));
    net.epsilon_estimate = j.value("epsilon_estimate", 0.0);
    net.separation = j.value("separation", 0.0);
    net.seed = j.value("seed", 0ULL);
  }
  return net;
}

void save_weighted_net(const WeightedNet& wnet, const std::string& json_path,
                       const std::string& assignment_path) {
  nlohmann::json j;
  j["model"] = model_to_json(wnet.net.model);
  j["n"] = wnet.size();
  j["weights"] = wnet.mu;
  j["total_mass"] = wnet.total_mass;
  j["max_assign_distance"] = wnet.max_assign_distance;
  nlohmann::json q;
  q["kind"] = wnet.quadrature == QuadratureKind::circle_midpoints
                  ? "circle_midpoints"
                  : "uniform";
  q["sample_count"] = wnet.samples.size();
  q["seed"] = wnet.sample_seed;
  j["quadrature"] = q;
  write_text_file(json_path, j.dump(2) + "\n");

  if (!assignment_path.empty()) {
    std::ofstream out(assignment_path, std::ios::binary);
    if (!out) throw invalid_input("cannot open for writing: " + assignment_path);
    for (std::uint32_t c : wnet.cell) {
      unsigned char bytes[4] = {static_cast<unsigned char>(c & 0xff),
                                static_cast<unsigned char>((c >> 8) & 0xff),
                                static_cast<unsigned char>((c >> 16) & 0xff),
                                static_cast<unsigned char>((c >> 24) & 0xff)};
      out.write(reinterpret_cast<const char*>(bytes), 4);
    }
    if (!out) throw invalid_input("write failed: " + assignment_path);
  }
}

WeightedNet load_weighted_net(const Net& net, const std::string& json_path,
                              const std::string& assignment_path) {
  const auto j = nlohmann::json::parse(read_text_file(json_path));
  const ManifoldModel model = net.model;
  WeightedNet wnet;
  wnet.net = net;
  wnet.mu = j.at("weights").get<std::vector<double>>();
  if (wnet.mu.size() != net.points.size())
    throw invalid_input("weights array does not match net size");
  wnet.total_mass = j.at("total_mass").get<double>();
  const auto& q = j.at("quadrature");
  const std::size_t sample_count = q.at("sample_count").get<std::size_t>();
  wnet.sample_seed = q.at("seed").get<std::uint64_t>();
  const std::string kind = q.at("kind").get<std::string>();
  if (kind == "uniform") {
    wnet.quadrature = QuadratureKind::uniform;
    wnet.samples = sample_uniform(model, sample_count, wnet.sample_seed);
  } else if (kind == "circle_midpoints") {
    wnet.quadrature = QuadratureKind::circle_midpoints;
    wnet.samples.reserve(sample_count);
    for (std::size_t s = 0; s < sample_count; ++s)
      wnet.samples.push_back(circle_point(
          (static_cast<double>(s) + 0.5) * 2.0 * M_PI / sample_count));
  } else {
    throw invalid_input("unknown quadrature kind: " + kind);
  }

  wnet.cell.resize(sample_count);
  if (!assignment_path.empty()) {
    std::ifstream in(assignment_path, std::ios::binary);
    if (!in) throw invalid_input("cannot open for reading: " + assignment_path);
    for (std::size_t s = 0; s < sample_count; ++s) {
      unsigned char bytes[4];
      in.read(reinterpret_cast<char*>(bytes), 4);
      if (!in) throw invalid_input("assignment blob truncated");
      wnet.cell[s] = static_cast<std::uint32_t>(bytes[0]) |
                     (static_cast<std::uint32_t>(bytes[1]) << 8) |
                     (static_cast<std::uint32_t>(bytes[2]) << 16) |
                     (static_cast<std::uint32_t>(bytes[3]) << 24);
      if (wnet.cell[s] >= wnet.mu.size())
        throw invalid_input("assignment blob references a missing vertex");
    }
  } else {
    for (std::size_t s = 0; s < sample_count; ++s)
      wnet.cell[s] = static_cast<std::uint32_t>(
          detail::nearest_index(model, net.points, wnet.samples[s]));
  }

  wnet.counts.assign(wnet.mu.size(), 0);
  double s_max = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < sample_count; ++s) {
    wnet.counts[wnet.cell[s]] += 1;
    s_max = std::max(s_max, detail::surrogate(model, wnet.samples[s],
                                              net.points[wnet.cell[s]]));
  }
  wnet.max_assign_distance = detail::surrogate_to_distance(model, s_max);
  return wnet;
}

void save_graph(const ProximityGraph& g, const std::string& path) {
  std::ostringstream out;
  out << g.vertex_count() << ' ' << g.intrinsic_dim << ' ' << fmt17(g.rho)
      << ' ' << fmt17(g.nu_n) << ' '
      << (g.kernel ? g.kernel->name() : "none") << '\n';
  for (double m : g.mu) out << fmt17(m) << '\n';
  for (std::size_t i = 0; i < g.vertex_count(); ++i)
    for (std::size_t e = g.row_ptr[i]; e < g.row_ptr[i + 1]; ++e)
      if (g.col[e] > i)
        out << i << ' ' << g.col[e] << ' ' << fmt17(g.weight[e]) << '\n';
  write_text_file(path, out.str());
}

ProximityGraph load_graph(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::size_t n;
  ProximityGraph g;
  std::string kernel_name;
  if (!(in >> n >> g.intrinsic_dim >> g.rho >> g.nu_n >> kernel_name))
    throw invalid_input("bad graph header in " + path);
  if (kernel_name != "none") g.kernel = KernelSpec::from_name(kernel_name);
  g.mu.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    if (!(in >> g.mu[i])) throw invalid_input("graph weights truncated");
  g.vol_total = 0.0;
  for (double m : g.mu) g.vol_total += m;

  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n);
  std::size_t i, jcol;
  double w;
  while (in >> i >> jcol >> w) {
    if (i >= n || jcol >= n) throw invalid_input("graph edge out of range");
    adj[i].push_back({static_cast<std::uint32_t>(jcol), w});
    adj[jcol].push_back({static_cast<std::uint32_t>(i), w});
  }
  g.row_ptr.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adj[v].begin(), adj[v].end());
    g.row_ptr[v + 1] = g.row_ptr[v] + adj[v].size();
  }
  for (std::size_t v = 0; v < n; ++v)
    for (const auto& [c, weight] : adj[v]) {
      g.col.push_back(c);
      g.weight.push_back(weight);
    }

  // Recompute connectivity.
  std::vector<char> seen(n, 0);
  g.component_count = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++g.component_count;
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t e = g.row_ptr[v]; e < g.row_ptr[v + 1]; ++e)
        if (!seen[g.col[e]]) {
          seen[g.col[e]] = 1;
          stack.push_back(g.col[e]);
        }
    }
  }
  return g;
}

void save_spectrum(const Spectrum& spectrum, const std::string& json_path,
                   const std::string& vectors_path) {
  nlohmann::json j;
  j["eigenvalues"] = std::vector<double>(
      spectrum.eigenvalues.data(),
      spectrum.eigenvalues.data() + spectrum.eigenvalues.size());
  j["residuals"] = std::vector<double>(
      spectrum.residuals.data(),
      spectrum.residuals.data() + spectrum.residuals.size());
  j["solver"] = {{"iterations", spectrum.info.iterations},
                 {"tolerance", spectrum.info.tolerance},
                 {"method", spectrum.info.method}};
  write_text_file(json_path, j.dump(2) + "\n");

  if (!vectors_path.empty()) {
    std::ostringstream out;
    out << spectrum.eigenvectors.rows() << ' ' << spectrum.eigenvectors.cols()
        << '\n';
    for (Eigen::Index i = 0; i < spectrum.eigenvectors.rows(); ++i) {
      for (Eigen::Index c = 0; c < spectrum.eigenvectors.cols(); ++c)
        out << (c ? " " : "") << fmt17(spectrum.eigenvectors(i, c));
      out << '\n';
    }
    write_text_file(vectors_path, out.str());
  }
}

Spectrum load_spectrum(const std::string& json_path,
                       const std::string& vectors_path) {
  const auto j = nlohmann::json::parse(read_text_file(json_path));
  Spectrum spectrum;
  const auto values = j.at("eigenvalues").get<std::vector<double>>();
  const auto residuals = j.at("residuals").get<std::vector<double>>();
  spectrum.eigenvalues =
      Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
  spectrum.residuals =
      Eigen::Map<const Eigen::VectorXd>(residuals.data(), residuals.size());
  spectrum.info.iterations = j.at("solver").at("iterations").get<int>();
  spectrum.info.tolerance = j.at("solver").at("tolerance").get<double>();
  spectrum.info.method = j.at("solver").at("method").get<std::string>();
  if (!vectors_path.empty()) {
    std::istringstream in(read_text_file(vectors_path));
    Eigen::Index rows, cols;
    if (!(in >> rows >> cols)) throw invalid_input("bad eigenvector header");
    spectrum.eigenvectors.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index c = 0; c < cols; ++c)
        if (!(in >> spectrum.eigenvectors(i, c)))
          throw invalid_input("eigenvector matrix truncated");
  }
  return spectrum;
}

void save_discrete_function(const Eigen::VectorXd& values,
                            const std::string& net_ref,
                            const std::string& path) {
  nlohmann::json j;
  j["net"] = net_ref;
  j["values"] = std::vector<double>(values.data(), values.data() + values.size());
  write_text_file(path, j.dump(2) + "\n");
}

Eigen::VectorXd load_discrete_function(const std::string& path,
                                       std::string* net_ref) {
  const auto j = nlohmann::json::parse(read_text_file(path));
  if (net_ref) *net_ref = j.value("net", std::string());
  const auto values = j.at("values").get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), values.size());
}

void export_field_csv(const ManifoldModel& model, const FieldFunction& field,
                      const std::vector<ManifoldPoint>& grid,
                      const std::string& path) {
  std::ostringstream out;
  switch (model.kind) {
    case ManifoldKind::circle:
      out << "theta,value\n";
      break;
    case ManifoldKind::flat_torus2:
      out << "x,y,value\n";
      break;
    case ManifoldKind::sphere2:
      out << "x,y,z,value\n";
      break;
  }
  for (const auto& p : grid) {
    if (p.kind != model.kind)
      throw invalid_input("grid point kind does not match the model");
    const int coords = model.kind == ManifoldKind::circle
                           ? 1
                           : (model.kind == ManifoldKind::flat_torus2 ? 2 : 3);
    for (int c = 0; c < coords; ++c) out << fmt17(p.x[c]) << ',';
    out << fmt17(field(p)) << '\n';
  }
  write_text_file(path, out.str());
}

DistanceMatrixInput load_distance_matrix(const std::string& matrix_path,
                                         const std::string& weights_path,
                                         int dim, double vol_total) {
  std::istringstream min(read_text_file(matrix_path));
  std::vector<double> values;
  double v;
  while (min >> v) values.push_back(v);
  const auto n = static_cast<std::size_t>(std::llround(std::sqrt(
      static_cast<double>(values.size()))));
  if (n * n != values.size())
    throw invalid_input("distance matrix file is not square");
  DistanceMatrixInput input;
  input.d.resize(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) input.d(i, j) = values[i * n + j];

  std::istringstream win(read_text_file(weights_path));
  while (win >> v) input.mu.push_back(v);
  if (input.mu.size() != n)
    throw invalid_input("weights file does not match the distance matrix");
  input.dim = dim;
  input.vol_total = vol_total;
  return input;
}

}  // namespace lbgraph
