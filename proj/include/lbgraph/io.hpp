#pragma once

#include <string>

#include "lbgraph/graph.hpp"
#include "lbgraph/maps.hpp"
#include "lbgraph/spectra.hpp"

namespace lbgraph {

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Point list: header line with the model kind and parameters, then one
// point per line (chart coordinates, space separated). The sidecar
// JSON stores epsilon_estimate / separation / seed.
void save_net(const Net& net, const std::string& points_path,
              const std::string& sidecar_json_path);
Net load_net(const std::string& points_path,
             const std::string& sidecar_json_path = "");

// Weights JSON (model, weights array, quadrature descriptor) plus the
// binary sample->cell assignment (little-endian uint32 per sample).
// Loading regenerates the deterministic quadrature and checks it
// against the stored assignment.
void save_weighted_net(const WeightedNet& wnet, const std::string& json_path,
                       const std::string& assignment_path);
WeightedNet load_weighted_net(const Net& net, const std::string& json_path,
                              const std::string& assignment_path);

// Coordinate-list text: "N n rho nu_n kernel" header, N vertex-weight
// lines, then one "i j w_ij" line per undirected edge (0-based).
void save_graph(const ProximityGraph& g, const std::string& path);
ProximityGraph load_graph(const std::string& path);

void save_spectrum(const Spectrum& spectrum, const std::string& json_path,
                   const std::string& vectors_path);
Spectrum load_spectrum(const std::string& json_path,
                       const std::string& vectors_path);

// Whitespace-separated square matrix and one weight per line.
DistanceMatrixInput load_distance_matrix(const std::string& matrix_path,
                                         const std::string& weights_path,
                                         int dim, double vol_total);

// Vertex values as a JSON array plus the name of the net they live on.
void save_discrete_function(const Eigen::VectorXd& values,
                            const std::string& net_ref,
                            const std::string& path);
Eigen::VectorXd load_discrete_function(const std::string& path,
                                       std::string* net_ref = nullptr);

// Tabulates a field on a caller-supplied evaluation grid as CSV rows
// of chart coordinates followed by the value.
void export_field_csv(const ManifoldModel& model, const FieldFunction& field,
                      const std::vector<ManifoldPoint>& grid,
                      const std::string& path);

}  // namespace lbgraph
