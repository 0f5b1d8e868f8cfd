#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "thermograph/dynamics.hpp"
#include "thermograph/graph.hpp"
#include "thermograph/mesh.hpp"

namespace thermograph::io {

/// Locale-independent rendering with 17 significant digits.
std::string format_double(double x);

/// Graph JSON:
///   {"vertices": [{"id", "x"?, "y"?, "rho", "c", "d", "mu", "melting", "boundary"}],
///    "edges":    [{"v", "w", "S", "k", "dx", "directed"?}]}
/// An edge entry stands for both arcs unless "directed" is true. A null or
/// missing "c" denotes infinite heat capacity.
nlohmann::ordered_json graph_to_json(const ThermoGraph& graph);
ThermoGraph graph_from_json(const nlohmann::json& doc);

ThermoGraph read_graph(const std::string& path);
void write_graph(const std::string& path, const ThermoGraph& graph);

/// Field CSV with header "vertex,u,f,latent".
void write_field(std::ostream& os, const TemperatureField& field);
TemperatureField read_field(std::istream& is);
TemperatureField read_field(const std::string& path);

/// Sites CSV rows "x,y[,material-id]"; an optional header row is skipped.
struct SiteRows {
  std::vector<Point2> points;
  std::vector<std::size_t> material_of;  // empty when no row carries an id
};
SiteRows read_sites(std::istream& is);

/// Trajectory CSV "t,Q_total,M,D,N,S", followed by u0..u{n-1} when
/// `per_vertex` is set and the records carry fields.
void write_trajectory(std::ostream& os, const Trajectory& trajectory, bool per_vertex);

/// Materials JSON: [{"rho", "c", "k", "mu"?, "melting"?, "boundary"?}].
struct MaterialTable {
  std::vector<Material> materials;
  std::vector<bool> boundary;
};
MaterialTable materials_from_json(const nlohmann::json& doc);

/// Write to a sibling temporary file and rename over `path`.
void write_file_atomic(const std::string& path, std::string_view contents);
std::string read_file(const std::string& path);

}  // namespace thermograph::io
