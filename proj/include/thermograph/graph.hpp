#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thermograph/geometry.hpp"

namespace thermograph {

using VertexId = std::size_t;

/// Per-vertex material state. Units are SI throughout: rho [kg/m^3],
/// d [m^3 or m^2], c [J/(kg K)], mu [J/kg], melting [K].
///
/// A boundary vertex models infinite heat capacity: its temperature never
/// changes and its `c` is ignored.
struct VertexProps {
  double rho = 1.0;
  double d = 1.0;
  double c = 1.0;
  double mu = 0.0;
  double melting = 0.0;
  bool boundary = false;
  std::optional<Point2> position;

  double mass() const { return rho * d; }
  /// c * rho * d, the heat capacity of the vertex [J/K].
  double heat_capacity() const { return c * rho * d; }
};

/// Exchange geometry on the directed arc (v, w).
struct EdgeProps {
  VertexId v = 0;
  VertexId w = 0;
  double S = 1.0;   // facet measure
  double k = 1.0;   // conductivity
  double dx = 1.0;  // inter-vertex distance

  double conductance() const { return k * S / dx; }
};

/// Outgoing arc as stored in the adjacency table.
struct Arc {
  VertexId target = 0;
  double S = 1.0;
  double k = 1.0;
  double dx = 1.0;

  double conductance() const { return k * S / dx; }
};

/// Thermodynamic graph: vertices with thermal attributes, arcs with exchange
/// geometry, and the boundary subset of vertices flagged as fixed-temperature.
///
/// The graph is immutable after construction. Arcs are kept in a compressed
/// row layout sorted by (source, target), so every per-vertex sum visits
/// neighbours in ascending id order. The arc constructor accepts arbitrary
/// (possibly asymmetric or duplicated) input so that `validate` can report
/// it; `from_edges` emits both arcs of each undirected edge and is symmetric
/// by construction.
class ThermoGraph {
 public:
  ThermoGraph() = default;

  /// Raw constructor from a directed arc list. Throws on out-of-range ids.
  ThermoGraph(std::vector<VertexProps> vertices, const std::vector<EdgeProps>& arcs);

  /// Each edge (v, w) contributes both arcs (v, w) and (w, v).
  static ThermoGraph from_edges(std::vector<VertexProps> vertices,
                                const std::vector<EdgeProps>& edges);

  std::size_t size() const { return vertices_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }

  const VertexProps& vertex(VertexId v) const { return vertices_.at(v); }
  const std::vector<VertexProps>& vertices() const { return vertices_; }

  std::span<const Arc> neighbors(VertexId v) const {
    return {arcs_.data() + offsets_[v], arcs_.data() + offsets_[v + 1]};
  }

  /// Arc (v, w) if present.
  const Arc* find_arc(VertexId v, VertexId w) const;

  /// Undirected edge list (one entry per arc with v < w).
  std::vector<EdgeProps> edges() const;

  bool is_boundary(VertexId v) const { return vertices_[v].boundary; }
  const std::vector<VertexId>& boundary() const { return boundary_; }
  const std::vector<VertexId>& interior() const { return interior_; }

 private:
  std::vector<VertexProps> vertices_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Arc> arcs_;
  std::vector<VertexId> boundary_;
  std::vector<VertexId> interior_;
};

/// Subgraph induced by `keep` (ids renumbered in the given order).
ThermoGraph induced_subgraph(const ThermoGraph& graph, std::span<const VertexId> keep);

enum class Phase : std::uint8_t { solid = 0, liquid = 1 };

/// Temperature u [K], phase f and latent reservoir [J] per vertex.
struct TemperatureField {
  std::vector<double> u;
  std::vector<Phase> phase;
  std::vector<double> latent;

  static TemperatureField from_temperatures(std::vector<double> u);
  static TemperatureField uniform(std::size_t n, double value);

  std::size_t size() const { return u.size(); }
};

/// Restrict a field to the vertices in `keep`.
TemperatureField restrict_field(const TemperatureField& field, std::span<const VertexId> keep);

/// Throws Errc::invalid_argument when the field does not fit the graph.
void check_field(const ThermoGraph& graph, const TemperatureField& field);

struct Violation {
  std::string rule;
  std::string element;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view rule) const;
  std::string summary() const;
};

ValidationReport validate(const ThermoGraph& graph);

struct HeatCapacityWeights {
  double Phi = 0.0;
  /// Indexed by vertex id; zero on boundary vertices.
  std::vector<double> p;
};

/// Graph heat capacity and normalized vertex weights over the non-boundary
/// vertices. Throws Errc::all_boundary when every vertex is boundary.
HeatCapacityWeights heat_capacity_weights(const ThermoGraph& graph);

struct ThermalEnergy {
  double total = 0.0;
  std::vector<double> per_vertex;
};

/// Q(v) = c m u + f m mu, summed over non-boundary vertices.
ThermalEnergy thermal_energy(const ThermoGraph& graph, const TemperatureField& field);

/// Sensible plus reservoir energy, sum of c m u + latent over non-boundary
/// vertices. Equals thermal_energy whenever every reservoir is settled
/// (empty when solid, full when liquid).
double enthalpy(const ThermoGraph& graph, const TemperatureField& field);

}  // namespace thermograph
