#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "thermograph/geometry.hpp"
#include "thermograph/graph.hpp"

namespace thermograph {

/// Bulk material coefficients assigned to mesh vertices and edges.
struct Material {
  double rho = 1.0;
  double c = 1.0;
  double mu = 0.0;
  double melting = 0.0;
  double k = 1.0;
};

/// Site positions with their material assignment and boundary flags.
struct SiteSet {
  std::vector<Point2> points;
  BBox bbox;
  std::vector<Material> materials{Material{}};
  std::vector<std::size_t> material_of;  // empty: every site uses materials[0]
  std::vector<bool> boundary;            // empty: no boundary sites

  std::size_t size() const { return points.size(); }
  const Material& material(std::size_t site) const {
    return materials.at(material_of.empty() ? 0 : material_of.at(site));
  }
  bool is_boundary(std::size_t site) const { return !boundary.empty() && boundary.at(site); }
};

/// Convex polygon of one clipped Voronoi cell. Edge i runs from
/// vertices[i] to vertices[i+1] and is generated either by a neighbouring
/// site (neighbor[i] >= 0) or by a bbox side (neighbor[i] < 0).
struct VoronoiCell {
  std::vector<Point2> vertices;
  std::vector<std::int64_t> neighbor;

  double area() const;
};

/// Voronoi cells of `points` clipped to `bbox`, one per site.
std::vector<VoronoiCell> clipped_voronoi_cells(const std::vector<Point2>& points, const BBox& bbox);

/// Facets shorter than this fraction of the bbox diagonal are not edges.
inline constexpr double kFacetTolerance = 1e-12;

/// Thermodynamic graph of the clipped Voronoi tessellation: d is the cell
/// area, S the shared facet length, dx the distance between sites. Edge
/// conductivity is the harmonic mean of the two site materials.
///
/// Throws Errc::degenerate_sites when two sites coincide and
/// Errc::invalid_argument for fewer than two sites or sites outside bbox.
ThermoGraph build_voronoi_graph(const SiteSet& sites);

/// Regular nx-by-ny grid: d = dx*dy, horizontal edges S = dy over dx,
/// vertical edges S = dx over dy. Vertex id = j*nx + i, positioned at
/// (i*dx, j*dy). With `boundary_ring` every perimeter vertex is boundary.
ThermoGraph build_grid_graph(std::size_t nx, std::size_t ny, double dx, double dy, const Material& material,
                             bool boundary_ring);

/// n uniform points strictly inside bbox, deterministic in `seed`. Points
/// closer than bbox.diagonal() * 1e-4 to an earlier point are redrawn.
SiteSet random_sites(std::size_t n, const BBox& bbox, std::uint64_t seed, const Material& material = {});

}  // namespace thermograph
