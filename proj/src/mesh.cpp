#include "thermograph/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include "thermograph/delaunay.hpp"
#include "thermograph/error.hpp"

namespace thermograph {

namespace {

constexpr std::int64_t kLeft = -1, kBottom = -2, kRight = -3, kTop = -4;

double squared(double x) { return x * x; }

/// Keep the part of `cell` on the side of `site` of the bisector between
/// `site` and `other`. Edges created along the bisector are labelled `label`.
void clip_by_bisector(VoronoiCell& cell, Point2 site, Point2 other, std::int64_t label) {
  const Point2 mid{0.5 * (site.x + other.x), 0.5 * (site.y + other.y)};
  const double nx = other.x - site.x;
  const double ny = other.y - site.y;
  const std::size_t m = cell.vertices.size();
  std::vector<double> side(m);
  bool any_out = false;
  for (std::size_t i = 0; i < m; ++i) {
    side[i] = (cell.vertices[i].x - mid.x) * nx + (cell.vertices[i].y - mid.y) * ny;
    any_out = any_out || side[i] > 0.0;
  }
  if (!any_out) return;

  VoronoiCell out;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = (i + 1) % m;
    const Point2 a = cell.vertices[i], b = cell.vertices[j];
    const bool a_in = side[i] <= 0.0, b_in = side[j] <= 0.0;
    if (a_in) {
      out.vertices.push_back(a);
      out.neighbor.push_back(cell.neighbor[i]);
    }
    if (a_in != b_in) {
      const double t = side[i] / (side[i] - side[j]);
      const Point2 cross{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
      out.vertices.push_back(cross);
      out.neighbor.push_back(a_in ? label : cell.neighbor[i]);
    }
  }
  cell = std::move(out);
}

double max_radius(const VoronoiCell& cell, Point2 site) {
  double r2 = 0.0;
  for (const auto& q : cell.vertices) r2 = std::max(r2, squared(q.x - site.x) + squared(q.y - site.y));
  return std::sqrt(r2);
}

void check_sites(const std::vector<Point2>& points, const BBox& bbox) {
  if (points.size() < 2) throw Error(Errc::invalid_argument, "at least two sites are required");
  if (!(bbox.width() > 0.0 && bbox.height() > 0.0)) throw Error(Errc::invalid_argument, "bbox must have positive extent");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!bbox.strictly_contains(points[i])) {
      throw Error(Errc::invalid_argument, "site " + std::to_string(i) + " is not strictly inside the bbox");
    }
  }
  const double tol = 1e-12 * bbox.diagonal();
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a].x != points[b].x ? points[a].x < points[b].x : points[a].y < points[b].y;
  });
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size() && points[order[j]].x - points[order[i]].x <= tol; ++j) {
      if (distance(points[order[i]], points[order[j]]) <= tol) {
        throw Error(Errc::degenerate_sites, "sites " + std::to_string(std::min(order[i], order[j])) + " and " +
                                                std::to_string(std::max(order[i], order[j])) + " coincide");
      }
    }
  }
}

}  // namespace

double VoronoiCell::area() const {
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& a = vertices[i];
    const auto& b = vertices[(i + 1) % vertices.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return 0.5 * twice;
}

std::vector<VoronoiCell> clipped_voronoi_cells(const std::vector<Point2>& points, const BBox& bbox) {
  check_sites(points, bbox);
  const std::size_t n = points.size();
  DelaunayTriangulation dt(points);
  std::vector<std::vector<std::size_t>> candidates(n);
  for (const auto& [a, b] : dt.edges()) {
    candidates[a].push_back(b);
    candidates[b].push_back(a);
  }

  std::vector<VoronoiCell> cells(n);
  std::vector<std::size_t> by_distance(n);
  std::vector<char> used(n);
  for (std::size_t v = 0; v < n; ++v) {
    VoronoiCell& cell = cells[v];
    cell.vertices = {{bbox.x0, bbox.y0}, {bbox.x1, bbox.y0}, {bbox.x1, bbox.y1}, {bbox.x0, bbox.y1}};
    cell.neighbor = {kBottom, kRight, kTop, kLeft};
    std::fill(used.begin(), used.end(), 0);
    used[v] = 1;
    for (std::size_t w : candidates[v]) {
      clip_by_bisector(cell, points[v], points[w], static_cast<std::int64_t>(w));
      used[w] = 1;
    }
    // Delaunay neighbours fix the cell in exact arithmetic. Any other site
    // nearer than twice the cell radius is also applied, which covers hull
    // edges lost to the finite enclosing triangle.
    std::iota(by_distance.begin(), by_distance.end(), 0);
    std::sort(by_distance.begin(), by_distance.end(), [&](std::size_t a, std::size_t b) {
      const double da = squared(points[a].x - points[v].x) + squared(points[a].y - points[v].y);
      const double db = squared(points[b].x - points[v].x) + squared(points[b].y - points[v].y);
      return da != db ? da < db : a < b;
    });
    double reach = 2.0 * max_radius(cell, points[v]);
    for (std::size_t w : by_distance) {
      if (used[w]) continue;
      if (distance(points[v], points[w]) > reach) break;
      clip_by_bisector(cell, points[v], points[w], static_cast<std::int64_t>(w));
      reach = 2.0 * max_radius(cell, points[v]);
    }
  }
  return cells;
}

ThermoGraph build_voronoi_graph(const SiteSet& sites) {
  const auto& points = sites.points;
  if (!sites.material_of.empty() && sites.material_of.size() != points.size()) {
    throw Error(Errc::invalid_argument, "material_of must list one material per site");
  }
  if (!sites.boundary.empty() && sites.boundary.size() != points.size()) {
    throw Error(Errc::invalid_argument, "boundary must list one flag per site");
  }
  const auto cells = clipped_voronoi_cells(points, sites.bbox);
  const std::size_t n = points.size();

  std::vector<VertexProps> vertices(n);
  for (std::size_t v = 0; v < n; ++v) {
    const Material& mat = sites.material(v);
    vertices[v] = VertexProps{mat.rho, cells[v].area(), mat.c, mat.mu, mat.melting, sites.is_boundary(v), points[v]};
  }

  // Each facet is measured from both sides; the two lengths agree to rounding.
  std::map<std::pair<std::size_t, std::size_t>, double> facet;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& cell = cells[v];
    for (std::size_t i = 0; i < cell.vertices.size(); ++i) {
      if (cell.neighbor[i] < 0) continue;
      const auto w = static_cast<std::size_t>(cell.neighbor[i]);
      const double len = distance(cell.vertices[i], cell.vertices[(i + 1) % cell.vertices.size()]);
      facet[{std::min(v, w), std::max(v, w)}] += 0.5 * len;
    }
  }
  const double tol = kFacetTolerance * sites.bbox.diagonal();
  std::vector<EdgeProps> edges;
  for (const auto& [key, length] : facet) {
    if (length <= tol) continue;
    const auto [v, w] = key;
    const double kv = sites.material(v).k, kw = sites.material(w).k;
    const double k = kv == kw ? kv : 2.0 * kv * kw / (kv + kw);
    edges.push_back(EdgeProps{v, w, length, k, distance(points[v], points[w])});
  }
  return ThermoGraph::from_edges(std::move(vertices), edges);
}

ThermoGraph build_grid_graph(std::size_t nx, std::size_t ny, double dx, double dy, const Material& material,
                             bool boundary_ring) {
  if (nx < 2 || ny < 2) throw Error(Errc::invalid_argument, "grid needs nx >= 2 and ny >= 2");
  if (!(dx > 0.0) || !(dy > 0.0) || !std::isfinite(dx) || !std::isfinite(dy)) {
    throw Error(Errc::invalid_argument, "grid spacing must be finite and positive");
  }
  auto id = [nx](std::size_t i, std::size_t j) { return j * nx + i; };
  std::vector<VertexProps> vertices(nx * ny);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const bool rim = i == 0 || j == 0 || i + 1 == nx || j + 1 == ny;
      vertices[id(i, j)] = VertexProps{material.rho,
                                       dx * dy,
                                       material.c,
                                       material.mu,
                                       material.melting,
                                       boundary_ring && rim,
                                       Point2{static_cast<double>(i) * dx, static_cast<double>(j) * dy}};
    }
  }
  std::vector<EdgeProps> edges;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      if (i + 1 < nx) edges.push_back(EdgeProps{id(i, j), id(i + 1, j), dy, material.k, dx});
      if (j + 1 < ny) edges.push_back(EdgeProps{id(i, j), id(i, j + 1), dx, material.k, dy});
    }
  }
  return ThermoGraph::from_edges(std::move(vertices), edges);
}

SiteSet random_sites(std::size_t n, const BBox& bbox, std::uint64_t seed, const Material& material) {
  if (n < 2) throw Error(Errc::invalid_argument, "random_sites needs n >= 2");
  if (!(bbox.width() > 0.0 && bbox.height() > 0.0)) throw Error(Errc::invalid_argument, "bbox must have positive extent");
  constexpr int kMaxAttempts = 1000;
  const double separation = bbox.diagonal() * 1e-4;

  // mt19937_64 output is fixed by the standard; the double conversion is
  // done by hand so the stream is identical across standard libraries.
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  SiteSet sites;
  sites.bbox = bbox;
  sites.materials = {material};
  sites.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const Point2 p{bbox.x0 + unit() * bbox.width(), bbox.y0 + unit() * bbox.height()};
      if (!bbox.strictly_contains(p)) continue;
      placed = std::none_of(sites.points.begin(), sites.points.end(),
                            [&](const Point2& q) { return distance(p, q) < separation; });
      if (placed) sites.points.push_back(p);
    }
    if (!placed) {
      throw Error(Errc::separation_unachievable,
                  "could not place site " + std::to_string(i) + " after " + std::to_string(kMaxAttempts) + " draws");
    }
  }
  return sites;
}

}  // namespace thermograph
