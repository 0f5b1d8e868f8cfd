#pragma once

// Test-only generators and reference computations. Nothing here calls the
// library routines it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "thermograph/graph.hpp"

namespace thermograph::testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

struct RandomGraphOptions {
  std::size_t min_vertices = 2;
  std::size_t max_vertices = 40;
  double extra_degree = 2.0;      // extra random edges per vertex beyond a spanning tree
  double boundary_fraction = 0.0; // expected share of boundary vertices
  double spread = 4.0;            // coefficients drawn from [1/spread, spread]
};

/// Connected simple graph: random spanning tree plus random chords, with
/// log-uniform coefficients. With boundary_fraction > 0 at least one
/// boundary and one interior vertex are present.
inline ThermoGraph random_graph(std::mt19937_64& rng, const RandomGraphOptions& opt = {}) {
  const std::size_t n = std::uniform_int_distribution<std::size_t>(opt.min_vertices, opt.max_vertices)(rng);
  auto coef = [&] { return std::exp(uniform(rng, -std::log(opt.spread), std::log(opt.spread))); };
  std::vector<VertexProps> vertices(n);
  for (auto& v : vertices) {
    v.rho = coef();
    v.d = coef();
    v.c = coef();
  }
  if (opt.boundary_fraction > 0.0 && n >= 2) {
    for (auto& v : vertices) v.boundary = uniform(rng, 0.0, 1.0) < opt.boundary_fraction;
    vertices[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)].boundary = true;
    auto first_boundary = std::find_if(vertices.begin(), vertices.end(), [](auto& v) { return v.boundary; });
    bool any_interior = std::any_of(vertices.begin(), vertices.end(), [](auto& v) { return !v.boundary; });
    if (!any_interior) vertices[(first_boundary - vertices.begin() + 1) % n].boundary = false;
  }
  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t j = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    pairs.insert({j, i});
  }
  const auto extra = static_cast<std::size_t>(opt.extra_degree * static_cast<double>(n));
  for (std::size_t e = 0; e < extra && n > 2; ++e) {
    std::size_t a = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    std::size_t b = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    if (a != b) pairs.insert({std::min(a, b), std::max(a, b)});
  }
  std::vector<EdgeProps> edges;
  for (auto [a, b] : pairs) edges.push_back(EdgeProps{a, b, coef(), coef(), coef()});
  return ThermoGraph::from_edges(std::move(vertices), edges);
}

inline std::vector<double> random_field(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::vector<double> u(n);
  for (auto& x : u) x = uniform(rng, lo, hi);
  return u;
}

/// Independent evaluation of the explicit update as a dense matrix built
/// straight from the edge coefficients.
inline std::vector<std::vector<double>> reference_matrix(const ThermoGraph& g, double dt) {
  const std::size_t n = g.size();
  std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    if (g.vertex(i).boundary) {
      A[i][i] = 1.0;
      continue;
    }
    double row = 0.0;
    for (const auto& e : g.neighbors(i)) {
      A[i][e.target] = e.k * e.S * dt / (g.vertex(i).c * g.vertex(i).rho * g.vertex(i).d * e.dx);
      row += A[i][e.target];
    }
    A[i][i] = 1.0 - row;
  }
  return A;
}

inline std::vector<double> multiply(const std::vector<std::vector<double>>& A, const std::vector<double>& x) {
  std::vector<double> y(A.size(), 0.0);
  for (std::size_t i = 0; i < A.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += A[i][j] * x[j];
  }
  return y;
}

inline std::vector<std::vector<double>> multiply(const std::vector<std::vector<double>>& A,
                                                 const std::vector<std::vector<double>>& B) {
  const std::size_t n = A.size();
  std::vector<std::vector<double>> C(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) C[i][j] += A[i][k] * B[k][j];
    }
  }
  return C;
}

/// Dense Gaussian elimination with partial pivoting.
inline std::vector<double> solve_dense(std::vector<std::vector<double>> M, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    }
    std::swap(M[col], M[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = M[r][col] / M[col][col];
      for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= M[i][c] * x[c];
    x[i] = s / M[i][i];
  }
  return x;
}

/// Weighted mean and deviation straight from the definitions.
struct ReferenceEntropy {
  double Phi, M, D, N;
};

inline ReferenceEntropy reference_entropy(const ThermoGraph& g, const std::vector<double>& u) {
  ReferenceEntropy r{0, 0, 0, 0};
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!g.vertex(v).boundary) r.Phi += g.vertex(v).c * g.vertex(v).rho * g.vertex(v).d;
  }
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!g.vertex(v).boundary) r.M += u[v] * g.vertex(v).c * g.vertex(v).rho * g.vertex(v).d;
  }
  r.M /= r.Phi;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!g.vertex(v).boundary) r.D += std::abs(u[v] - r.M) * g.vertex(v).c * g.vertex(v).rho * g.vertex(v).d;
  }
  r.D /= r.Phi;
  r.N = r.M == 0.0 ? 0.0 : r.D / r.M * r.Phi;
  return r;
}

/// Nearest-site rasterization of a bbox: per-site pixel areas and the set
/// of site pairs owning 4-adjacent pixels.
struct Raster {
  std::vector<double> area;
  std::set<std::pair<std::size_t, std::size_t>> adjacent;
};

inline Raster rasterize(const std::vector<Point2>& sites, const BBox& box, std::size_t resolution) {
  Raster r;
  r.area.assign(sites.size(), 0.0);
  const double px = box.width() / static_cast<double>(resolution);
  const double py = box.height() / static_cast<double>(resolution);
  std::vector<std::uint32_t> prev(resolution), cur(resolution);
  for (std::size_t j = 0; j < resolution; ++j) {
    const double y = box.y0 + (static_cast<double>(j) + 0.5) * py;
    for (std::size_t i = 0; i < resolution; ++i) {
      const double x = box.x0 + (static_cast<double>(i) + 0.5) * px;
      std::size_t best = 0;
      double best_d = INFINITY;
      for (std::size_t s = 0; s < sites.size(); ++s) {
        const double d = (sites[s].x - x) * (sites[s].x - x) + (sites[s].y - y) * (sites[s].y - y);
        if (d < best_d) {
          best_d = d;
          best = s;
        }
      }
      cur[i] = static_cast<std::uint32_t>(best);
      r.area[best] += px * py;
      auto link = [&](std::size_t a, std::size_t b) {
        if (a != b) r.adjacent.insert({std::min(a, b), std::max(a, b)});
      };
      if (i > 0) link(cur[i - 1], best);
      if (j > 0) link(prev[i], best);
    }
    std::swap(prev, cur);
  }
  return r;
}

struct BisectorFacet {
  double length = 0.0;
  Point2 midpoint;
};

/// Exact Voronoi adjacency without triangulation or polygon clipping: the
/// facet of sites (i, j) is their bisector line cut down to the box and to
/// every other site's half-plane.
inline std::map<std::pair<std::size_t, std::size_t>, BisectorFacet> bisector_facets(const std::vector<Point2>& sites,
                                                                                  const BBox& box) {
  using R = long double;
  std::map<std::pair<std::size_t, std::size_t>, BisectorFacet> out;
  const R inf = std::numeric_limits<R>::infinity();
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      const R mx = (R(sites[i].x) + sites[j].x) / 2, my = (R(sites[i].y) + sites[j].y) / 2;
      const R dx = -(R(sites[j].y) - sites[i].y), dy = R(sites[j].x) - sites[i].x;
      R lo = -inf, hi = inf;
      // a t <= b
      auto cut = [&](R a, R b) {
        if (a > 0) hi = std::min(hi, b / a);
        else if (a < 0) lo = std::max(lo, b / a);
        else if (b < 0) hi = -inf;
      };
      cut(-dx, mx - box.x0);
      cut(dx, box.x1 - mx);
      cut(-dy, my - box.y0);
      cut(dy, box.y1 - my);
      for (std::size_t k = 0; k < sites.size() && lo < hi; ++k) {
        if (k == i || k == j) continue;
        // |x - p_i|^2 <= |x - p_k|^2  <=>  2 x . (p_k - p_i) <= |p_k|^2 - |p_i|^2
        const R ex = R(sites[k].x) - sites[i].x, ey = R(sites[k].y) - sites[i].y;
        const R rhs = (R(sites[k].x) * sites[k].x + R(sites[k].y) * sites[k].y) -
                      (R(sites[i].x) * sites[i].x + R(sites[i].y) * sites[i].y);
        cut(2 * (dx * ex + dy * ey), rhs - 2 * (mx * ex + my * ey));
      }
      if (!(lo < hi)) continue;
      const R norm = std::sqrt(dx * dx + dy * dy);
      const R tm = (lo + hi) / 2;
      out[{i, j}] = BisectorFacet{static_cast<double>((hi - lo) * norm),
                                  Point2{static_cast<double>(mx + tm * dx), static_cast<double>(my + tm * dy)}};
    }
  }
  return out;
}

struct AdjacencyAudit {
  std::size_t mesh_vs_bisector = 0;  // pairs where the mesh and the bisector oracle disagree
  std::size_t raster_only = 0;       // raster sees a contact the mesh lacks
  std::size_t sub_pixel = 0;         // mesh-only pairs confirmed by a zoomed raster
  std::size_t unconfirmed = 0;       // mesh-only pairs the zoomed raster does not show
  bool exact() const { return mesh_vs_bisector == 0 && raster_only == 0 && unconfirmed == 0; }
};

/// Compares mesh adjacency with a raster and the bisector oracle. Contacts
/// shorter than a raster pixel are re-rasterized in a window around the
/// facet before being counted as a mismatch.
inline AdjacencyAudit audit_adjacency(const std::vector<Point2>& sites, const BBox& box,
                                      const std::set<std::pair<std::size_t, std::size_t>>& mesh,
                                      const std::set<std::pair<std::size_t, std::size_t>>& raster) {
  AdjacencyAudit audit;
  std::set<std::pair<std::size_t, std::size_t>> exact;
  const auto facets = bisector_facets(sites, box);
  for (const auto& [pair, facet] : facets) {
    if (facet.length > 1e-12 * box.diagonal()) exact.insert(pair);
  }
  for (const auto& pair : exact) audit.mesh_vs_bisector += mesh.count(pair) == 0;
  for (const auto& pair : mesh) audit.mesh_vs_bisector += exact.count(pair) == 0;
  for (const auto& pair : raster) audit.raster_only += mesh.count(pair) == 0;
  for (const auto& pair : mesh) {
    if (raster.count(pair) != 0) continue;
    auto it = facets.find(pair);
    if (it == facets.end()) {
      ++audit.unconfirmed;
      continue;
    }
    const double h = 2.0 * it->second.length;
    const Point2 m = it->second.midpoint;
    const auto zoom = rasterize(sites, BBox{m.x - h, m.y - h, m.x + h, m.y + h}, 200);
    if (zoom.adjacent.count(pair) != 0) {
      ++audit.sub_pixel;
    } else {
      ++audit.unconfirmed;
    }
  }
  return audit;
}

}  // namespace thermograph::testing
