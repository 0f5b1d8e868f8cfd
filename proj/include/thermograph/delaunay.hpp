#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "thermograph/geometry.hpp"

namespace thermograph {

/// Counter-clockwise triangle over site indices.
using Triangle = std::array<std::size_t, 3>;

/// Positive when d lies strictly inside the circumcircle of the
/// counter-clockwise triangle (a, b, c); evaluated in extended precision.
long double incircle(Point2 a, Point2 b, Point2 c, Point2 d);

/// Positive when (a, b, c) turns counter-clockwise.
long double orient(Point2 a, Point2 b, Point2 c);

/// Incremental Bowyer-Watson triangulation. Sites are inserted in index
/// order; a site exactly on a circumcircle does not invalidate that
/// triangle, which resolves cocircular ties by insertion index.
///
/// Only triangles whose three corners are input sites are returned. Fewer
/// than three sites or an all-collinear input yields no triangles, but
/// `delaunay_edges` still reports the chain of neighbouring sites.
class DelaunayTriangulation {
 public:
  explicit DelaunayTriangulation(std::span<const Point2> sites);

  const std::vector<Triangle>& triangles() const { return triangles_; }
  /// Undirected site pairs (i < j) sharing a triangulation edge, sorted.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

 private:
  std::vector<Triangle> triangles_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

}  // namespace thermograph
