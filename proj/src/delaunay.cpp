#include "thermograph/delaunay.hpp"

#include <algorithm>
#include <map>

namespace thermograph {

long double orient(Point2 a, Point2 b, Point2 c) {
  const long double abx = static_cast<long double>(b.x) - a.x;
  const long double aby = static_cast<long double>(b.y) - a.y;
  const long double acx = static_cast<long double>(c.x) - a.x;
  const long double acy = static_cast<long double>(c.y) - a.y;
  return abx * acy - aby * acx;
}

long double incircle(Point2 a, Point2 b, Point2 c, Point2 d) {
  const long double adx = static_cast<long double>(a.x) - d.x;
  const long double ady = static_cast<long double>(a.y) - d.y;
  const long double bdx = static_cast<long double>(b.x) - d.x;
  const long double bdy = static_cast<long double>(b.y) - d.y;
  const long double cdx = static_cast<long double>(c.x) - d.x;
  const long double cdy = static_cast<long double>(c.y) - d.y;
  const long double ad = adx * adx + ady * ady;
  const long double bd = bdx * bdx + bdy * bdy;
  const long double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

DelaunayTriangulation::DelaunayTriangulation(std::span<const Point2> sites) {
  const std::size_t n = sites.size();
  if (n < 2) return;

  double xmin = sites[0].x, xmax = sites[0].x, ymin = sites[0].y, ymax = sites[0].y;
  for (const auto& p : sites) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-300});
  const double cx = 0.5 * (xmin + xmax);
  const double cy = 0.5 * (ymin + ymax);
  const double far = 100.0 * span;

  std::vector<Point2> pts(sites.begin(), sites.end());
  pts.push_back({cx - far, cy - far});
  pts.push_back({cx + far, cy - far});
  pts.push_back({cx, cy + far});

  std::vector<Triangle> tris{{n, n + 1, n + 2}};
  std::vector<Triangle> keep;
  std::map<std::pair<std::size_t, std::size_t>, int> edge_count;

  for (std::size_t s = 0; s < n; ++s) {
    const Point2 p = pts[s];
    keep.clear();
    edge_count.clear();
    std::vector<Triangle> bad;
    for (const auto& t : tris) {
      if (incircle(pts[t[0]], pts[t[1]], pts[t[2]], p) > 0) {
        bad.push_back(t);
      } else {
        keep.push_back(t);
      }
    }
    // A point on an edge of its containing triangle can leave `bad` empty
    // only if it coincides with a vertex, which callers reject.
    for (const auto& t : bad) {
      for (int e = 0; e < 3; ++e) {
        auto a = t[e], b = t[(e + 1) % 3];
        ++edge_count[{std::min(a, b), std::max(a, b)}];
      }
    }
    for (const auto& t : bad) {
      for (int e = 0; e < 3; ++e) {
        auto a = t[e], b = t[(e + 1) % 3];
        if (edge_count[{std::min(a, b), std::max(a, b)}] == 1) keep.push_back({a, b, s});
      }
    }
    tris.swap(keep);
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const auto& t : tris) {
    bool real = t[0] < n && t[1] < n && t[2] < n;
    if (real) triangles_.push_back(t);
    for (int e = 0; e < 3; ++e) {
      auto a = t[e], b = t[(e + 1) % 3];
      if (a < n && b < n) edges.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  std::sort(triangles_.begin(), triangles_.end());
}

}  // namespace thermograph
