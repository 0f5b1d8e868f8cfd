#pragma once

#include <cmath>

namespace thermograph {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct BBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  double diagonal() const { return std::hypot(width(), height()); }
  bool strictly_contains(Point2 p) const { return p.x > x0 && p.x < x1 && p.y > y0 && p.y < y1; }
};

}  // namespace thermograph
