#include "mecsweep/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mecsweep {
namespace geo {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double cross(const PlanePoint& o, const PlanePoint& a, const PlanePoint& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Distance from point p to the closed segment [a, b].
double point_segment_distance(const PlanePoint& p, const PlanePoint& a,
                              const PlanePoint& b) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  if (len2 == 0.0) {
    return std::hypot(p.x - a.x, p.y - a.y);
  }
  double t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

bool segments_properly_intersect(const PlanePoint& a, const PlanePoint& b,
                                 const PlanePoint& c, const PlanePoint& d) {
  const double d1 = cross(a, b, c);
  const double d2 = cross(a, b, d);
  const double d3 = cross(c, d, a);
  const double d4 = cross(c, d, b);
  return ((d1 > 0.0) != (d2 > 0.0)) && ((d3 > 0.0) != (d4 > 0.0)) &&
         d1 != 0.0 && d2 != 0.0 && d3 != 0.0 && d4 != 0.0;
}

double segment_segment_distance(const PlanePoint& a, const PlanePoint& b,
                                const PlanePoint& c, const PlanePoint& d) {
  if (segments_properly_intersect(a, b, c, d)) {
    return 0.0;
  }
  return std::min({point_segment_distance(a, c, d),
                   point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b),
                   point_segment_distance(d, a, b)});
}

// Boundary of a hull as a list of (possibly degenerate) segments.
std::vector<std::pair<PlanePoint, PlanePoint>> boundary_segments(const Hull& h) {
  std::vector<std::pair<PlanePoint, PlanePoint>> segs;
  switch (h.kind) {
    case Hull::Kind::kPoint:
      segs.emplace_back(h.vertices[0], h.vertices[0]);
      break;
    case Hull::Kind::kSegment:
      segs.emplace_back(h.vertices[0], h.vertices[1]);
      break;
    case Hull::Kind::kPolygon:
      for (std::size_t i = 0; i < h.vertices.size(); ++i) {
        segs.emplace_back(h.vertices[i],
                          h.vertices[(i + 1) % h.vertices.size()]);
      }
      break;
  }
  return segs;
}

}  // namespace

PlanePoint project_to_plane(double lat, double lon, const GeoRef& ref) {
  const double x =
      kEarthRadiusM * std::cos(ref.lat * kDegToRad) * (lon - ref.lon) * kDegToRad;
  const double y = kEarthRadiusM * (lat - ref.lat) * kDegToRad;
  return {x, y};
}

GeoRef to_lat_lon(const PlanePoint& p, const GeoRef& ref) {
  const double lat = ref.lat + p.y / kEarthRadiusM / kDegToRad;
  const double lon =
      ref.lon + p.x / (kEarthRadiusM * std::cos(ref.lat * kDegToRad)) / kDegToRad;
  return {lat, lon};
}

double distance(const PlanePoint& a, const PlanePoint& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Hull convex_hull(std::span<const PlanePoint> points) {
  if (points.empty()) {
    throw std::invalid_argument("convex_hull: no points");
  }

  std::vector<PlanePoint> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const PlanePoint& a, const PlanePoint& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  if (pts.size() == 1) {
    return Hull{Hull::Kind::kPoint, std::move(pts)};
  }

  // Monotone chain; strict turns only, so collinear points are dropped.
  std::vector<PlanePoint> ring(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {  // lower chain
    while (k >= 2 && cross(ring[k - 2], ring[k - 1], p) <= 0.0) --k;
    ring[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {  // upper chain
    while (k >= lower && cross(ring[k - 2], ring[k - 1], *it) <= 0.0) --k;
    ring[k++] = *it;
  }
  ring.resize(k - 1);  // last point repeats the first

  if (ring.size() == 2) {
    return Hull{Hull::Kind::kSegment, std::move(ring)};
  }
  return Hull{Hull::Kind::kPolygon, std::move(ring)};
}

PlanePoint weighted_centroid(std::span<const PlanePoint> points,
                             std::span<const double> weights) {
  if (points.size() != weights.size()) {
    throw std::invalid_argument("weighted_centroid: size mismatch");
  }
  double sx = 0.0, sy = 0.0, sw = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sx += weights[i] * points[i].x;
    sy += weights[i] * points[i].y;
    sw += weights[i];
  }
  if (sw <= 0.0) {
    throw std::invalid_argument("weighted_centroid: zero total weight");
  }
  return {sx / sw, sy / sw};
}

bool hull_contains(const Hull& h, const PlanePoint& p, double tol) {
  switch (h.kind) {
    case Hull::Kind::kPoint:
      return distance(h.vertices[0], p) <= tol;
    case Hull::Kind::kSegment:
      return point_segment_distance(p, h.vertices[0], h.vertices[1]) <= tol;
    case Hull::Kind::kPolygon: {
      const std::size_t n = h.vertices.size();
      for (std::size_t i = 0; i < n; ++i) {
        const PlanePoint& a = h.vertices[i];
        const PlanePoint& b = h.vertices[(i + 1) % n];
        const double c = cross(a, b, p);
        const double len = distance(a, b);
        if (c < -tol * len) {
          return false;
        }
      }
      return true;
    }
  }
  return false;
}

double hull_distance(const Hull& a, const Hull& b) {
  // Containment of any vertex means the closed sets already intersect.
  for (const auto& v : a.vertices) {
    if (hull_contains(b, v, 0.0)) return 0.0;
  }
  for (const auto& v : b.vertices) {
    if (hull_contains(a, v, 0.0)) return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [a0, a1] : boundary_segments(a)) {
    for (const auto& [b0, b1] : boundary_segments(b)) {
      best = std::min(best, segment_segment_distance(a0, a1, b0, b1));
    }
  }
  return best;
}

bool hulls_intersect(const Hull& a, const Hull& b) {
  return hull_distance(a, b) <= kIncidenceTolM;
}

}  // namespace geo
}  // namespace mecsweep
