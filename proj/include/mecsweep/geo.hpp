#ifndef MECSWEEP_GEO_HPP
#define MECSWEEP_GEO_HPP

#include <span>
#include <vector>

namespace mecsweep {
namespace geo {

// Mean Earth radius used by the spherical equirectangular projection.
inline constexpr double kEarthRadiusM = 6371000.0;

// Incidence tolerance for hull overlap tests, in meters. Below GPS noise,
// above floating-point noise at city scales.
inline constexpr double kIncidenceTolM = 1e-6;

// A point on the local tangent plane: meters east / north of the reference.
struct PlanePoint {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

// Reference coordinate for the projection, in degrees.
struct GeoRef {
  double lat = 0.0;
  double lon = 0.0;
};

// Convex hull of a point set. Degenerate inputs collapse to a point or a
// segment; polygons are strictly convex (no collinear triples), given in
// counter-clockwise order with no repeated vertices.
struct Hull {
  enum class Kind { kPoint, kSegment, kPolygon };

  Kind kind = Kind::kPoint;
  std::vector<PlanePoint> vertices;

  friend bool operator==(const Hull&, const Hull&) = default;
};

// Equirectangular projection on a sphere: x = R*cos(ref_lat)*dlon,
// y = R*dlat (angles in radians).
PlanePoint project_to_plane(double lat, double lon, const GeoRef& ref);

// Inverse of project_to_plane. Returns {lat, lon} in degrees.
GeoRef to_lat_lon(const PlanePoint& p, const GeoRef& ref);

double distance(const PlanePoint& a, const PlanePoint& b);

// Andrew's monotone chain. Collinear boundary points are dropped so the
// vertex sequence is canonical. Throws std::invalid_argument on empty input.
Hull convex_hull(std::span<const PlanePoint> points);

// (sum w_i * p_i) / (sum w_i). Throws std::invalid_argument when the sizes
// differ or the total weight is zero.
PlanePoint weighted_centroid(std::span<const PlanePoint> points,
                             std::span<const double> weights);

// True iff the closed convex sets intersect; touching boundaries count.
// Uses kIncidenceTolM for the incidence decision.
bool hulls_intersect(const Hull& a, const Hull& b);

// Minimum Euclidean distance between the two closed convex sets.
double hull_distance(const Hull& a, const Hull& b);

// Signed check that a point lies inside or on a hull within `tol` meters.
bool hull_contains(const Hull& h, const PlanePoint& p, double tol);

}  // namespace geo
}  // namespace mecsweep

#endif  // MECSWEEP_GEO_HPP
