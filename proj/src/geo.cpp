#include "bikesim/geo.hpp"

#include <cmath>

namespace bikesim {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}

bool isValid(const GeoPoint& p) {
    return p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

double greatCircleDistance(const GeoPoint& a, const GeoPoint& b) {
    double lat1 = a.lat * kDegToRad;
    double lat2 = b.lat * kDegToRad;
    double dLat = (b.lat - a.lat) * kDegToRad;
    double dLon = (b.lon - a.lon) * kDegToRad;

    double s = std::sin(dLat / 2.0);
    double t = std::sin(dLon / 2.0);
    double h = s * s + std::cos(lat1) * std::cos(lat2) * t * t;

    return 2.0 * kEarthRadiusMeters * std::asin(std::sqrt(std::min(1.0, h)));
}

GeoPoint interpolate(const GeoPoint& a, const GeoPoint& b, double fraction) {
    return GeoPoint{a.lat + (b.lat - a.lat) * fraction,
                    a.lon + (b.lon - a.lon) * fraction};
}

Route GreatCircleRouter::computeRoute(const GeoPoint& from, const GeoPoint& to,
                                      TravelMode mode, double circuity) const {
    if (circuity < 1.0) {
        throw std::invalid_argument("route circuity must be >= 1.0");
    }
    Route r;
    r.mode = mode;
    r.waypoints = {from, to};
    r.totalDistance = greatCircleDistance(from, to) * circuity;
    return r;
}

double travelTime(const Route& route, double velocityMps) {
    if (velocityMps <= 0.0) {
        throw std::invalid_argument("velocity must be positive");
    }
    return route.totalDistance / velocityMps;
}

} // namespace bikesim
