#pragma once

#include <stdexcept>
#include <vector>

namespace bikesim {

constexpr double kEarthRadiusMeters = 6371000.0;

struct GeoPoint {
    double lat = 0.0; // degrees, [-90, 90]
    double lon = 0.0; // degrees, [-180, 180]

    bool operator==(const GeoPoint& o) const { return lat == o.lat && lon == o.lon; }
};

bool isValid(const GeoPoint& p);

// Area of interest, given as top-left and bottom-right corners.
struct BoundingBox {
    GeoPoint topLeft;
    GeoPoint bottomRight;

    bool contains(const GeoPoint& p) const {
        return p.lat <= topLeft.lat && p.lat >= bottomRight.lat &&
               p.lon >= topLeft.lon && p.lon <= bottomRight.lon;
    }
};

enum class TravelMode { Walk, Cycle };

struct Route {
    std::vector<GeoPoint> waypoints;
    double totalDistance = 0.0; // meters
    TravelMode mode = TravelMode::Walk;
};

// Haversine distance in meters.
double greatCircleDistance(const GeoPoint& a, const GeoPoint& b);

// Linear interpolation along a two-point leg; fraction in [0, 1].
GeoPoint interpolate(const GeoPoint& a, const GeoPoint& b, double fraction);

// Route/travel-time service. The default implementation scales the great
// circle distance by a per-mode circuity factor, which keeps simulations
// offline and deterministic; a street-network router can be plugged in
// behind the same interface.
class Router {
public:
    virtual ~Router() = default;
    virtual Route computeRoute(const GeoPoint& from, const GeoPoint& to,
                               TravelMode mode, double circuity) const = 0;
};

class GreatCircleRouter final : public Router {
public:
    Route computeRoute(const GeoPoint& from, const GeoPoint& to,
                       TravelMode mode, double circuity) const override;
};

// Seconds to cover the route at a constant velocity (m/s). Throws on
// non-positive velocity, which can only come from a bad configuration.
double travelTime(const Route& route, double velocityMps);

// Bundles the router with the configured circuity factors so call sites
// don't have to thread them through.
class RoutePlanner {
public:
    RoutePlanner(const Router& router, double circuityWalk, double circuityCycle)
        : router_(&router), circuityWalk_(circuityWalk), circuityCycle_(circuityCycle) {}

    Route route(const GeoPoint& from, const GeoPoint& to, TravelMode mode) const {
        double circuity = mode == TravelMode::Walk ? circuityWalk_ : circuityCycle_;
        return router_->computeRoute(from, to, mode, circuity);
    }

    double distance(const GeoPoint& from, const GeoPoint& to, TravelMode mode) const {
        return route(from, to, mode).totalDistance;
    }

    double walkDistance(const GeoPoint& from, const GeoPoint& to) const {
        return distance(from, to, TravelMode::Walk);
    }

    double time(const GeoPoint& from, const GeoPoint& to, TravelMode mode,
                double velocityMps) const {
        return travelTime(route(from, to, mode), velocityMps);
    }

private:
    const Router* router_;
    double circuityWalk_;
    double circuityCycle_;
};

} // namespace bikesim
