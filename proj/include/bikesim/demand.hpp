#pragma once

#include "bikesim/config.hpp"
#include "bikesim/geo.hpp"
#include "bikesim/rng.hpp"
#include "bikesim/user.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bikesim {

// User generator locus: users appear in a circle following a Poisson
// process, with destinations drawn either from another circle or uniformly
// over the whole bounding box.
struct EntryPoint {
    GeoPoint center;
    double radius = 0.0;      // meters
    double ratePerHour = 0.0; // Poisson rate
    UserConfig userTemplate;  // type and type parameters; per-user fields overwritten
    std::optional<GeoPoint> destinationCenter; // unset: whole bounding box
    double destinationRadius = 0.0;
    std::optional<double> windowStart; // defaults to [0, totalSimulationTime)
    std::optional<double> windowEnd;
};

// Homogeneous Poisson arrivals over [start, end): exponential gaps with mean
// 3600/rate seconds, sorted ascending. Zero rate yields no arrivals.
std::vector<double> generateArrivalTimes(double ratePerHour, double windowStart,
                                         double windowEnd, Rng& rng);

// Uniform-by-area sample: radius * sqrt(u) radial distance, uniform bearing,
// meters converted to degrees by equirectangular scaling at the center
// latitude (fine for city-scale radii).
GeoPoint samplePointInCircle(const GeoPoint& center, double radiusMeters, Rng& rng);

GeoPoint samplePointInBox(const BoundingBox& box, Rng& rng);

// One UserConfig per Poisson arrival across all entry points. Entry points
// outside the bounding box are validation errors.
UsersConfig generateUsers(const std::vector<EntryPoint>& entryPoints,
                          const GlobalConfig& global, Rng& rng);

// One recorded trip: times come with hour granularity only.
struct TripRecord {
    int hourOfDay = 0;
    StationId originStationId = 0;
    StationId destinationStationId = 0;
    std::optional<double> cyclingVelocity; // m/s, from recorded route data
};

struct TripIngestStats {
    std::size_t totalTrips = 0;
    std::size_t skippedUnknownStation = 0;
    std::size_t missingCyclingVelocity = 0;
};

// CSV with header: hour,origin_station,destination_station[,cycling_velocity_mps]
std::vector<TripRecord> readTripLogCsv(std::istream& in);
std::vector<TripRecord> readTripLogCsvFile(const std::string& path);

// Turns recorded trips into simulated users: appearance time uniform within
// the trip's hour, appearance and destination jittered uniformly within
// jitterRadius of the real origin/destination stations. Trips naming unknown
// stations are skipped with a warning and counted.
UsersConfig usersFromTripLog(const std::vector<TripRecord>& trips,
                             const StationsConfig& stations, const UserConfig& userTemplate,
                             Rng& rng, TripIngestStats* stats = nullptr,
                             double jitterRadius = 200.0);

// Entry-point definitions file (strict schema, like the other configs).
std::vector<EntryPoint> loadEntryPointsFile(const std::string& path,
                                            const GlobalConfig& global);
std::vector<EntryPoint> parseEntryPoints(const nlohmann::json& j, const std::string& where,
                                         const GlobalConfig& global,
                                         std::vector<std::string>& errors);

} // namespace bikesim
