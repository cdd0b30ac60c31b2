#include "bikesim/demand.hpp"

#include "bikesim/behavior.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace bikesim {

using nlohmann::json;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kMetersPerDegreeLat = kEarthRadiusMeters * kPi / 180.0;
} // namespace

std::vector<double> generateArrivalTimes(double ratePerHour, double windowStart,
                                         double windowEnd, Rng& rng) {
    std::vector<double> times;
    if (ratePerHour <= 0.0 || windowEnd <= windowStart) return times;
    double meanGap = 3600.0 / ratePerHour;
    double t = windowStart;
    for (;;) {
        t += rng.exponential(meanGap);
        if (t >= windowEnd) break;
        times.push_back(t);
    }
    return times;
}

GeoPoint samplePointInCircle(const GeoPoint& center, double radiusMeters, Rng& rng) {
    double r = radiusMeters * std::sqrt(rng.uniform01());
    double bearing = 2.0 * kPi * rng.uniform01();
    double north = r * std::cos(bearing);
    double east = r * std::sin(bearing);
    double lat = center.lat + north / kMetersPerDegreeLat;
    double lon = center.lon + east / (kMetersPerDegreeLat * std::cos(center.lat * kPi / 180.0));
    return GeoPoint{lat, lon};
}

GeoPoint samplePointInBox(const BoundingBox& box, Rng& rng) {
    double lat = rng.uniform(box.bottomRight.lat, box.topLeft.lat);
    double lon = rng.uniform(box.topLeft.lon, box.bottomRight.lon);
    return GeoPoint{lat, lon};
}

UsersConfig generateUsers(const std::vector<EntryPoint>& entryPoints,
                          const GlobalConfig& global, Rng& rng) {
    UsersConfig out;
    for (std::size_t i = 0; i < entryPoints.size(); ++i) {
        const EntryPoint& ep = entryPoints[i];
        if (!global.boundingBox.contains(ep.center)) {
            throw ConfigError("entry point " + std::to_string(i) +
                              ": center outside the bounding box");
        }
        double start = ep.windowStart.value_or(0.0);
        double end = ep.windowEnd.value_or(global.totalSimulationTime);
        if (end < start) {
            throw ConfigError("entry point " + std::to_string(i) + ": time window is reversed");
        }
        for (double t : generateArrivalTimes(ep.ratePerHour, start, end, rng)) {
            UserConfig uc = ep.userTemplate;
            uc.timeInstant = t;
            uc.position = samplePointInCircle(ep.center, ep.radius, rng);
            uc.destinationPlace = ep.destinationCenter
                                      ? samplePointInCircle(*ep.destinationCenter,
                                                            ep.destinationRadius, rng)
                                      : samplePointInBox(global.boundingBox, rng);
            out.users.push_back(std::move(uc));
        }
    }
    return out;
}

std::vector<TripRecord> readTripLogCsv(std::istream& in) {
    std::vector<TripRecord> trips;
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("trip log: empty file");
    }
    bool hasVelocity = false;
    if (line == "hour,origin_station,destination_station") {
        hasVelocity = false;
    } else if (line == "hour,origin_station,destination_station,cycling_velocity_mps") {
        hasVelocity = true;
    } else {
        throw std::runtime_error(
            "trip log: bad header, expected "
            "hour,origin_station,destination_station[,cycling_velocity_mps]");
    }
    std::size_t lineNo = 1;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        TripRecord trip;
        try {
            if (!std::getline(ss, field, ',')) throw std::invalid_argument("hour");
            trip.hourOfDay = std::stoi(field);
            if (!std::getline(ss, field, ',')) throw std::invalid_argument("origin");
            trip.originStationId = std::stoi(field);
            if (!std::getline(ss, field, ',')) throw std::invalid_argument("destination");
            trip.destinationStationId = std::stoi(field);
            if (hasVelocity && std::getline(ss, field, ',') && !field.empty()) {
                trip.cyclingVelocity = std::stod(field);
            }
        } catch (const std::exception&) {
            throw std::runtime_error("trip log line " + std::to_string(lineNo) +
                                     ": malformed record: " + line);
        }
        if (trip.hourOfDay < 0 || trip.hourOfDay > 23) {
            throw std::runtime_error("trip log line " + std::to_string(lineNo) +
                                     ": hour out of range");
        }
        trips.push_back(trip);
    }
    return trips;
}

std::vector<TripRecord> readTripLogCsvFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trip log: " + path);
    return readTripLogCsv(in);
}

UsersConfig usersFromTripLog(const std::vector<TripRecord>& trips,
                             const StationsConfig& stations, const UserConfig& userTemplate,
                             Rng& rng, TripIngestStats* stats, double jitterRadius) {
    std::map<StationId, GeoPoint> positions;
    for (const auto& st : stations.stations) positions[st.id] = st.position;

    TripIngestStats local;
    UsersConfig out;
    for (const auto& trip : trips) {
        ++local.totalTrips;
        auto origin = positions.find(trip.originStationId);
        auto destination = positions.find(trip.destinationStationId);
        if (origin == positions.end() || destination == positions.end()) {
            std::cerr << "warning: trip references unknown station "
                      << (origin == positions.end() ? trip.originStationId
                                                    : trip.destinationStationId)
                      << ", skipped\n";
            ++local.skippedUnknownStation;
            continue;
        }
        UserConfig uc = userTemplate;
        uc.timeInstant = rng.uniform(trip.hourOfDay * 3600.0, (trip.hourOfDay + 1) * 3600.0);
        uc.position = samplePointInCircle(origin->second, jitterRadius, rng);
        uc.destinationPlace = samplePointInCircle(destination->second, jitterRadius, rng);
        if (trip.cyclingVelocity) {
            uc.cyclingVelocity = *trip.cyclingVelocity;
        } else {
            ++local.missingCyclingVelocity;
        }
        out.users.push_back(std::move(uc));
    }
    if (stats) *stats = local;
    return out;
}

namespace {

UserConfig parseUserTemplate(const json& j, const std::string& where, const std::string& path,
                             std::vector<std::string>& errors) {
    UserConfig uc;
    if (!j.is_object() || !j.contains("typeName") || !j.at("typeName").is_string()) {
        errors.push_back(where + ": " + path + ": expected {typeName, parameters}");
        return uc;
    }
    for (const auto& [key, _] : j.items()) {
        if (key != "typeName" && key != "parameters") {
            errors.push_back(where + ": " + path + ": unknown field '" + key + "'");
        }
    }
    uc.userType = j.at("typeName").get<std::string>();
    if (findUserBehavior(uc.userType) == nullptr) {
        errors.push_back(where + ": " + path + ".typeName: unknown user type '" + uc.userType +
                         "'");
    }
    if (!j.contains("parameters")) return uc;
    const json& p = j.at("parameters");
    if (!p.is_object()) {
        errors.push_back(where + ": " + path + ".parameters: expected an object");
        return uc;
    }
    for (const auto& [key, value] : p.items()) {
        if (key == "walkingVelocity") {
            uc.walkingVelocity = value.get<double>();
        } else if (key == "cyclingVelocity") {
            uc.cyclingVelocity = value.get<double>();
        } else if (key == "minRentalAttempts") {
            uc.minRentalAttempts = value.get<int>();
        } else if (key == "maxDistanceToRentBike") {
            uc.maxDistanceToRentBike = value.get<double>();
        } else if (key == "intermediatePosition") {
            uc.intermediatePosition =
                GeoPoint{value.at("lat").get<double>(), value.at("lon").get<double>()};
        } else {
            errors.push_back(where + ": " + path + ".parameters: unknown parameter '" + key +
                             "'");
        }
    }
    if (uc.walkingVelocity <= 0 || uc.cyclingVelocity <= 0) {
        errors.push_back(where + ": " + path + ".parameters: velocities must be > 0");
    }
    if (uc.minRentalAttempts < 1) {
        errors.push_back(where + ": " + path + ".parameters: minRentalAttempts must be >= 1");
    }
    if (uc.maxDistanceToRentBike <= 0) {
        errors.push_back(where + ": " + path + ".parameters: maxDistanceToRentBike must be > 0");
    }
    return uc;
}

std::optional<GeoPoint> pointFrom(const json& j, const std::string& where,
                                  const std::string& path, std::vector<std::string>& errors) {
    if (!j.is_object() || !j.contains("lat") || !j.contains("lon")) {
        errors.push_back(where + ": " + path + ": expected {lat, lon}");
        return std::nullopt;
    }
    GeoPoint p{j.at("lat").get<double>(), j.at("lon").get<double>()};
    if (!isValid(p)) {
        errors.push_back(where + ": " + path + ": coordinates out of range");
        return std::nullopt;
    }
    return p;
}

} // namespace

std::vector<EntryPoint> parseEntryPoints(const json& j, const std::string& where,
                                         const GlobalConfig& global,
                                         std::vector<std::string>& errors) {
    std::vector<EntryPoint> out;
    if (!j.is_object() || !j.contains("entryPoints") || !j.at("entryPoints").is_array()) {
        errors.push_back(where + ": top level: expected {\"entryPoints\": [...]}");
        return out;
    }
    std::size_t i = 0;
    for (const auto& e : j.at("entryPoints")) {
        std::string path = "entryPoints[" + std::to_string(i) + "]";
        EntryPoint ep;
        for (const auto& [key, _] : e.items()) {
            if (key != "center" && key != "radius" && key != "ratePerHour" &&
                key != "userType" && key != "destination" && key != "timeWindow") {
                errors.push_back(where + ": " + path + ": unknown field '" + key + "'");
            }
        }
        if (e.contains("center")) {
            if (auto p = pointFrom(e.at("center"), where, path + ".center", errors)) {
                ep.center = *p;
            }
        } else {
            errors.push_back(where + ": " + path + ".center: missing required field");
        }
        if (!e.contains("radius") || !e.at("radius").is_number()) {
            errors.push_back(where + ": " + path + ".radius: missing or non-numeric");
        } else {
            ep.radius = e.at("radius").get<double>();
            if (ep.radius < 0) errors.push_back(where + ": " + path + ".radius: must be >= 0");
        }
        if (!e.contains("ratePerHour") || !e.at("ratePerHour").is_number()) {
            errors.push_back(where + ": " + path + ".ratePerHour: missing or non-numeric");
        } else {
            ep.ratePerHour = e.at("ratePerHour").get<double>();
            if (ep.ratePerHour < 0) {
                errors.push_back(where + ": " + path + ".ratePerHour: must be >= 0");
            }
        }
        if (e.contains("userType")) {
            ep.userTemplate = parseUserTemplate(e.at("userType"), where, path + ".userType",
                                                errors);
        } else {
            errors.push_back(where + ": " + path + ".userType: missing required field");
        }
        if (e.contains("destination")) {
            const json& d = e.at("destination");
            if (d.is_object() && d.value("wholeArea", false)) {
                // whole bounding box
            } else if (d.is_object() && d.contains("center") && d.contains("radius")) {
                if (auto p = pointFrom(d.at("center"), where, path + ".destination.center",
                                       errors)) {
                    ep.destinationCenter = *p;
                }
                ep.destinationRadius = d.at("radius").get<double>();
            } else {
                errors.push_back(where + ": " + path +
                                 ".destination: expected {wholeArea: true} or {center, radius}");
            }
        }
        if (e.contains("timeWindow")) {
            const json& w = e.at("timeWindow");
            if (!w.is_object() || !w.contains("start") || !w.contains("end")) {
                errors.push_back(where + ": " + path + ".timeWindow: expected {start, end}");
            } else {
                ep.windowStart = w.at("start").get<double>();
                ep.windowEnd = w.at("end").get<double>();
                if (*ep.windowEnd < *ep.windowStart) {
                    errors.push_back(where + ": " + path + ".timeWindow: end before start");
                }
            }
        }
        if (!global.boundingBox.contains(ep.center)) {
            errors.push_back(where + ": " + path + ": center outside the bounding box");
        }
        out.push_back(std::move(ep));
        ++i;
    }
    return out;
}

std::vector<EntryPoint> loadEntryPointsFile(const std::string& path, const GlobalConfig& global) {
    std::string bytes = readFileBytes(path);
    json j = json::parse(bytes, nullptr, /*allow_exceptions=*/false);
    std::vector<std::string> errors;
    if (j.is_discarded()) {
        errors.push_back(path + ": not valid JSON");
    }
    std::vector<EntryPoint> eps;
    if (errors.empty()) eps = parseEntryPoints(j, path, global, errors);
    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "entry points invalid (" << errors.size() << " error"
            << (errors.size() == 1 ? "" : "s") << "):";
        for (const auto& e : errors) msg << "\n  " << e;
        throw ConfigError(msg.str());
    }
    return eps;
}

} // namespace bikesim
