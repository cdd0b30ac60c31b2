#include "bikesim/config.hpp"

#include "bikesim/behavior.hpp"
#include "bikesim/recommender.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace bikesim {

using nlohmann::json;

namespace {

void rejectUnknownFields(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where, const std::string& path,
                         std::vector<std::string>& errors) {
    for (const auto& [key, _] : obj.items()) {
        if (allowed.count(key) == 0) {
            errors.push_back(where + ": " + path + ": unknown field '" + key + "'");
        }
    }
}

bool isNumber(const json& j) { return j.is_number(); }

// Fetches obj[key] as a double, recording an error if missing or mistyped.
std::optional<double> getNumber(const json& obj, const std::string& key,
                                const std::string& where, const std::string& path,
                                std::vector<std::string>& errors, bool required) {
    if (!obj.contains(key)) {
        if (required) errors.push_back(where + ": " + path + key + ": missing required field");
        return std::nullopt;
    }
    if (!isNumber(obj.at(key))) {
        errors.push_back(where + ": " + path + key + ": expected a number");
        return std::nullopt;
    }
    return obj.at(key).get<double>();
}

std::optional<GeoPoint> parseGeoPoint(const json& obj, const std::string& key,
                                      const std::string& where, const std::string& path,
                                      std::vector<std::string>& errors, bool required) {
    if (!obj.contains(key)) {
        if (required) errors.push_back(where + ": " + path + key + ": missing required field");
        return std::nullopt;
    }
    const json& p = obj.at(key);
    if (!p.is_object()) {
        errors.push_back(where + ": " + path + key + ": expected an object {lat, lon}");
        return std::nullopt;
    }
    rejectUnknownFields(p, {"lat", "lon"}, where, path + key + ".", errors);
    auto lat = getNumber(p, "lat", where, path + key + ".", errors, true);
    auto lon = getNumber(p, "lon", where, path + key + ".", errors, true);
    if (!lat || !lon) return std::nullopt;
    GeoPoint pt{*lat, *lon};
    if (!isValid(pt)) {
        errors.push_back(where + ": " + path + key + ": coordinates out of range");
        return std::nullopt;
    }
    return pt;
}

} // namespace

GlobalConfig parseGlobalConfig(const json& j, const std::string& where,
                               std::vector<std::string>& errors) {
    GlobalConfig c;
    if (!j.is_object()) {
        errors.push_back(where + ": top level: expected an object");
        return c;
    }
    rejectUnknownFields(j,
                        {"reservationTime", "totalSimulationTime", "randomSeed", "boundingBox",
                         "map", "outputPath", "recommendationSystemType", "circuityWalk",
                         "circuityCycle"},
                        where, "", errors);

    if (auto v = getNumber(j, "reservationTime", where, "", errors, true)) {
        c.reservationTime = *v;
        if (*v <= 0) errors.push_back(where + ": reservationTime: must be > 0");
    }
    if (auto v = getNumber(j, "totalSimulationTime", where, "", errors, true)) {
        c.totalSimulationTime = *v;
        if (*v <= 0) errors.push_back(where + ": totalSimulationTime: must be > 0");
    }
    if (j.contains("randomSeed")) {
        if (!j.at("randomSeed").is_number_unsigned() && !j.at("randomSeed").is_number_integer()) {
            errors.push_back(where + ": randomSeed: expected an integer");
        } else {
            c.randomSeed = j.at("randomSeed").get<std::uint64_t>();
        }
    }
    if (j.contains("boundingBox")) {
        const json& bb = j.at("boundingBox");
        if (!bb.is_object()) {
            errors.push_back(where + ": boundingBox: expected an object");
        } else {
            rejectUnknownFields(bb, {"topLeft", "bottomRight"}, where, "boundingBox.", errors);
            auto tl = parseGeoPoint(bb, "topLeft", where, "boundingBox.", errors, true);
            auto br = parseGeoPoint(bb, "bottomRight", where, "boundingBox.", errors, true);
            if (tl && br) {
                c.boundingBox = BoundingBox{*tl, *br};
                if (tl->lat < br->lat || tl->lon > br->lon) {
                    errors.push_back(where + ": boundingBox: topLeft must be north-west of bottomRight");
                }
            }
        }
    } else {
        errors.push_back(where + ": boundingBox: missing required field");
    }
    if (j.contains("map")) {
        if (!j.at("map").is_string()) {
            errors.push_back(where + ": map: expected a string path");
        } else {
            c.mapPath = j.at("map").get<std::string>();
        }
    }
    if (j.contains("outputPath")) {
        if (!j.at("outputPath").is_string()) {
            errors.push_back(where + ": outputPath: expected a string path");
        } else {
            c.outputPath = j.at("outputPath").get<std::string>();
        }
    }
    if (j.contains("recommendationSystemType")) {
        const json& r = j.at("recommendationSystemType");
        if (!r.is_object() || !r.contains("typeName") || !r.at("typeName").is_string()) {
            errors.push_back(where + ": recommendationSystemType: expected {typeName, parameters}");
        } else {
            rejectUnknownFields(r, {"typeName", "parameters"}, where,
                                "recommendationSystemType.", errors);
            RecommenderConfig rc;
            rc.typeName = r.at("typeName").get<std::string>();
            if (r.contains("parameters")) {
                if (!r.at("parameters").is_object()) {
                    errors.push_back(where +
                                     ": recommendationSystemType.parameters: expected an object");
                } else {
                    rc.parameters = r.at("parameters");
                }
            }
            try {
                makeRecommender(rc.typeName, rc.parameters);
                c.recommendationSystemType = std::move(rc);
            } catch (const std::exception& e) {
                errors.push_back(where + ": recommendationSystemType: " + e.what());
            }
        }
    }
    if (auto v = getNumber(j, "circuityWalk", where, "", errors, false)) {
        c.circuityWalk = *v;
        if (*v < 1.0) errors.push_back(where + ": circuityWalk: must be >= 1.0");
    }
    if (auto v = getNumber(j, "circuityCycle", where, "", errors, false)) {
        c.circuityCycle = *v;
        if (*v < 1.0) errors.push_back(where + ": circuityCycle: must be >= 1.0");
    }
    return c;
}

StationsConfig parseStationsConfig(const json& j, const std::string& where,
                                   std::vector<std::string>& errors) {
    StationsConfig c;
    if (!j.is_object() || !j.contains("stations") || !j.at("stations").is_array()) {
        errors.push_back(where + ": top level: expected {\"stations\": [...]}");
        return c;
    }
    rejectUnknownFields(j, {"stations"}, where, "", errors);
    std::set<StationId> seen;
    std::size_t i = 0;
    for (const auto& e : j.at("stations")) {
        std::string path = "stations[" + std::to_string(i) + "].";
        StationConfig sc;
        if (!e.is_object()) {
            errors.push_back(where + ": stations[" + std::to_string(i) + "]: expected an object");
            ++i;
            continue;
        }
        rejectUnknownFields(e, {"id", "position", "capacity", "initialBikes"}, where, path, errors);
        if (!e.contains("id") || !e.at("id").is_number_integer()) {
            errors.push_back(where + ": " + path + "id: missing or non-integer");
        } else {
            sc.id = e.at("id").get<StationId>();
            if (!seen.insert(sc.id).second) {
                errors.push_back(where + ": " + path + "id: duplicate station id " +
                                 std::to_string(sc.id));
            }
        }
        if (auto p = parseGeoPoint(e, "position", where, path, errors, true)) sc.position = *p;
        if (auto v = getNumber(e, "capacity", where, path, errors, true)) {
            sc.capacity = static_cast<int>(*v);
            if (sc.capacity <= 0) {
                errors.push_back(where + ": " + path + "capacity: must be > 0 (station " +
                                 std::to_string(sc.id) + ")");
            }
        }
        if (auto v = getNumber(e, "initialBikes", where, path, errors, true)) {
            sc.initialBikes = static_cast<int>(*v);
            if (sc.initialBikes < 0 || sc.initialBikes > sc.capacity) {
                errors.push_back(where + ": " + path +
                                 "initialBikes: must be within [0, capacity] (station " +
                                 std::to_string(sc.id) + ")");
            }
        }
        c.stations.push_back(sc);
        ++i;
    }
    return c;
}

UsersConfig parseUsersConfig(const json& j, const std::string& where,
                             std::vector<std::string>& errors) {
    UsersConfig c;
    if (!j.is_object() || !j.contains("users") || !j.at("users").is_array()) {
        errors.push_back(where + ": top level: expected {\"users\": [...]}");
        return c;
    }
    rejectUnknownFields(j, {"users"}, where, "", errors);
    std::size_t i = 0;
    for (const auto& e : j.at("users")) {
        std::string path = "users[" + std::to_string(i) + "].";
        UserConfig uc;
        if (!e.is_object()) {
            errors.push_back(where + ": users[" + std::to_string(i) + "]: expected an object");
            ++i;
            continue;
        }
        rejectUnknownFields(e,
                            {"userType", "position", "destinationPlace", "timeInstant",
                             "walkingVelocity", "cyclingVelocity", "minRentalAttempts",
                             "maxDistanceToRentBike", "intermediatePosition"},
                            where, path, errors);
        if (!e.contains("userType") || !e.at("userType").is_string()) {
            errors.push_back(where + ": " + path + "userType: missing or non-string");
        } else {
            uc.userType = e.at("userType").get<std::string>();
            if (findUserBehavior(uc.userType) == nullptr) {
                errors.push_back(where + ": " + path + "userType: unknown user type '" +
                                 uc.userType + "'");
            }
        }
        if (auto p = parseGeoPoint(e, "position", where, path, errors, true)) uc.position = *p;
        if (auto p = parseGeoPoint(e, "destinationPlace", where, path, errors, true)) {
            uc.destinationPlace = *p;
        }
        if (auto v = getNumber(e, "timeInstant", where, path, errors, true)) {
            uc.timeInstant = *v;
            if (*v < 0) errors.push_back(where + ": " + path + "timeInstant: must be >= 0");
        }
        if (auto v = getNumber(e, "walkingVelocity", where, path, errors, false)) {
            uc.walkingVelocity = *v;
            if (*v <= 0) errors.push_back(where + ": " + path + "walkingVelocity: must be > 0");
        }
        if (auto v = getNumber(e, "cyclingVelocity", where, path, errors, false)) {
            uc.cyclingVelocity = *v;
            if (*v <= 0) errors.push_back(where + ": " + path + "cyclingVelocity: must be > 0");
        }
        if (auto v = getNumber(e, "minRentalAttempts", where, path, errors, false)) {
            uc.minRentalAttempts = static_cast<int>(*v);
            if (uc.minRentalAttempts < 1) {
                errors.push_back(where + ": " + path + "minRentalAttempts: must be >= 1");
            }
        }
        if (auto v = getNumber(e, "maxDistanceToRentBike", where, path, errors, false)) {
            uc.maxDistanceToRentBike = *v;
            if (*v <= 0) {
                errors.push_back(where + ": " + path + "maxDistanceToRentBike: must be > 0");
            }
        }
        if (e.contains("intermediatePosition")) {
            if (auto p = parseGeoPoint(e, "intermediatePosition", where, path, errors, true)) {
                uc.intermediatePosition = *p;
            }
        }
        c.users.push_back(std::move(uc));
        ++i;
    }
    return c;
}

void crossValidate(const GlobalConfig& global, const StationsConfig& stations,
                   const UsersConfig&, std::vector<std::string>& errors) {
    for (const auto& st : stations.stations) {
        if (!global.boundingBox.contains(st.position)) {
            errors.push_back("stations: station " + std::to_string(st.id) +
                             ": position outside the bounding box");
        }
    }
}

std::string readFileBytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fnv1aDigest(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

json parseJsonOrError(const std::string& bytes, const std::string& where,
                      std::vector<std::string>& errors) {
    json j = json::parse(bytes, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) {
        errors.push_back(where + ": not valid JSON");
        return json::object();
    }
    return j;
}

} // namespace

LoadedConfigs loadAndValidate(const std::string& globalPath, const std::string& stationsPath,
                              const std::string& usersPath) {
    LoadedConfigs out;
    std::vector<std::string> errors;

    std::string globalBytes = readFileBytes(globalPath);
    std::string stationsBytes = readFileBytes(stationsPath);
    std::string usersBytes = readFileBytes(usersPath);
    out.digests["global"] = fnv1aDigest(globalBytes);
    out.digests["stations"] = fnv1aDigest(stationsBytes);
    out.digests["users"] = fnv1aDigest(usersBytes);

    json jg = parseJsonOrError(globalBytes, globalPath, errors);
    json js = parseJsonOrError(stationsBytes, stationsPath, errors);
    json ju = parseJsonOrError(usersBytes, usersPath, errors);
    if (errors.empty()) {
        out.global = parseGlobalConfig(jg, globalPath, errors);
        out.stations = parseStationsConfig(js, stationsPath, errors);
        out.users = parseUsersConfig(ju, usersPath, errors);
        if (errors.empty()) crossValidate(out.global, out.stations, out.users, errors);
    }
    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "configuration invalid (" << errors.size() << " error"
            << (errors.size() == 1 ? "" : "s") << "):";
        for (const auto& e : errors) msg << "\n  " << e;
        throw ConfigError(msg.str());
    }
    return out;
}

json toJson(const GlobalConfig& c) {
    json j{{"reservationTime", c.reservationTime},
           {"totalSimulationTime", c.totalSimulationTime},
           {"boundingBox",
            {{"topLeft", {{"lat", c.boundingBox.topLeft.lat}, {"lon", c.boundingBox.topLeft.lon}}},
             {"bottomRight",
              {{"lat", c.boundingBox.bottomRight.lat}, {"lon", c.boundingBox.bottomRight.lon}}}}},
           {"outputPath", c.outputPath},
           {"circuityWalk", c.circuityWalk},
           {"circuityCycle", c.circuityCycle}};
    if (c.randomSeed) j["randomSeed"] = *c.randomSeed;
    if (c.mapPath) j["map"] = *c.mapPath;
    if (c.recommendationSystemType) {
        j["recommendationSystemType"] = {{"typeName", c.recommendationSystemType->typeName},
                                         {"parameters", c.recommendationSystemType->parameters}};
    }
    return j;
}

json toJson(const StationsConfig& c) {
    json arr = json::array();
    for (const auto& st : c.stations) {
        arr.push_back({{"id", st.id},
                       {"position", {{"lat", st.position.lat}, {"lon", st.position.lon}}},
                       {"capacity", st.capacity},
                       {"initialBikes", st.initialBikes}});
    }
    return json{{"stations", std::move(arr)}};
}

json toJson(const UsersConfig& c) {
    json arr = json::array();
    for (const auto& u : c.users) {
        json e{{"userType", u.userType},
               {"position", {{"lat", u.position.lat}, {"lon", u.position.lon}}},
               {"destinationPlace",
                {{"lat", u.destinationPlace.lat}, {"lon", u.destinationPlace.lon}}},
               {"timeInstant", u.timeInstant},
               {"walkingVelocity", u.walkingVelocity},
               {"cyclingVelocity", u.cyclingVelocity},
               {"minRentalAttempts", u.minRentalAttempts},
               {"maxDistanceToRentBike", u.maxDistanceToRentBike}};
        if (u.intermediatePosition) {
            e["intermediatePosition"] = {{"lat", u.intermediatePosition->lat},
                                         {"lon", u.intermediatePosition->lon}};
        }
        arr.push_back(std::move(e));
    }
    return json{{"users", std::move(arr)}};
}

void writeJsonFile(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << j.dump(2) << '\n';
}

} // namespace bikesim
