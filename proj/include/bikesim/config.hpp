#pragma once

#include "bikesim/geo.hpp"
#include "bikesim/station.hpp"
#include "bikesim/user.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bikesim {

// Configuration problem: bad file, schema violation, broken invariant. The
// message lists every violation with file and field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RecommenderConfig {
    std::string typeName;
    nlohmann::json parameters = nlohmann::json::object();
};

struct GlobalConfig {
    double reservationTime = 0.0;      // seconds before a reservation expires
    double totalSimulationTime = 0.0;  // appearance horizon, seconds
    std::optional<std::uint64_t> randomSeed;
    BoundingBox boundingBox;
    std::optional<std::string> mapPath; // reserved for a street-network router
    std::string outputPath = "output";
    std::optional<RecommenderConfig> recommendationSystemType;
    double circuityWalk = 1.0;
    double circuityCycle = 1.0;
};

struct StationConfig {
    StationId id = 0;
    GeoPoint position;
    int capacity = 0;
    int initialBikes = 0;
};

struct StationsConfig {
    std::vector<StationConfig> stations;
};

struct UsersConfig {
    std::vector<UserConfig> users;
};

struct LoadedConfigs {
    GlobalConfig global;
    StationsConfig stations;
    UsersConfig users;
    // FNV-1a digests of the raw file bytes, keyed global/stations/users.
    std::map<std::string, std::string> digests;
};

// Parse + validate one document. Violations are appended to `errors` as
// "<where>: <field path>: <rule>" lines; on success the struct is filled.
GlobalConfig parseGlobalConfig(const nlohmann::json& j, const std::string& where,
                               std::vector<std::string>& errors);
StationsConfig parseStationsConfig(const nlohmann::json& j, const std::string& where,
                                   std::vector<std::string>& errors);
UsersConfig parseUsersConfig(const nlohmann::json& j, const std::string& where,
                             std::vector<std::string>& errors);

// Checks spanning documents (stations inside the bounding box, ...).
void crossValidate(const GlobalConfig& global, const StationsConfig& stations,
                   const UsersConfig& users, std::vector<std::string>& errors);

// Loads the three JSON files, applies defaults, validates everything and
// throws ConfigError listing all violations if any check fails.
LoadedConfigs loadAndValidate(const std::string& globalPath,
                              const std::string& stationsPath,
                              const std::string& usersPath);

nlohmann::json toJson(const GlobalConfig& c);
nlohmann::json toJson(const StationsConfig& c);
nlohmann::json toJson(const UsersConfig& c);
void writeJsonFile(const std::string& path, const nlohmann::json& j);

std::string fnv1aDigest(const std::string& bytes);
std::string readFileBytes(const std::string& path);

} // namespace bikesim
