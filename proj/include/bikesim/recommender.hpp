#pragma once

#include "bikesim/geo.hpp"
#include "bikesim/world.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace bikesim {

// Balancing strategy plug-in. Implementations return stations ordered from
// best to worst; stations without the requested resource (bikes for rentals,
// free slots for returns) are never listed. Recommenders only read the world.
class Recommender {
public:
    virtual ~Recommender() = default;

    virtual std::vector<StationId> recommendStationToRentBike(
        const GeoPoint& userPosition, const World& world) const = 0;

    virtual std::vector<StationId> recommendStationToReturnBike(
        const GeoPoint& userPosition, const GeoPoint& destination,
        const World& world) const = 0;
};

// "AVAILABLE_RESOURCES": stations ranked by raw resource count, descending.
class AvailableResourcesRecommender final : public Recommender {
public:
    std::vector<StationId> recommendStationToRentBike(
        const GeoPoint& userPosition, const World& world) const override;
    std::vector<StationId> recommendStationToReturnBike(
        const GeoPoint& userPosition, const GeoPoint& destination,
        const World& world) const override;
};

// "AVAILABLE_RESOURCES_RATIO": stations ranked by resource count divided by
// walk distance, descending. For rentals the distance is user to station.
// For returns it is station to destination by default (the walk the user
// faces after docking); set parameter "returnDistance" to "user_to_station"
// to divide by the riding distance instead.
class AvailableResourcesRatioRecommender final : public Recommender {
public:
    enum class ReturnDistanceOperand { StationToDestination, UserToStation };

    explicit AvailableResourcesRatioRecommender(
        ReturnDistanceOperand op = ReturnDistanceOperand::StationToDestination)
        : returnDistance_(op) {}

    std::vector<StationId> recommendStationToRentBike(
        const GeoPoint& userPosition, const World& world) const override;
    std::vector<StationId> recommendStationToReturnBike(
        const GeoPoint& userPosition, const GeoPoint& destination,
        const World& world) const override;

private:
    ReturnDistanceOperand returnDistance_;
};

// Builds a recommender from a config entry {typeName, parameters}. Unknown
// type names or parameters are startup errors.
std::unique_ptr<Recommender> makeRecommender(const std::string& typeName,
                                             const nlohmann::json& parameters);

} // namespace bikesim
