#include "bikesim/recommender.hpp"

#include <algorithm>
#include <stdexcept>

namespace bikesim {

namespace {

struct Scored {
    StationId id;
    double key;
};

// Descending key, station id breaks ties for determinism.
std::vector<StationId> sorted(std::vector<Scored> entries) {
    std::sort(entries.begin(), entries.end(), [](const Scored& a, const Scored& b) {
        if (a.key != b.key) return a.key > b.key;
        return a.id < b.id;
    });
    std::vector<StationId> ids;
    ids.reserve(entries.size());
    for (const auto& e : entries) ids.push_back(e.id);
    return ids;
}

// A user standing at the station would divide by zero; floor the distance
// so co-located stations keep the top rank.
double flooredDistance(const RoutePlanner& planner, const GeoPoint& a, const GeoPoint& b) {
    return std::max(planner.walkDistance(a, b), 1.0);
}

} // namespace

std::vector<StationId> AvailableResourcesRecommender::recommendStationToRentBike(
    const GeoPoint&, const World& world) const {
    std::vector<Scored> entries;
    for (const auto& st : world.stations) {
        if (st.availableBikes >= 1) {
            entries.push_back({st.id, static_cast<double>(st.availableBikes)});
        }
    }
    return sorted(std::move(entries));
}

std::vector<StationId> AvailableResourcesRecommender::recommendStationToReturnBike(
    const GeoPoint&, const GeoPoint&, const World& world) const {
    std::vector<Scored> entries;
    for (const auto& st : world.stations) {
        if (st.availableSlots >= 1) {
            entries.push_back({st.id, static_cast<double>(st.availableSlots)});
        }
    }
    return sorted(std::move(entries));
}

std::vector<StationId> AvailableResourcesRatioRecommender::recommendStationToRentBike(
    const GeoPoint& userPosition, const World& world) const {
    std::vector<Scored> entries;
    for (const auto& st : world.stations) {
        if (st.availableBikes >= 1) {
            double d = flooredDistance(*world.planner, userPosition, st.position);
            entries.push_back({st.id, st.availableBikes / d});
        }
    }
    return sorted(std::move(entries));
}

std::vector<StationId> AvailableResourcesRatioRecommender::recommendStationToReturnBike(
    const GeoPoint& userPosition, const GeoPoint& destination, const World& world) const {
    std::vector<Scored> entries;
    for (const auto& st : world.stations) {
        if (st.availableSlots >= 1) {
            double d = returnDistance_ == ReturnDistanceOperand::StationToDestination
                           ? flooredDistance(*world.planner, st.position, destination)
                           : flooredDistance(*world.planner, userPosition, st.position);
            entries.push_back({st.id, st.availableSlots / d});
        }
    }
    return sorted(std::move(entries));
}

std::unique_ptr<Recommender> makeRecommender(const std::string& typeName,
                                             const nlohmann::json& parameters) {
    if (typeName == "AVAILABLE_RESOURCES") {
        if (!parameters.empty()) {
            throw std::invalid_argument(
                "recommender AVAILABLE_RESOURCES takes no parameters");
        }
        return std::make_unique<AvailableResourcesRecommender>();
    }
    if (typeName == "AVAILABLE_RESOURCES_RATIO") {
        auto operand =
            AvailableResourcesRatioRecommender::ReturnDistanceOperand::StationToDestination;
        for (const auto& [key, value] : parameters.items()) {
            if (key == "returnDistance") {
                const std::string v = value.get<std::string>();
                if (v == "station_to_destination") {
                    operand = AvailableResourcesRatioRecommender::
                        ReturnDistanceOperand::StationToDestination;
                } else if (v == "user_to_station") {
                    operand = AvailableResourcesRatioRecommender::
                        ReturnDistanceOperand::UserToStation;
                } else {
                    throw std::invalid_argument(
                        "recommender parameter returnDistance: unknown value '" + v + "'");
                }
            } else {
                throw std::invalid_argument("unknown recommender parameter '" + key + "'");
            }
        }
        return std::make_unique<AvailableResourcesRatioRecommender>(operand);
    }
    throw std::invalid_argument("unknown recommendationSystemType '" + typeName + "'");
}

} // namespace bikesim
