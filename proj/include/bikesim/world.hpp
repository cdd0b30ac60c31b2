#pragma once

#include "bikesim/geo.hpp"
#include "bikesim/rng.hpp"
#include "bikesim/station.hpp"
#include "bikesim/user.hpp"

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace bikesim {

class Recommender;

// Everything the event loop mutates for one simulation. Owned by a single
// thread; batch runners give each simulation its own World.
struct World {
    double clock = 0.0;
    std::vector<Station> stations;
    std::vector<SimUser> users;
    std::vector<Reservation> reservations; // indexed by ReservationId
    const RoutePlanner* planner = nullptr;
    const Recommender* recommender = nullptr; // may be null
    Rng rng{0};

    Station& station(StationId id) {
        auto it = stationIndex_.find(id);
        if (it == stationIndex_.end()) {
            throw std::logic_error("unknown station id " + std::to_string(id));
        }
        return stations[it->second];
    }

    const Station& station(StationId id) const {
        return const_cast<World*>(this)->station(id);
    }

    bool hasStation(StationId id) const { return stationIndex_.count(id) > 0; }

    void rebuildStationIndex() {
        stationIndex_.clear();
        for (std::size_t i = 0; i < stations.size(); ++i) {
            stationIndex_[stations[i].id] = i;
        }
    }

private:
    std::unordered_map<StationId, std::size_t> stationIndex_;
};

} // namespace bikesim
