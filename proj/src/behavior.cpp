#include "bikesim/behavior.hpp"

#include "bikesim/recommender.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <stdexcept>

namespace bikesim {

namespace {

template <typename Pred>
std::optional<StationId> nearestStation(const World& world, const GeoPoint& from,
                                        const std::set<StationId>& exclude, Pred pred) {
    std::optional<StationId> best;
    double bestDist = std::numeric_limits<double>::infinity();
    for (const auto& st : world.stations) {
        if (exclude.count(st.id) > 0) continue;
        if (!pred(st)) continue;
        double d = world.planner->walkDistance(from, st.position);
        if (d < bestDist || (d == bestDist && best && st.id < *best)) {
            bestDist = d;
            best = st.id;
        }
    }
    return best;
}

std::optional<StationId> firstUntried(const std::vector<StationId>& ranked,
                                      const std::set<StationId>& tried) {
    for (StationId id : ranked) {
        if (tried.count(id) == 0) return id;
    }
    return std::nullopt;
}

const Recommender& requireRecommender(const World& world) {
    if (world.recommender == nullptr) {
        throw std::logic_error("obedient user type needs a configured recommendation system");
    }
    return *world.recommender;
}

} // namespace

RentalDecision StationChoiceBehavior::rentalChoice(const UserConfig& cfg, UserRuntime& rt,
                                                   const World& world) const {
    auto st = chooseRentStation(cfg, rt, world);
    if (!st) return LeaveSystem{};
    if (reserving_) return ReserveBikeAt{*st};
    return GoToStation{*st};
}

RentalDecision StationChoiceBehavior::retryRentalChoice(const UserConfig& cfg, UserRuntime& rt,
                                                        const World& world) const {
    if (rt.failedRentalAttempts >= cfg.minRentalAttempts) return LeaveSystem{};
    return rentalChoice(cfg, rt, world);
}

ReturnDecision StationChoiceBehavior::returnChoice(const UserConfig& cfg, UserRuntime& rt,
                                                   const World& world) const {
    auto st = chooseReturnStation(cfg, rt, world);
    if (!st && !rt.triedReturnStations.empty()) {
        // Every candidate has been tried; start over.
        rt.triedReturnStations.clear();
        st = chooseReturnStation(cfg, rt, world);
    }
    if (!st) {
        // No station currently satisfies the policy (e.g. none with free
        // slots anywhere). The user cannot abandon with a bike, so head for
        // the station closest to the destination and try there.
        st = nearestStation(world, cfg.destinationPlace, {}, [](const Station&) { return true; });
    }
    if (!st) throw std::logic_error("world has no stations to return a bike to");
    if (reserving_) return ReserveSlotAt{*st};
    return GoToReturnStation{*st};
}

RentalDecision StationChoiceBehavior::decideAfterAppearing(const UserConfig& cfg, UserRuntime& rt,
                                                           const World& world, Rng&) const {
    return rentalChoice(cfg, rt, world);
}

RentalDecision StationChoiceBehavior::decideAfterFailedRental(const UserConfig& cfg, UserRuntime& rt,
                                                              const World& world, Rng&) const {
    return retryRentalChoice(cfg, rt, world);
}

RentalDecision StationChoiceBehavior::decideAfterFailedBikeReservation(
    const UserConfig& cfg, UserRuntime& rt, const World& world, Rng&) const {
    return retryRentalChoice(cfg, rt, world);
}

RentalDecision StationChoiceBehavior::decideAfterBikeReservationTimeout(
    const UserConfig& cfg, UserRuntime& rt, const World& world, Rng&) const {
    return retryRentalChoice(cfg, rt, world);
}

AfterBikeDecision StationChoiceBehavior::decideAfterGettingBike(const UserConfig& cfg,
                                                                UserRuntime& rt,
                                                                const World& world, Rng&) const {
    if (cfg.intermediatePosition) {
        return RideToIntermediate{*cfg.intermediatePosition};
    }
    ReturnDecision d = returnChoice(cfg, rt, world);
    if (std::holds_alternative<ReserveSlotAt>(d)) return std::get<ReserveSlotAt>(d);
    return std::get<GoToReturnStation>(d);
}

ReturnDecision StationChoiceBehavior::decideAfterFailedReturn(const UserConfig& cfg, UserRuntime& rt,
                                                              const World& world, Rng&) const {
    return returnChoice(cfg, rt, world);
}

ReturnDecision StationChoiceBehavior::decideAfterFinishingRide(const UserConfig& cfg, UserRuntime& rt,
                                                               const World& world, Rng&) const {
    return returnChoice(cfg, rt, world);
}

ReturnDecision StationChoiceBehavior::decideAfterFailedSlotReservation(
    const UserConfig& cfg, UserRuntime& rt, const World& world, Rng&) const {
    return returnChoice(cfg, rt, world);
}

std::optional<StationId> UninformedBehavior::chooseRentStation(const UserConfig& cfg,
                                                               const UserRuntime& rt,
                                                               const World& world) const {
    auto st = nearestStation(world, rt.currentPosition, rt.triedRentStations,
                             [](const Station&) { return true; });
    if (!st) return std::nullopt;
    double d = world.planner->walkDistance(rt.currentPosition, world.station(*st).position);
    if (d > cfg.maxDistanceToRentBike) return std::nullopt;
    return st;
}

std::optional<StationId> UninformedBehavior::chooseReturnStation(const UserConfig& cfg,
                                                                 const UserRuntime& rt,
                                                                 const World& world) const {
    return nearestStation(world, cfg.destinationPlace, rt.triedReturnStations,
                          [](const Station&) { return true; });
}

std::optional<StationId> InformedBehavior::chooseRentStation(const UserConfig& cfg,
                                                             const UserRuntime& rt,
                                                             const World& world) const {
    auto st = nearestStation(world, rt.currentPosition, rt.triedRentStations,
                             [](const Station& s) { return s.availableBikes >= 1; });
    if (!st) return std::nullopt;
    double d = world.planner->walkDistance(rt.currentPosition, world.station(*st).position);
    if (d > cfg.maxDistanceToRentBike) return std::nullopt;
    return st;
}

std::optional<StationId> InformedBehavior::chooseReturnStation(const UserConfig& cfg,
                                                               const UserRuntime& rt,
                                                               const World& world) const {
    return nearestStation(world, cfg.destinationPlace, rt.triedReturnStations,
                          [](const Station& s) { return s.availableSlots >= 1; });
}

std::optional<StationId> ObedientBehavior::chooseRentStation(const UserConfig&,
                                                             const UserRuntime& rt,
                                                             const World& world) const {
    auto ranked = requireRecommender(world).recommendStationToRentBike(rt.currentPosition, world);
    return firstUntried(ranked, rt.triedRentStations);
}

std::optional<StationId> ObedientBehavior::chooseReturnStation(const UserConfig& cfg,
                                                               const UserRuntime& rt,
                                                               const World& world) const {
    auto ranked = requireRecommender(world).recommendStationToReturnBike(
        rt.currentPosition, cfg.destinationPlace, world);
    return firstUntried(ranked, rt.triedReturnStations);
}

namespace {

std::map<std::string, std::unique_ptr<UserBehavior>>& registry() {
    static std::map<std::string, std::unique_ptr<UserBehavior>> types = [] {
        std::map<std::string, std::unique_ptr<UserBehavior>> m;
        m.emplace("UNINFORMED", std::make_unique<UninformedBehavior>(false));
        m.emplace("INFORMED", std::make_unique<InformedBehavior>(false));
        m.emplace("OBEDIENT", std::make_unique<ObedientBehavior>(false));
        m.emplace("UNINFORMED_R", std::make_unique<UninformedBehavior>(true));
        m.emplace("INFORMED_R", std::make_unique<InformedBehavior>(true));
        m.emplace("OBEDIENT_R", std::make_unique<ObedientBehavior>(true));
        return m;
    }();
    return types;
}

} // namespace

std::string canonicalUserTypeName(const std::string& typeName) {
    std::string upper = typeName;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return upper;
}

const UserBehavior* findUserBehavior(const std::string& typeName) {
    auto& types = registry();
    auto it = types.find(canonicalUserTypeName(typeName));
    return it == types.end() ? nullptr : it->second.get();
}

void registerUserBehavior(const std::string& typeName, std::unique_ptr<UserBehavior> behavior) {
    std::string key = canonicalUserTypeName(typeName);
    auto& types = registry();
    if (types.count(key) > 0) {
        throw std::invalid_argument("user type '" + key + "' is already registered");
    }
    types.emplace(std::move(key), std::move(behavior));
}

std::vector<std::string> registeredUserTypes() {
    std::vector<std::string> names;
    for (const auto& [name, _] : registry()) names.push_back(name);
    return names;
}

} // namespace bikesim
