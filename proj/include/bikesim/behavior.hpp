#pragma once

#include "bikesim/rng.hpp"
#include "bikesim/user.hpp"
#include "bikesim/world.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bikesim {

// Abstract user model: the eight decision hooks the engine invokes, one per
// situation in the life cycle. Hooks may read the world snapshot and mutate
// only the deciding user's runtime (tried-station bookkeeping).
class UserBehavior {
public:
    virtual ~UserBehavior() = default;

    virtual RentalDecision decideAfterAppearing(const UserConfig&, UserRuntime&,
                                                const World&, Rng&) const = 0;
    virtual RentalDecision decideAfterFailedRental(const UserConfig&, UserRuntime&,
                                                   const World&, Rng&) const = 0;
    virtual RentalDecision decideAfterFailedBikeReservation(const UserConfig&, UserRuntime&,
                                                            const World&, Rng&) const = 0;
    virtual RentalDecision decideAfterBikeReservationTimeout(const UserConfig&, UserRuntime&,
                                                             const World&, Rng&) const = 0;
    virtual AfterBikeDecision decideAfterGettingBike(const UserConfig&, UserRuntime&,
                                                     const World&, Rng&) const = 0;
    virtual ReturnDecision decideAfterFailedReturn(const UserConfig&, UserRuntime&,
                                                   const World&, Rng&) const = 0;
    virtual ReturnDecision decideAfterFinishingRide(const UserConfig&, UserRuntime&,
                                                    const World&, Rng&) const = 0;
    virtual ReturnDecision decideAfterFailedSlotReservation(const UserConfig&, UserRuntime&,
                                                            const World&, Rng&) const = 0;

    // True for types that consult the configured recommendation system;
    // checked once at setup so a missing recommender fails fast.
    virtual bool usesRecommender() const { return false; }
};

// Shared scaffolding for the built-in types: abandon once the failed-attempt
// budget is spent, exclude already-tried stations, and on the return side
// reset the tried set when it is exhausted (a user holding a bike must keep
// trying until some station docks it).
class StationChoiceBehavior : public UserBehavior {
public:
    explicit StationChoiceBehavior(bool reserving) : reserving_(reserving) {}

    RentalDecision decideAfterAppearing(const UserConfig&, UserRuntime&,
                                        const World&, Rng&) const override;
    RentalDecision decideAfterFailedRental(const UserConfig&, UserRuntime&,
                                           const World&, Rng&) const override;
    RentalDecision decideAfterFailedBikeReservation(const UserConfig&, UserRuntime&,
                                                    const World&, Rng&) const override;
    RentalDecision decideAfterBikeReservationTimeout(const UserConfig&, UserRuntime&,
                                                     const World&, Rng&) const override;
    AfterBikeDecision decideAfterGettingBike(const UserConfig&, UserRuntime&,
                                             const World&, Rng&) const override;
    ReturnDecision decideAfterFailedReturn(const UserConfig&, UserRuntime&,
                                           const World&, Rng&) const override;
    ReturnDecision decideAfterFinishingRide(const UserConfig&, UserRuntime&,
                                            const World&, Rng&) const override;
    ReturnDecision decideAfterFailedSlotReservation(const UserConfig&, UserRuntime&,
                                                    const World&, Rng&) const override;

protected:
    // Best station for renting given the type's policy, or nullopt to abandon.
    virtual std::optional<StationId> chooseRentStation(const UserConfig&,
                                                       const UserRuntime&,
                                                       const World&) const = 0;
    // Best station for returning, excluding stations in the tried set.
    virtual std::optional<StationId> chooseReturnStation(const UserConfig&,
                                                         const UserRuntime&,
                                                         const World&) const = 0;

    bool reserving_;

private:
    RentalDecision rentalChoice(const UserConfig&, UserRuntime&, const World&) const;
    RentalDecision retryRentalChoice(const UserConfig&, UserRuntime&, const World&) const;
    ReturnDecision returnChoice(const UserConfig&, UserRuntime&, const World&) const;
};

// Walks to the nearest station with no availability information.
class UninformedBehavior final : public StationChoiceBehavior {
public:
    using StationChoiceBehavior::StationChoiceBehavior;

protected:
    std::optional<StationId> chooseRentStation(const UserConfig&, const UserRuntime&,
                                               const World&) const override;
    std::optional<StationId> chooseReturnStation(const UserConfig&, const UserRuntime&,
                                                 const World&) const override;
};

// Knows fleet state: nearest station with bikes, nearest-to-destination
// station with free slots.
class InformedBehavior final : public StationChoiceBehavior {
public:
    using StationChoiceBehavior::StationChoiceBehavior;

protected:
    std::optional<StationId> chooseRentStation(const UserConfig&, const UserRuntime&,
                                               const World&) const override;
    std::optional<StationId> chooseReturnStation(const UserConfig&, const UserRuntime&,
                                                 const World&) const override;
};

// Always follows the configured recommendation system's top suggestion,
// however far it is.
class ObedientBehavior final : public StationChoiceBehavior {
public:
    using StationChoiceBehavior::StationChoiceBehavior;

    bool usesRecommender() const override { return true; }

protected:
    std::optional<StationId> chooseRentStation(const UserConfig&, const UserRuntime&,
                                               const World&) const override;
    std::optional<StationId> chooseReturnStation(const UserConfig&, const UserRuntime&,
                                                 const World&) const override;
};

// Type registry, keyed by the case-insensitive userType string from the
// users config. Built-ins: UNINFORMED, INFORMED, OBEDIENT and their _R
// reserving variants. New types can be registered at startup.
const UserBehavior* findUserBehavior(const std::string& typeName);
void registerUserBehavior(const std::string& typeName, std::unique_ptr<UserBehavior> behavior);
std::vector<std::string> registeredUserTypes();
std::string canonicalUserTypeName(const std::string& typeName);

} // namespace bikesim
