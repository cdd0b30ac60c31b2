#pragma once

#include "bikesim/geo.hpp"
#include "bikesim/station.hpp"

#include <optional>
#include <set>
#include <string>
#include <variant>

namespace bikesim {

struct UserConfig {
    std::string userType;
    GeoPoint position;         // appearance location
    GeoPoint destinationPlace; // final destination
    double timeInstant = 0.0;  // seconds from simulation start
    double walkingVelocity = 1.4; // m/s
    double cyclingVelocity = 6.0; // m/s
    int minRentalAttempts = 2;    // failed rent/reserve attempts before abandoning
    double maxDistanceToRentBike = 600.0; // meters
    std::optional<GeoPoint> intermediatePosition;
};

// Rental decision outcomes (before the user holds a bike).
struct GoToStation { StationId station; };
struct ReserveBikeAt { StationId station; };
struct LeaveSystem {};
using RentalDecision = std::variant<GoToStation, ReserveBikeAt, LeaveSystem>;

// Return decision outcomes (while the user holds a bike; abandoning is not
// an option here).
struct GoToReturnStation { StationId station; };
struct ReserveSlotAt { StationId station; };
using ReturnDecision = std::variant<GoToReturnStation, ReserveSlotAt>;

// Decision right after taking a bike: ride somewhere first, or head to a
// return station directly.
struct RideToIntermediate { GeoPoint place; };
using AfterBikeDecision = std::variant<GoToReturnStation, ReserveSlotAt, RideToIntermediate>;

enum class LifeCycleState {
    Appeared,
    DecidingRental,
    WalkingToRent,
    WalkingWithBikeReservation,
    Riding,
    DecidingReturn,
    RidingToReturn,
    RidingWithSlotReservation,
    WalkingToDestination,
    Left,
};

// Mutable per-user simulation state. The attempt counters drive behavior
// (abandon after minRentalAttempts failures); the *Arrivals counters feed
// the hire/return efficiency metrics and only count walk-up failures at a
// station.
struct UserRuntime {
    GeoPoint currentPosition;
    LifeCycleState state = LifeCycleState::Appeared;
    bool hasBike = false;
    bool everHadBike = false;
    int failedRentalAttempts = 0; // failed rents + failed reservations + timeouts
    int failedReturnAttempts = 0;
    int failedHireArrivals = 0;   // FH contribution
    int failedReturnArrivals = 0; // FR contribution
    std::set<StationId> triedRentStations;
    std::set<StationId> triedReturnStations;

    // Travel leg in progress, kept for position interpolation on timeouts.
    GeoPoint legFrom;
    GeoPoint legTo;
    double legStartTime = 0.0;
    double legArrivalTime = 0.0;

    // Return decision made by decideAfterGettingBike, consumed by the
    // zero-delay UserDecidesReturn event that follows.
    std::optional<ReturnDecision> pendingReturnDecision;

    // Time breakdown, filled as the life cycle progresses.
    double appearedAt = 0.0;
    double tookBikeAt = 0.0;
    double returnedBikeAt = 0.0;
    double reachedDestinationAt = 0.0;
};

class UserBehavior;

struct SimUser {
    UserId id = 0;
    UserConfig config;
    UserRuntime runtime;
    const UserBehavior* behavior = nullptr;
};

} // namespace bikesim
