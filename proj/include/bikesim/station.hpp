#pragma once

#include "bikesim/geo.hpp"

#include <cstdint>
#include <string>

namespace bikesim {

using StationId = int;
using UserId = int;
using ReservationId = int;

// Docking station with four-way slot accounting. The identity
//   availableBikes + reservedBikes + availableSlots + reservedSlots == capacity
// holds after every operation; every mutation goes through the try*/apply
// methods below.
struct Station {
    StationId id = 0;
    GeoPoint position;
    int capacity = 0;
    int availableBikes = 0;
    int reservedBikes = 0;
    int availableSlots = 0;
    int reservedSlots = 0;

    bool accountingHolds() const {
        return availableBikes >= 0 && reservedBikes >= 0 && availableSlots >= 0 &&
               reservedSlots >= 0 &&
               availableBikes + reservedBikes + availableSlots + reservedSlots == capacity;
    }

    // Walk-up rental. Reserved bikes are hard holds and never rentable.
    bool tryRentBike() {
        if (availableBikes == 0) return false;
        --availableBikes;
        ++availableSlots; // the vacated dock becomes a free slot
        return true;
    }

    // Walk-up return. Reserved slots are not usable.
    bool tryReturnBike() {
        if (availableSlots == 0) return false;
        --availableSlots;
        ++availableBikes;
        return true;
    }
};

enum class ReservationKind { Bike, Slot };
enum class ReservationState { Active, Fulfilled, Expired };

// Time-limited hard hold on a bike or an empty slot. Transitions only
// Active -> Fulfilled (user arrived in time) or Active -> Expired (timeout).
struct Reservation {
    ReservationId id = 0;
    UserId userId = 0;
    StationId stationId = 0;
    ReservationKind kind = ReservationKind::Bike;
    double startTime = 0.0;
    double expiryTime = 0.0;
    ReservationState state = ReservationState::Active;
};

// Each returns the active reservation or nullopt-like failure via bool.
// tryReserve* mutate the station and hand back a Reservation to be stored by
// the caller (the engine owns the reservation table).
bool tryReserveBike(Station& station, Reservation& out, ReservationId id,
                    UserId userId, double now, double reservationTime);
bool tryReserveSlot(Station& station, Reservation& out, ReservationId id,
                    UserId userId, double now, double reservationTime);

// User arrived before expiry and takes the bike / docks into the slot.
// Fulfilling a non-active reservation is an engine bug and throws.
void fulfillReservation(Reservation& res, Station& station);

// Timeout fired: the hold is released back to the available pool.
// Expiring a non-active reservation throws.
void expireReservation(Reservation& res, Station& station);

std::string reservationStateName(ReservationState s);

} // namespace bikesim
