#include "bikesim/station.hpp"

#include <stdexcept>

namespace bikesim {

bool tryReserveBike(Station& station, Reservation& out, ReservationId id,
                    UserId userId, double now, double reservationTime) {
    if (station.availableBikes == 0) return false;
    --station.availableBikes;
    ++station.reservedBikes;
    out = Reservation{id, userId, station.id, ReservationKind::Bike,
                      now, now + reservationTime, ReservationState::Active};
    return true;
}

bool tryReserveSlot(Station& station, Reservation& out, ReservationId id,
                    UserId userId, double now, double reservationTime) {
    if (station.availableSlots == 0) return false;
    --station.availableSlots;
    ++station.reservedSlots;
    out = Reservation{id, userId, station.id, ReservationKind::Slot,
                      now, now + reservationTime, ReservationState::Active};
    return true;
}

void fulfillReservation(Reservation& res, Station& station) {
    if (res.state != ReservationState::Active) {
        throw std::logic_error("fulfillReservation on non-active reservation " +
                               std::to_string(res.id) + " (" + reservationStateName(res.state) + ")");
    }
    if (res.kind == ReservationKind::Bike) {
        // Bike leaves the dock, its slot frees up.
        --station.reservedBikes;
        ++station.availableSlots;
    } else {
        // Bike docks into the held slot.
        --station.reservedSlots;
        ++station.availableBikes;
    }
    res.state = ReservationState::Fulfilled;
}

void expireReservation(Reservation& res, Station& station) {
    if (res.state != ReservationState::Active) {
        throw std::logic_error("expireReservation on non-active reservation " +
                               std::to_string(res.id) + " (" + reservationStateName(res.state) + ")");
    }
    if (res.kind == ReservationKind::Bike) {
        --station.reservedBikes;
        ++station.availableBikes;
    } else {
        --station.reservedSlots;
        ++station.availableSlots;
    }
    res.state = ReservationState::Expired;
}

std::string reservationStateName(ReservationState s) {
    switch (s) {
        case ReservationState::Active: return "active";
        case ReservationState::Fulfilled: return "fulfilled";
        case ReservationState::Expired: return "expired";
    }
    return "?";
}

} // namespace bikesim
