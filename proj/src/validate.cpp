#include "bikesim/validate.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace bikesim {

namespace {

struct UserState {
    std::string type;
    bool appeared = false;
    bool left = false;
    bool hasBike = false;
    std::optional<EventKind> lastKind;
    std::optional<bool> lastSuccess;
    std::optional<std::string> lastDecision;
};

struct ReservationState_ {
    double createdAt = 0.0;
    double expiryAt = 0.0;
    bool closed = false; // fulfilled or expired
};

bool isReservingType(const std::string& type) {
    return type.size() >= 2 && type.compare(type.size() - 2, 2, "_R") == 0;
}

std::string describe(const HistoryRecord& r) {
    std::ostringstream ss;
    ss << eventKindName(r.kind) << " (user " << r.userId << ", t=" << r.time << ", seq=" << r.seq
       << ")";
    return ss.str();
}

// Legal successor check based on the previous event, its success flag and
// its recorded decision.
bool transitionAllowed(const UserState& u, const HistoryRecord& r) {
    if (!u.lastKind) return r.kind == EventKind::UserAppears;
    switch (*u.lastKind) {
        case EventKind::UserAppears: return r.kind == EventKind::UserDecidesRental;
        case EventKind::UserDecidesRental:
            if (u.lastDecision == "GoToStation") {
                return r.kind == EventKind::UserArrivesAtStationToRent;
            }
            if (u.lastDecision == "ReserveBikeAt") {
                return r.kind == EventKind::UserTriesToReserveBike;
            }
            return r.kind == EventKind::UserLeavesSystem;
        case EventKind::UserArrivesAtStationToRent:
            return (u.lastSuccess && *u.lastSuccess) ? r.kind == EventKind::UserTakesBike
                                                     : r.kind == EventKind::UserDecidesRental;
        case EventKind::UserTriesToReserveBike:
            return (u.lastSuccess && *u.lastSuccess)
                       ? r.kind == EventKind::UserHasBikeReservation
                       : r.kind == EventKind::UserDecidesRental;
        case EventKind::UserHasBikeReservation:
            return r.kind == EventKind::UserTakesBike ||
                   r.kind == EventKind::BikeReservationTimeout;
        case EventKind::BikeReservationTimeout: return r.kind == EventKind::UserDecidesRental;
        case EventKind::UserTakesBike:
            if (u.lastDecision == "RideToIntermediate") {
                return r.kind == EventKind::UserFinishesRide;
            }
            return r.kind == EventKind::UserDecidesReturn;
        case EventKind::UserFinishesRide: return r.kind == EventKind::UserDecidesReturn;
        case EventKind::UserDecidesReturn:
            if (u.lastDecision == "ReserveSlotAt") {
                return r.kind == EventKind::UserTriesToReserveSlot;
            }
            return r.kind == EventKind::UserArrivesAtStationToReturn;
        case EventKind::UserArrivesAtStationToReturn:
            return (u.lastSuccess && *u.lastSuccess) ? r.kind == EventKind::UserReturnsBike
                                                     : r.kind == EventKind::UserDecidesReturn;
        case EventKind::UserTriesToReserveSlot:
            return (u.lastSuccess && *u.lastSuccess)
                       ? r.kind == EventKind::UserHasSlotReservation
                       : r.kind == EventKind::UserDecidesReturn;
        case EventKind::UserHasSlotReservation:
            return r.kind == EventKind::UserReturnsBike ||
                   r.kind == EventKind::SlotReservationTimeout;
        case EventKind::SlotReservationTimeout: return r.kind == EventKind::UserDecidesReturn;
        case EventKind::UserReturnsBike: return r.kind == EventKind::UserArrivesAtDestination;
        case EventKind::UserArrivesAtDestination: return r.kind == EventKind::UserLeavesSystem;
        case EventKind::UserLeavesSystem: return false;
    }
    return false;
}

} // namespace

std::vector<std::string> validateHistory(const History& history) {
    std::vector<std::string> issues;
    auto fail = [&](const std::string& msg) { issues.push_back(msg); };

    std::map<StationId, int> capacity;
    std::map<StationId, int> docked; // available + reserved bikes
    std::map<StationId, int> availBikes;
    long initialTotal = 0;
    for (const auto& st : history.header.stations) {
        capacity[st.id] = st.capacity;
        int d = st.initial.availableBikes + st.initial.reservedBikes;
        docked[st.id] = d;
        availBikes[st.id] = st.initial.availableBikes;
        initialTotal += d;
        int sum = st.initial.availableBikes + st.initial.reservedBikes +
                  st.initial.availableSlots + st.initial.reservedSlots;
        if (sum != st.capacity) {
            fail("header: station " + std::to_string(st.id) + " violates the capacity identity");
        }
    }

    std::map<UserId, UserState> users;
    std::map<ReservationId, ReservationState_> reservations;
    long inUse = 0;
    double lastTime = 0.0;
    std::uint64_t lastSeq = 0;
    bool first = true;

    for (const auto& r : history.records) {
        if (r.time < 0.0) fail(describe(r) + ": negative time");
        if (!first && (r.time < lastTime || (r.time == lastTime && r.seq <= lastSeq))) {
            fail(describe(r) + ": out of (time, seq) order");
        }
        first = false;
        lastTime = r.time;
        lastSeq = r.seq;

        // Life-cycle path.
        UserState& u = users[r.userId];
        if (u.left) fail(describe(r) + ": event after the user left the system");
        if (!transitionAllowed(u, r)) {
            fail(describe(r) + ": illegal transition from " +
                 (u.lastKind ? eventKindName(*u.lastKind) : "start"));
        }

        // Informed users only head for stations that had a bike when they
        // decided to rent there.
        bool informed = u.type.rfind("INFORMED", 0) == 0;
        if (informed && r.kind == EventKind::UserDecidesRental && r.decisionStation) {
            auto it = availBikes.find(*r.decisionStation);
            if (it != availBikes.end() && it->second < 1) {
                fail(describe(r) + ": informed user heads for a station with no bikes");
            }
        }

        u.lastKind = r.kind;
        u.lastSuccess = r.success;
        u.lastDecision = r.decision;

        switch (r.kind) {
            case EventKind::UserAppears:
                if (u.appeared) fail(describe(r) + ": user appeared twice");
                u.appeared = true;
                u.type = r.userType.value_or("?");
                break;
            case EventKind::UserTakesBike:
                u.hasBike = true;
                if (isReservingType(u.type) && !r.reservationId) {
                    fail(describe(r) + ": reserving user took a bike without a reservation");
                }
                break;
            case EventKind::UserReturnsBike:
                u.hasBike = false;
                if (isReservingType(u.type) && !r.reservationId) {
                    fail(describe(r) + ": reserving user returned a bike without a reservation");
                }
                break;
            case EventKind::UserLeavesSystem:
                if (u.hasBike) fail(describe(r) + ": user left the system holding a bike");
                u.left = true;
                break;
            default: break;
        }

        // Reservation life cycle and timing.
        if ((r.kind == EventKind::UserTriesToReserveBike ||
             r.kind == EventKind::UserTriesToReserveSlot) &&
            r.success && *r.success) {
            if (!r.reservationId) {
                fail(describe(r) + ": successful reservation without an id");
            } else {
                ReservationState_ rs;
                rs.createdAt = r.time;
                rs.expiryAt = r.time + history.header.reservationTime;
                reservations[*r.reservationId] = rs;
            }
        }
        if ((r.kind == EventKind::UserTakesBike || r.kind == EventKind::UserReturnsBike) &&
            r.reservationId) {
            auto it = reservations.find(*r.reservationId);
            if (it == reservations.end()) {
                fail(describe(r) + ": fulfills unknown reservation");
            } else {
                if (it->second.closed) fail(describe(r) + ": fulfills a closed reservation");
                if (r.time > it->second.expiryAt) {
                    fail(describe(r) + ": reservation fulfilled after its expiry");
                }
                it->second.closed = true;
            }
        }
        if (r.kind == EventKind::BikeReservationTimeout ||
            r.kind == EventKind::SlotReservationTimeout) {
            auto it = r.reservationId ? reservations.find(*r.reservationId) : reservations.end();
            if (it == reservations.end()) {
                fail(describe(r) + ": timeout for unknown reservation");
            } else {
                if (it->second.closed) fail(describe(r) + ": timeout for a closed reservation");
                if (std::abs(r.time - it->second.expiryAt) > 1e-9) {
                    fail(describe(r) + ": timeout not at creation + reservationTime");
                }
                it->second.closed = true;
            }
        }

        // Station accounting and global conservation.
        if (r.stationAfter) {
            if (!r.stationId) {
                fail(describe(r) + ": station snapshot without a station id");
            } else if (capacity.count(*r.stationId) == 0) {
                fail(describe(r) + ": snapshot for unknown station");
            } else {
                const StationSnapshot& s = *r.stationAfter;
                int sum = s.availableBikes + s.reservedBikes + s.availableSlots + s.reservedSlots;
                if (s.availableBikes < 0 || s.reservedBikes < 0 || s.availableSlots < 0 ||
                    s.reservedSlots < 0 || sum != capacity[*r.stationId]) {
                    fail(describe(r) + ": station snapshot violates the capacity identity");
                }
                docked[*r.stationId] = s.availableBikes + s.reservedBikes;
                availBikes[*r.stationId] = s.availableBikes;
            }
        }
        // A walk-up hire puts the bike in use at the successful rent arrival;
        // a reserved hire at the fulfilling take. Mirrored for returns.
        if (r.kind == EventKind::UserArrivesAtStationToRent && r.success && *r.success) ++inUse;
        if (r.kind == EventKind::UserTakesBike && r.reservationId) ++inUse;
        if (r.kind == EventKind::UserArrivesAtStationToReturn && r.success && *r.success) --inUse;
        if (r.kind == EventKind::UserReturnsBike && r.reservationId) --inUse;

        long dockedTotal = 0;
        for (const auto& [id, d] : docked) dockedTotal += d;
        if (dockedTotal + inUse != initialTotal) {
            fail(describe(r) + ": bike conservation broken (docked " + std::to_string(dockedTotal) +
                 " + in use " + std::to_string(inUse) + " != " + std::to_string(initialTotal) + ")");
        }
    }

    for (const auto& [id, u] : users) {
        if (u.appeared && !u.left) {
            fail("user " + std::to_string(id) + " never left the system");
        }
    }
    for (const auto& [id, rs] : reservations) {
        if (!rs.closed) {
            fail("reservation " + std::to_string(id) + " neither fulfilled nor expired");
        }
    }
    return issues;
}

} // namespace bikesim
