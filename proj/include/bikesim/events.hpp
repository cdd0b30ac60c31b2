#pragma once

#include "bikesim/station.hpp"

#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace bikesim {

// The sixteen event kinds of the user life cycle.
enum class EventKind {
    UserAppears,
    UserDecidesRental,
    UserArrivesAtStationToRent,
    UserTriesToReserveBike,
    UserHasBikeReservation,
    BikeReservationTimeout,
    UserTakesBike,
    UserFinishesRide,
    UserDecidesReturn,
    UserArrivesAtStationToReturn,
    UserTriesToReserveSlot,
    UserHasSlotReservation,
    SlotReservationTimeout,
    UserReturnsBike,
    UserArrivesAtDestination,
    UserLeavesSystem,
};

std::string eventKindName(EventKind k);
std::optional<EventKind> eventKindFromString(const std::string& s);

// Situation that led to a decision event, selecting which user hook runs.
enum class DecisionContext {
    AfterAppearing,
    FailedRental,
    FailedBikeReservation,
    BikeReservationTimeout,
    AfterGettingBike,
    FinishedRide,
    FailedReturn,
    FailedSlotReservation,
    SlotReservationTimeout,
};

struct SimEvent {
    double time = 0.0;
    std::uint64_t seq = 0; // insertion order, breaks time ties
    EventKind kind = EventKind::UserAppears;
    UserId userId = 0;
    std::optional<StationId> stationId;
    std::optional<ReservationId> reservationId;
    DecisionContext context = DecisionContext::AfterAppearing;
};

// Min-priority queue over (time, seq). Pop order is non-decreasing in time
// and, within a time instant, follows insertion order.
class EventQueue {
public:
    void push(SimEvent ev) {
        ev.seq = nextSeq_++;
        heap_.push(ev);
    }

    SimEvent pop() {
        if (heap_.empty()) throw std::logic_error("pop from empty event queue");
        SimEvent ev = heap_.top();
        heap_.pop();
        return ev;
    }

    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }

private:
    struct Later {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
    std::uint64_t nextSeq_ = 0;
};

} // namespace bikesim
