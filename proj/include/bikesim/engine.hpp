#pragma once

#include "bikesim/config.hpp"
#include "bikesim/events.hpp"
#include "bikesim/history.hpp"
#include "bikesim/recommender.hpp"
#include "bikesim/world.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>

namespace bikesim {

struct RunSummary {
    long usersSimulated = 0;  // N: users that appeared
    long usersRejected = 0;   // appearance past the simulation horizon
    long successfulHires = 0; // SH
    long failedHires = 0;     // FH: walk-up rent attempts at an empty station
    long failedHiresByHirers = 0; // FH_h
    long successfulReturns = 0;   // SR
    long failedReturns = 0;       // FR
    long abandoned = 0;           // left without ever holding a bike
    std::uint64_t eventsDispatched = 0;
    double finalClock = 0.0;
    std::uint64_t effectiveSeed = 0;
};

// One simulation run: owns the world, the event queue and the history sink.
// Strictly single-threaded; run several instances for a batch.
//
// Construction performs initialization: stations are loaded, one UserAppears
// event is scheduled per configured user (users appearing after the
// simulation horizon are rejected with a warning), the PRNG is seeded from
// the global config (or from entropy, recorded in the history header), and
// the header is written.
class SimulationEngine {
public:
    SimulationEngine(const GlobalConfig& global, const StationsConfig& stations,
                     const UsersConfig& users, const Router& router, std::ostream& historyOut,
                     std::map<std::string, std::string> configDigests = {});

    // Processes events in (time, seq) order until the queue is empty. Every
    // user that appeared runs to UserLeavesSystem even past the configured
    // simulation time; only appearances are bounded by it.
    RunSummary run();

    const World& world() const { return world_; }
    std::size_t pendingEvents() const { return queue_.size(); }

private:
    void dispatch(const SimEvent& ev);

    void onUserAppears(const SimEvent& ev, SimUser& user);
    void onUserDecidesRental(const SimEvent& ev, SimUser& user);
    void onUserArrivesAtStationToRent(const SimEvent& ev, SimUser& user);
    void onUserTriesToReserveBike(const SimEvent& ev, SimUser& user);
    void onUserHasBikeReservation(const SimEvent& ev, SimUser& user);
    void onBikeReservationTimeout(const SimEvent& ev, SimUser& user);
    void onUserTakesBike(const SimEvent& ev, SimUser& user);
    void onUserFinishesRide(const SimEvent& ev, SimUser& user);
    void onUserDecidesReturn(const SimEvent& ev, SimUser& user);
    void onUserArrivesAtStationToReturn(const SimEvent& ev, SimUser& user);
    void onUserTriesToReserveSlot(const SimEvent& ev, SimUser& user);
    void onUserHasSlotReservation(const SimEvent& ev, SimUser& user);
    void onSlotReservationTimeout(const SimEvent& ev, SimUser& user);
    void onUserReturnsBike(const SimEvent& ev, SimUser& user);
    void onUserArrivesAtDestination(const SimEvent& ev, SimUser& user);
    void onUserLeavesSystem(const SimEvent& ev, SimUser& user);

    void schedule(SimEvent ev);
    HistoryRecord baseRecord(const SimEvent& ev) const;
    void beginLeg(SimUser& user, const GeoPoint& to, double arrival);
    double walkArrival(const SimUser& user, const GeoPoint& to) const;
    double cycleArrival(const SimUser& user, const GeoPoint& to) const;
    void applyRentalDecision(const SimEvent& ev, SimUser& user, const RentalDecision& d,
                             HistoryRecord& rec);
    void applyReturnDecision(const SimEvent& ev, SimUser& user, const ReturnDecision& d,
                             HistoryRecord& rec);

    GlobalConfig global_;
    std::unique_ptr<Recommender> recommender_;
    RoutePlanner planner_;
    World world_;
    EventQueue queue_;
    HistoryWriter writer_;
    RunSummary summary_;
};

// Convenience wrapper: build the engine from loaded configs, run, and return
// the summary. History goes to `historyOut`.
RunSummary runSimulation(const LoadedConfigs& configs, const Router& router,
                         std::ostream& historyOut);

} // namespace bikesim
