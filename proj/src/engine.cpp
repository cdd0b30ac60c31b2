#include "bikesim/engine.hpp"

#include "bikesim/behavior.hpp"

#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bikesim {

namespace {

StationSnapshot snapshot(const Station& st) {
    return StationSnapshot{st.availableBikes, st.reservedBikes, st.availableSlots,
                           st.reservedSlots};
}

std::uint64_t pickSeed(const GlobalConfig& global) {
    if (global.randomSeed) return *global.randomSeed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

} // namespace

SimulationEngine::SimulationEngine(const GlobalConfig& global, const StationsConfig& stations,
                                   const UsersConfig& users, const Router& router,
                                   std::ostream& historyOut,
                                   std::map<std::string, std::string> configDigests)
    : global_(global),
      planner_(router, global.circuityWalk, global.circuityCycle),
      writer_(historyOut) {
    summary_.effectiveSeed = pickSeed(global_);
    world_.rng = Rng(summary_.effectiveSeed);
    world_.planner = &planner_;

    if (global_.recommendationSystemType) {
        recommender_ = makeRecommender(global_.recommendationSystemType->typeName,
                                       global_.recommendationSystemType->parameters);
        world_.recommender = recommender_.get();
    }

    for (const auto& sc : stations.stations) {
        Station st;
        st.id = sc.id;
        st.position = sc.position;
        st.capacity = sc.capacity;
        st.availableBikes = sc.initialBikes;
        st.availableSlots = sc.capacity - sc.initialBikes;
        world_.stations.push_back(st);
    }
    world_.rebuildStationIndex();

    for (const auto& uc : users.users) {
        if (uc.timeInstant > global_.totalSimulationTime) {
            std::cerr << "warning: user " << world_.users.size() + summary_.usersRejected
                      << " appears at t=" << uc.timeInstant
                      << " past the simulation time, skipped\n";
            ++summary_.usersRejected;
            continue;
        }
        const UserBehavior* behavior = findUserBehavior(uc.userType);
        if (behavior == nullptr) {
            throw ConfigError("unknown user type '" + uc.userType + "'");
        }
        if (behavior->usesRecommender() && world_.recommender == nullptr) {
            throw ConfigError("user type '" + uc.userType +
                              "' requires recommendationSystemType in the global config");
        }
        SimUser user;
        user.id = static_cast<UserId>(world_.users.size());
        user.config = uc;
        user.behavior = behavior;
        user.runtime.currentPosition = uc.position;
        user.runtime.appearedAt = uc.timeInstant;
        world_.users.push_back(std::move(user));
    }

    HistoryHeader header;
    header.seed = summary_.effectiveSeed;
    header.reservationTime = global_.reservationTime;
    header.totalSimulationTime = global_.totalSimulationTime;
    header.configDigests = std::move(configDigests);
    for (const auto& st : world_.stations) {
        header.stations.push_back(HeaderStation{st.id, st.capacity, snapshot(st)});
    }
    writer_.writeHeader(header);

    for (const auto& user : world_.users) {
        SimEvent ev;
        ev.time = user.config.timeInstant;
        ev.kind = EventKind::UserAppears;
        ev.userId = user.id;
        queue_.push(ev);
    }
}

void SimulationEngine::schedule(SimEvent ev) {
    if (ev.time < world_.clock) {
        throw std::logic_error("scheduling into the past: " + std::string(eventKindName(ev.kind)) +
                               " at t=" + std::to_string(ev.time) + " < clock " +
                               std::to_string(world_.clock));
    }
    queue_.push(ev);
}

RunSummary SimulationEngine::run() {
    while (!queue_.empty()) {
        SimEvent ev = queue_.pop();
        if (ev.time < world_.clock) {
            throw std::logic_error("event queue produced a past event");
        }
        world_.clock = ev.time;
        try {
            dispatch(ev);
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "dispatch failed: event " << eventKindName(ev.kind) << " user " << ev.userId
                << " t=" << ev.time << ": " << e.what();
            throw std::runtime_error(msg.str());
        }
        ++summary_.eventsDispatched;
    }
    writer_.flush();

    summary_.usersSimulated = static_cast<long>(world_.users.size());
    for (const auto& user : world_.users) {
        if (user.runtime.state != LifeCycleState::Left) {
            throw std::logic_error("user " + std::to_string(user.id) +
                                   " did not leave the system by queue exhaustion");
        }
    }
    summary_.finalClock = world_.clock;
    return summary_;
}

void SimulationEngine::dispatch(const SimEvent& ev) {
    SimUser& user = world_.users.at(static_cast<std::size_t>(ev.userId));
    if (user.runtime.state == LifeCycleState::Left) {
        throw std::logic_error("event for user who already left the system");
    }
    switch (ev.kind) {
        case EventKind::UserAppears: onUserAppears(ev, user); break;
        case EventKind::UserDecidesRental: onUserDecidesRental(ev, user); break;
        case EventKind::UserArrivesAtStationToRent: onUserArrivesAtStationToRent(ev, user); break;
        case EventKind::UserTriesToReserveBike: onUserTriesToReserveBike(ev, user); break;
        case EventKind::UserHasBikeReservation: onUserHasBikeReservation(ev, user); break;
        case EventKind::BikeReservationTimeout: onBikeReservationTimeout(ev, user); break;
        case EventKind::UserTakesBike: onUserTakesBike(ev, user); break;
        case EventKind::UserFinishesRide: onUserFinishesRide(ev, user); break;
        case EventKind::UserDecidesReturn: onUserDecidesReturn(ev, user); break;
        case EventKind::UserArrivesAtStationToReturn:
            onUserArrivesAtStationToReturn(ev, user);
            break;
        case EventKind::UserTriesToReserveSlot: onUserTriesToReserveSlot(ev, user); break;
        case EventKind::UserHasSlotReservation: onUserHasSlotReservation(ev, user); break;
        case EventKind::SlotReservationTimeout: onSlotReservationTimeout(ev, user); break;
        case EventKind::UserReturnsBike: onUserReturnsBike(ev, user); break;
        case EventKind::UserArrivesAtDestination: onUserArrivesAtDestination(ev, user); break;
        case EventKind::UserLeavesSystem: onUserLeavesSystem(ev, user); break;
    }
}

HistoryRecord SimulationEngine::baseRecord(const SimEvent& ev) const {
    HistoryRecord rec;
    rec.time = ev.time;
    rec.seq = ev.seq;
    rec.kind = ev.kind;
    rec.userId = ev.userId;
    rec.stationId = ev.stationId;
    rec.reservationId = ev.reservationId;
    return rec;
}

void SimulationEngine::beginLeg(SimUser& user, const GeoPoint& to, double arrival) {
    user.runtime.legFrom = user.runtime.currentPosition;
    user.runtime.legTo = to;
    user.runtime.legStartTime = world_.clock;
    user.runtime.legArrivalTime = arrival;
}

double SimulationEngine::walkArrival(const SimUser& user, const GeoPoint& to) const {
    return world_.clock + planner_.time(user.runtime.currentPosition, to, TravelMode::Walk,
                                        user.config.walkingVelocity);
}

double SimulationEngine::cycleArrival(const SimUser& user, const GeoPoint& to) const {
    return world_.clock + planner_.time(user.runtime.currentPosition, to, TravelMode::Cycle,
                                        user.config.cyclingVelocity);
}

void SimulationEngine::onUserAppears(const SimEvent& ev, SimUser& user) {
    user.runtime.state = LifeCycleState::DecidingRental;
    HistoryRecord rec = baseRecord(ev);
    rec.userType = canonicalUserTypeName(user.config.userType);
    writer_.append(rec);

    SimEvent next;
    next.time = world_.clock;
    next.kind = EventKind::UserDecidesRental;
    next.userId = user.id;
    next.context = DecisionContext::AfterAppearing;
    schedule(next);
}

void SimulationEngine::applyRentalDecision(const SimEvent&, SimUser& user,
                                           const RentalDecision& d, HistoryRecord& rec) {
    if (std::holds_alternative<GoToStation>(d)) {
        StationId target = std::get<GoToStation>(d).station;
        const Station& st = world_.station(target); // throws on unknown station
        rec.decision = "GoToStation";
        rec.decisionStation = target;

        double arrival = walkArrival(user, st.position);
        beginLeg(user, st.position, arrival);
        user.runtime.state = LifeCycleState::WalkingToRent;

        SimEvent next;
        next.time = arrival;
        next.kind = EventKind::UserArrivesAtStationToRent;
        next.userId = user.id;
        next.stationId = target;
        schedule(next);
    } else if (std::holds_alternative<ReserveBikeAt>(d)) {
        StationId target = std::get<ReserveBikeAt>(d).station;
        world_.station(target);
        rec.decision = "ReserveBikeAt";
        rec.decisionStation = target;

        SimEvent next;
        next.time = world_.clock;
        next.kind = EventKind::UserTriesToReserveBike;
        next.userId = user.id;
        next.stationId = target;
        schedule(next);
    } else {
        rec.decision = "LeaveSystem";
        SimEvent next;
        next.time = world_.clock;
        next.kind = EventKind::UserLeavesSystem;
        next.userId = user.id;
        schedule(next);
    }
}

void SimulationEngine::onUserDecidesRental(const SimEvent& ev, SimUser& user) {
    RentalDecision d;
    const UserBehavior& b = *user.behavior;
    switch (ev.context) {
        case DecisionContext::AfterAppearing:
            d = b.decideAfterAppearing(user.config, user.runtime, world_, world_.rng);
            break;
        case DecisionContext::FailedRental:
            d = b.decideAfterFailedRental(user.config, user.runtime, world_, world_.rng);
            break;
        case DecisionContext::FailedBikeReservation:
            d = b.decideAfterFailedBikeReservation(user.config, user.runtime, world_, world_.rng);
            break;
        case DecisionContext::BikeReservationTimeout:
            d = b.decideAfterBikeReservationTimeout(user.config, user.runtime, world_, world_.rng);
            break;
        default:
            throw std::logic_error("invalid context for a rental decision");
    }
    HistoryRecord rec = baseRecord(ev);
    applyRentalDecision(ev, user, d, rec);
    writer_.append(rec);
}

void SimulationEngine::onUserArrivesAtStationToRent(const SimEvent& ev, SimUser& user) {
    Station& st = world_.station(*ev.stationId);
    user.runtime.currentPosition = st.position;

    bool ok = st.tryRentBike();
    HistoryRecord rec = baseRecord(ev);
    rec.success = ok;
    rec.stationAfter = snapshot(st);
    writer_.append(rec);

    if (ok) {
        SimEvent next;
        next.time = world_.clock;
        next.kind = EventKind::UserTakesBike;
        next.userId = user.id;
        next.stationId = st.id;
        schedule(next);
    } else {
        ++summary_.failedHires;
        ++user.runtime.failedHireArrivals;
        ++user.runtime.failedRentalAttempts;
        user.runtime.triedRentStations.insert(st.id);
        user.runtime.state = LifeCycleState::DecidingRental;

        SimEvent next;
        next.time = world_.clock;
        next.kind = EventKind::UserDecidesRental;
        next.userId = user.id;
        next.context = DecisionContext::FailedRental;
        schedule(next);
    }
}

void SimulationEngine::onUserTriesToReserveBike(const SimEvent& ev, SimUser& user) {
    Station& st = world_.station(*ev.stationId);
    Reservation res;
    auto resId = static_cast<ReservationId>(world_.reservations.size());
    bool ok = tryReserveBike(st, res, resId, user.id, world_.clock, global_.reservationTime);

    HistoryRecord rec = baseRecord(ev);
    rec.success = ok;
    rec.stationAfter = snapshot(st);
    if (ok) {
        world_.reservations.push_back(res);
        rec.reservationId = resId;
        writer_.append(rec);

        SimEvent next;
        next.time = world_.clock;
        next.kind = EventKind::UserHasBikeReservation;
        next.userId = user.id;
        next.stationId = st.id;
        next.reservationId = resId;
        schedule(next);
    } else {
        writer_.append(rec);
        ++user.runtime.failedRentalAttempts;
        user.runtime.triedRentStations.insert(st.id);
        user.runtime.state = LifeCycleState::DecidingRental;

        SimEvent next;
        next.time = world_.clock;
        next.kind = EventKind::UserDecidesRental;
        next.userId = user.id;
        next.context = DecisionContext::FailedBikeReservation;
        schedule(next);
    }
}

void SimulationEngine::onUserHasBikeReservation(const SimEvent& ev, SimUser& user) {
    const Reservation& res = world_.reservations.at(static_cast<std::size_t>(*ev.reservationId));
    const Station& st = world_.station(res.stationId);
    writer_.append(baseRecord(ev));

    double arrival = walkArrival(user, st.position);
    beginLeg(user, st.position, arrival);
    user.runtime.state = LifeCycleState::WalkingWithBikeReservation;

    // The timeout is checked once, here: either the user makes it in time
    // and the take-bike event is queued, or the timeout event is queued
    // instead. Only one of the two ever enters the queue.
    SimEvent next;
    next.userId = user.id;
    next.stationId = st.id;
    next.reservationId = res.id;
    if (arrival <= res.expiryTime) {
        next.time = arrival;
        next.kind = EventKind::UserTakesBike;
    } else {
        next.time = res.expiryTime;
        next.kind = EventKind::BikeReservationTimeout;
    }
    schedule(next);
}

void SimulationEngine::onBikeReservationTimeout(const SimEvent& ev, SimUser& user) {
    Reservation& res = world_.reservations.at(static_cast<std::size_t>(*ev.reservationId));
    if (res.state != ReservationState::Active) return; // already fulfilled: no-op
    Station& st = world_.station(res.stationId);
    expireReservation(res, st);

    // The user heard about the timeout mid-walk; place them proportionally
    // along the leg and let them re-decide from there.
    const UserRuntime& rt = user.runtime;
    double span = rt.legArrivalTime - rt.legStartTime;
    double fraction = span > 0.0 ? (world_.clock - rt.legStartTime) / span : 1.0;
    user.runtime.currentPosition = interpolate(rt.legFrom, rt.legTo, fraction);

    ++user.runtime.failedRentalAttempts;
    user.runtime.triedRentStations.insert(st.id);
    user.runtime.state = LifeCycleState::DecidingRental;

    HistoryRecord rec = baseRecord(ev);
    rec.stationAfter = snapshot(st);
    writer_.append(rec);

    SimEvent next;
    next.time = world_.clock;
    next.kind = EventKind::UserDecidesRental;
    next.userId = user.id;
    next.context = DecisionContext::BikeReservationTimeout;
    schedule(next);
}

void SimulationEngine::onUserTakesBike(const SimEvent& ev, SimUser& user) {
    Station& st = world_.station(*ev.stationId);
    if (ev.reservationId) {
        Reservation& res = world_.reservations.at(static_cast<std::size_t>(*ev.reservationId));
        fulfillReservation(res, st);
        user.runtime.currentPosition = st.position;
    }
    user.runtime.hasBike = true;
    user.runtime.everHadBike = true;
    user.runtime.tookBikeAt = world_.clock;
    ++summary_.successfulHires;

    AfterBikeDecision d = user.behavior->decideAfterGettingBike(user.config, user.runtime, world_,
                                                               world_.rng);
    HistoryRecord rec = baseRecord(ev);
    rec.stationAfter = snapshot(st);

    if (std::holds_alternative<RideToIntermediate>(d)) {
        GeoPoint place = std::get<RideToIntermediate>(d).place;
        rec.decision = "RideToIntermediate";
        rec.decisionPlace = place;
        writer_.append(rec);

        double arrival = cycleArrival(user, place);
        beginLeg(user, place, arrival);
        user.runtime.state = LifeCycleState::Riding;

        SimEvent next;
        next.time = arrival;
        next.kind = EventKind::UserFinishesRide;
        next.userId = user.id;
        schedule(next);
        return;
    }

    ReturnDecision rd = std::holds_alternative<ReserveSlotAt>(d)
                            ? ReturnDecision{std::get<ReserveSlotAt>(d)}
                            : ReturnDecision{std::get<GoToReturnStation>(d)};
    if (std::holds_alternative<ReserveSlotAt>(rd)) {
        rec.decision = "ReserveSlotAt";
        rec.decisionStation = std::get<ReserveSlotAt>(rd).station;
    } else {
        rec.decision = "GoToReturnStation";
        rec.decisionStation = std::get<GoToReturnStation>(rd).station;
    }
    writer_.append(rec);

    user.runtime.pendingReturnDecision = rd;
    user.runtime.state = LifeCycleState::DecidingReturn;

    SimEvent next;
    next.time = world_.clock;
    next.kind = EventKind::UserDecidesReturn;
    next.userId = user.id;
    next.context = DecisionContext::AfterGettingBike;
    schedule(next);
}

void SimulationEngine::onUserFinishesRide(const SimEvent& ev, SimUser& user) {
    user.runtime.currentPosition = user.runtime.legTo;
    user.runtime.state = LifeCycleState::DecidingReturn;
    writer_.append(baseRecord(ev));

    SimEvent next;
    next.time = world_.clock;
    next.kind = EventKind::UserDecidesReturn;
    next.userId = user.id;
    next.context = DecisionContext::FinishedRide;
    schedule(next);
}

void SimulationEngine::applyReturnDecision(const SimEvent&, SimUser& user,
                                           const ReturnDecision& d, HistoryRecord& rec) {
    if (std::holds_alternative<GoToReturnStation>(d)) {
        StationId target = std::get<GoToReturnStation>(d).station;
        const Station& st = world_.station(target);
        rec.decision = "GoToReturnStation";
        rec.decisionStation = target;

        double arrival = cycleArrival(user, st.position);
        beginLeg(user, st.position, arrival);
        user.runtime.state = LifeCycleState::RidingToReturn;

        SimEvent next;
        next.time = arrival;
        next.kind = EventKind::UserArrivesAtStationToReturn;
        next.userId = user.id;
        next.stationId = target;
        schedule(next);
    } else {
        StationId target = std::get<ReserveSlotAt>(d).station;
        world_.station(target);
        rec.decision = "ReserveSlotAt";
        rec.decisionStation = target;

        SimEvent next;
        next.time = world_.clock;
        next.kind = EventKind::UserTriesToReserveSlot;
        next.userId = user.id;
        next.stationId = target;
        schedule(next);
    }
}

void SimulationEngine::onUserDecidesReturn(const SimEvent& ev, SimUser& user) {
    ReturnDecision d;
    const UserBehavior& b = *user.behavior;
    switch (ev.context) {
        case DecisionContext::AfterGettingBike:
            // Chosen by decideAfterGettingBike in the UserTakesBike event.
            if (!user.runtime.pendingReturnDecision) {
                throw std::logic_error("no pending return decision after taking bike");
            }
            d = *user.runtime.pendingReturnDecision;
            user.runtime.pendingReturnDecision.reset();
            break;
        case DecisionContext::FinishedRide:
            d = b.decideAfterFinishingRide(user.config, user.runtime, world_, world_.rng);
            break;
        case DecisionContext::FailedReturn:
            d = b.decideAfterFailedReturn(user.config, user.runtime, world_, world_.rng);
            break;
        case DecisionContext::FailedSlotReservation:
        case DecisionContext::SlotReservationTimeout:
            d = b.decideAfterFailedSlotReservation(user.config, user.runtime, world_, world_.rng);
            break;
        default:
            throw std::logic_error("invalid context for a return decision");
    }
    HistoryRecord rec = baseRecord(ev);
    applyReturnDecision(ev, user, d, rec);
    writer_.append(rec);
}

void SimulationEngine::onUserArrivesAtStationToReturn(const SimEvent& ev, SimUser& user) {
    Station& st = world_.station(*ev.stationId);
    user.runtime.currentPosition = st.position;

    bool ok = st.tryReturnBike();
    HistoryRecord rec = baseRecord(ev);
    rec.success = ok;
    rec.stationAfter = snapshot(st);
    writer_.append(rec);

    if (ok) {
        SimEvent next;
        next.time = world_.clock;
        next.kind = EventKind::UserReturnsBike;
        next.userId = user.id;
        next.stationId = st.id;
        schedule(next);
    } else {
        ++summary_.failedReturns;
        ++user.runtime.failedReturnArrivals;
        ++user.runtime.failedReturnAttempts;
        user.runtime.triedReturnStations.insert(st.id);
        user.runtime.state = LifeCycleState::DecidingReturn;

        SimEvent next;
        next.time = world_.clock;
        next.kind = EventKind::UserDecidesReturn;
        next.userId = user.id;
        next.context = DecisionContext::FailedReturn;
        schedule(next);
    }
}

void SimulationEngine::onUserTriesToReserveSlot(const SimEvent& ev, SimUser& user) {
    Station& st = world_.station(*ev.stationId);
    Reservation res;
    auto resId = static_cast<ReservationId>(world_.reservations.size());
    bool ok = tryReserveSlot(st, res, resId, user.id, world_.clock, global_.reservationTime);

    HistoryRecord rec = baseRecord(ev);
    rec.success = ok;
    rec.stationAfter = snapshot(st);
    if (ok) {
        world_.reservations.push_back(res);
        rec.reservationId = resId;
        writer_.append(rec);

        SimEvent next;
        next.time = world_.clock;
        next.kind = EventKind::UserHasSlotReservation;
        next.userId = user.id;
        next.stationId = st.id;
        next.reservationId = resId;
        schedule(next);
    } else {
        writer_.append(rec);
        ++user.runtime.failedReturnAttempts;
        user.runtime.triedReturnStations.insert(st.id);
        user.runtime.state = LifeCycleState::DecidingReturn;

        SimEvent next;
        next.time = world_.clock;
        next.kind = EventKind::UserDecidesReturn;
        next.userId = user.id;
        next.context = DecisionContext::FailedSlotReservation;
        schedule(next);
    }
}

void SimulationEngine::onUserHasSlotReservation(const SimEvent& ev, SimUser& user) {
    const Reservation& res = world_.reservations.at(static_cast<std::size_t>(*ev.reservationId));
    const Station& st = world_.station(res.stationId);
    writer_.append(baseRecord(ev));

    double arrival = cycleArrival(user, st.position);
    beginLeg(user, st.position, arrival);
    user.runtime.state = LifeCycleState::RidingWithSlotReservation;

    SimEvent next;
    next.userId = user.id;
    next.stationId = st.id;
    next.reservationId = res.id;
    if (arrival <= res.expiryTime) {
        next.time = arrival;
        next.kind = EventKind::UserReturnsBike;
    } else {
        next.time = res.expiryTime;
        next.kind = EventKind::SlotReservationTimeout;
    }
    schedule(next);
}

void SimulationEngine::onSlotReservationTimeout(const SimEvent& ev, SimUser& user) {
    Reservation& res = world_.reservations.at(static_cast<std::size_t>(*ev.reservationId));
    if (res.state != ReservationState::Active) return;
    Station& st = world_.station(res.stationId);
    expireReservation(res, st);

    const UserRuntime& rt = user.runtime;
    double span = rt.legArrivalTime - rt.legStartTime;
    double fraction = span > 0.0 ? (world_.clock - rt.legStartTime) / span : 1.0;
    user.runtime.currentPosition = interpolate(rt.legFrom, rt.legTo, fraction);

    ++user.runtime.failedReturnAttempts;
    user.runtime.triedReturnStations.insert(st.id);
    user.runtime.state = LifeCycleState::DecidingReturn;

    HistoryRecord rec = baseRecord(ev);
    rec.stationAfter = snapshot(st);
    writer_.append(rec);

    SimEvent next;
    next.time = world_.clock;
    next.kind = EventKind::UserDecidesReturn;
    next.userId = user.id;
    next.context = DecisionContext::SlotReservationTimeout;
    schedule(next);
}

void SimulationEngine::onUserReturnsBike(const SimEvent& ev, SimUser& user) {
    Station& st = world_.station(*ev.stationId);
    if (ev.reservationId) {
        Reservation& res = world_.reservations.at(static_cast<std::size_t>(*ev.reservationId));
        fulfillReservation(res, st);
        user.runtime.currentPosition = st.position;
    }
    user.runtime.hasBike = false;
    user.runtime.returnedBikeAt = world_.clock;
    ++summary_.successfulReturns;

    HistoryRecord rec = baseRecord(ev);
    rec.stationAfter = snapshot(st);
    writer_.append(rec);

    double arrival = walkArrival(user, user.config.destinationPlace);
    beginLeg(user, user.config.destinationPlace, arrival);
    user.runtime.state = LifeCycleState::WalkingToDestination;

    SimEvent next;
    next.time = arrival;
    next.kind = EventKind::UserArrivesAtDestination;
    next.userId = user.id;
    schedule(next);
}

void SimulationEngine::onUserArrivesAtDestination(const SimEvent& ev, SimUser& user) {
    user.runtime.currentPosition = user.config.destinationPlace;
    user.runtime.reachedDestinationAt = world_.clock;
    writer_.append(baseRecord(ev));

    SimEvent next;
    next.time = world_.clock;
    next.kind = EventKind::UserLeavesSystem;
    next.userId = user.id;
    schedule(next);
}

void SimulationEngine::onUserLeavesSystem(const SimEvent& ev, SimUser& user) {
    if (user.runtime.hasBike) {
        throw std::logic_error("user cannot leave the system while holding a bike");
    }
    user.runtime.state = LifeCycleState::Left;
    if (user.runtime.everHadBike) {
        summary_.failedHiresByHirers += user.runtime.failedHireArrivals;
    } else {
        ++summary_.abandoned;
    }
    writer_.append(baseRecord(ev));
}

RunSummary runSimulation(const LoadedConfigs& configs, const Router& router,
                         std::ostream& historyOut) {
    SimulationEngine engine(configs.global, configs.stations, configs.users, router, historyOut,
                            configs.digests);
    return engine.run();
}

} // namespace bikesim
