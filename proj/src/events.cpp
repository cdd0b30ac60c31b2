#include "bikesim/events.hpp"

#include <array>
#include <utility>

namespace bikesim {

namespace {

constexpr std::array<std::pair<EventKind, const char*>, 16> kKindNames = {{
    {EventKind::UserAppears, "UserAppears"},
    {EventKind::UserDecidesRental, "UserDecidesRental"},
    {EventKind::UserArrivesAtStationToRent, "UserArrivesAtStationToRent"},
    {EventKind::UserTriesToReserveBike, "UserTriesToReserveBike"},
    {EventKind::UserHasBikeReservation, "UserHasBikeReservation"},
    {EventKind::BikeReservationTimeout, "BikeReservationTimeout"},
    {EventKind::UserTakesBike, "UserTakesBike"},
    {EventKind::UserFinishesRide, "UserFinishesRide"},
    {EventKind::UserDecidesReturn, "UserDecidesReturn"},
    {EventKind::UserArrivesAtStationToReturn, "UserArrivesAtStationToReturn"},
    {EventKind::UserTriesToReserveSlot, "UserTriesToReserveSlot"},
    {EventKind::UserHasSlotReservation, "UserHasSlotReservation"},
    {EventKind::SlotReservationTimeout, "SlotReservationTimeout"},
    {EventKind::UserReturnsBike, "UserReturnsBike"},
    {EventKind::UserArrivesAtDestination, "UserArrivesAtDestination"},
    {EventKind::UserLeavesSystem, "UserLeavesSystem"},
}};

} // namespace

std::string eventKindName(EventKind k) {
    for (const auto& [kind, name] : kKindNames) {
        if (kind == k) return name;
    }
    return "?";
}

std::optional<EventKind> eventKindFromString(const std::string& s) {
    for (const auto& [kind, name] : kKindNames) {
        if (s == name) return kind;
    }
    return std::nullopt;
}

} // namespace bikesim
