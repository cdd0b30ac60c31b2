#pragma once

#include "bikesim/history.hpp"

#include <string>
#include <vector>

namespace bikesim {

// Replays a stored history and checks the structural invariants of a run:
//
//  - records are in (time, seq) order;
//  - every station snapshot satisfies the capacity identity;
//  - docked bikes (available + reserved) plus bikes in use equal the initial
//    total at every record;
//  - each user's event sequence is a legal life-cycle path, users never
//    leave while holding a bike, and reserving user types only take/return
//    bikes through fulfilled reservations;
//  - no reservation is fulfilled after its expiry, timeout events fire at
//    exactly creation time + reservationTime, and every reservation ends
//    fulfilled or expired;
//  - informed users never head for a station that had no available bike
//    (no free slot, for returns) at decision time.
//
// Returns human-readable violation messages; an empty vector means the
// history is valid.
std::vector<std::string> validateHistory(const History& history);

} // namespace bikesim
