#pragma once

#include "bikesim/events.hpp"
#include "bikesim/geo.hpp"
#include "bikesim/station.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bikesim {

inline constexpr const char* kVersion = "0.1.0";

struct StationSnapshot {
    int availableBikes = 0;
    int reservedBikes = 0;
    int availableSlots = 0;
    int reservedSlots = 0;
};

struct HeaderStation {
    StationId id = 0;
    int capacity = 0;
    StationSnapshot initial;
};

// First line of every history file: everything needed to replay the run
// (effective seed, config digests) and to recompute station metrics from the
// file alone (initial inventories).
struct HistoryHeader {
    std::string version = kVersion;
    std::uint64_t seed = 0;
    double reservationTime = 0.0;
    double totalSimulationTime = 0.0;
    std::map<std::string, std::string> configDigests;
    std::vector<HeaderStation> stations;
};

// One line per dispatched event. Optional fields are present only where they
// apply: station state snapshots on inventory-touching events, success flags
// on rent/return/reserve attempts, decisions on decision events, the user
// type on appearance.
struct HistoryRecord {
    double time = 0.0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::UserAppears;
    UserId userId = 0;
    std::optional<StationId> stationId;
    std::optional<ReservationId> reservationId;
    std::optional<StationSnapshot> stationAfter;
    std::optional<bool> success;
    std::optional<std::string> decision;
    std::optional<StationId> decisionStation;
    std::optional<GeoPoint> decisionPlace;
    std::optional<std::string> userType;
};

// Append-only JSON-lines writer. Records must arrive in (time, seq) order;
// an out-of-order append is an engine bug and throws.
class HistoryWriter {
public:
    explicit HistoryWriter(std::ostream& out) : out_(&out) {}

    void writeHeader(const HistoryHeader& header);
    void append(const HistoryRecord& record);
    void flush();

private:
    std::ostream* out_;
    bool headerWritten_ = false;
    bool any_ = false;
    double lastTime_ = 0.0;
    std::uint64_t lastSeq_ = 0;
};

struct History {
    HistoryHeader header;
    std::vector<HistoryRecord> records;
};

History readHistory(std::istream& in);
History readHistoryFile(const std::string& path);

std::string serializeHeader(const HistoryHeader& header);
std::string serializeRecord(const HistoryRecord& record);

} // namespace bikesim
