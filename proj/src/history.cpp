#include "bikesim/history.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <stdexcept>

namespace bikesim {

using nlohmann::json;

namespace {

json toJson(const StationSnapshot& s) {
    return json{{"available_bikes", s.availableBikes},
                {"reserved_bikes", s.reservedBikes},
                {"available_slots", s.availableSlots},
                {"reserved_slots", s.reservedSlots}};
}

StationSnapshot snapshotFromJson(const json& j) {
    StationSnapshot s;
    s.availableBikes = j.at("available_bikes").get<int>();
    s.reservedBikes = j.at("reserved_bikes").get<int>();
    s.availableSlots = j.at("available_slots").get<int>();
    s.reservedSlots = j.at("reserved_slots").get<int>();
    return s;
}

} // namespace

std::string serializeHeader(const HistoryHeader& h) {
    json stations = json::array();
    for (const auto& st : h.stations) {
        json e = toJson(st.initial);
        e["id"] = st.id;
        e["capacity"] = st.capacity;
        stations.push_back(std::move(e));
    }
    json j{{"type", "header"},
           {"version", h.version},
           {"seed", h.seed},
           {"reservation_time", h.reservationTime},
           {"total_simulation_time", h.totalSimulationTime},
           {"config_digests", h.configDigests},
           {"stations", std::move(stations)}};
    return j.dump();
}

std::string serializeRecord(const HistoryRecord& r) {
    json j{{"t", r.time}, {"seq", r.seq}, {"kind", eventKindName(r.kind)}, {"user", r.userId}};
    if (r.stationId) j["station"] = *r.stationId;
    if (r.reservationId) j["reservation"] = *r.reservationId;
    if (r.stationAfter) j["station_after"] = toJson(*r.stationAfter);
    if (r.success) j["success"] = *r.success;
    if (r.decision) j["decision"] = *r.decision;
    if (r.decisionStation) j["decision_station"] = *r.decisionStation;
    if (r.decisionPlace) {
        j["decision_place"] = json{{"lat", r.decisionPlace->lat}, {"lon", r.decisionPlace->lon}};
    }
    if (r.userType) j["user_type"] = *r.userType;
    return j.dump();
}

void HistoryWriter::writeHeader(const HistoryHeader& header) {
    if (headerWritten_) throw std::logic_error("history header written twice");
    *out_ << serializeHeader(header) << '\n';
    headerWritten_ = true;
}

void HistoryWriter::append(const HistoryRecord& record) {
    if (!headerWritten_) throw std::logic_error("history record before header");
    if (any_ && (record.time < lastTime_ ||
                 (record.time == lastTime_ && record.seq <= lastSeq_))) {
        throw std::logic_error("out-of-order history append at t=" +
                               std::to_string(record.time));
    }
    any_ = true;
    lastTime_ = record.time;
    lastSeq_ = record.seq;
    *out_ << serializeRecord(record) << '\n';
}

void HistoryWriter::flush() { out_->flush(); }

History readHistory(std::istream& in) {
    History h;
    std::string line;
    bool sawHeader = false;
    std::size_t lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        json j = json::parse(line);
        if (!sawHeader) {
            if (j.value("type", "") != "header") {
                throw std::runtime_error("history line 1: expected header record");
            }
            h.header.version = j.at("version").get<std::string>();
            h.header.seed = j.at("seed").get<std::uint64_t>();
            h.header.reservationTime = j.at("reservation_time").get<double>();
            h.header.totalSimulationTime = j.at("total_simulation_time").get<double>();
            h.header.configDigests =
                j.at("config_digests").get<std::map<std::string, std::string>>();
            for (const auto& e : j.at("stations")) {
                HeaderStation st;
                st.id = e.at("id").get<StationId>();
                st.capacity = e.at("capacity").get<int>();
                st.initial = snapshotFromJson(e);
                h.header.stations.push_back(st);
            }
            sawHeader = true;
            continue;
        }
        HistoryRecord r;
        r.time = j.at("t").get<double>();
        r.seq = j.at("seq").get<std::uint64_t>();
        auto kind = eventKindFromString(j.at("kind").get<std::string>());
        if (!kind) {
            throw std::runtime_error("history line " + std::to_string(lineNo) +
                                     ": unknown event kind");
        }
        r.kind = *kind;
        r.userId = j.at("user").get<UserId>();
        if (j.contains("station")) r.stationId = j.at("station").get<StationId>();
        if (j.contains("reservation")) r.reservationId = j.at("reservation").get<ReservationId>();
        if (j.contains("station_after")) r.stationAfter = snapshotFromJson(j.at("station_after"));
        if (j.contains("success")) r.success = j.at("success").get<bool>();
        if (j.contains("decision")) r.decision = j.at("decision").get<std::string>();
        if (j.contains("decision_station")) {
            r.decisionStation = j.at("decision_station").get<StationId>();
        }
        if (j.contains("decision_place")) {
            r.decisionPlace = GeoPoint{j.at("decision_place").at("lat").get<double>(),
                                       j.at("decision_place").at("lon").get<double>()};
        }
        if (j.contains("user_type")) r.userType = j.at("user_type").get<std::string>();
        h.records.push_back(std::move(r));
    }
    if (!sawHeader) throw std::runtime_error("history stream has no header record");
    return h;
}

History readHistoryFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open history file: " + path);
    return readHistory(in);
}

} // namespace bikesim
