#include "bikesim/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace bikesim {

std::optional<double> computeDS(const MetricsCounters& c) {
    if (c.n == 0) return std::nullopt;
    return static_cast<double>(c.sh) / static_cast<double>(c.n);
}

std::optional<double> computeHE(const MetricsCounters& c) {
    long denom = c.sh + c.fhHired;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(c.sh) / static_cast<double>(denom);
}

std::optional<double> computeRE(const MetricsCounters& c, bool hiresDenominator) {
    long denom = (hiresDenominator ? c.sh : c.sr) + c.fr;
    if (denom == 0) return std::nullopt;
    return static_cast<double>(c.sr) / static_cast<double>(denom);
}

namespace {

struct UserTrace {
    std::string type;
    double appearedAt = 0.0;
    double tookBikeAt = 0.0;
    double returnedBikeAt = 0.0;
    double reachedDestinationAt = 0.0;
    int failedHireArrivals = 0;
    bool hired = false;
    bool left = false;
};

struct StationTimeline {
    int capacity = 0;
    int availableBikes = 0;
    double lastTime = 0.0;
    double emptySeconds = 0.0;
    double deviationIntegral = 0.0;

    void advanceTo(double t) {
        double dt = t - lastTime;
        if (dt > 0.0) {
            if (availableBikes == 0) emptySeconds += dt;
            deviationIntegral += std::abs(availableBikes - capacity / 2.0) * dt;
            lastTime = t;
        }
    }
};

void fillDerived(UserTypeMetrics& m, double ttSumMinutes) {
    m.ds = computeDS(m.counters);
    m.he = computeHE(m.counters);
    m.re = computeRE(m.counters);
    if (m.counters.sh > 0) m.ttMinutes = ttSumMinutes / m.counters.sh;
}

} // namespace

MetricsReport computeMetrics(const History& history) {
    MetricsReport report;

    std::map<UserId, UserTrace> users;
    std::map<StationId, StationTimeline> stations;
    for (const auto& st : history.header.stations) {
        StationTimeline tl;
        tl.capacity = st.capacity;
        tl.availableBikes = st.initial.availableBikes;
        stations[st.id] = tl;
    }

    double horizon = history.records.empty() ? 0.0 : history.records.back().time;
    report.horizonSeconds = horizon;

    for (const auto& rec : history.records) {
        switch (rec.kind) {
            case EventKind::UserAppears: {
                UserTrace tr;
                tr.type = rec.userType.value_or("?");
                tr.appearedAt = rec.time;
                users[rec.userId] = tr;
                break;
            }
            case EventKind::UserArrivesAtStationToRent:
                if (rec.success && !*rec.success) ++users.at(rec.userId).failedHireArrivals;
                break;
            case EventKind::UserTakesBike: {
                auto& tr = users.at(rec.userId);
                tr.hired = true;
                tr.tookBikeAt = rec.time;
                break;
            }
            case EventKind::UserReturnsBike: users.at(rec.userId).returnedBikeAt = rec.time; break;
            case EventKind::UserArrivesAtDestination:
                users.at(rec.userId).reachedDestinationAt = rec.time;
                break;
            case EventKind::UserLeavesSystem: users.at(rec.userId).left = true; break;
            default: break;
        }
        if (rec.stationAfter && rec.stationId) {
            auto& tl = stations.at(*rec.stationId);
            tl.advanceTo(rec.time);
            tl.availableBikes = rec.stationAfter->availableBikes;
        }
    }

    std::map<std::string, UserTypeMetrics> perType;
    std::map<std::string, double> ttSumMinutes;
    for (const auto& [id, tr] : users) {
        auto& m = perType[tr.type];
        m.userType = tr.type;
        ++m.counters.n;
        ++report.total.n;
        m.counters.fh += tr.failedHireArrivals;
        report.total.fh += tr.failedHireArrivals;
        if (tr.hired) {
            ++m.counters.sh;
            ++report.total.sh;
            m.counters.fhHired += tr.failedHireArrivals;
            report.total.fhHired += tr.failedHireArrivals;
            UserTimeBreakdown bd;
            bd.id = id;
            bd.userType = tr.type;
            bd.toOriginStation = tr.tookBikeAt - tr.appearedAt;
            bd.onBike = tr.returnedBikeAt - tr.tookBikeAt;
            bd.toDestination = tr.reachedDestinationAt - tr.returnedBikeAt;
            report.perUser.push_back(bd);
            ttSumMinutes[tr.type] += (bd.toOriginStation + bd.onBike + bd.toDestination) / 60.0;
        } else if (tr.left) {
            ++m.counters.abandoned;
            ++report.total.abandoned;
        }
    }

    // SR/FR from the record stream (they are not per-user accumulations).
    for (const auto& rec : history.records) {
        const UserTrace& tr = users.at(rec.userId);
        auto bump = [&](long MetricsCounters::* field) {
            perType[tr.type].counters.*field += 1;
            report.total.*field += 1;
        };
        if (rec.kind == EventKind::UserReturnsBike) bump(&MetricsCounters::sr);
        if (rec.kind == EventKind::UserArrivesAtStationToReturn && rec.success && !*rec.success) {
            bump(&MetricsCounters::fr);
        }
    }

    for (auto& [type, m] : perType) {
        fillDerived(m, ttSumMinutes[type]);
        report.perType.push_back(m);
    }

    if (!stations.empty()) {
        double adSum = 0.0;
        double aetSum = 0.0;
        for (auto& [id, tl] : stations) {
            StationMetrics sm;
            sm.id = id;
            if (horizon > 0.0) {
                tl.advanceTo(horizon);
                sm.emptyTimeSeconds = tl.emptySeconds;
                sm.meanAbsDeviation = tl.deviationIntegral / horizon;
            } else {
                // Degenerate empty run: the state never changed.
                sm.emptyTimeSeconds = 0.0;
                sm.meanAbsDeviation = std::abs(tl.availableBikes - tl.capacity / 2.0);
            }
            adSum += sm.meanAbsDeviation;
            aetSum += sm.emptyTimeSeconds / 60.0;
            report.perStation.push_back(sm);
        }
        report.adBikes = adSum / static_cast<double>(stations.size());
        report.aetMinutes = aetSum / static_cast<double>(stations.size());
    }

    return report;
}

std::string formatCsvDouble(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

namespace {

std::string cell(const std::optional<double>& v) {
    return v ? formatCsvDouble(*v) : std::string();
}

} // namespace

std::string metricsSummaryCsv(const MetricsReport& report) {
    std::ostringstream out;
    out << "user_type,n,abandoned,ds,he,re,tt_min,ad,aet_min\n";
    for (const auto& m : report.perType) {
        out << m.userType << ',' << m.counters.n << ',' << m.counters.abandoned << ','
            << cell(m.ds) << ',' << cell(m.he) << ',' << cell(m.re) << ',' << cell(m.ttMinutes)
            << ',' << cell(report.adBikes) << ',' << cell(report.aetMinutes) << '\n';
    }
    return out.str();
}

std::string metricsPerStationCsv(const MetricsReport& report) {
    std::ostringstream out;
    out << "station_id,empty_time_min,mean_abs_deviation\n";
    for (const auto& sm : report.perStation) {
        out << sm.id << ',' << formatCsvDouble(sm.emptyTimeSeconds / 60.0) << ','
            << formatCsvDouble(sm.meanAbsDeviation) << '\n';
    }
    return out.str();
}

void writeMetricsCsv(const MetricsReport& report, const std::string& summaryPath,
                     const std::string& perStationPath) {
    std::ofstream summary(summaryPath);
    if (!summary) throw std::runtime_error("cannot write metrics CSV: " + summaryPath);
    summary << metricsSummaryCsv(report);

    std::ofstream stations(perStationPath);
    if (!stations) throw std::runtime_error("cannot write metrics CSV: " + perStationPath);
    stations << metricsPerStationCsv(report);
}

} // namespace bikesim
