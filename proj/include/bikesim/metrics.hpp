#pragma once

#include "bikesim/history.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bikesim {

// Raw event counts behind the quality metrics. Failed hires/returns count
// walk-up attempts that found no bike/slot at the station; reservation
// intents that fail via the app are not wasted trips and are not counted.
struct MetricsCounters {
    long n = 0;         // users that appeared (total bike demand)
    long sh = 0;        // successful hires
    long fh = 0;        // failed hire attempts, all users
    long fhHired = 0;   // failed hire attempts by users who eventually hired
    long sr = 0;        // successful returns
    long fr = 0;        // failed return attempts
    long abandoned = 0; // left without a bike
};

// Demand satisfaction SH/N. Absent when no user appeared.
std::optional<double> computeDS(const MetricsCounters& c);

// Hire efficiency SH/(SH + FH_h). Absent when the denominator is zero.
std::optional<double> computeHE(const MetricsCounters& c);

// Return efficiency. The default reads "returns over total return attempts",
// SR/(SR + FR); the alternative denominator (SH + FR) coincides with it
// whenever every hirer returned (SR = SH), which holds for complete runs.
std::optional<double> computeRE(const MetricsCounters& c, bool hiresDenominator = false);

struct UserTypeMetrics {
    std::string userType;
    MetricsCounters counters;
    std::optional<double> ds;
    std::optional<double> he;
    std::optional<double> re;
    std::optional<double> ttMinutes; // mean total time of users who hired
};

struct StationMetrics {
    StationId id = 0;
    double emptyTimeSeconds = 0.0;   // time with zero rentable bikes
    double meanAbsDeviation = 0.0;   // time-weighted |availableBikes - capacity/2|
};

struct UserTimeBreakdown {
    UserId id = 0;
    std::string userType;
    double toOriginStation = 0.0; // T_os, seconds: appearance -> bike taken
    double onBike = 0.0;          // T_rs, seconds: bike taken -> bike returned
    double toDestination = 0.0;   // T_fd, seconds: bike returned -> destination
};

struct MetricsReport {
    double horizonSeconds = 0.0;           // time of the last event
    MetricsCounters total;
    std::vector<UserTypeMetrics> perType;  // one row per user type, sorted
    std::vector<StationMetrics> perStation;
    std::vector<UserTimeBreakdown> perUser; // users who hired, in user-id order
    std::optional<double> adBikes;          // mean station deviation
    std::optional<double> aetMinutes;       // mean station empty time
};

// Single pass over a stored history. The header supplies initial station
// inventories so the station timelines start at t=0.
MetricsReport computeMetrics(const History& history);

// Summary CSV (one row per user type: user_type,n,abandoned,ds,he,re,tt_min,
// ad,aet_min) plus a per-station detail CSV. Values round-trip at 1e-9.
void writeMetricsCsv(const MetricsReport& report, const std::string& summaryPath,
                     const std::string& perStationPath);

std::string metricsSummaryCsv(const MetricsReport& report);
std::string metricsPerStationCsv(const MetricsReport& report);

// Shortest representation that still round-trips through parsing at 1e-9.
std::string formatCsvDouble(double v);

} // namespace bikesim
