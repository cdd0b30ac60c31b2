#include "bikesim/demand.hpp"

#include "bikesim/geo.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace bikesim;

namespace {

GlobalConfig madridGlobal() {
    GlobalConfig g;
    g.reservationTime = 1200.0;
    g.totalSimulationTime = 3600.0;
    g.boundingBox = BoundingBox{{40.45, -3.72}, {40.40, -3.67}};
    return g;
}

} // namespace

TEST_CASE("zero rate produces no arrivals") {
    Rng rng(1);
    CHECK(generateArrivalTimes(0.0, 0.0, 3600.0, rng).empty());
}

TEST_CASE("arrivals are sorted and strictly inside the window") {
    Rng rng(5);
    auto times = generateArrivalTimes(60.0, 100.0, 700.0, rng);
    REQUIRE(!times.empty());
    double prev = 100.0;
    for (double t : times) {
        CHECK(t >= prev);
        CHECK(t > 100.0);
        CHECK(t < 700.0);
        prev = t;
    }
}

TEST_CASE("identical seeds give identical arrivals") {
    Rng a(77), b(77), c(78);
    auto ta = generateArrivalTimes(20.0, 0.0, 3600.0, a);
    auto tb = generateArrivalTimes(20.0, 0.0, 3600.0, b);
    auto tc = generateArrivalTimes(20.0, 0.0, 3600.0, c);
    CHECK(ta == tb);
    CHECK(ta != tc);
}

TEST_CASE("Poisson mean over many seeds matches the rate") {
    // Independent statistical oracle: for lambda = 10/hr over one hour the
    // empirical mean over 1000 seeds lies in 10 +- 3*sqrt(10)/sqrt(1000).
    const double lambda = 10.0;
    const int runs = 1000;
    long total = 0;
    double sumSq = 0.0;
    for (int s = 0; s < runs; ++s) {
        Rng rng(1000 + s);
        auto times = generateArrivalTimes(lambda, 0.0, 3600.0, rng);
        total += static_cast<long>(times.size());
        sumSq += static_cast<double>(times.size()) * times.size();
    }
    double mean = static_cast<double>(total) / runs;
    double variance = sumSq / runs - mean * mean;
    CHECK(std::abs(mean - lambda) <= 3.0 * std::sqrt(lambda) / std::sqrt(runs));
    CHECK(variance > 8.0);  // Poisson: variance tracks the mean
    CHECK(variance < 12.0);
}

TEST_CASE("zero radius sampling returns the center") {
    Rng rng(3);
    GeoPoint center{40.42, -3.70};
    GeoPoint p = samplePointInCircle(center, 0.0, rng);
    CHECK(p.lat == doctest::Approx(center.lat));
    CHECK(p.lon == doctest::Approx(center.lon));
}

TEST_CASE("circle samples stay inside the circle and fill it uniformly") {
    Rng rng(11);
    GeoPoint center{40.42, -3.70};
    const double radius = 200.0;
    const int samples = 10000;
    int insideHalfArea = 0;
    for (int i = 0; i < samples; ++i) {
        GeoPoint p = samplePointInCircle(center, radius, rng);
        double d = greatCircleDistance(center, p);
        CHECK(d <= radius + 1.0);
        // Half the disc's area lies within radius/sqrt(2).
        if (d <= radius / std::sqrt(2.0)) ++insideHalfArea;
    }
    double fraction = static_cast<double>(insideHalfArea) / samples;
    CHECK(fraction == doctest::Approx(0.5).epsilon(0.04));
}

TEST_CASE("box samples stay inside the box") {
    Rng rng(17);
    BoundingBox box{{40.45, -3.72}, {40.40, -3.67}};
    for (int i = 0; i < 1000; ++i) {
        CHECK(box.contains(samplePointInBox(box, rng)));
    }
}

TEST_CASE("entry points generate users inside their circles") {
    GlobalConfig global = madridGlobal();
    EntryPoint ep;
    ep.center = {40.42, -3.70};
    ep.radius = 200.0;
    ep.ratePerHour = 50.0;
    ep.userTemplate.userType = "INFORMED";

    Rng rng(23);
    UsersConfig users = generateUsers({ep}, global, rng);
    REQUIRE(!users.users.empty());
    for (const auto& u : users.users) {
        CHECK(greatCircleDistance(ep.center, u.position) <= ep.radius + 1.0);
        CHECK(global.boundingBox.contains(u.destinationPlace)); // whole-area destinations
        CHECK(u.timeInstant > 0.0);
        CHECK(u.timeInstant < global.totalSimulationTime);
        CHECK(u.userType == "INFORMED");
    }
}

TEST_CASE("destination circles are honored") {
    GlobalConfig global = madridGlobal();
    EntryPoint ep;
    ep.center = {40.42, -3.70};
    ep.radius = 100.0;
    ep.ratePerHour = 30.0;
    ep.userTemplate.userType = "UNINFORMED";
    ep.destinationCenter = GeoPoint{40.43, -3.69};
    ep.destinationRadius = 150.0;

    Rng rng(29);
    UsersConfig users = generateUsers({ep}, global, rng);
    REQUIRE(!users.users.empty());
    for (const auto& u : users.users) {
        CHECK(greatCircleDistance(*ep.destinationCenter, u.destinationPlace) <=
              ep.destinationRadius + 1.0);
    }
}

TEST_CASE("empty entry point list and out-of-box entry points") {
    GlobalConfig global = madridGlobal();
    Rng rng(31);
    CHECK(generateUsers({}, global, rng).users.empty());

    EntryPoint outside;
    outside.center = {48.85, 2.35};
    outside.radius = 100.0;
    outside.ratePerHour = 10.0;
    outside.userTemplate.userType = "INFORMED";
    CHECK_THROWS_AS(generateUsers({outside}, global, rng), ConfigError);
}

TEST_CASE("trip log parsing accepts both headers") {
    std::istringstream plain("hour,origin_station,destination_station\n8,1,2\n9,2,1\n");
    auto trips = readTripLogCsv(plain);
    REQUIRE(trips.size() == 2);
    CHECK(trips[0].hourOfDay == 8);
    CHECK(trips[0].originStationId == 1);
    CHECK(trips[0].destinationStationId == 2);
    CHECK(!trips[0].cyclingVelocity.has_value());

    std::istringstream withVel(
        "hour,origin_station,destination_station,cycling_velocity_mps\n8,1,2,5.5\n9,2,1,\n");
    auto trips2 = readTripLogCsv(withVel);
    REQUIRE(trips2.size() == 2);
    CHECK(trips2[0].cyclingVelocity == 5.5);
    CHECK(!trips2[1].cyclingVelocity.has_value());

    std::istringstream bad("h,o,d\n1,2,3\n");
    CHECK_THROWS(readTripLogCsv(bad));

    std::istringstream badHour("hour,origin_station,destination_station\n25,1,2\n");
    CHECK_THROWS(readTripLogCsv(badHour));
}

TEST_CASE("trip ingestion jitters time within the hour and position within 200 m") {
    StationsConfig stations;
    stations.stations.push_back(StationConfig{1, {40.42, -3.70}, 20, 10});
    stations.stations.push_back(StationConfig{2, {40.43, -3.69}, 20, 10});

    std::vector<TripRecord> trips;
    for (int i = 0; i < 50; ++i) trips.push_back(TripRecord{8, 1, 2, std::nullopt});

    UserConfig tmpl;
    tmpl.userType = "INFORMED";
    Rng rng(37);
    TripIngestStats stats;
    UsersConfig users = usersFromTripLog(trips, stations, tmpl, rng, &stats);
    CHECK(stats.totalTrips == 50);
    CHECK(stats.skippedUnknownStation == 0);
    CHECK(stats.missingCyclingVelocity == 50);
    REQUIRE(users.users.size() == 50);
    for (const auto& u : users.users) {
        CHECK(u.timeInstant >= 8 * 3600.0);
        CHECK(u.timeInstant < 9 * 3600.0);
        CHECK(greatCircleDistance({40.42, -3.70}, u.position) <= 201.0);
        CHECK(greatCircleDistance({40.43, -3.69}, u.destinationPlace) <= 201.0);
        CHECK(u.cyclingVelocity == 6.0); // default applies when the trip has none
    }
}

TEST_CASE("trips naming unknown stations are skipped and counted") {
    StationsConfig stations;
    stations.stations.push_back(StationConfig{1, {40.42, -3.70}, 20, 10});

    std::vector<TripRecord> trips{{8, 1, 99, std::nullopt}, {9, 1, 1, std::nullopt}};
    UserConfig tmpl;
    tmpl.userType = "UNINFORMED";
    Rng rng(41);
    TripIngestStats stats;
    UsersConfig users = usersFromTripLog(trips, stations, tmpl, rng, &stats);
    CHECK(stats.skippedUnknownStation == 1);
    CHECK(users.users.size() == 1);
}

TEST_CASE("recorded cycling velocity wins over the default") {
    StationsConfig stations;
    stations.stations.push_back(StationConfig{1, {40.42, -3.70}, 20, 10});
    std::vector<TripRecord> trips{{10, 1, 1, 4.2}};
    UserConfig tmpl;
    tmpl.userType = "INFORMED";
    Rng rng(43);
    UsersConfig users = usersFromTripLog(trips, stations, tmpl, rng);
    REQUIRE(users.users.size() == 1);
    CHECK(users.users[0].cyclingVelocity == 4.2);
}

TEST_CASE("generation is a pure function of inputs and seed") {
    GlobalConfig global = madridGlobal();
    EntryPoint ep;
    ep.center = {40.42, -3.70};
    ep.radius = 200.0;
    ep.ratePerHour = 25.0;
    ep.userTemplate.userType = "OBEDIENT";

    Rng r1(55), r2(55);
    UsersConfig a = generateUsers({ep}, global, r1);
    UsersConfig b = generateUsers({ep}, global, r2);
    REQUIRE(a.users.size() == b.users.size());
    for (std::size_t i = 0; i < a.users.size(); ++i) {
        CHECK(a.users[i].timeInstant == b.users[i].timeInstant);
        CHECK(a.users[i].position == b.users[i].position);
        CHECK(a.users[i].destinationPlace == b.users[i].destinationPlace);
    }
}
