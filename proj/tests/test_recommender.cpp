#include "bikesim/recommender.hpp"

#include "world_fixture.hpp"

#include <doctest.h>

using namespace bikesim;
using namespace bikesim::testutil;

TEST_CASE("AvR ranks rental stations by available bikes") {
    WorldFixture f({makeStation(1, atMetersEast(100), 20, 5),
                    makeStation(2, atMetersEast(200), 20, 2),
                    makeStation(3, atMetersEast(300), 20, 8)});
    AvailableResourcesRecommender avr;
    auto ranked = avr.recommendStationToRentBike({0.0, 0.0}, f.world);
    CHECK(ranked == std::vector<StationId>{3, 1, 2});
}

TEST_CASE("AvR skips empty stations and returns [] when all are empty") {
    WorldFixture f({makeStation(1, atMetersEast(100), 20, 0),
                    makeStation(2, atMetersEast(200), 20, 0)});
    AvailableResourcesRecommender avr;
    CHECK(avr.recommendStationToRentBike({0.0, 0.0}, f.world).empty());
}

TEST_CASE("AvR return ranking uses available slots") {
    WorldFixture f({makeStation(1, atMetersEast(100), 20, 19),  // 1 slot
                    makeStation(2, atMetersEast(200), 20, 13)}); // 7 slots
    AvailableResourcesRecommender avr;
    auto ranked = avr.recommendStationToReturnBike({0.0, 0.0}, atMetersEast(500), f.world);
    CHECK(ranked == std::vector<StationId>{2, 1});
}

TEST_CASE("AvR breaks ties by ascending station id") {
    WorldFixture f({makeStation(9, atMetersEast(100), 20, 4),
                    makeStation(2, atMetersEast(200), 20, 4),
                    makeStation(5, atMetersEast(300), 20, 4)});
    AvailableResourcesRecommender avr;
    auto ranked = avr.recommendStationToRentBike({0.0, 0.0}, f.world);
    CHECK(ranked == std::vector<StationId>{2, 5, 9});
}

TEST_CASE("AvR/Dist ranks by bikes over walking distance") {
    // A: 4 bikes at 200 m (0.020) beats B: 6 bikes at 600 m (0.010).
    WorldFixture f({makeStation(1, atMetersEast(200), 20, 4),
                    makeStation(2, atMetersEast(600), 20, 6)});
    AvailableResourcesRatioRecommender ratio;
    auto ranked = ratio.recommendStationToRentBike({0.0, 0.0}, f.world);
    CHECK(ranked == std::vector<StationId>{1, 2});
}

TEST_CASE("AvR/Dist return ranking measures station to destination by default") {
    // A: 4 slots 100 m from the destination (0.04) vs B: 10 slots at 500 m (0.02).
    GeoPoint destination = atMetersEast(1000);
    WorldFixture f({makeStation(1, atMetersEast(900), 20, 16),
                    makeStation(2, atMetersEast(1500), 20, 10)});
    AvailableResourcesRatioRecommender ratio;
    auto ranked = ratio.recommendStationToReturnBike({0.0, 0.0}, destination, f.world);
    CHECK(ranked == std::vector<StationId>{1, 2});
}

TEST_CASE("AvR/Dist can measure user-to-station distance for returns instead") {
    GeoPoint user{0.0, 0.0};
    GeoPoint destination = atMetersEast(2000);
    // Near the user, far from the destination; and the reverse.
    WorldFixture f({makeStation(1, atMetersEast(100), 20, 15),
                    makeStation(2, atMetersEast(1900), 20, 15)});

    AvailableResourcesRatioRecommender byDestination;
    CHECK(byDestination.recommendStationToReturnBike(user, destination, f.world) ==
          std::vector<StationId>{2, 1});

    AvailableResourcesRatioRecommender byUser(
        AvailableResourcesRatioRecommender::ReturnDistanceOperand::UserToStation);
    CHECK(byUser.recommendStationToReturnBike(user, destination, f.world) ==
          std::vector<StationId>{1, 2});
}

TEST_CASE("AvR/Dist floors the distance at one meter for co-located stations") {
    WorldFixture f({makeStation(1, {0.0, 0.0}, 20, 1),
                    makeStation(2, atMetersEast(50), 20, 10)});
    AvailableResourcesRatioRecommender ratio;
    auto ranked = ratio.recommendStationToRentBike({0.0, 0.0}, f.world);
    CHECK(ranked.front() == 1); // 1 bike / 1 m > 10 bikes / 50 m
}

TEST_CASE("AvR/Dist top rental choice is invariant under uniform distance rescaling") {
    WorldFixture near({makeStation(1, atMetersEast(150), 30, 3),
                       makeStation(2, atMetersEast(450), 30, 7),
                       makeStation(3, atMetersEast(900), 30, 20)});
    WorldFixture far({makeStation(1, atMetersEast(300), 30, 3),
                      makeStation(2, atMetersEast(900), 30, 7),
                      makeStation(3, atMetersEast(1800), 30, 20)});
    AvailableResourcesRatioRecommender ratio;
    auto a = ratio.recommendStationToRentBike({0.0, 0.0}, near.world);
    auto b = ratio.recommendStationToRentBike({0.0, 0.0}, far.world);
    REQUIRE(!a.empty());
    CHECK(a.front() == b.front());
}

TEST_CASE("recommenders leave the world untouched") {
    WorldFixture f({makeStation(1, atMetersEast(100), 20, 5)});
    Station before = f.world.stations[0];
    AvailableResourcesRatioRecommender ratio;
    ratio.recommendStationToRentBike({0.0, 0.0}, f.world);
    ratio.recommendStationToReturnBike({0.0, 0.0}, atMetersEast(400), f.world);
    CHECK(f.world.stations[0].availableBikes == before.availableBikes);
    CHECK(f.world.stations[0].availableSlots == before.availableSlots);
}

TEST_CASE("factory resolves built-in type names and rejects unknowns") {
    CHECK(makeRecommender("AVAILABLE_RESOURCES", nlohmann::json::object()) != nullptr);
    CHECK(makeRecommender("AVAILABLE_RESOURCES_RATIO",
                          nlohmann::json{{"returnDistance", "user_to_station"}}) != nullptr);
    CHECK_THROWS_AS(makeRecommender("NOPE", nlohmann::json::object()), std::invalid_argument);
    CHECK_THROWS_AS(makeRecommender("AVAILABLE_RESOURCES_RATIO",
                                    nlohmann::json{{"bogus", 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(makeRecommender("AVAILABLE_RESOURCES", nlohmann::json{{"x", 1}}),
                    std::invalid_argument);
}
