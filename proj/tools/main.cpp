#include "bikesim/behavior.hpp"
#include "bikesim/config.hpp"
#include "bikesim/demand.hpp"
#include "bikesim/engine.hpp"
#include "bikesim/history.hpp"
#include "bikesim/metrics.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace fs = std::filesystem;
using namespace bikesim;

namespace {

std::uint64_t entropySeed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void printSummary(const RunSummary& s) {
    std::cout << "users: " << s.usersSimulated << " (rejected " << s.usersRejected << ")\n"
              << "successful hires: " << s.successfulHires << ", failed hires: " << s.failedHires
              << " (by hirers: " << s.failedHiresByHirers << ")\n"
              << "successful returns: " << s.successfulReturns
              << ", failed returns: " << s.failedReturns << "\n"
              << "abandoned: " << s.abandoned << "\n"
              << "events dispatched: " << s.eventsDispatched << ", final clock: " << s.finalClock
              << " s\n"
              << "seed: " << s.effectiveSeed << "\n";
}

void writeReports(const MetricsReport& report, const fs::path& outDir) {
    writeMetricsCsv(report, (outDir / "metrics.csv").string(),
                    (outDir / "station_metrics.csv").string());
}

int cmdSimulate(const std::string& globalPath, const std::string& stationsPath,
                const std::string& usersPath, std::string outDir) {
    LoadedConfigs configs = loadAndValidate(globalPath, stationsPath, usersPath);
    if (outDir.empty()) outDir = configs.global.outputPath;
    fs::create_directories(outDir);
    fs::path historyPath = fs::path(outDir) / "history.jsonl";

    GreatCircleRouter router;
    RunSummary summary;
    {
        std::ofstream historyOut(historyPath);
        if (!historyOut) throw std::runtime_error("cannot write " + historyPath.string());
        summary = runSimulation(configs, router, historyOut);
    }

    MetricsReport report = computeMetrics(readHistoryFile(historyPath.string()));
    writeReports(report, outDir);
    printSummary(summary);
    std::cout << "history: " << historyPath.string() << "\n"
              << "metrics: " << (fs::path(outDir) / "metrics.csv").string() << "\n";
    return 0;
}

int cmdAnalyze(const std::string& historyPath, const std::string& outDir) {
    fs::create_directories(outDir);
    MetricsReport report = computeMetrics(readHistoryFile(historyPath));
    writeReports(report, outDir);
    std::cout << "metrics: " << (fs::path(outDir) / "metrics.csv").string() << "\n";
    return 0;
}

int cmdGenUsers(const std::string& globalPath, const std::string& entryPointsPath,
                const std::string& tripLogPath, const std::string& stationsPath,
                const std::string& userType, double ratePerHour, double jitterRadius,
                const std::string& outPath) {
    std::vector<std::string> errors;
    std::string globalBytes = readFileBytes(globalPath);
    auto jg = nlohmann::json::parse(globalBytes, nullptr, false);
    if (jg.is_discarded()) throw ConfigError(globalPath + ": not valid JSON");
    GlobalConfig global = parseGlobalConfig(jg, globalPath, errors);
    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "configuration invalid:";
        for (const auto& e : errors) msg << "\n  " << e;
        throw ConfigError(msg.str());
    }

    std::uint64_t seed = global.randomSeed ? *global.randomSeed : entropySeed();
    Rng rng(seed);
    UsersConfig users;

    if (!entryPointsPath.empty()) {
        auto entryPoints = loadEntryPointsFile(entryPointsPath, global);
        if (ratePerHour >= 0.0) {
            for (auto& ep : entryPoints) ep.ratePerHour = ratePerHour;
        }
        users = generateUsers(entryPoints, global, rng);
    } else {
        if (stationsPath.empty() || userType.empty()) {
            throw ConfigError("--trip-log needs --stations and --user-type");
        }
        if (findUserBehavior(userType) == nullptr) {
            throw ConfigError("unknown user type '" + userType + "'");
        }
        auto js = nlohmann::json::parse(readFileBytes(stationsPath), nullptr, false);
        if (js.is_discarded()) throw ConfigError(stationsPath + ": not valid JSON");
        StationsConfig stations = parseStationsConfig(js, stationsPath, errors);
        if (!errors.empty()) {
            std::ostringstream msg;
            msg << "configuration invalid:";
            for (const auto& e : errors) msg << "\n  " << e;
            throw ConfigError(msg.str());
        }
        UserConfig userTemplate;
        userTemplate.userType = userType;
        TripIngestStats stats;
        users = usersFromTripLog(readTripLogCsvFile(tripLogPath), stations, userTemplate, rng,
                                 &stats, jitterRadius);
        std::cout << "trips: " << stats.totalTrips << ", skipped (unknown station): "
                  << stats.skippedUnknownStation << "\n";
        if (stats.missingCyclingVelocity > 0) {
            std::cerr << "note: " << stats.missingCyclingVelocity
                      << " trips carry no cycling velocity; the 6.0 m/s default applies\n";
        }
    }

    writeJsonFile(outPath, toJson(users));
    std::cout << "wrote " << users.users.size() << " users to " << outPath << " (seed " << seed
              << ")\n";
    return 0;
}

int cmdSweep(const std::string& globalPath, const std::string& stationsPath,
             const std::string& entryPointsPath, const std::string& ratesArg, int seeds,
             const std::string& userType, const std::string& outDir) {
    LoadedConfigs base; // users part unused
    {
        std::vector<std::string> errors;
        auto jg = nlohmann::json::parse(readFileBytes(globalPath), nullptr, false);
        auto js = nlohmann::json::parse(readFileBytes(stationsPath), nullptr, false);
        if (jg.is_discarded()) errors.push_back(globalPath + ": not valid JSON");
        if (js.is_discarded()) errors.push_back(stationsPath + ": not valid JSON");
        if (errors.empty()) {
            base.global = parseGlobalConfig(jg, globalPath, errors);
            base.stations = parseStationsConfig(js, stationsPath, errors);
            if (errors.empty()) crossValidate(base.global, base.stations, base.users, errors);
        }
        if (!errors.empty()) {
            std::ostringstream msg;
            msg << "configuration invalid:";
            for (const auto& e : errors) msg << "\n  " << e;
            throw ConfigError(msg.str());
        }
    }

    std::vector<double> rates;
    {
        std::istringstream ss(ratesArg);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (!tok.empty()) rates.push_back(std::stod(tok));
        }
    }
    if (rates.empty()) throw ConfigError("--rates: no rates given");
    if (seeds < 1) throw ConfigError("--seeds: must be >= 1");

    auto entryPoints = loadEntryPointsFile(entryPointsPath, base.global);
    if (!userType.empty()) {
        if (findUserBehavior(userType) == nullptr) {
            throw ConfigError("unknown user type '" + userType + "'");
        }
        for (auto& ep : entryPoints) ep.userTemplate.userType = userType;
    }

    fs::create_directories(outDir);
    std::uint64_t baseSeed = base.global.randomSeed ? *base.global.randomSeed : entropySeed();
    GreatCircleRouter router;

    const std::string header = "rate,seed,user_type,n,abandoned,ds,he,re,tt_min,ad,aet_min\n";
    std::ofstream all(fs::path(outDir) / "sweep_summary.csv");
    all << header;

    for (std::size_t ri = 0; ri < rates.size(); ++ri) {
        std::ostringstream name;
        name << "rate_" << rates[ri] << ".csv";
        std::ofstream perRate(fs::path(outDir) / name.str());
        perRate << header;

        for (int s = 0; s < seeds; ++s) {
            std::uint64_t runSeed = deriveSeed(baseSeed, ri * 1000 + static_cast<std::size_t>(s));
            auto eps = entryPoints;
            for (auto& ep : eps) ep.ratePerHour = rates[ri];
            Rng rng(runSeed);

            LoadedConfigs configs = base;
            configs.users = generateUsers(eps, configs.global, rng);
            configs.global.randomSeed = runSeed;
            configs.digests["global"] = fnv1aDigest(toJson(configs.global).dump());
            configs.digests["stations"] = fnv1aDigest(toJson(configs.stations).dump());
            configs.digests["users"] = fnv1aDigest(toJson(configs.users).dump());

            std::ostringstream history;
            runSimulation(configs, router, history);
            std::istringstream in(history.str());
            MetricsReport report = computeMetrics(readHistory(in));

            for (const auto& m : report.perType) {
                std::ostringstream row;
                row << rates[ri] << ',' << s << ',' << m.userType << ',' << m.counters.n << ','
                    << m.counters.abandoned << ',' << (m.ds ? formatCsvDouble(*m.ds) : "") << ','
                    << (m.he ? formatCsvDouble(*m.he) : "") << ','
                    << (m.re ? formatCsvDouble(*m.re) : "") << ','
                    << (m.ttMinutes ? formatCsvDouble(*m.ttMinutes) : "") << ','
                    << (report.adBikes ? formatCsvDouble(*report.adBikes) : "") << ','
                    << (report.aetMinutes ? formatCsvDouble(*report.aetMinutes) : "") << '\n';
                perRate << row.str();
                all << row.str();
            }
        }
    }
    std::cout << "sweep results in " << outDir << " (base seed " << baseSeed << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Station-based bike-sharing system simulator"};
    app.require_subcommand(1);

    std::string globalPath, stationsPath, usersPath, outDir;
    auto* simulate = app.add_subcommand("simulate", "Run one simulation");
    simulate->add_option("--global", globalPath, "Global config JSON")->required();
    simulate->add_option("--stations", stationsPath, "Stations config JSON")->required();
    simulate->add_option("--users", usersPath, "Users config JSON")->required();
    simulate->add_option("--out", outDir, "Output directory (default: global outputPath)");

    std::string historyPath, analyzeOut;
    auto* analyze = app.add_subcommand("analyze", "Recompute metrics from a stored history");
    analyze->add_option("--history", historyPath, "History JSON-lines file")->required();
    analyze->add_option("--out", analyzeOut, "Output directory")->required();

    std::string genGlobal, entryPointsPath, tripLogPath, genStations, genUserType, genOut;
    double ratePerHour = -1.0, jitterRadius = 200.0;
    auto* genUsers = app.add_subcommand("gen-users", "Generate a users config");
    genUsers->add_option("--global", genGlobal, "Global config JSON")->required();
    auto* epOpt = genUsers->add_option("--entry-points", entryPointsPath, "Entry points JSON");
    auto* tlOpt = genUsers->add_option("--trip-log", tripLogPath, "Trip log CSV");
    genUsers->add_option("--stations", genStations, "Stations config (trip-log mode)");
    genUsers->add_option("--user-type", genUserType, "User type (trip-log mode)");
    genUsers->add_option("--rate-per-hour", ratePerHour, "Override every entry point's rate");
    genUsers->add_option("--jitter-radius", jitterRadius,
                         "Position jitter around stations, meters (trip-log mode)");
    genUsers->add_option("--out", genOut, "Output users JSON")->required();
    epOpt->excludes(tlOpt);

    std::string sweepGlobal, sweepStations, sweepEntryPoints, ratesArg, sweepUserType, sweepOut;
    int seeds = 10;
    auto* sweep = app.add_subcommand("sweep", "Demand-rate sweep, one metrics CSV per rate");
    sweep->add_option("--global", sweepGlobal, "Global config JSON")->required();
    sweep->add_option("--stations", sweepStations, "Stations config JSON")->required();
    sweep->add_option("--entry-points", sweepEntryPoints, "Entry points JSON")->required();
    sweep->add_option("--rates", ratesArg, "Comma-separated users/hour rates")->required();
    sweep->add_option("--seeds", seeds, "Seeds per rate point (default 10)");
    sweep->add_option("--user-type", sweepUserType, "Override every entry point's user type");
    sweep->add_option("--out", sweepOut, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) return cmdSimulate(globalPath, stationsPath, usersPath, outDir);
        if (analyze->parsed()) return cmdAnalyze(historyPath, analyzeOut);
        if (genUsers->parsed()) {
            if (entryPointsPath.empty() && tripLogPath.empty()) {
                throw ConfigError("gen-users needs --entry-points or --trip-log");
            }
            return cmdGenUsers(genGlobal, entryPointsPath, tripLogPath, genStations, genUserType,
                               ratePerHour, jitterRadius, genOut);
        }
        if (sweep->parsed()) {
            return cmdSweep(sweepGlobal, sweepStations, sweepEntryPoints, ratesArg, seeds,
                            sweepUserType, sweepOut);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
