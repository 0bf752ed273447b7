#include "twoinf/experiment.hpp"
#include "twoinf/matrix_io.hpp"

#include <doctest.h>

#include <json.hpp>

#include <sstream>

using namespace twoinf;
using nlohmann::json;

namespace {

ExperimentConfig smallGaussianConfig() {
    json j = {
        {"scenario", "gaussian"},
        {"replicates", 4},
        {"masterSeed", 42},
        {"modes", {"direct", "symmetrized-hollow"}},
        {"bounds", {"dk", "thm2", "rankR", "thm3", "thm4", "thm5", "thm6"}},
        {"gaussian", {{"n", 36}, {"m", 30}, {"r", 2}, {"theta", 1.0}, {"sigma", 0.4}}},
    };
    return configFromJson(j);
}

} // namespace

TEST_CASE("config validation reports every error at once") {
    json j = {
        {"scenario", "nope"},
        {"replicates", 0},
        {"threads", 0},
        {"bogus", 1},
        {"modes", json::array()},
    };
    try {
        configFromJson(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        std::string msg = e.what();
        CHECK(msg.find("unknown scenario") != std::string::npos);
        CHECK(msg.find("replicates") != std::string::npos);
        CHECK(msg.find("threads") != std::string::npos);
        CHECK(msg.find("bogus") != std::string::npos);
        CHECK(msg.find("at least one mode") != std::string::npos);
    }
}

TEST_CASE("config resolves defaults and round-trips through JSON") {
    ExperimentConfig c = configFromJson(json{{"scenario", "gaussian"}});
    json j = configToJson(c);
    ExperimentConfig c2 = configFromJson(j);
    CHECK(configToJson(c2) == j);
    CHECK(c.kmeans.restarts == 20);
    CHECK(c.calibration.quantile == doctest::Approx(0.99));
}

TEST_CASE("desk-scale caps are enforced unless overridden") {
    json j = {{"scenario", "gaussian"}, {"gaussian", {{"n", 10000}, {"m", 50}, {"r", 2}}}};
    CHECK_THROWS_AS(configFromJson(j), ConfigError);
    j["caps"] = {{"override", true}};
    CHECK_NOTHROW(configFromJson(j));
}

TEST_CASE("runExperiment produces a full rectangular CSV with stable schema") {
    ExperimentConfig cfg = smallGaussianConfig();
    ExperimentResult res = runExperiment(cfg);
    CHECK(res.rows.size() == 8); // replicates x modes
    std::istringstream is(res.csv);
    std::string header;
    std::getline(is, header);
    CHECK(header.find("replicate,seed,mode,status,empirical2InfError") == 0);
    CHECK(header.find("bound.thm2.value") != std::string::npos);
    CHECK(header.find("bound.thm2.term.d0_epsU") != std::string::npos);
    CHECK(header.find("bound.thm6.term.epsU_tdel1U") != std::string::npos);
    int lines = 0;
    std::string line;
    size_t cols = static_cast<size_t>(std::count(header.begin(), header.end(), ',')) + 1;
    while (std::getline(is, line)) {
        ++lines;
        CHECK(static_cast<size_t>(std::count(line.begin(), line.end(), ',')) + 1 == cols);
    }
    CHECK(lines == 8);
}

TEST_CASE("determinism: same seed twice and 1 vs 4 threads give identical CSV") {
    ExperimentConfig cfg = smallGaussianConfig();
    cfg.threads = 1;
    ExperimentResult a = runExperiment(cfg);
    ExperimentResult b = runExperiment(cfg);
    CHECK(a.csv == b.csv);
    cfg.threads = 4;
    ExperimentResult c = runExperiment(cfg);
    CHECK(a.csv == c.csv);
}

TEST_CASE("noiseless replicate reports zero error and zero misclustering") {
    json j = {
        {"scenario", "gaussian"},
        {"replicates", 1},
        {"masterSeed", 7},
        {"modes", {"direct"}},
        {"gaussian", {{"n", 30}, {"m", 20}, {"r", 2}, {"sigma", 0.0}}},
    };
    ExperimentResult res = runExperiment(configFromJson(j));
    REQUIRE(res.rows.size() == 1);
    REQUIRE(res.rows[0].metrics.has_value());
    CHECK(res.rows[0].metrics->empirical2InfError < 1e-8);
    CHECK(*res.rows[0].metrics->misclusterCount == 0);
}

TEST_CASE("theorem-2 non-violation shows up in the bound summary") {
    ExperimentConfig cfg = smallGaussianConfig();
    cfg.replicates = 8;
    ExperimentResult res = runExperiment(cfg);
    for (const auto& bs : res.boundSummaries) {
        if (bs.id == "thm2" || bs.id == "dk" || bs.id == "rankR") {
            CHECK(bs.violations == 0);
        }
    }
}

TEST_CASE("sbm-slice scenario runs end to end with bounds") {
    json j = {
        {"scenario", "sbm-slice"},
        {"replicates", 2},
        {"masterSeed", 3},
        {"modes", {"direct", "symmetrized-hollow"}},
        {"bounds", {"thm4", "thm5", "thm6"}},
        {"sbm",
         {{"n", 200}, {"r", 2}, {"rho", 0.25}, {"b", 0.3}, {"sampleSize", 40}}},
    };
    ExperimentResult res = runExperiment(configFromJson(j));
    CHECK(res.rows.size() == 4);
    for (const auto& row : res.rows) CHECK(row.status == "ok");
}

TEST_CASE("multilayer scenario runs end to end") {
    json j = {
        {"scenario", "multilayer"},
        {"replicates", 2},
        {"masterSeed", 5},
        {"modes", {"direct"}},
        {"multilayer",
         {{"n", 40}, {"L", 9}, {"M", 3}, {"kDim", 2}, {"rho", 0.5}}},
    };
    ExperimentResult res = runExperiment(configFromJson(j));
    CHECK(res.rows.size() == 2);
    for (const auto& row : res.rows) {
        CHECK(row.status == "ok");
        REQUIRE(row.metrics.has_value());
        CHECK(row.metrics->misclusterCount.has_value());
    }
}

TEST_CASE("matrix-files scenario evaluates bounds from disk") {
    Matrix X(6, 4);
    X.setZero();
    X(0, 0) = 4;
    X(1, 1) = 3;
    for (int i = 2; i < 6; ++i) X(i, 2) = 1.0;
    Matrix Xhat = X;
    Xhat(0, 1) = 0.1;
    writeCsvMatrix("tf_truth.csv", X);
    writeCsvMatrix("tf_obs.csv", Xhat);
    json j = {
        {"scenario", "matrix-files"},
        {"replicates", 1},
        {"modes", {"direct"}},
        {"bounds", {"thm4"}},
        {"files",
         {{"truth", "tf_truth.csv"}, {"observed", "tf_obs.csv"}, {"r", 2}, {"hollow", 0}}},
    };
    ExperimentResult res = runExperiment(configFromJson(j));
    REQUIRE(res.rows.size() == 1);
    CHECK(res.rows[0].status == "ok");
    auto it = res.rows[0].boundCells.find("thm4");
    REQUIRE(it != res.rows[0].boundCells.end());
    CHECK(it->second.ok);
    CHECK(it->second.value > 0.0);
    std::remove("tf_truth.csv");
    std::remove("tf_obs.csv");
}

TEST_CASE("generator failures become status rows without dropping rows") {
    // S of size 3 can never cover 4 communities, so every replicate fails.
    json j = {
        {"scenario", "sbm-slice"},
        {"replicates", 3},
        {"masterSeed", 17},
        {"modes", {"direct", "symmetrized-hollow"}},
        {"sbm",
         {{"n", 12}, {"r", 4}, {"rho", 0.5}, {"sampleSize", 3}, {"maxRetries", 5}}},
    };
    ExperimentResult res = runExperiment(configFromJson(j));
    CHECK(res.rows.size() == 6); // replicates x modes, failures included
    for (const auto& row : res.rows) {
        CHECK(row.status.rfind("error:", 0) == 0);
        CHECK_FALSE(row.metrics.has_value());
    }
    std::istringstream is(res.csv);
    std::string line;
    int lines = -1; // skip header
    while (std::getline(is, line)) ++lines;
    CHECK(lines == 6);
}

TEST_CASE("wilson interval and upper quantile behave sanely") {
    CHECK(wilsonLower(100, 100) > 0.95);
    CHECK(wilsonUpper(0, 100) < 0.05);
    CHECK(wilsonLower(0, 0) == 0.0);
    std::vector<double> xs;
    for (int i = 1; i <= 100; ++i) xs.push_back(i / 100.0);
    double q = upperQuantile(xs, 0.99);
    CHECK(q <= 1.0); // never exceeds the sample maximum
    CHECK(q >= 0.99);
    CHECK(upperQuantile({0.5}, 0.99) == doctest::Approx(0.5));
}

TEST_CASE("calibrateConstant on a noiseless scenario returns zero") {
    json j = {
        {"scenario", "gaussian"},
        {"replicates", 1},
        {"masterSeed", 11},
        {"modes", {"direct"}},
        {"gaussian", {{"n", 24}, {"m", 16}, {"r", 2}, {"sigma", 0.0}}},
        {"calibration",
         {{"calibBegin", 0}, {"calibEnd", 50}, {"validBegin", 50}, {"validEnd", 60}}},
    };
    ExperimentConfig cfg = configFromJson(j);
    CalibrationOutcome out = calibrateConstant(cfg, "thm4");
    CHECK(out.constant == doctest::Approx(0.0));
    CHECK(out.violations == 0);
    CHECK(out.failures.empty());
}

TEST_CASE("calibrateConstant fitted constant never exceeds the max ratio") {
    json j = {
        {"scenario", "gaussian"},
        {"replicates", 1},
        {"masterSeed", 12},
        {"modes", {"direct"}},
        {"gaussian", {{"n", 24}, {"m", 16}, {"r", 2}, {"sigma", 0.3}}},
        {"calibration",
         {{"calibBegin", 0}, {"calibEnd", 60}, {"validBegin", 60}, {"validEnd", 80}}},
    };
    ExperimentConfig cfg = configFromJson(j);
    CalibrationOutcome out = calibrateConstant(cfg, "thm4");
    CHECK(out.calibCount == 60);
    CHECK(out.validCount == 20);
    CHECK(out.constant > 0.0);
    CHECK_THROWS_AS(calibrateConstant(cfg, "thm2"), ConfigError);
}

TEST_CASE("regime sweep emits one row per cell per mode with trend checks") {
    json j = {
        {"scenario", "gaussian"},
        {"replicates", 1},
        {"masterSeed", 21},
        {"modes", {"direct"}},
        {"gaussian", {{"r", 2}}},
        {"sweep",
         {{"kind", "gaussian"},
          {"gammas", {1.0}},
          {"nus", {-0.5, 0.0, 1.0}},
          {"baseM", 48},
          {"replicates", 6}}},
    };
    ExperimentConfig cfg = configFromJson(j);
    SweepResult res = runRegimeSweep(cfg);
    CHECK(res.cells.size() == 3);
    CHECK(res.cells[0].p2 < res.cells[1].p2);
    // Deep-interior cell clusters perfectly; the deep-exterior one does not.
    CHECK(res.cells[0].perfectFreq == doctest::Approx(1.0));
    CHECK(res.cells[2].perfectFreq <= 0.2);
    std::istringstream is(res.csv);
    std::string header;
    std::getline(is, header);
    CHECK(header.find("kind,p1,p2,n,m,sigma,rho,mode") == 0);
}
