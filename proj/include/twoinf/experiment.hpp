#pragma once

#include "twoinf/bounds.hpp"
#include "twoinf/cluster.hpp"
#include "twoinf/generators.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace twoinf {

struct CalibrationConfig {
    int calibBegin = 0;
    int calibEnd = 100;
    int validBegin = 100;
    int validEnd = 300;
    double quantile = 0.99;
};

struct FilesScenario {
    std::string truth;
    std::string observed;
    bool symmetric = false;
    int hollow = 1; ///< hollow flag for the symmetrized estimator route
    int r = 1;
};

struct SweepConfig {
    std::string kind = "gaussian"; ///< gaussian (gamma x nu) | sbm (alpha x beta)
    std::vector<double> gammas, nus;
    std::vector<double> alphas, betas;
    int baseM = 256;  ///< gaussian: fixed m, n = m^gamma
    int baseN = 1024; ///< sbm: fixed n, rho = n^-alpha, m = n^beta
    int replicates = 30;
};

struct ExperimentConfig {
    std::string scenario = "gaussian"; ///< gaussian | sbm-slice | multilayer | matrix-files
    GaussianScenario gaussian;
    SbmModel sbm;
    MultilayerModel multilayer;
    FilesScenario files;
    std::vector<ClusterMode> modes{ClusterMode::Direct};
    std::vector<std::string> bounds;
    int replicates = 1;
    std::uint64_t masterSeed = 0;
    KMeansParams kmeans;
    CalibrationConfig calibration;
    SweepConfig sweep;
    std::string out;
    int threads = 1;
    int capN = 8192;
    int capL = 512;
    bool capOverride = false;
};

/// Parses and validates; collects every validation error before throwing
/// ConfigError with the full list.
ExperimentConfig configFromJson(const nlohmann::json& j);
/// Fully resolved config, defaults included.
nlohmann::json configToJson(const ExperimentConfig& cfg);

extern const std::vector<std::string> kBoundIds;
const std::vector<std::string>& boundTermLabels(const std::string& id);

struct BoundCell {
    bool ok = false;
    double value = 0;
    bool preconditionsMet = false;
    double empirical = 0;
    double ratio = 0;
    std::vector<BoundTerm> terms;
    std::string note;
};

struct ModeMetrics {
    double empirical2InfError = 0;
    double sinThetaSpectral = 0;
    std::optional<int> misclusterCount;
    std::optional<double> misclusterRate;
    std::optional<bool> certificateFired;
};

struct ReplicateRow {
    int replicateIndex = 0;
    std::uint64_t seed = 0;
    std::string mode;
    std::string status = "ok";
    std::optional<ModeMetrics> metrics;
    std::map<std::string, BoundCell> boundCells;
    double elapsedSec = 0; ///< summary only; never written to the CSV
};

struct ModeSummary {
    std::string mode;
    int okCount = 0;
    double meanError = 0;
    double maxError = 0;
    int perfectCount = 0;
    double perfectFreq = 0;
    double wilsonLo = 0;
    double wilsonHi = 0;
    double meanMisclusterRate = 0;
    int certifiedCount = 0;
    int certifiedWithErrors = 0;
};

struct BoundSummary {
    std::string id;
    int evaluated = 0;
    int preconditionsMetCount = 0;
    int violations = 0; ///< empirical > value among rows with preconditions met
};

struct ExperimentResult {
    std::vector<ReplicateRow> rows; ///< sorted by (replicate, mode)
    std::string csv;
    std::vector<ModeSummary> modeSummaries;
    std::vector<BoundSummary> boundSummaries;
    double elapsedSec = 0;
};

ExperimentResult runExperiment(const ExperimentConfig& cfg);

struct SweepCell {
    double p1 = 0, p2 = 0; ///< (gamma, nu) or (alpha, beta)
    int n = 0, m = 0;
    double sigma = 0, rho = 0;
    std::string mode;
    int replicatesOk = 0;
    int perfectCount = 0;
    double perfectFreq = 0;
    double wilsonLo = 0;
    double wilsonHi = 0;
    double meanMisclusterRate = 0;
};

struct SweepResult {
    std::vector<SweepCell> cells;
    std::string csv;
    std::vector<std::string> trendViolations; ///< interval-overlap trend check
};

SweepResult runRegimeSweep(const ExperimentConfig& base);

struct CalibrationOutcome {
    std::string boundId;
    double constant = 0;
    int calibCount = 0;
    int validCount = 0;
    int violations = 0;
    double violationFraction = 0;
    std::vector<std::string> failures; ///< zero bound with nonzero error
};

/// Fits the generic constant of a constant-free bound on the calibration
/// replicate range and validates on the disjoint validation range.
CalibrationOutcome calibrateConstant(const ExperimentConfig& cfg, const std::string& boundId);

/// 95% Wilson score interval for a binomial proportion.
double wilsonLower(int successes, int trials, double z = 1.959963984540054);
double wilsonUpper(int successes, int trials, double z = 1.959963984540054);

/// Upper empirical quantile, (N+1) convention: x_(ceil(q(N+1))) clamped to
/// the sample range.
double upperQuantile(std::vector<double> xs, double q);

} // namespace twoinf
