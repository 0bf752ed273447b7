#include "twoinf/experiment.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace twoinf {

using nlohmann::json;

const std::vector<std::string> kBoundIds = {"dk",   "thm2", "rankR", "thm3",
                                            "thm4", "thm5", "thm6"};

const std::vector<std::string>& boundTermLabels(const std::string& id) {
    static const std::map<std::string, std::vector<std::string>> labels = {
        {"dk", {"two_errnorm_over_gap"}},
        {"thm2", {"d0_epsU", "d0_d2inf_tail", "dEU"}},
        {"rankR", {"epsU_d1inf"}},
        {"thm3", {"e0_epsU", "e0_e1_sqrtR", "eEU", "tail"}},
        {"thm4", {"epsU_duv_d0sq", "dv2inf", "d0_d2inf_tail"}},
        {"thm5", {"xixiU", "xiXU", "duu0_epsU_E2inf", "tail_group", "hollow_epsY"}},
        {"thm6", {"tdel1", "epsU_tdel1U"}},
    };
    auto it = labels.find(id);
    if (it == labels.end()) throw ConfigError("unknown bound id: " + id);
    return it->second;
}

namespace {

struct Parser {
    std::vector<std::string> errs;

    void fail(const std::string& path, const std::string& msg) {
        errs.push_back(path + ": " + msg);
    }

    const json* object(const json& j, const std::string& path) {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return nullptr;
        }
        return &j;
    }

    void checkKeys(const json& j, const std::string& path,
                   const std::set<std::string>& allowed) {
        if (!j.is_object()) return;
        for (auto it = j.begin(); it != j.end(); ++it)
            if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
    }

    template <typename T>
    void get(const json& j, const std::string& path, const char* key, T& out) {
        if (!j.contains(key)) return;
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception&) {
            fail(path + "." + key, "wrong type");
        }
    }
};

void parseGaussian(Parser& p, const json& j, GaussianScenario& g) {
    p.checkKeys(j, "gaussian",
                {"n", "m", "r", "theta", "sigma", "cSigma", "orthBlend", "imbalance",
                 "maxRetries", "gamma", "nu"});
    p.get(j, "gaussian", "n", g.n);
    p.get(j, "gaussian", "m", g.m);
    p.get(j, "gaussian", "r", g.r);
    p.get(j, "gaussian", "theta", g.theta);
    p.get(j, "gaussian", "sigma", g.sigma);
    p.get(j, "gaussian", "cSigma", g.cSigma);
    p.get(j, "gaussian", "orthBlend", g.orthBlend);
    p.get(j, "gaussian", "imbalance", g.imbalance);
    p.get(j, "gaussian", "maxRetries", g.maxRetries);
    if (j.contains("gamma")) {
        double v = 0;
        p.get(j, "gaussian", "gamma", v);
        g.gamma = v;
    }
    if (j.contains("nu")) {
        double v = 0;
        p.get(j, "gaussian", "nu", v);
        g.nu = v;
    }
}

void parseSbm(Parser& p, const json& j, SbmModel& s) {
    p.checkKeys(j, "sbm",
                {"n", "r", "rho", "b", "sampleSize", "imbalance", "cSigma", "maxRetries"});
    p.get(j, "sbm", "n", s.n);
    p.get(j, "sbm", "r", s.r);
    p.get(j, "sbm", "rho", s.rho);
    p.get(j, "sbm", "b", s.b);
    p.get(j, "sbm", "sampleSize", s.sampleSize);
    p.get(j, "sbm", "imbalance", s.imbalance);
    p.get(j, "sbm", "cSigma", s.cSigma);
    p.get(j, "sbm", "maxRetries", s.maxRetries);
}

void parseMultilayer(Parser& p, const json& j, MultilayerModel& m) {
    p.checkKeys(j, "multilayer",
                {"n", "L", "M", "kDim", "kPerGroup", "rho", "bLow", "bHigh", "cLambda",
                 "useExpectedAdjacency", "storeLayers"});
    p.get(j, "multilayer", "n", m.n);
    p.get(j, "multilayer", "L", m.L);
    p.get(j, "multilayer", "M", m.M);
    p.get(j, "multilayer", "kDim", m.kDim);
    p.get(j, "multilayer", "kPerGroup", m.kPerGroup);
    p.get(j, "multilayer", "rho", m.rho);
    p.get(j, "multilayer", "bLow", m.bLow);
    p.get(j, "multilayer", "bHigh", m.bHigh);
    p.get(j, "multilayer", "cLambda", m.cLambda);
    p.get(j, "multilayer", "useExpectedAdjacency", m.useExpectedAdjacency);
    p.get(j, "multilayer", "storeLayers", m.storeLayers);
}

void parseFiles(Parser& p, const json& j, FilesScenario& f) {
    p.checkKeys(j, "files", {"truth", "observed", "symmetric", "hollow", "r"});
    p.get(j, "files", "truth", f.truth);
    p.get(j, "files", "observed", f.observed);
    p.get(j, "files", "symmetric", f.symmetric);
    p.get(j, "files", "hollow", f.hollow);
    p.get(j, "files", "r", f.r);
}

void parseSweep(Parser& p, const json& j, SweepConfig& s) {
    p.checkKeys(j, "sweep",
                {"kind", "gammas", "nus", "alphas", "betas", "baseM", "baseN", "replicates"});
    p.get(j, "sweep", "kind", s.kind);
    p.get(j, "sweep", "gammas", s.gammas);
    p.get(j, "sweep", "nus", s.nus);
    p.get(j, "sweep", "alphas", s.alphas);
    p.get(j, "sweep", "betas", s.betas);
    p.get(j, "sweep", "baseM", s.baseM);
    p.get(j, "sweep", "baseN", s.baseN);
    p.get(j, "sweep", "replicates", s.replicates);
}

} // namespace

ExperimentConfig configFromJson(const json& j) {
    Parser p;
    ExperimentConfig c;
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    p.checkKeys(j, "config",
                {"scenario", "gaussian", "sbm", "multilayer", "files", "modes", "bounds",
                 "replicates", "masterSeed", "kmeans", "calibration", "sweep", "out",
                 "threads", "caps"});
    p.get(j, "config", "scenario", c.scenario);
    p.get(j, "config", "replicates", c.replicates);
    p.get(j, "config", "masterSeed", c.masterSeed);
    p.get(j, "config", "out", c.out);
    p.get(j, "config", "threads", c.threads);

    if (j.contains("gaussian")) parseGaussian(p, j.at("gaussian"), c.gaussian);
    if (j.contains("sbm")) parseSbm(p, j.at("sbm"), c.sbm);
    if (j.contains("multilayer")) parseMultilayer(p, j.at("multilayer"), c.multilayer);
    if (j.contains("files")) parseFiles(p, j.at("files"), c.files);
    if (j.contains("sweep")) parseSweep(p, j.at("sweep"), c.sweep);

    if (j.contains("modes")) {
        std::vector<std::string> names;
        p.get(j, "config", "modes", names);
        c.modes.clear();
        for (const auto& nm : names) {
            try {
                c.modes.push_back(clusterModeFromString(nm));
            } catch (const ConfigError& e) {
                p.fail("modes", e.what());
            }
        }
    }
    if (j.contains("bounds")) {
        p.get(j, "config", "bounds", c.bounds);
        for (const auto& id : c.bounds)
            if (std::find(kBoundIds.begin(), kBoundIds.end(), id) == kBoundIds.end())
                p.fail("bounds", "unknown bound id: " + id);
    }
    if (j.contains("kmeans")) {
        const json& k = j.at("kmeans");
        p.checkKeys(k, "kmeans", {"restarts", "maxIters", "a"});
        p.get(k, "kmeans", "restarts", c.kmeans.restarts);
        p.get(k, "kmeans", "maxIters", c.kmeans.maxIters);
        p.get(k, "kmeans", "a", c.kmeans.a);
    }
    if (j.contains("calibration")) {
        const json& k = j.at("calibration");
        p.checkKeys(k, "calibration",
                    {"calibBegin", "calibEnd", "validBegin", "validEnd", "quantile"});
        p.get(k, "calibration", "calibBegin", c.calibration.calibBegin);
        p.get(k, "calibration", "calibEnd", c.calibration.calibEnd);
        p.get(k, "calibration", "validBegin", c.calibration.validBegin);
        p.get(k, "calibration", "validEnd", c.calibration.validEnd);
        p.get(k, "calibration", "quantile", c.calibration.quantile);
    }
    if (j.contains("caps")) {
        const json& k = j.at("caps");
        p.checkKeys(k, "caps", {"n", "L", "override"});
        p.get(k, "caps", "n", c.capN);
        p.get(k, "caps", "L", c.capL);
        p.get(k, "caps", "override", c.capOverride);
    }

    // Semantic validation; every problem is reported, not just the first.
    const std::set<std::string> scenarios = {"gaussian", "sbm-slice", "multilayer",
                                             "matrix-files"};
    if (!scenarios.count(c.scenario)) p.fail("scenario", "unknown scenario: " + c.scenario);
    if (c.replicates < 1) p.fail("replicates", "must be >= 1");
    if (c.threads < 1) p.fail("threads", "must be >= 1");
    if (c.modes.empty()) p.fail("modes", "at least one mode required");
    if (c.kmeans.restarts < 1) p.fail("kmeans.restarts", "must be >= 1");
    if (c.kmeans.maxIters < 1) p.fail("kmeans.maxIters", "must be >= 1");
    if (c.kmeans.a <= 0) p.fail("kmeans.a", "must be > 0");
    if (c.calibration.quantile <= 0 || c.calibration.quantile > 1)
        p.fail("calibration.quantile", "must be in (0, 1]");
    if (c.calibration.calibBegin >= c.calibration.calibEnd)
        p.fail("calibration", "empty calibration range");
    if (c.calibration.validBegin >= c.calibration.validEnd)
        p.fail("calibration", "empty validation range");
    if (std::max(c.calibration.calibBegin, c.calibration.validBegin) <
        std::min(c.calibration.calibEnd, c.calibration.validEnd))
        p.fail("calibration", "calibration and validation seed ranges overlap");
    if (!c.capOverride) {
        int n = c.scenario == "gaussian" ? std::max(c.gaussian.n, c.gaussian.m)
                : c.scenario == "sbm-slice" ? c.sbm.n
                : c.scenario == "multilayer" ? c.multilayer.n
                                             : 0;
        if (n > c.capN)
            p.fail("caps", "n exceeds the desk-scale cap (set caps.override to force)");
        if (c.scenario == "multilayer" && c.multilayer.L > c.capL)
            p.fail("caps", "L exceeds the desk-scale cap (set caps.override to force)");
    }
    if (c.scenario == "matrix-files") {
        if (c.files.truth.empty()) p.fail("files.truth", "path required");
        if (c.files.observed.empty()) p.fail("files.observed", "path required");
        if (c.files.r < 1) p.fail("files.r", "must be >= 1");
        if (c.files.hollow != 0 && c.files.hollow != 1) p.fail("files.hollow", "must be 0 or 1");
        if (c.replicates != 1) p.fail("replicates", "matrix-files scenario is single-replicate");
    }

    if (!p.errs.empty()) {
        std::ostringstream os;
        os << "config validation failed (" << p.errs.size() << " errors):";
        for (const auto& e : p.errs) os << "\n  - " << e;
        throw ConfigError(os.str());
    }
    return c;
}

json configToJson(const ExperimentConfig& c) {
    json j;
    j["scenario"] = c.scenario;
    j["replicates"] = c.replicates;
    j["masterSeed"] = c.masterSeed;
    j["out"] = c.out;
    j["threads"] = c.threads;
    std::vector<std::string> modeNames;
    for (auto m : c.modes) modeNames.push_back(toString(m));
    j["modes"] = modeNames;
    j["bounds"] = c.bounds;
    j["kmeans"] = {{"restarts", c.kmeans.restarts},
                   {"maxIters", c.kmeans.maxIters},
                   {"a", c.kmeans.a}};
    j["calibration"] = {{"calibBegin", c.calibration.calibBegin},
                        {"calibEnd", c.calibration.calibEnd},
                        {"validBegin", c.calibration.validBegin},
                        {"validEnd", c.calibration.validEnd},
                        {"quantile", c.calibration.quantile}};
    j["caps"] = {{"n", c.capN}, {"L", c.capL}, {"override", c.capOverride}};
    json g = {{"n", c.gaussian.n},         {"m", c.gaussian.m},
              {"r", c.gaussian.r},         {"theta", c.gaussian.theta},
              {"sigma", c.gaussian.sigma}, {"cSigma", c.gaussian.cSigma},
              {"orthBlend", c.gaussian.orthBlend}, {"imbalance", c.gaussian.imbalance},
              {"maxRetries", c.gaussian.maxRetries}};
    if (c.gaussian.gamma) g["gamma"] = *c.gaussian.gamma;
    if (c.gaussian.nu) g["nu"] = *c.gaussian.nu;
    j["gaussian"] = g;
    j["sbm"] = {{"n", c.sbm.n},
                {"r", c.sbm.r},
                {"rho", c.sbm.rho},
                {"b", c.sbm.b},
                {"sampleSize", c.sbm.sampleSize},
                {"imbalance", c.sbm.imbalance},
                {"cSigma", c.sbm.cSigma},
                {"maxRetries", c.sbm.maxRetries}};
    j["multilayer"] = {{"n", c.multilayer.n},
                       {"L", c.multilayer.L},
                       {"M", c.multilayer.M},
                       {"kDim", c.multilayer.kDim},
                       {"kPerGroup", c.multilayer.kPerGroup},
                       {"rho", c.multilayer.rho},
                       {"bLow", c.multilayer.bLow},
                       {"bHigh", c.multilayer.bHigh},
                       {"cLambda", c.multilayer.cLambda},
                       {"useExpectedAdjacency", c.multilayer.useExpectedAdjacency},
                       {"storeLayers", c.multilayer.storeLayers}};
    j["files"] = {{"truth", c.files.truth},
                  {"observed", c.files.observed},
                  {"symmetric", c.files.symmetric},
                  {"hollow", c.files.hollow},
                  {"r", c.files.r}};
    j["sweep"] = {{"kind", c.sweep.kind},     {"gammas", c.sweep.gammas},
                  {"nus", c.sweep.nus},       {"alphas", c.sweep.alphas},
                  {"betas", c.sweep.betas},   {"baseM", c.sweep.baseM},
                  {"baseN", c.sweep.baseN},   {"replicates", c.sweep.replicates}};
    return j;
}

} // namespace twoinf
