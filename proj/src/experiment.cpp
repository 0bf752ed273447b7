#include "twoinf/experiment.hpp"
#include "twoinf/matrix.hpp"
#include "twoinf/matrix_io.hpp"
#include "twoinf/profiles.hpp"
#include "twoinf/subspace.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace twoinf {

double wilsonLower(int successes, int trials, double z) {
    if (trials <= 0) return 0.0;
    double p = static_cast<double>(successes) / trials;
    double z2 = z * z, n = trials;
    double denom = 1.0 + z2 / n;
    double center = p + z2 / (2 * n);
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    return std::max(0.0, (center - half) / denom);
}

double wilsonUpper(int successes, int trials, double z) {
    if (trials <= 0) return 1.0;
    double p = static_cast<double>(successes) / trials;
    double z2 = z * z, n = trials;
    double denom = 1.0 + z2 / n;
    double center = p + z2 / (2 * n);
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    return std::min(1.0, (center + half) / denom);
}

double upperQuantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw DomainError("upperQuantile: empty sample");
    std::sort(xs.begin(), xs.end());
    const auto n = static_cast<double>(xs.size());
    auto k = static_cast<long>(std::ceil(q * (n + 1.0)));
    k = std::max<long>(1, std::min<long>(k, static_cast<long>(xs.size())));
    return xs[static_cast<size_t>(k - 1)];
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Floating-point floor below which an empirical error counts as zero.
constexpr double kZeroTol = 1e-12;

struct Instance {
    Matrix X, Xhat;       // rectangular observation (generated scenarios)
    Matrix Ysym, Yhat;    // symmetric matrix-files route
    bool symmetricInput = false;
    std::optional<ClusterModel> model;
    Matrix U;             // truth left basis
    Vector d;             // singular values of X (or sqrt eigenvalues)
    Matrix V;             // truth right basis (empty for symmetric input)
    double dR1 = 0;       // d_{r+1} of X
    int r = 0;
    AssumptionKnobs knobs;
    int hRule = 0;        // hollow flag for the symmetric bound family
    double noiseVarEstimate = 0;
};

int nominalHollow(const ExperimentConfig& cfg) {
    for (auto m : cfg.modes)
        if (m == ClusterMode::SymmetrizedHollow) return 1;
    for (auto m : cfg.modes)
        if (m == ClusterMode::Symmetrized) return 0;
    if (cfg.scenario == "gaussian")
        return (cfg.gaussian.sigma > 0 &&
                cfg.gaussian.sigma * cfg.gaussian.sigma >
                    cfg.gaussian.theta * cfg.gaussian.theta)
                   ? 1
                   : 0;
    if (cfg.scenario == "matrix-files") return cfg.files.hollow;
    return 1; // sparse network scenarios hollow by default
}

Instance makeInstance(const ExperimentConfig& cfg, std::uint64_t seed) {
    Instance inst;
    inst.hRule = nominalHollow(cfg);
    if (cfg.scenario == "gaussian") {
        GaussianScenario s = cfg.gaussian;
        s.seed = seed;
        GaussianInstance g = genGaussianMixture(s);
        inst.X = std::move(g.X);
        inst.Xhat = std::move(g.Xhat);
        inst.model = std::move(g.model);
        inst.U = std::move(g.U);
        inst.d = std::move(g.d);
        inst.V = std::move(g.V);
        inst.r = s.r;
        GaussianRates rates = gaussianRateProfile(s.n, s.m, s.r, s.sigma, s.theta);
        inst.knobs.eps1 = inst.knobs.tEps1 = rates.eps1;
        inst.knobs.eps2 = inst.knobs.tEps2 = rates.eps2;
        inst.noiseVarEstimate = s.sigma * s.sigma;
    } else if (cfg.scenario == "sbm-slice") {
        SbmModel s = cfg.sbm;
        s.seed = seed;
        SbmSliceInstance g = genSbmSlice(s);
        inst.X = std::move(g.X);
        inst.Xhat = std::move(g.Xhat);
        inst.model = std::move(g.model);
        inst.U = std::move(g.U);
        inst.d = std::move(g.d);
        inst.V = std::move(g.V);
        inst.r = s.r;
        AssumptionKnobs k = bernsteinKnobs(s.rho, 1.0, s.n, inst.d(inst.r - 1));
        inst.knobs = k;
        inst.noiseVarEstimate = s.rho * (1.0 - s.rho);
    } else if (cfg.scenario == "multilayer") {
        MultilayerModel s = cfg.multilayer;
        s.seed = seed;
        s.storeLayers = false;
        MultilayerInstance g = genMultilayer(s);
        inst.Xhat = std::move(g.Xhat);
        inst.model = std::move(g.model);
        inst.U = std::move(g.U);
        inst.d = std::move(g.d);
        inst.V = std::move(g.V);
        inst.r = s.M;
        // Truth rows are cheap to expand from theta.
        inst.X.resize(g.theta.rows() == 0 ? 0 : inst.Xhat.rows(), inst.Xhat.cols());
        for (int l = 0; l < inst.Xhat.rows(); ++l)
            inst.X.row(l) = g.theta.row(inst.model->z[static_cast<size_t>(l)]);
        // Row-action knobs fall back to the empirical profile later.
        inst.knobs = AssumptionKnobs{};
        inst.noiseVarEstimate = (inst.Xhat - inst.X).squaredNorm() /
                                static_cast<double>(inst.Xhat.size());
    } else { // matrix-files
        Matrix T = readMatrixAuto(cfg.files.truth);
        Matrix O = readMatrixAuto(cfg.files.observed);
        inst.r = cfg.files.r;
        if (cfg.files.symmetric) {
            inst.symmetricInput = true;
            inst.Ysym = std::move(T);
            inst.Yhat = std::move(O);
            SpectralPair truth = leadingEigs(inst.Ysym, inst.r);
            inst.U = truth.basis;
            inst.d = truth.spectrum.cwiseMax(0.0).cwiseSqrt();
            inst.dR1 = truth.nextValue > 0 ? std::sqrt(truth.nextValue) : 0.0;
        } else {
            inst.X = std::move(T);
            inst.Xhat = std::move(O);
            SpectralPair truth = svdR(inst.X, inst.r);
            inst.U = truth.basis;
            inst.d = truth.spectrum;
            inst.V = *truth.coBasis;
            inst.dR1 = truth.nextValue;
        }
        inst.hRule = cfg.files.hollow;
        inst.noiseVarEstimate = 1.0;
    }
    return inst;
}

struct EmbeddingCache {
    const Instance& inst;
    std::optional<Matrix> direct, sym0, sym1;

    explicit EmbeddingCache(const Instance& i) : inst(i) {}

    const Matrix& directBasis() {
        if (!direct) {
            if (inst.symmetricInput)
                direct = leadingEigs(inst.Yhat, inst.r).basis;
            else
                direct = svdRLeftOnly(inst.Xhat, inst.r).basis;
        }
        return *direct;
    }

    const Matrix& symBasis(int h) {
        auto& slot = h ? sym1 : sym0;
        if (!slot) {
            if (inst.symmetricInput) return directBasis();
            slot = leadingEigs(symmetrizeEstimate(inst.Xhat, h), inst.r).basis;
        }
        return *slot;
    }

    const Matrix& forMode(ClusterMode m) {
        switch (m) {
            case ClusterMode::Direct: return directBasis();
            case ClusterMode::Symmetrized: return symBasis(0);
            case ClusterMode::SymmetrizedHollow: return symBasis(1);
        }
        return directBasis();
    }
};

// The estimator each bound family certifies; its aligned error (or sin-theta)
// is what the bound is compared against.
bool isSymmetricFamily(const std::string& id) {
    return id == "dk" || id == "thm2" || id == "rankR" || id == "thm3";
}

std::vector<ClusterMode> canonicalModeOrder(const std::vector<ClusterMode>& modes) {
    std::vector<ClusterMode> out = modes;
    std::sort(out.begin(), out.end(), [](ClusterMode a, ClusterMode b) {
        return toString(a) < toString(b);
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ReplicateRow> computeReplicateRows(const ExperimentConfig& cfg, int k) {
    auto t0 = std::chrono::steady_clock::now();
    std::uint64_t seed = deriveSeed(cfg.masterSeed, static_cast<std::uint64_t>(k), 0x1457EEDULL);
    std::vector<ClusterMode> modes = canonicalModeOrder(cfg.modes);
    std::vector<ReplicateRow> rows(modes.size());
    for (size_t mi = 0; mi < modes.size(); ++mi) {
        rows[mi].replicateIndex = k;
        rows[mi].seed = seed;
        rows[mi].mode = toString(modes[mi]);
    }

    std::optional<Instance> instOpt;
    try {
        instOpt = makeInstance(cfg, seed);
    } catch (const Error& e) {
        for (auto& r : rows) r.status = std::string("error: ") + e.what();
        return rows;
    }
    Instance& inst = *instOpt;
    EmbeddingCache cache(inst);

    for (size_t mi = 0; mi < modes.size(); ++mi) {
        ReplicateRow& row = rows[mi];
        try {
            const Matrix& Uhat = cache.forMode(modes[mi]);
            ModeMetrics mm;
            mm.empirical2InfError = alignedTwoInfError(inst.U, Uhat);
            mm.sinThetaSpectral = sinTheta(inst.U, Uhat, SinThetaFlavor::Spectral);
            if (inst.model) {
                KMeansParams kp = cfg.kmeans;
                kp.seed = deriveSeed(cfg.masterSeed, static_cast<std::uint64_t>(k), 0xADF0ULL,
                                     static_cast<std::uint64_t>(modes[mi]));
                ClusterResult cr = approxKMeans(Uhat, inst.r, kp);
                mm.misclusterCount = misclusterCount(cr.zhat, inst.model->z, inst.r);
                mm.misclusterRate =
                    static_cast<double>(*mm.misclusterCount) / inst.model->n();
                try {
                    Certificate cert = perfectClusteringCertificate(Uhat, inst.U, *inst.model);
                    mm.certificateFired = cert.certified;
                } catch (const Error&) {
                    mm.certificateFired = std::nullopt;
                }
            }
            row.metrics = mm;
        } catch (const Error& e) {
            row.status = std::string("error: ") + e.what();
        }
    }

    if (cfg.bounds.empty()) {
        auto t1 = std::chrono::steady_clock::now();
        for (auto& r : rows) r.elapsedSec = std::chrono::duration<double>(t1 - t0).count();
        return rows;
    }

    // Bound evaluation is replicate-level; the same cells repeat on each
    // mode row so the CSV schema stays rectangular.
    std::map<std::string, BoundCell> cells;
    std::optional<SymErrorProfile> symProf;
    std::optional<NonsymErrorProfile> nonsymProf;
    std::optional<SymmetrizedProfile> symzProf;
    double symErrNorm = 0;

    auto buildSymProfile = [&]() {
        if (symProf) return;
        if (inst.symmetricInput) {
            symProf = symErrorProfile(inst.Ysym, inst.Yhat, inst.r);
            symErrNorm = symProf->delta0 * std::abs(symProf->lamR);
        } else {
            SpectralPair truthY;
            truthY.basis = inst.U;
            truthY.spectrum = inst.d.array().square();
            truthY.nextValue = inst.dR1 * inst.dR1;
            Matrix Y = inst.X * inst.X.transpose();
            Matrix E = symmetrizeEstimate(inst.Xhat, inst.hRule) - Y;
            symProf = symErrorProfileFromPair(truthY, E);
            symErrNorm = symProf->delta0 * std::abs(symProf->lamR);
        }
    };
    auto buildNonsymProfile = [&]() {
        if (nonsymProf || inst.symmetricInput) return;
        SpectralPair truthX;
        truthX.basis = inst.U;
        truthX.spectrum = inst.d;
        truthX.coBasis = inst.V;
        truthX.nextValue = inst.dR1;
        nonsymProf = nonsymErrorProfileFromPair(truthX, inst.Xhat - inst.X);
        if (cfg.scenario == "multilayer" || cfg.scenario == "matrix-files") {
            // The row-action knobs always admit tEps1 = tDelta2Inf, tEps2 = 0.
            inst.knobs.tEps1 = inst.knobs.eps1 = nonsymProf->tDelta2Inf;
            inst.knobs.tEps2 = inst.knobs.eps2 = 0.0;
        }
    };
    auto buildSymzProfile = [&]() {
        if (symzProf || inst.symmetricInput) return;
        SpectralPair truthX;
        truthX.basis = inst.U;
        truthX.spectrum = inst.d;
        truthX.nextValue = inst.dR1;
        symzProf = symmetrizedProfileFromPair(truthX, inst.X, inst.Xhat, inst.hRule);
    };

    for (const std::string& id : cfg.bounds) {
        BoundCell cell;
        try {
            BoundReport rep;
            double empirical = 0;
            if (isSymmetricFamily(id)) {
                buildSymProfile();
                const Matrix& UhatSym =
                    inst.symmetricInput ? cache.directBasis() : cache.symBasis(inst.hRule);
                if (id == "dk") {
                    rep = davisKahanBound(*symProf, NormFlavor::Spectral, symErrNorm);
                    empirical = sinTheta(inst.U, UhatSym, SinThetaFlavor::Spectral);
                } else {
                    empirical = alignedTwoInfError(inst.U, UhatSym);
                    if (id == "thm2") rep = symTwoInfBound(*symProf);
                    else if (id == "rankR") rep = rankRSymBound(*symProf);
                    else {
                        buildNonsymProfile(); // may refresh fallback knobs
                        rep = symRefinedBound(*symProf, inst.knobs, inst.r);
                    }
                }
            } else if (id == "thm4") {
                if (inst.symmetricInput)
                    throw ApplicabilityError("thm4 needs a rectangular observation");
                buildNonsymProfile();
                rep = nonsymTwoInfBound(*nonsymProf, inst.knobs);
                empirical = alignedTwoInfError(inst.U, cache.directBasis());
            } else { // thm5 / thm6
                if (inst.symmetricInput)
                    throw ApplicabilityError(id + " needs a rectangular observation");
                buildNonsymProfile();
                buildSymzProfile();
                if (id == "thm5")
                    rep = symmetrizedTwoInfBound(*symzProf, *nonsymProf, inst.knobs);
                else
                    rep = symmetrizedRefinedBound(*symzProf, *nonsymProf, inst.knobs, inst.r);
                empirical = alignedTwoInfError(inst.U, cache.symBasis(inst.hRule));
            }
            cell.ok = true;
            cell.value = rep.value;
            cell.preconditionsMet = rep.preconditionsMet;
            cell.empirical = empirical;
            cell.ratio =
                rep.value > 0 ? empirical / rep.value : (empirical > kZeroTol ? kInf : 0.0);
            cell.terms = rep.terms;
            cell.note = rep.notes;
        } catch (const Error& e) {
            cell.ok = false;
            cell.note = e.what();
        }
        cells[id] = cell;
    }
    for (auto& row : rows)
        if (row.status == "ok") row.boundCells = cells;

    auto t1 = std::chrono::steady_clock::now();
    for (auto& r : rows) r.elapsedSec = std::chrono::duration<double>(t1 - t0).count();
    return rows;
}

std::vector<ReplicateRow> runReplicateRange(const ExperimentConfig& cfg, int begin, int end) {
    const int count = end - begin;
    std::vector<std::vector<ReplicateRow>> slots(static_cast<size_t>(count));
    std::atomic<int> nextIdx{0};
    auto worker = [&]() {
        while (true) {
            int i = nextIdx.fetch_add(1);
            if (i >= count) break;
            slots[static_cast<size_t>(i)] = computeReplicateRows(cfg, begin + i);
        }
    };
    int nThreads = std::max(1, std::min(cfg.threads, count));
    if (nThreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nThreads));
        for (int t = 0; t < nThreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    std::vector<ReplicateRow> rows;
    rows.reserve(static_cast<size_t>(count) * cfg.modes.size());
    for (auto& s : slots)
        for (auto& r : s) rows.push_back(std::move(r));
    // Already replicate-major; modes are emitted in canonical order inside
    // each replicate, so the full ordering is (replicate, mode).
    return rows;
}

std::string csvField(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string buildCsv(const ExperimentConfig& cfg, const std::vector<ReplicateRow>& rows) {
    std::ostringstream os;
    os << "replicate,seed,mode,status,empirical2InfError,sinThetaSpectral,"
          "misclusterCount,misclusterRate,certificateFired";
    std::vector<std::string> boundOrder;
    for (const auto& id : kBoundIds)
        if (std::find(cfg.bounds.begin(), cfg.bounds.end(), id) != cfg.bounds.end())
            boundOrder.push_back(id);
    for (const auto& id : boundOrder) {
        os << ",bound." << id << ".value,bound." << id << ".preconditionsMet,bound." << id
           << ".empirical,bound." << id << ".ratio";
        for (const auto& label : boundTermLabels(id))
            os << ",bound." << id << ".term." << label;
    }
    os << "\n";
    for (const auto& row : rows) {
        os << row.replicateIndex << ',' << row.seed << ',' << row.mode << ','
           << csvField(row.status);
        if (row.metrics) {
            const auto& m = *row.metrics;
            os << ',' << formatDouble(m.empirical2InfError) << ','
               << formatDouble(m.sinThetaSpectral) << ',';
            if (m.misclusterCount) os << *m.misclusterCount;
            os << ',';
            if (m.misclusterRate) os << formatDouble(*m.misclusterRate);
            os << ',';
            if (m.certificateFired) os << (*m.certificateFired ? 1 : 0);
        } else {
            os << ",,,,";
        }
        for (const auto& id : boundOrder) {
            auto it = row.boundCells.find(id);
            if (it == row.boundCells.end() || !it->second.ok) {
                os << ",,,,";
                for (size_t t = 0; t < boundTermLabels(id).size(); ++t) os << ',';
                continue;
            }
            const BoundCell& c = it->second;
            os << ',' << formatDouble(c.value) << ',' << (c.preconditionsMet ? 1 : 0) << ','
               << formatDouble(c.empirical) << ',' << formatDouble(c.ratio);
            for (const auto& t : c.terms) os << ',' << formatDouble(t.value);
        }
        os << "\n";
    }
    return os.str();
}

} // namespace

ExperimentResult runExperiment(const ExperimentConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    ExperimentResult res;
    res.rows = runReplicateRange(cfg, 0, cfg.replicates);
    res.csv = buildCsv(cfg, res.rows);
    if (!cfg.out.empty()) {
        std::ofstream f(cfg.out);
        if (!f) throw IoError("cannot open output file: " + cfg.out);
        f << res.csv;
    }

    // Per-mode summaries.
    std::vector<ClusterMode> modes = canonicalModeOrder(cfg.modes);
    for (auto mode : modes) {
        ModeSummary ms;
        ms.mode = toString(mode);
        double sumErr = 0, sumRate = 0;
        int rateCount = 0;
        for (const auto& row : res.rows) {
            if (row.mode != ms.mode || row.status != "ok" || !row.metrics) continue;
            ++ms.okCount;
            sumErr += row.metrics->empirical2InfError;
            ms.maxError = std::max(ms.maxError, row.metrics->empirical2InfError);
            if (row.metrics->misclusterCount) {
                if (*row.metrics->misclusterCount == 0) ++ms.perfectCount;
                sumRate += *row.metrics->misclusterRate;
                ++rateCount;
            }
            if (row.metrics->certificateFired && *row.metrics->certificateFired) {
                ++ms.certifiedCount;
                if (row.metrics->misclusterCount && *row.metrics->misclusterCount > 0)
                    ++ms.certifiedWithErrors;
            }
        }
        if (ms.okCount > 0) ms.meanError = sumErr / ms.okCount;
        if (rateCount > 0) {
            ms.perfectFreq = static_cast<double>(ms.perfectCount) / rateCount;
            ms.meanMisclusterRate = sumRate / rateCount;
            ms.wilsonLo = wilsonLower(ms.perfectCount, rateCount);
            ms.wilsonHi = wilsonUpper(ms.perfectCount, rateCount);
        }
        res.modeSummaries.push_back(ms);
    }

    // Per-bound summaries; one cell per replicate (cells repeat across modes).
    for (const auto& id : cfg.bounds) {
        BoundSummary bs;
        bs.id = id;
        int lastReplicate = -1;
        for (const auto& row : res.rows) {
            if (row.replicateIndex == lastReplicate) continue;
            auto it = row.boundCells.find(id);
            if (it == row.boundCells.end() || !it->second.ok) continue;
            lastReplicate = row.replicateIndex;
            ++bs.evaluated;
            if (it->second.preconditionsMet) {
                ++bs.preconditionsMetCount;
                if (it->second.empirical > it->second.value) ++bs.violations;
            }
        }
        res.boundSummaries.push_back(bs);
    }

    auto t1 = std::chrono::steady_clock::now();
    res.elapsedSec = std::chrono::duration<double>(t1 - t0).count();
    return res;
}

SweepResult runRegimeSweep(const ExperimentConfig& base) {
    const SweepConfig& sw = base.sweep;
    SweepResult out;
    struct Cell {
        double p1, p2;
        ExperimentConfig cfg;
        int n, m;
        double sigma, rho;
    };
    std::vector<Cell> cells;
    if (sw.kind == "gaussian") {
        if (sw.gammas.empty() || sw.nus.empty())
            throw ConfigError("sweep: gaussian kind needs nonempty gammas and nus");
        for (double g : sw.gammas) {
            for (double nu : sw.nus) {
                ExperimentConfig c = base;
                c.scenario = "gaussian";
                c.replicates = sw.replicates;
                c.gaussian.m = sw.baseM;
                c.gaussian.n = std::max(c.gaussian.r + 1,
                                        static_cast<int>(std::lround(std::pow(sw.baseM, g))));
                c.gaussian.sigma = c.gaussian.theta * std::pow(sw.baseM, nu);
                c.gaussian.gamma = g;
                c.gaussian.nu = nu;
                if (!c.capOverride && c.gaussian.n > c.capN)
                    throw ConfigError("sweep: cell n exceeds the desk-scale cap");
                cells.push_back({g, nu, c, c.gaussian.n, c.gaussian.m, c.gaussian.sigma, 0.0});
            }
        }
    } else if (sw.kind == "sbm") {
        if (sw.alphas.empty() || sw.betas.empty())
            throw ConfigError("sweep: sbm kind needs nonempty alphas and betas");
        for (double a : sw.alphas) {
            for (double beta : sw.betas) {
                ExperimentConfig c = base;
                c.scenario = "sbm-slice";
                c.replicates = sw.replicates;
                c.sbm.n = sw.baseN;
                c.sbm.rho = std::pow(sw.baseN, -a);
                int m = static_cast<int>(std::lround(std::pow(sw.baseN, beta)));
                c.sbm.sampleSize = std::max(c.sbm.r + 1, std::min(m, sw.baseN / 2));
                cells.push_back({a, beta, c, c.sbm.n, c.sbm.sampleSize, 0.0, c.sbm.rho});
            }
        }
    } else {
        throw ConfigError("sweep: unknown kind " + sw.kind);
    }

    for (size_t ci = 0; ci < cells.size(); ++ci) {
        ExperimentConfig c = cells[ci].cfg;
        c.bounds.clear();
        c.out.clear();
        c.masterSeed = deriveSeed(base.masterSeed, static_cast<std::uint64_t>(ci), 0x53EEBULL);
        ExperimentResult er = runExperiment(c);
        for (const auto& ms : er.modeSummaries) {
            SweepCell sc;
            sc.p1 = cells[ci].p1;
            sc.p2 = cells[ci].p2;
            sc.n = cells[ci].n;
            sc.m = cells[ci].m;
            sc.sigma = cells[ci].sigma;
            sc.rho = cells[ci].rho;
            sc.mode = ms.mode;
            sc.replicatesOk = ms.okCount;
            sc.perfectCount = ms.perfectCount;
            sc.perfectFreq = ms.perfectFreq;
            sc.wilsonLo = ms.okCount > 0 ? wilsonLower(ms.perfectCount, ms.okCount) : 0.0;
            sc.wilsonHi = ms.okCount > 0 ? wilsonUpper(ms.perfectCount, ms.okCount) : 1.0;
            sc.meanMisclusterRate = ms.meanMisclusterRate;
            out.cells.push_back(sc);
        }
    }
    std::sort(out.cells.begin(), out.cells.end(), [](const SweepCell& a, const SweepCell& b) {
        if (a.p1 != b.p1) return a.p1 < b.p1;
        if (a.p2 != b.p2) return a.p2 < b.p2;
        return a.mode < b.mode;
    });

    // Trend diagnostics with interval overlap: success frequency should not
    // move the wrong way as the noise knob grows (nu) / sample knob grows (beta).
    const bool gaussianKind = sw.kind == "gaussian";
    std::map<std::pair<double, std::string>, std::vector<const SweepCell*>> groups;
    for (const auto& c : out.cells) groups[{c.p1, c.mode}].push_back(&c);
    for (auto& [key, vec] : groups) {
        for (size_t i = 0; i + 1 < vec.size(); ++i) {
            const SweepCell* lo = vec[i];
            const SweepCell* hi = vec[i + 1];
            bool violation = gaussianKind ? (hi->wilsonLo > lo->wilsonHi)
                                          : (lo->wilsonLo > hi->wilsonHi);
            if (violation) {
                std::ostringstream os;
                os << "mode " << key.second << ", " << (gaussianKind ? "gamma" : "alpha") << "="
                   << formatDouble(key.first) << ": frequency trend violated between "
                   << (gaussianKind ? "nu" : "beta") << "=" << formatDouble(lo->p2) << " and "
                   << formatDouble(hi->p2);
                out.trendViolations.push_back(os.str());
            }
        }
    }

    std::ostringstream os;
    os << "kind,p1,p2,n,m,sigma,rho,mode,replicatesOk,perfectCount,perfectFreq,"
          "wilsonLo,wilsonHi,meanMisclusterRate\n";
    for (const auto& c : out.cells) {
        os << sw.kind << ',' << formatDouble(c.p1) << ',' << formatDouble(c.p2) << ',' << c.n
           << ',' << c.m << ',' << formatDouble(c.sigma) << ',' << formatDouble(c.rho) << ','
           << c.mode << ',' << c.replicatesOk << ',' << c.perfectCount << ','
           << formatDouble(c.perfectFreq) << ',' << formatDouble(c.wilsonLo) << ','
           << formatDouble(c.wilsonHi) << ',' << formatDouble(c.meanMisclusterRate) << "\n";
    }
    out.csv = os.str();
    if (!base.out.empty()) {
        std::ofstream f(base.out);
        if (!f) throw IoError("cannot open output file: " + base.out);
        f << out.csv;
    }
    return out;
}

CalibrationOutcome calibrateConstant(const ExperimentConfig& cfgIn, const std::string& boundId) {
    if (isSymmetricFamily(boundId) && boundId != "thm3")
        throw ConfigError("calibrateConstant: " + boundId + " has explicit constants");
    if (boundId != "thm3" && boundId != "thm4" && boundId != "thm5" && boundId != "thm6")
        throw ConfigError("calibrateConstant: unknown or explicit-constant bound " + boundId);
    const CalibrationConfig& cal = cfgIn.calibration;
    if (cal.calibEnd - cal.calibBegin < 50)
        throw ConfigError("calibrateConstant: need at least 50 calibration replicates");

    ExperimentConfig cfg = cfgIn;
    cfg.bounds = {boundId};
    cfg.out.clear();
    // One mode, matching the estimator the bound certifies.
    if (boundId == "thm4") {
        cfg.modes = {ClusterMode::Direct};
    } else {
        cfg.modes = {nominalHollow(cfgIn) ? ClusterMode::SymmetrizedHollow
                                          : ClusterMode::Symmetrized};
    }

    CalibrationOutcome out;
    out.boundId = boundId;

    auto collect = [&](int begin, int end, std::vector<double>* ratios, double constant,
                       int* violations, int* counted) {
        std::vector<ReplicateRow> rows = runReplicateRange(cfg, begin, end);
        for (const auto& row : rows) {
            if (row.status != "ok") {
                out.failures.push_back("replicate " + std::to_string(row.replicateIndex) +
                                       ": " + row.status);
                continue;
            }
            auto it = row.boundCells.find(boundId);
            if (it == row.boundCells.end() || !it->second.ok) {
                out.failures.push_back("replicate " + std::to_string(row.replicateIndex) +
                                       ": bound not evaluable");
                continue;
            }
            const BoundCell& c = it->second;
            if (c.value <= 0 && c.empirical > kZeroTol) {
                out.failures.push_back("replicate " + std::to_string(row.replicateIndex) +
                                       ": zero bound with nonzero error");
                continue;
            }
            if (ratios) ratios->push_back(c.value > 0 ? c.empirical / c.value : 0.0);
            if (violations && c.empirical > constant * c.value + kZeroTol) ++(*violations);
            if (counted) ++(*counted);
        }
    };

    std::vector<double> ratios;
    collect(cal.calibBegin, cal.calibEnd, &ratios, 0.0, nullptr, &out.calibCount);
    out.constant = ratios.empty() ? 0.0 : upperQuantile(ratios, cal.quantile);
    collect(cal.validBegin, cal.validEnd, nullptr, out.constant, &out.violations,
            &out.validCount);
    out.violationFraction =
        out.validCount > 0 ? static_cast<double>(out.violations) / out.validCount : 0.0;
    return out;
}

} // namespace twoinf
