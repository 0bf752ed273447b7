#include "twoinf/cluster.hpp"
#include "twoinf/decomp.hpp"
#include "twoinf/matrix.hpp"
#include "twoinf/profiles.hpp"
#include "twoinf/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twoinf {

int ClusterModel::nMin() const {
    return *std::min_element(clusterSizes.begin(), clusterSizes.end());
}

int ClusterModel::nMax() const {
    return *std::max_element(clusterSizes.begin(), clusterSizes.end());
}

double ClusterModel::balanceC0() const {
    return std::sqrt(static_cast<double>(nMax()) / static_cast<double>(nMin()));
}

Matrix ClusterModel::membership() const {
    Matrix Z = Matrix::Zero(n(), r);
    for (int i = 0; i < n(); ++i) Z(i, z[static_cast<size_t>(i)]) = 1.0;
    return Z;
}

void ClusterModel::validate() const {
    if (r < 1) throw DomainError("ClusterModel: r must be >= 1");
    if (z.empty()) throw DimensionError("ClusterModel: empty label vector");
    if (static_cast<int>(clusterSizes.size()) != r)
        throw DimensionError("ClusterModel: clusterSizes has wrong length");
    std::vector<int> counts(static_cast<size_t>(r), 0);
    for (int zi : z) {
        if (zi < 0 || zi >= r) throw DomainError("ClusterModel: label out of range");
        ++counts[static_cast<size_t>(zi)];
    }
    int total = 0;
    for (int k = 0; k < r; ++k) {
        if (counts[static_cast<size_t>(k)] == 0)
            throw DomainError("ClusterModel: label " + std::to_string(k + 1) + " never occurs");
        if (counts[static_cast<size_t>(k)] != clusterSizes[static_cast<size_t>(k)])
            throw DomainError("ClusterModel: clusterSizes inconsistent with labels");
        total += counts[static_cast<size_t>(k)];
    }
    if (total != n()) throw DomainError("ClusterModel: sizes do not sum to n");
}

ClusterModel makeClusterModel(std::vector<int> z, int r, std::optional<Matrix> means) {
    ClusterModel m;
    m.z = std::move(z);
    m.r = r;
    m.clusterSizes.assign(static_cast<size_t>(r), 0);
    for (int zi : m.z) {
        if (zi < 0 || zi >= r) throw DomainError("makeClusterModel: label out of range");
        ++m.clusterSizes[static_cast<size_t>(zi)];
    }
    m.means = std::move(means);
    m.validate();
    return m;
}

std::string toString(ClusterMode m) {
    switch (m) {
        case ClusterMode::Direct: return "direct";
        case ClusterMode::Symmetrized: return "symmetrized";
        case ClusterMode::SymmetrizedHollow: return "symmetrized-hollow";
    }
    return "?";
}

ClusterMode clusterModeFromString(const std::string& s) {
    if (s == "direct") return ClusterMode::Direct;
    if (s == "symmetrized") return ClusterMode::Symmetrized;
    if (s == "symmetrized-hollow") return ClusterMode::SymmetrizedHollow;
    throw ConfigError("unknown cluster mode: " + s);
}

Matrix spectralEmbedding(const Matrix& Xhat, int r, ClusterMode mode) {
    if (mode == ClusterMode::Direct) {
        if (r >= std::min(Xhat.rows(), Xhat.cols()))
            throw DimensionError("spectralCluster: r must be below min dimension");
        return svdRLeftOnly(Xhat, r).basis;
    }
    int h = mode == ClusterMode::SymmetrizedHollow ? 1 : 0;
    Matrix Yhat = symmetrizeEstimate(Xhat, h);
    return leadingEigs(Yhat, r).basis;
}

ClusterResult spectralCluster(const Matrix& Xhat, int r, ClusterMode mode,
                              const KMeansParams& params) {
    Matrix U = spectralEmbedding(Xhat, r, mode);
    ClusterResult res = approxKMeans(U, r, params);
    res.mode = toString(mode);
    return res;
}

namespace {

// Distinct truth rows, one per cluster, in label order.
Matrix truthRows(const Matrix& alignedTruth, const ClusterModel& model) {
    Matrix B(model.r, alignedTruth.cols());
    std::vector<char> seen(static_cast<size_t>(model.r), 0);
    for (int i = 0; i < model.n(); ++i) {
        int k = model.z[static_cast<size_t>(i)];
        if (!seen[static_cast<size_t>(k)]) {
            B.row(k) = alignedTruth.row(i);
            seen[static_cast<size_t>(k)] = 1;
        }
    }
    return B;
}

double minPairwiseRowDistance(const Matrix& B) {
    double s = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < B.rows(); ++a)
        for (Eigen::Index b = a + 1; b < B.rows(); ++b)
            s = std::min(s, (B.row(a) - B.row(b)).norm());
    return s;
}

} // namespace

KMeansAudit kmeansStabilityAudit(const Matrix& Uhat, const ClusterModel& model,
                         const Matrix& alignedTruth, double a,
                         bool spectralRoute) {
    if (Uhat.rows() != alignedTruth.rows() || Uhat.cols() != alignedTruth.cols())
        throw DimensionError("kmeansStabilityAudit: Uhat and aligned truth must be conformable");
    if (Uhat.rows() != model.n())
        throw DimensionError("kmeansStabilityAudit: row count does not match the model");
    if (a <= 0) throw DomainError("kmeansStabilityAudit: a must be positive");
    model.validate();

    KMeansAudit audit;
    Matrix B = truthRows(alignedTruth, model);
    audit.separation = minPairwiseRowDistance(B);
    if (audit.separation <= 1e-12)
        throw DegenerateSeparationError("kmeansStabilityAudit: duplicate true rows across distinct clusters");

    double L = 0;
    for (int i = 0; i < model.n(); ++i)
        L += (Uhat.row(i) - B.row(model.z[static_cast<size_t>(i)])).squaredNorm();
    if (spectralRoute) {
        // Looser route: L <= 2 r D_sp^2, with D_sp evaluated at W_U.
        double dsp = spectralNorm(Uhat - alignedTruth);
        L = 2.0 * model.r * dsp * dsp;
    }
    audit.objective = L;

    audit.permutation.resize(static_cast<size_t>(model.r));
    for (int k = 0; k < model.r; ++k) audit.permutation[static_cast<size_t>(k)] = k;

    // Binding slack of the hypothesis L <= delta^2 nMin / (r (1+sqrt(1+a))^2);
    // the smallest feasible delta gives the tightest mismatch bound.
    double kappa = 1.0 + std::sqrt(1.0 + a);
    double deltaMin = std::sqrt(L * model.r * kappa * kappa / static_cast<double>(model.nMin()));
    audit.slack = deltaMin;
    audit.feasible = deltaMin < audit.separation / 2.0;
    if (audit.feasible) {
        double room = audit.separation / 2.0 - deltaMin;
        audit.mismatchBound = L / (room * room);
        for (int i = 0; i < model.n(); ++i) {
            double d = (Uhat.row(i) - B.row(model.z[static_cast<size_t>(i)])).norm();
            if (d >= room) audit.mismatchSet.push_back(i);
        }
    } else {
        audit.mismatchBound = std::numeric_limits<double>::infinity();
    }
    return audit;
}

Certificate perfectClusteringCertificate(const Matrix& Uhat, const Matrix& U,
                                         const ClusterModel& model) {
    if (Uhat.rows() != U.rows() || Uhat.cols() != U.cols())
        throw DimensionError("perfectClusteringCertificate: shape mismatch");
    if (U.rows() != model.n())
        throw DimensionError("perfectClusteringCertificate: row count does not match the model");
    model.validate();

    // The model's basis must carry the block structure: identical rows within
    // a cluster and separation >= sqrt(2 / nMax) across clusters.
    Matrix B = truthRows(U, model);
    for (int i = 0; i < model.n(); ++i) {
        if ((U.row(i) - B.row(model.z[static_cast<size_t>(i)])).norm() > 1e-8)
            throw DomainError("perfectClusteringCertificate: U rows vary within a cluster");
    }
    double sep = minPairwiseRowDistance(B);
    double required = std::sqrt(2.0 / static_cast<double>(model.nMax()));
    if (sep < required - 1e-8)
        throw DomainError("perfectClusteringCertificate: separation below sqrt(2/nMax)");

    Certificate c;
    double epsU = twoInfNorm(U);
    double c0 = model.balanceC0();
    c.threshold = epsU / (2.0 * std::sqrt(2.0) * c0);
    c.error = alignedTwoInfError(U, Uhat);
    c.certified = c.error <= c.threshold;
    c.margin = c.threshold - c.error;
    return c;
}

} // namespace twoinf
