#pragma once

#include "twoinf/kmeans.hpp"
#include "twoinf/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace twoinf {

/// Ground-truth clustering: labels, sizes, and optionally the mean matrix
/// (Theta for rectangular models, Q for symmetric ones).
struct ClusterModel {
    std::vector<int> z;              ///< 0-based labels in [0, r)
    int r = 0;
    std::vector<int> clusterSizes;   ///< n_k, k in [0, r)
    std::optional<Matrix> means;

    int n() const { return static_cast<int>(z.size()); }
    int nMin() const;
    int nMax() const;
    /// Tightest c0 with nMax <= c0^2 nMin.
    double balanceC0() const;
    /// n x r binary membership matrix Z.
    Matrix membership() const;
    /// Throws unless every label occurs, sizes are consistent, labels in range.
    void validate() const;
};

ClusterModel makeClusterModel(std::vector<int> z, int r, std::optional<Matrix> means = {});

enum class ClusterMode { Direct, Symmetrized, SymmetrizedHollow };

std::string toString(ClusterMode m);
ClusterMode clusterModeFromString(const std::string& s);

/**
 * Spectral clustering: embed rows via the rank-r leading factor of Xhat
 * (direct) or of the symmetrized estimator (optionally hollowed), then run
 * approximate k-means on the embedding rows.
 */
ClusterResult spectralCluster(const Matrix& Xhat, int r, ClusterMode mode,
                              const KMeansParams& params);

/// The embedding basis used by spectralCluster for a given mode.
Matrix spectralEmbedding(const Matrix& Xhat, int r, ClusterMode mode);

/**
 * k-means stability audit in the style of the approximate-k-means lemma:
 * separation s of the distinct aligned truth rows, objective L of Uhat
 * against them, the binding slack delta, the certified mismatch superset and
 * the mismatch-count bound (s/2 - delta)^-2 * L.
 *
 * `alignedTruth` must be U * W_U, i.e. already aligned to Uhat.
 * With spectralRoute = true, L is replaced by the looser 2 r D_sp^2 route.
 */
struct KMeansAudit {
    double separation = 0;   ///< s
    double slack = 0;        ///< delta
    double objective = 0;    ///< L
    std::vector<int> permutation;  ///< label matching used for the truth rows
    std::vector<int> mismatchSet;  ///< certified superset of possibly-wrong rows
    double mismatchBound = 0;
    bool feasible = false;   ///< true iff some delta in (0, s/2) satisfies the hypothesis
};

KMeansAudit kmeansStabilityAudit(const Matrix& Uhat, const ClusterModel& model,
                         const Matrix& alignedTruth, double a,
                         bool spectralRoute = false);

/// Perfect-clustering certificate: fires iff the aligned row-wise error is at
/// most (2 sqrt(2) c0)^-1 epsU. Requires the model's true basis U (its
/// distinct-row separation is checked).
struct Certificate {
    bool certified = false;
    double margin = 0;     ///< threshold - error
    double threshold = 0;
    double error = 0;
};

Certificate perfectClusteringCertificate(const Matrix& Uhat, const Matrix& U,
                                         const ClusterModel& model);

} // namespace twoinf
