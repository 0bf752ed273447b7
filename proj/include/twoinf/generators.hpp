#pragma once

#include "twoinf/cluster.hpp"
#include "twoinf/decomp.hpp"
#include "twoinf/rng.hpp"
#include "twoinf/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace twoinf {

/**
 * Clustered mean matrix with iid Gaussian noise: X = Z Theta, Xhat = X + Xi.
 * Theta rows are rescaled to norm sqrt(m) * theta and blended toward a
 * row-orthogonal design until sigma_r(Theta) >= cSigma * sigma_1(Theta).
 */
struct GaussianScenario {
    int n = 400;
    int m = 400;
    int r = 3;
    double theta = 1.0;
    double sigma = 1.0;
    double cSigma = 0.5;       ///< conditioning floor for Theta
    double orthBlend = 0.25;   ///< initial blend away from the orthogonal design
    double imbalance = 1.0;    ///< target c0; 1 = balanced sizes
    int maxRetries = 10;
    std::uint64_t seed = 0;
    std::optional<double> gamma; ///< regime exponent n = m^gamma (sweeps)
    std::optional<double> nu;    ///< regime exponent sigma/theta = m^nu (sweeps)
};

struct GaussianInstance {
    Matrix X, Xhat;
    ClusterModel model; ///< means = Theta
    Matrix U;           ///< n x r true left basis
    Vector d;           ///< r singular values of X (d_{r+1} = 0 exactly)
    Matrix V;           ///< m x r right basis
};

GaussianInstance genGaussianMixture(const GaussianScenario& s);

/**
 * Sparse SBM with a uniformly sampled node subset S of size m; the
 * observation is the off-diagonal slice Xhat = A[S, S^c].
 * Q0 = (1-b) I + b 11^T (assortative, max entry 1), P = rho Z Q0 Z^T.
 */
struct SbmModel {
    int n = 4096;
    int r = 2;
    double rho = 0.015625;
    double b = 0.3;
    int sampleSize = 64; ///< m = |S|
    double imbalance = 1.0;
    double cSigma = 0.1; ///< conditioning floor for Q0, asserted
    int maxRetries = 100;
    std::uint64_t seed = 0;
};

struct SbmSliceInstance {
    Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic> A; ///< full adjacency
    std::vector<int> sampled; ///< S, sorted
    std::vector<int> rest;    ///< S^c, sorted
    Matrix Xhat;              ///< m x (n-m) slice of A
    Matrix X;                 ///< matching slice of P
    ClusterModel model;       ///< labels of S; means = Q = rho Q0
    std::vector<int> zFull;   ///< labels of all n nodes
    Matrix U;                 ///< m x r true left basis of X
    Vector d;                 ///< singular values of X (d_{r+1} = 0 exactly)
    Matrix V;                 ///< (n-m) x r right basis

    Matrix adjacencyDense() const { return A.cast<double>(); }
};

SbmSliceInstance genSbmSlice(const SbmModel& model);

/**
 * Multilayer network whose layers split into M groups sharing an ambient
 * subspace per group (SBM-per-group construction). The layer-clustering
 * observation Xhat has rows vec(Uhat_l Uhat_l^T) from per-layer rank-K
 * eigenprojections with magnitude ordering.
 */
struct MultilayerModel {
    int n = 500;
    int L = 60;
    int M = 3;
    int kDim = 2;   ///< K_m for every group (per-group override via kPerGroup)
    std::vector<int> kPerGroup;
    double rho = 0.2;
    double bLow = 0.1, bHigh = 0.5; ///< per-layer loading mix range
    double cLambda = 0.2;           ///< loading conditioning floor, asserted
    std::uint64_t seed = 0;
    bool useExpectedAdjacency = false; ///< zero-noise surrogate: A^(l) := P^(l)
    bool storeLayers = true;
};

struct MultilayerInstance {
    std::vector<Matrix> layers; ///< A^(l); empty when storeLayers is off
    Matrix Xhat;                ///< L x n^2
    Matrix theta;               ///< M x n^2 distinct truth rows vec(U^(m) U^(m)^T)
    ClusterModel model;         ///< layer labels; means = theta
    Matrix U;                   ///< L x M true left basis of X = Z theta
    Vector d;                   ///< singular values (d_{M+1} = 0 exactly)
    Matrix V;                   ///< n^2 x M right basis
    std::vector<Matrix> groupBases; ///< U^(m), n x K_m

    Eigen::RowVectorXd truthRow(int layer) const {
        return theta.row(model.z[static_cast<size_t>(layer)]);
    }
};

MultilayerInstance genMultilayer(const MultilayerModel& model);

/// Orthonormal basis of the top-k eigenvectors by magnitude, via seeded block
/// subspace iteration with Rayleigh-Ritz extraction; falls back to the dense
/// solver when the residual tolerance is not met.
Matrix topMagnitudeBasis(const Matrix& S, int k, Rng& rng, int overSample = 5,
                         int maxIter = 80, double tol = 1e-9);

/// Balanced cluster sizes for n items in r groups; imbalance > 1 skews sizes
/// so that nMax / nMin is close to imbalance^2.
std::vector<int> balancedSizes(int n, int r, double imbalance);

/// Deterministic label vector with the given sizes, shuffled by the stream.
std::vector<int> shuffledLabels(const std::vector<int>& sizes, Rng& rng);

} // namespace twoinf
