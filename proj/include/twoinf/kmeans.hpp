#pragma once

#include "twoinf/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace twoinf {

struct KMeansParams {
    int restarts = 20;
    int maxIters = 100;
    double a = 0.5;          ///< approximation slack target for audits
    std::uint64_t seed = 0;
};

struct ClusterResult {
    std::vector<int> zhat;   ///< 0-based labels
    Matrix centers;          ///< r x d
    double objective = 0;    ///< sum of squared distances to assigned centers
    int restartsUsed = 0;
    std::string mode;        ///< set by spectralCluster
};

/**
 * k-means with distance-proportional probabilistic seeding and Lloyd
 * refinement, best of `restarts` independent starts. Deterministic given
 * params.seed: restart j draws from a stream derived from (seed, j), so
 * restarts can run in any order. Empty clusters are re-seeded at the point
 * farthest from the empty center.
 */
ClusterResult approxKMeans(const Matrix& rows, int r, const KMeansParams& params);

/// Minimum Hamming mismatches over all label permutations, via optimal
/// assignment on the r x r confusion matrix. Labels are 0-based in [0, r).
int misclusterCount(const std::vector<int>& zhat, const std::vector<int>& z, int r);

/// Objective of a given assignment against given centers.
double kmeansObjective(const Matrix& rows, const Matrix& centers, const std::vector<int>& z);

/// Exhaustive k-means optimum over all r^n assignments; test oracle for
/// tiny instances only (throws for n > 12).
double exhaustiveKMeansOptimum(const Matrix& rows, int r);

/// Max-agreement assignment on an r x r matrix (Hungarian, exact for all r).
/// Returns perm[k] = label in zhat matched to true label k.
std::vector<int> bestLabelPermutation(const Matrix& agreement);

} // namespace twoinf
