#pragma once

#include "twoinf/decomp.hpp"
#include "twoinf/types.hpp"

namespace twoinf {

/**
 * Error quantities of a symmetric perturbation pair (Y, Yhat), E = Yhat - Y,
 * scaled by the r-th eigenvalue of Y.
 */
struct SymErrorProfile {
    double delta0 = 0;   ///< |lam_r|^-1 ||E||
    double delta1Inf = 0; ///< |lam_r|^-1 ||E||_{1,inf}
    double delta2Inf = 0; ///< |lam_r|^-1 ||E||_{2,inf}
    double deltaEU = 0;  ///< |lam_r|^-1 ||E U||_{2,inf}
    double epsU = 0;     ///< ||U||_{2,inf}
    double lamR = 0;
    double lamR1 = 0;
    double cLam = 0;     ///< (lam_r - lam_{r+1}) / |lam_r|
    int r = 0;
    int n = 0;
};

SymErrorProfile symErrorProfile(const Matrix& Y, const Matrix& Yhat, int r,
                                EigOrder order = EigOrder::Algebraic);

/// Same quantities computed against a known truth decomposition.
SymErrorProfile symErrorProfileFromPair(const SpectralPair& truth, const Matrix& E);

/**
 * Error quantities for a rectangular pair (X, Xhat), Xi = Xhat - X, scaled by
 * the r-th singular value of X. Index q in {1,2} selects the (q,inf) norm.
 */
struct NonsymErrorProfile {
    double tDelta0 = 0;      ///< d_r^-1 ||Xi||
    double tDelta1Inf = 0;   ///< d_r^-1 ||Xi||_{1,inf}
    double tDelta2Inf = 0;   ///< d_r^-1 ||Xi||_{2,inf}
    double tDelta1InfT = 0;  ///< d_r^-1 ||Xi^T||_{1,inf}
    double tDelta2InfT = 0;  ///< d_r^-1 ||Xi^T||_{2,inf}
    double tDeltaV1Inf = 0;  ///< d_r^-1 ||Xi V||_{1,inf}
    double tDeltaV2Inf = 0;  ///< d_r^-1 ||Xi V||_{2,inf}
    double tDeltaU0 = 0;     ///< d_r^-1 ||U^T Xi||
    double tDelta0V = 0;     ///< d_r^-1 ||Xi V||
    double tDeltaUV0 = 0;    ///< d_r^-1 ||U^T Xi V||
    double dR = 0;
    double dR1 = 0;
    double epsU = 0;
    double epsV = 0;
    int r = 0;
    int n = 0;
    int m = 0;
};

NonsymErrorProfile nonsymErrorProfile(const Matrix& X, const Matrix& Xhat, int r);
NonsymErrorProfile nonsymErrorProfileFromPair(const SpectralPair& truth, const Matrix& Xi);

/// Yhat = H(Xhat Xhat^T) when hollowFlag = 1, plain Xhat Xhat^T otherwise.
Matrix symmetrizeEstimate(const Matrix& Xhat, int hollowFlag);

/// 1 iff sigma^2 > d^2 / m (strict); the hollowed estimator wins when the
/// diagonal noise price exceeds the diagonal signal.
int hollowDecision(double sigmaSqEstimate, double dSqEstimate, int m);

/**
 * Error quantities of the symmetrized estimator Yhat against Y = X X^T,
 * scaled by d_r^2, with the error split E = E1 + E2 + E3 + Ed
 * (E1 = hollow-adjusted Xi Xi^T, E2 = Xi X^T, E3 = X Xi^T, Ed diagonal).
 */
struct SymmetrizedProfile {
    int hollowFlag = 0;
    double tDeltaXiXi0 = 0;      ///< d_r^-2 ||E1||
    double tDeltaE0 = 0;         ///< d_r^-2 ||E||
    double tDeltaEU0 = 0;        ///< d_r^-2 ||E U||
    double tDeltaXiXiU2Inf = 0;  ///< d_r^-2 ||E1 U||_{2,inf}
    double tDeltaXiX2Inf = 0;    ///< d_r^-2 ||Xi X^T||_{2,inf}
    double tDeltaXiX1Inf = 0;    ///< d_r^-2 ||Xi X^T||_{1,inf}
    double tDeltaXiXU2Inf = 0;   ///< d_r^-2 ||Xi X^T U||_{2,inf}
    double tDeltaE2Inf = 0;      ///< d_r^-2 ||E1 + E2||_{2,inf}
    double epsY = 0;             ///< d_r^-2 max_i Y(i,i)
    double tDeltaUU0 = 0;        ///< min(tDeltaE0, sqrt(r) * tDeltaEU0)
    double dR = 0;
    int r = 0;
};

SymmetrizedProfile symmetrizedProfile(const Matrix& X, const Matrix& Xhat, int r,
                                      int hollowFlag);

/// Same, against a known truth factorization of X (basis + singular values).
SymmetrizedProfile symmetrizedProfileFromPair(const SpectralPair& truth, const Matrix& X,
                                              const Matrix& Xhat, int hollowFlag);

/// Exposed pieces of the symmetrized error split, for tests and diagnostics.
struct SymmetrizedSplit {
    Matrix e1, e2, e3;
    Vector ed; ///< diagonal of the Ed component
    Matrix yhat;
    Matrix y;
};
SymmetrizedSplit symmetrizedSplit(const Matrix& X, const Matrix& Xhat, int hollowFlag);

/// Optional estimators for the non-exact auxiliary inequalities; never
/// substituted into bound evaluation automatically.
double estimateDeltaE0Upper(const SymmetrizedProfile& p, const NonsymErrorProfile& np);
double estimateXiX2InfUpper(const SymmetrizedProfile& p, const NonsymErrorProfile& np);

} // namespace twoinf
