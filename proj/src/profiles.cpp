#include "twoinf/profiles.hpp"
#include "twoinf/matrix.hpp"

#include <cmath>

namespace twoinf {

namespace {

void checkSameShape(const Matrix& A, const Matrix& B, const char* ctx) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw DimensionError(std::string(ctx) + ": shape mismatch");
}

} // namespace

SymErrorProfile symErrorProfileFromPair(const SpectralPair& truth, const Matrix& E) {
    SymErrorProfile p;
    p.r = truth.rank();
    p.n = static_cast<int>(truth.basis.rows());
    p.lamR = truth.spectrum(p.r - 1);
    p.lamR1 = truth.nextValue;
    double aLamR = std::abs(p.lamR);
    if (aLamR <= 1e-14 * std::max(1.0, std::abs(truth.spectrum(0))))
        throw SpectralGapError("symErrorProfile: lambda_r = 0 (degenerate spectrum)");
    p.delta0 = spectralNorm(E) / aLamR;
    p.delta1Inf = oneInfNorm(E) / aLamR;
    p.delta2Inf = twoInfNorm(E) / aLamR;
    p.deltaEU = twoInfNorm(E * truth.basis) / aLamR;
    p.epsU = twoInfNorm(truth.basis);
    p.cLam = (p.lamR - p.lamR1) / aLamR;
    return p;
}

SymErrorProfile symErrorProfile(const Matrix& Y, const Matrix& Yhat, int r,
                                EigOrder order) {
    checkSameShape(Y, Yhat, "symErrorProfile");
    SpectralPair truth = leadingEigs(Y, r, order);
    double symTol = 1e-10 * std::max(1.0, maxAbs(Yhat));
    if (maxAbs(Yhat - Yhat.transpose()) > symTol)
        throw SymmetryError("symErrorProfile: Yhat is not symmetric within 1e-10");
    return symErrorProfileFromPair(truth, Yhat - Y);
}

NonsymErrorProfile nonsymErrorProfileFromPair(const SpectralPair& truth, const Matrix& Xi) {
    if (!truth.coBasis)
        throw DimensionError("nonsymErrorProfile: truth pair lacks a right basis");
    NonsymErrorProfile p;
    p.r = truth.rank();
    p.n = static_cast<int>(truth.basis.rows());
    p.m = static_cast<int>(truth.coBasis->rows());
    p.dR = truth.spectrum(p.r - 1);
    p.dR1 = truth.nextValue;
    if (p.dR <= 1e-14 * std::max(1.0, truth.spectrum(0)))
        throw SpectralGapError("nonsymErrorProfile: d_r = 0 (degenerate spectrum)");
    const Matrix& U = truth.basis;
    const Matrix& V = *truth.coBasis;
    Matrix XiV = Xi * V;
    Matrix UtXi = U.transpose() * Xi;
    p.tDelta0 = spectralNorm(Xi) / p.dR;
    p.tDelta1Inf = oneInfNorm(Xi) / p.dR;
    p.tDelta2Inf = twoInfNorm(Xi) / p.dR;
    p.tDelta1InfT = oneInfNorm(Xi.transpose()) / p.dR;
    p.tDelta2InfT = twoInfNorm(Xi.transpose()) / p.dR;
    p.tDeltaV1Inf = oneInfNorm(XiV) / p.dR;
    p.tDeltaV2Inf = twoInfNorm(XiV) / p.dR;
    p.tDeltaU0 = spectralNorm(UtXi) / p.dR;
    p.tDelta0V = spectralNorm(XiV) / p.dR;
    p.tDeltaUV0 = spectralNorm(U.transpose() * XiV) / p.dR;
    p.epsU = twoInfNorm(U);
    p.epsV = twoInfNorm(V);
    return p;
}

NonsymErrorProfile nonsymErrorProfile(const Matrix& X, const Matrix& Xhat, int r) {
    checkSameShape(X, Xhat, "nonsymErrorProfile");
    SpectralPair truth = svdR(X, r);
    return nonsymErrorProfileFromPair(truth, Xhat - X);
}

Matrix symmetrizeEstimate(const Matrix& Xhat, int hollowFlag) {
    if (Xhat.rows() == 0 || Xhat.cols() == 0)
        throw DimensionError("symmetrizeEstimate: empty matrix");
    if (hollowFlag != 0 && hollowFlag != 1)
        throw DomainError("symmetrizeEstimate: hollow flag must be 0 or 1");
    Matrix Y;
    Y.noalias() = Xhat * Xhat.transpose();
    if (hollowFlag) Y.diagonal().setZero();
    return Y;
}

int hollowDecision(double sigmaSqEstimate, double dSqEstimate, int m) {
    if (sigmaSqEstimate <= 0 || dSqEstimate <= 0 || m <= 0)
        throw DomainError("hollowDecision: inputs must be positive");
    return sigmaSqEstimate > dSqEstimate / static_cast<double>(m) ? 1 : 0;
}

SymmetrizedSplit symmetrizedSplit(const Matrix& X, const Matrix& Xhat, int hollowFlag) {
    checkSameShape(X, Xhat, "symmetrizedSplit");
    SymmetrizedSplit s;
    Matrix Xi = Xhat - X;
    s.y.noalias() = X * X.transpose();
    s.yhat = symmetrizeEstimate(Xhat, hollowFlag);
    s.e1.noalias() = Xi * Xi.transpose();
    if (hollowFlag) s.e1.diagonal().setZero();
    s.e2.noalias() = Xi * X.transpose();
    s.e3 = s.e2.transpose();
    if (hollowFlag)
        s.ed = -(s.y.diagonal() + 2.0 * s.e2.diagonal());
    else
        s.ed = Vector::Zero(X.rows());
    return s;
}

SymmetrizedProfile symmetrizedProfile(const Matrix& X, const Matrix& Xhat, int r,
                                      int hollowFlag) {
    // Left basis U and d_r come from the rank-r SVD of X.
    return symmetrizedProfileFromPair(svdRLeftOnly(X, r), X, Xhat, hollowFlag);
}

SymmetrizedProfile symmetrizedProfileFromPair(const SpectralPair& truth, const Matrix& X,
                                              const Matrix& Xhat, int hollowFlag) {
    checkSameShape(X, Xhat, "symmetrizedProfile");
    const int r = truth.rank();
    SymmetrizedProfile p;
    p.hollowFlag = hollowFlag;
    p.r = r;
    p.dR = truth.spectrum(r - 1);
    if (p.dR <= 1e-14 * std::max(1.0, truth.spectrum(0)))
        throw SpectralGapError("symmetrizedProfile: d_r = 0 (degenerate spectrum)");
    const double dr2 = p.dR * p.dR;
    const Matrix& U = truth.basis;

    SymmetrizedSplit s = symmetrizedSplit(X, Xhat, hollowFlag);
    Matrix E = s.yhat - s.y;
    p.tDeltaXiXi0 = spectralNorm(s.e1) / dr2;
    p.tDeltaE0 = spectralNorm(E) / dr2;
    p.tDeltaEU0 = spectralNorm(E * U) / dr2;
    p.tDeltaXiXiU2Inf = twoInfNorm(s.e1 * U) / dr2;
    p.tDeltaXiX2Inf = twoInfNorm(s.e2) / dr2;
    p.tDeltaXiX1Inf = oneInfNorm(s.e2) / dr2;
    p.tDeltaXiXU2Inf = twoInfNorm(s.e2 * U) / dr2;
    p.tDeltaE2Inf = twoInfNorm(s.e1 + s.e2) / dr2;
    p.epsY = s.y.diagonal().maxCoeff() / dr2;
    p.tDeltaUU0 = std::min(p.tDeltaE0, std::sqrt(static_cast<double>(r)) * p.tDeltaEU0);
    return p;
}

double estimateDeltaE0Upper(const SymmetrizedProfile& p, const NonsymErrorProfile& np) {
    double tail = np.dR > 0 ? np.dR1 / np.dR : 0.0;
    return p.tDeltaXiXi0 + np.tDelta0V + tail * np.tDelta0 + p.hollowFlag * p.epsY;
}

double estimateXiX2InfUpper(const SymmetrizedProfile& p, const NonsymErrorProfile& np) {
    return np.epsU * p.tDeltaXiX1Inf;
}

} // namespace twoinf
