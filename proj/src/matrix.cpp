#include "twoinf/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace twoinf {

void requireFinite(const Matrix& A, const std::string& what) {
    if (!A.allFinite())
        throw DomainError(what + ": matrix has NaN or Inf entries");
}

namespace {
void requireNonEmpty(const Matrix& A, const char* op) {
    if (A.rows() == 0 || A.cols() == 0)
        throw DimensionError(std::string(op) + ": empty matrix");
}
} // namespace

double twoInfNorm(const Matrix& A) {
    requireNonEmpty(A, "twoInfNorm");
    return A.rowwise().norm().maxCoeff();
}

double oneInfNorm(const Matrix& A) {
    requireNonEmpty(A, "oneInfNorm");
    return A.cwiseAbs().rowwise().sum().maxCoeff();
}

double spectralNorm(const Matrix& A) {
    requireNonEmpty(A, "spectralNorm");
    // Gram trick keeps this O(min^2 * max) and exact enough for the
    // tolerances used in this library (sqrt of a 1e-14-relative eigenvalue).
    Matrix G;
    if (A.rows() <= A.cols())
        G.noalias() = A * A.transpose();
    else
        G.noalias() = A.transpose() * A;
    Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
    double lam = es.eigenvalues().maxCoeff();
    return std::sqrt(std::max(lam, 0.0));
}

double frobeniusNorm(const Matrix& A) {
    requireNonEmpty(A, "frobeniusNorm");
    return A.norm();
}

double maxAbs(const Matrix& A) {
    requireNonEmpty(A, "maxAbs");
    return A.cwiseAbs().maxCoeff();
}

Matrix hollow(const Matrix& A) {
    if (A.rows() != A.cols())
        throw DimensionError("hollow: matrix must be square");
    requireNonEmpty(A, "hollow");
    Matrix H = A;
    H.diagonal().setZero();
    return H;
}

} // namespace twoinf
