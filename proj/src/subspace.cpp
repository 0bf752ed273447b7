#include "twoinf/subspace.hpp"
#include "twoinf/matrix.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace twoinf {

namespace {

void checkOrthonormal(const Matrix& U, const char* name, double tol = 1e-8) {
    if (U.rows() == 0 || U.cols() == 0)
        throw DimensionError(std::string(name) + ": empty matrix");
    if (U.rows() < U.cols())
        throw DimensionError(std::string(name) + ": more columns than rows");
    Matrix G = U.transpose() * U;
    G.diagonal().array() -= 1.0;
    if (G.cwiseAbs().maxCoeff() > tol)
        throw OrthonormalityError(std::string(name) + ": columns not orthonormal within 1e-8");
}

void checkPair(const Matrix& U, const Matrix& Uhat) {
    if (U.rows() != Uhat.rows() || U.cols() != Uhat.cols())
        throw DimensionError("subspace pair: shape mismatch");
    checkOrthonormal(U, "U");
    checkOrthonormal(Uhat, "Uhat");
}

} // namespace

Matrix procrustesAlign(const Matrix& U, const Matrix& Uhat) {
    checkPair(U, Uhat);
    Matrix M = U.transpose() * Uhat; // r x r
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    return svd.matrixU() * svd.matrixV().transpose();
}

double sinTheta(const Matrix& U, const Matrix& Uhat, SinThetaFlavor flavor) {
    checkPair(U, Uhat);
    Matrix M = Uhat.transpose() * U; // r x r
    const int r = static_cast<int>(M.rows());
    if (flavor == SinThetaFlavor::Spectral) {
        Eigen::JacobiSVD<Matrix> svd(M);
        double sr = svd.singularValues()(r - 1);
        return std::sqrt(std::clamp(1.0 - sr * sr, 0.0, 1.0));
    }
    double f2 = M.squaredNorm();
    return std::sqrt(std::clamp(static_cast<double>(r) - f2, 0.0, static_cast<double>(r)));
}

double alignedTwoInfError(const Matrix& U, const Matrix& Uhat) {
    Matrix W = procrustesAlign(U, Uhat);
    return twoInfNorm(Uhat - U * W);
}

} // namespace twoinf
