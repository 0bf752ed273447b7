#include "twoinf/decomp.hpp"
#include "twoinf/matrix.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace twoinf {

namespace {

double orthDrift(const Matrix& U) {
    Matrix G = U.transpose() * U;
    G.diagonal().array() -= 1.0;
    return G.cwiseAbs().maxCoeff();
}

// Gram-route SVD pays off when one side dwarfs the other.
bool useGramRoute(Eigen::Index n, Eigen::Index m) {
    Eigen::Index lo = std::min(n, m), hi = std::max(n, m);
    return hi >= 8 * lo && hi >= 1024;
}

SpectralPair svdViaGram(const Matrix& X, int r, bool wantV) {
    const bool tall = X.rows() > X.cols();
    // G is the Gram matrix of the short side.
    Matrix G;
    if (tall)
        G.noalias() = X.transpose() * X;
    else
        G.noalias() = X * X.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(G);
    const Eigen::Index k = G.rows();
    Vector lam = es.eigenvalues();   // ascending
    double scale = std::max(lam.cwiseAbs().maxCoeff(), 0.0);
    // Short-side singular factor, descending.
    Matrix W(k, r);
    Vector d(r);
    for (int j = 0; j < r; ++j) {
        W.col(j) = es.eigenvectors().col(k - 1 - j);
        d(j) = std::sqrt(std::max(lam(k - 1 - j), 0.0));
    }
    double next = std::sqrt(std::max(lam(k - 1 - r), 0.0));
    const bool needLong = tall || wantV;
    Matrix longSide;
    if (needLong) {
        // Long-side factor needs d_r well away from zero; the caller falls
        // back to the dense path otherwise.
        if (d(r - 1) * d(r - 1) <= 1e-12 * std::max(scale, 1.0))
            throw SpectralGapError("gram-route svd: retained spectrum too small");
        if (tall)
            longSide.noalias() = X * W;
        else
            longSide.noalias() = X.transpose() * W;
        for (int j = 0; j < r; ++j) longSide.col(j) /= d(j);
        reorthonormalize(longSide, 1e-12);
    }

    SpectralPair out;
    out.spectrum = d;
    out.nextValue = next;
    if (tall) {
        out.basis = std::move(longSide);
        if (wantV) out.coBasis = W;
    } else {
        out.basis = W;
        if (wantV) out.coBasis = std::move(longSide);
    }
    return out;
}

SpectralPair svdDense(const Matrix& X, int r, bool wantV) {
    SpectralPair out;
    Vector sv;
    Matrix U, V;
    if (std::min(X.rows(), X.cols()) <= 32) {
        Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
        sv = svd.singularValues();
        U = svd.matrixU();
        V = svd.matrixV();
    } else {
        Eigen::BDCSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
        sv = svd.singularValues();
        U = svd.matrixU();
        V = svd.matrixV();
    }
    out.basis = U.leftCols(r);
    out.spectrum = sv.head(r);
    out.nextValue = (r < sv.size()) ? sv(r) : 0.0;
    if (wantV) out.coBasis = V.leftCols(r);
    return out;
}

SpectralPair svdRImpl(const Matrix& X, int r, bool wantV) {
    requireFinite(X, "svdR");
    const Eigen::Index n = X.rows(), m = X.cols();
    if (n == 0 || m == 0) throw DimensionError("svdR: empty matrix");
    if (r < 1 || r >= std::min(n, m))
        throw DimensionError("svdR: need 1 <= r < min(n,m)");
    if (useGramRoute(n, m)) {
        try {
            return svdViaGram(X, r, wantV);
        } catch (const SpectralGapError&) {
            // fall through to the exact path
        }
    }
    SpectralPair out = svdDense(X, r, wantV);
    reorthonormalize(out.basis, 1e-12);
    if (out.coBasis) reorthonormalize(*out.coBasis, 1e-12);
    return out;
}

} // namespace

void reorthonormalize(Matrix& U, double driftTol) {
    if (orthDrift(U) <= driftTol) return;
    Eigen::HouseholderQR<Matrix> qr(U);
    Matrix Q = qr.householderQ() * Matrix::Identity(U.rows(), U.cols());
    // Keep column signs aligned with the input.
    Matrix R = qr.matrixQR().topRows(U.cols()).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < U.cols(); ++j)
        if (R(j, j) < 0) Q.col(j) = -Q.col(j);
    U = std::move(Q);
}

void SpectralPair::validate(double tol) const {
    if (orthDrift(basis) > tol)
        throw OrthonormalityError("SpectralPair: basis not column-orthonormal");
    if (coBasis && orthDrift(*coBasis) > tol)
        throw OrthonormalityError("SpectralPair: coBasis not column-orthonormal");
}

SpectralPair leadingEigs(const Matrix& Y, int r, EigOrder order) {
    requireFinite(Y, "leadingEigs");
    const Eigen::Index n = Y.rows();
    if (n == 0) throw DimensionError("leadingEigs: empty matrix");
    if (Y.cols() != n) throw DimensionError("leadingEigs: matrix must be square");
    if (r < 1 || r >= n) throw DimensionError("leadingEigs: need 1 <= r < n");
    double symTol = 1e-10 * std::max(1.0, maxAbs(Y));
    if (maxAbs(Y - Y.transpose()) > symTol)
        throw SymmetryError("leadingEigs: matrix is not symmetric within 1e-10");

    Matrix S = 0.5 * (Y + Y.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(S);
    const Vector& lam = es.eigenvalues(); // ascending

    std::vector<int> idx(static_cast<size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    if (order == EigOrder::Algebraic) {
        std::reverse(idx.begin(), idx.end());
    } else {
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            double ma = std::abs(lam(a)), mb = std::abs(lam(b));
            if (ma != mb) return ma > mb;
            return lam(a) > lam(b);
        });
    }

    SpectralPair out;
    out.basis.resize(n, r);
    out.spectrum.resize(r);
    for (int j = 0; j < r; ++j) {
        out.basis.col(j) = es.eigenvectors().col(idx[static_cast<size_t>(j)]);
        out.spectrum(j) = lam(idx[static_cast<size_t>(j)]);
    }
    out.nextValue = lam(idx[static_cast<size_t>(r)]);
    reorthonormalize(out.basis, 1e-12);
    return out;
}

SpectralPair svdR(const Matrix& X, int r) { return svdRImpl(X, r, true); }

SpectralPair svdRLeftOnly(const Matrix& X, int r) { return svdRImpl(X, r, false); }

} // namespace twoinf
