#pragma once

#include "twoinf/decomp.hpp"
#include "twoinf/rng.hpp"
#include "twoinf/types.hpp"

#include <Eigen/QR>

namespace twoinf::test {

inline Matrix randomMatrix(int n, int m, Rng& rng, double scale = 1.0) {
    Matrix A(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) A(i, j) = scale * rng.normal();
    return A;
}

/// Haar-ish random column-orthonormal n x r basis.
inline Matrix randomOrthonormal(int n, int r, Rng& rng) {
    Matrix G = randomMatrix(n, r, rng);
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ() * Matrix::Identity(n, r);
    Matrix R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
    for (int j = 0; j < r; ++j)
        if (R(j, j) < 0) Q.col(j) = -Q.col(j);
    return Q;
}

/// Random r x r orthogonal matrix.
inline Matrix randomOrthogonal(int r, Rng& rng) { return randomOrthonormal(r, r, rng); }

/// Perturb a basis within its ambient space and re-orthonormalize.
inline Matrix perturbBasis(const Matrix& U, double scale, Rng& rng) {
    Matrix G = randomMatrix(static_cast<int>(U.rows()), static_cast<int>(U.cols()), rng, scale);
    Matrix W = U + G;
    reorthonormalize(W, -1.0); // always re-orthonormalize
    return W;
}

inline Matrix randomSymmetric(int n, Rng& rng, double scale = 1.0) {
    Matrix A = randomMatrix(n, n, rng, scale);
    return 0.5 * (A + A.transpose());
}

} // namespace twoinf::test
