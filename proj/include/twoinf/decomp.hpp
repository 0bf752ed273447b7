#pragma once

#include "twoinf/types.hpp"

#include <optional>

namespace twoinf {

enum class EigOrder {
    Algebraic, ///< lambda_1 >= ... >= lambda_n
    Magnitude  ///< |lambda_1| >= ... >= |lambda_n|, ties broken algebraically
};

/**
 * Rank-r leading factor of a matrix: orthonormal basis, retained spectrum,
 * optional right basis for rectangular input, and the first discarded
 * spectral value.
 */
struct SpectralPair {
    Matrix basis;                  ///< n x r, column-orthonormal
    Vector spectrum;               ///< r values, ordered per the ordering rule
    std::optional<Matrix> coBasis; ///< m x r right factor, rectangular input only
    double nextValue = 0.0;        ///< lambda_{r+1} or d_{r+1}; 0 at full rank

    int rank() const { return static_cast<int>(spectrum.size()); }

    /// Throws OrthonormalityError if basis (or coBasis) drifts beyond tol.
    void validate(double tol = 1e-8) const;
};

/**
 * Top-r eigenpairs of a symmetric matrix.
 *
 * Y must be symmetric within 1e-10 (absolute, scaled by max|Y|) and
 * 1 <= r < n. nextValue is the (r+1)-th value in the chosen ordering.
 */
SpectralPair leadingEigs(const Matrix& Y, int r, EigOrder order = EigOrder::Algebraic);

/// Top-r singular triplets of X, singular values descending; 1 <= r < min(n,m).
SpectralPair svdR(const Matrix& X, int r);

/// svdR without the right factor (V is expensive for very wide inputs).
SpectralPair svdRLeftOnly(const Matrix& X, int r);

/// Re-orthonormalize the columns of U in place via QR when drift exceeds tol.
void reorthonormalize(Matrix& U, double driftTol = 1e-12);

} // namespace twoinf
