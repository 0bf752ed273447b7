#pragma once

#include "twoinf/types.hpp"

namespace twoinf {

enum class SinThetaFlavor { Spectral, Frobenius };

/**
 * Orthogonal Procrustes alignment: the r x r orthogonal W minimizing
 * ||Uhat - U W||_F, from the SVD of U^T Uhat. Both inputs must be
 * column-orthonormal within 1e-8.
 */
Matrix procrustesAlign(const Matrix& U, const Matrix& Uhat);

/**
 * sin-theta distance between the column spaces of two orthonormal bases.
 * Spectral flavor: sqrt(1 - sigma_r^2(Uhat^T U)), in [0,1].
 * Frobenius flavor: sqrt(r - ||Uhat^T U||_F^2), in [0, sqrt(r)].
 */
double sinTheta(const Matrix& U, const Matrix& Uhat, SinThetaFlavor flavor);

/// ||Uhat - U * procrustesAlign(U, Uhat)||_{2,inf} — the aligned row-wise error.
double alignedTwoInfError(const Matrix& U, const Matrix& Uhat);

} // namespace twoinf
