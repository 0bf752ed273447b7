#pragma once

#include "twoinf/types.hpp"

namespace twoinf {

/// max_i ||A(i,:)||_2 — worst-case Euclidean row norm.
double twoInfNorm(const Matrix& A);

/// max_i ||A(i,:)||_1 — worst-case absolute row sum.
double oneInfNorm(const Matrix& A);

/// Largest singular value. Computed from the smaller-side Gram spectrum,
/// accurate to machine precision relative to ||A||.
double spectralNorm(const Matrix& A);

double frobeniusNorm(const Matrix& A);

/// max_ij |A(i,j)|
double maxAbs(const Matrix& A);

/// Zero the diagonal of a square matrix, off-diagonal entries untouched.
Matrix hollow(const Matrix& A);

} // namespace twoinf
