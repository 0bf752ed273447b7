#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace twoinf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct SymmetryError : Error { using Error::Error; };
struct OrthonormalityError : Error { using Error::Error; };
struct SpectralGapError : Error { using Error::Error; };
struct DegenerateSeparationError : Error { using Error::Error; };
struct ApplicabilityError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct InfeasibleError : Error { using Error::Error; };
struct GenerationError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

/// Throws DomainError if any entry of A is NaN or infinite.
void requireFinite(const Matrix& A, const std::string& what);

} // namespace twoinf
