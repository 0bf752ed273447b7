#pragma once

#include "twoinf/profiles.hpp"

#include <string>
#include <vector>

namespace twoinf {

enum class NormFlavor { Spectral, Frobenius };

struct BoundTerm {
    std::string label;
    double value = 0;
};

/**
 * One evaluated upper bound: total value, per-term breakdown (value is the
 * exact sum of the terms), whether the leading constant comes from an
 * explicit-constant theorem, and whether that theorem's preconditions held.
 */
struct BoundReport {
    std::string id;
    double value = 0;
    std::vector<BoundTerm> terms;
    bool constantExplicit = false;
    bool preconditionsMet = true;
    std::string notes;

    double term(const std::string& label) const;
};

/// Assumption knobs: eps1/eps2 feed the symmetric refined bound, tEps1/tEps2
/// the symmetrized refined bound. Supplied analytically, never fit from data.
struct AssumptionKnobs {
    double eps1 = 0;
    double eps2 = 0;
    double tEps1 = 0;
    double tEps2 = 0;
    double genericConstant = 1.0;
};

/// sin-theta bound 2 ||E|| / (lam_r - lam_{r+1}); errNorm selects which norm
/// of E is supplied (spectral or Frobenius flavor of the same bound).
BoundReport davisKahanBound(const SymErrorProfile& p, NormFlavor flavor, double errNorm);

/// Explicit three-term 2,inf bound for the symmetric case (valid when
/// delta0 <= 1/4; reported with preconditionsMet=false otherwise).
BoundReport symTwoInfBound(const SymErrorProfile& p);

/// Rank-r corollary 7 * epsU * delta_{1,inf}; requires lam_{r+1} = 0.
BoundReport rankRSymBound(const SymErrorProfile& p);

/// Refined symmetric bound under the row-independence assumptions; generic
/// constant, terms epsU*e0 + sqrt(r)*e0*e1 + eEU + |lamR1/lamR|*e0.
BoundReport symRefinedBound(const SymErrorProfile& p, const AssumptionKnobs& k, int r);

/// Rectangular-case 2,inf bound (generic constant).
BoundReport nonsymTwoInfBound(const NonsymErrorProfile& p, const AssumptionKnobs& k);

/// Symmetrized-estimator 2,inf bound (generic constant, five term groups).
BoundReport symmetrizedTwoInfBound(const SymmetrizedProfile& p,
                                   const NonsymErrorProfile& np,
                                   const AssumptionKnobs& k);

/// Refined symmetrized bound; requires d_{r+1} = 0.
BoundReport symmetrizedRefinedBound(const SymmetrizedProfile& p,
                                    const NonsymErrorProfile& np,
                                    const AssumptionKnobs& k, int r);

/**
 * Analytic rate surrogates for iid N(0, sigma^2) noise on a clustered mean
 * matrix with row scale theta, all asymptotic constants set to one.
 */
struct GaussianRates {
    double eps0 = 0;        ///< spectral error rate
    double eps2Inf = 0;     ///< row-wise error rate
    double epsV2Inf = 0;    ///< Xi V row-wise rate
    double epsY = 0;        ///< r / n
    double epsXiXiU2Inf = 0;
    double epsE0 = 0;
    double epsXiXU2Inf = 0;
    double epsE2Inf = 0;
    double eps1 = 0;        ///< Hanson-Wright knob
    double eps2 = 0;        ///< identically 0 for Gaussian noise
    bool logRegimeOk = true; ///< soft check of log m = O(log n)
};

GaussianRates gaussianRateProfile(int n, int m, int r, double sigma, double theta,
                                  double tau = 1.0);

/// Bernstein-form knobs for independent (v,H)-Bernstein noise entries.
AssumptionKnobs bernsteinKnobs(double v, double H, int n, double dR);

} // namespace twoinf
