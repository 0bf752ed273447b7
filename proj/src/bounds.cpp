#include "twoinf/bounds.hpp"
#include "twoinf/matrix_io.hpp"

#include <cmath>

namespace twoinf {

double BoundReport::term(const std::string& label) const {
    for (const auto& t : terms)
        if (t.label == label) return t.value;
    throw DomainError("BoundReport: no term named '" + label + "'");
}

namespace {

double finish(BoundReport& b) {
    double v = 0;
    for (const auto& t : b.terms) v += t.value;
    b.value = v;
    return v;
}

} // namespace

BoundReport davisKahanBound(const SymErrorProfile& p, NormFlavor flavor, double errNorm) {
    if (errNorm < 0) throw DomainError("davisKahanBound: negative error norm");
    double gap = p.lamR - p.lamR1;
    if (gap <= 0)
        throw SpectralGapError("davisKahanBound: requires lam_r > lam_{r+1}");
    BoundReport b;
    b.id = "dk";
    b.constantExplicit = true;
    b.preconditionsMet = true;
    b.notes = flavor == NormFlavor::Spectral ? "spectral flavor" : "frobenius flavor";
    b.terms.push_back({"two_errnorm_over_gap", 2.0 * errNorm / gap});
    finish(b);
    return b;
}

BoundReport symTwoInfBound(const SymErrorProfile& p) {
    BoundReport b;
    b.id = "thm2";
    b.constantExplicit = true;
    b.preconditionsMet = (p.delta0 <= 0.25) && (p.cLam > 0);
    if (!b.preconditionsMet) b.notes = "delta0 > 1/4 or nonpositive gap";
    const double c = p.cLam;
    double lead = (4.0 / 3.0 + 2.0 / (3.0 * c) + 1.0 / (c * c)) * p.delta0 * p.epsU;
    double tailRatio = std::abs(p.lamR) > 0 ? std::abs(p.lamR1) / std::abs(p.lamR) : 0.0;
    double mid = (8.0 * p.delta0 / (3.0 * c)) * (p.delta2Inf + tailRatio);
    double last = (4.0 / 3.0) * p.deltaEU;
    b.terms.push_back({"d0_epsU", lead});
    b.terms.push_back({"d0_d2inf_tail", mid});
    b.terms.push_back({"dEU", last});
    finish(b);
    return b;
}

BoundReport rankRSymBound(const SymErrorProfile& p) {
    if (std::abs(p.lamR1) > 1e-10 * std::max(1.0, std::abs(p.lamR)))
        throw ApplicabilityError("rankRSymBound: requires lam_{r+1} = 0 (rank-r case)");
    BoundReport b;
    b.id = "rankR";
    b.constantExplicit = true;
    b.preconditionsMet = p.delta0 <= 0.25;
    if (!b.preconditionsMet) b.notes = "delta0 > 1/4";
    b.terms.push_back({"epsU_d1inf", 7.0 * p.epsU * p.delta1Inf});
    finish(b);
    return b;
}

BoundReport symRefinedBound(const SymErrorProfile& p, const AssumptionKnobs& k, int r) {
    BoundReport b;
    b.id = "thm3";
    b.constantExplicit = false;
    b.preconditionsMet = p.delta0 < 1.0 && k.eps1 < 1.0 && k.eps2 < 1.0;
    b.notes = "surrogates: e0=" + formatDouble(p.delta0) + " e1=" + formatDouble(k.eps1) +
              " e2=" + formatDouble(k.eps2);
    const double C = k.genericConstant;
    double tailRatio = std::abs(p.lamR) > 0 ? std::abs(p.lamR1) / std::abs(p.lamR) : 0.0;
    b.terms.push_back({"e0_epsU", C * p.delta0 * p.epsU});
    b.terms.push_back({"e0_e1_sqrtR", C * p.delta0 * k.eps1 * std::sqrt(static_cast<double>(r))});
    b.terms.push_back({"eEU", C * p.deltaEU});
    b.terms.push_back({"tail", C * tailRatio * p.delta0});
    finish(b);
    return b;
}

BoundReport nonsymTwoInfBound(const NonsymErrorProfile& p, const AssumptionKnobs& k) {
    BoundReport b;
    b.id = "thm4";
    b.constantExplicit = false;
    b.preconditionsMet = p.tDelta0 <= 0.25;
    if (!b.preconditionsMet) b.notes = "tDelta0 > 1/4";
    const double C = k.genericConstant;
    double tail = p.dR > 0 ? p.dR1 / p.dR : 0.0;
    b.terms.push_back({"epsU_duv_d0sq", C * p.epsU * (p.tDeltaUV0 + p.tDelta0 * p.tDelta0)});
    b.terms.push_back({"dv2inf", C * p.tDeltaV2Inf});
    b.terms.push_back({"d0_d2inf_tail", C * p.tDelta0 * (p.tDelta2Inf + tail)});
    finish(b);
    return b;
}

BoundReport symmetrizedTwoInfBound(const SymmetrizedProfile& p,
                                   const NonsymErrorProfile& np,
                                   const AssumptionKnobs& k) {
    BoundReport b;
    b.id = "thm5";
    b.constantExplicit = false;
    b.preconditionsMet = (p.hollowFlag * p.epsY <= 0.25) && (p.tDeltaE0 <= 0.5);
    if (!b.preconditionsMet) b.notes = "hollow*epsY > 1/4 or tDeltaE0 > 1/2";
    const double C = k.genericConstant;
    double tail = np.dR > 0 ? np.dR1 / np.dR : 0.0;
    b.terms.push_back({"xixiU", C * p.tDeltaXiXiU2Inf});
    b.terms.push_back({"xiXU", C * p.tDeltaXiXU2Inf});
    b.terms.push_back({"duu0_epsU_E2inf", C * p.tDeltaUU0 * (np.epsU + p.tDeltaE2Inf)});
    b.terms.push_back({"tail_group",
                       C * tail * (np.tDeltaU0 + p.tDeltaE0 * np.tDelta0 + tail * p.tDeltaE0)});
    b.terms.push_back({"hollow_epsY",
                       C * p.hollowFlag * p.epsY * (np.epsU + p.tDeltaE0)});
    finish(b);
    return b;
}

BoundReport symmetrizedRefinedBound(const SymmetrizedProfile& p,
                                    const NonsymErrorProfile& np,
                                    const AssumptionKnobs& k, int r) {
    if (np.dR > 0 && np.dR1 > 1e-10 * std::max(1.0, np.dR))
        throw ApplicabilityError("symmetrizedRefinedBound: requires d_{r+1} = 0");
    BoundReport b;
    b.id = "thm6";
    b.constantExplicit = false;
    const double C = k.genericConstant;
    const double sqrtR = std::sqrt(static_cast<double>(r));
    const double mixed = k.tEps1 * (np.tDelta0 + 1.0) +
                         k.tEps2 * (np.tDelta2InfT + np.epsV);
    const double mixedR = sqrtR * k.tEps1 * (np.tDelta0 + 1.0) +
                          k.tEps2 * (np.tDelta2InfT + np.epsV);
    const double h = static_cast<double>(p.hollowFlag);
    double tdel1 = p.tDeltaXiXiU2Inf + p.tDeltaXiXU2Inf + p.tDeltaUU0 * mixedR +
                   h * p.epsY + (1.0 - h) * np.tDelta2Inf * np.tDelta2Inf;
    double tdel1U = p.tDeltaUU0 + p.tDeltaE0 * (p.tDeltaE0 + mixed);
    // Finite-n surrogates of the four o(1) conditions.
    double c1 = p.tDeltaE0;
    double c2 = sqrtR * k.tEps1 * (np.tDelta0 + 1.0);
    double c3 = k.tEps2 * (np.tDelta2InfT + np.epsV);
    double c4 = (1.0 - h) * np.tDelta2Inf;
    b.preconditionsMet = c1 < 1.0 && c2 < 1.0 && c3 < 1.0 && c4 < 1.0;
    b.notes = "o1 surrogates: " + formatDouble(c1) + " " + formatDouble(c2) + " " +
              formatDouble(c3) + " " + formatDouble(c4);
    b.terms.push_back({"tdel1", C * tdel1});
    b.terms.push_back({"epsU_tdel1U", C * np.epsU * tdel1U});
    finish(b);
    return b;
}

GaussianRates gaussianRateProfile(int n, int m, int r, double sigma, double theta,
                                  double /*tau*/) {
    if (n <= 0 || m <= 0 || r <= 0 || sigma < 0 || theta <= 0)
        throw DomainError("gaussianRateProfile: inputs must be positive");
    GaussianRates g;
    const double logn = std::log(static_cast<double>(n));
    const double logm = std::log(static_cast<double>(m));
    g.logRegimeOk = logm <= 4.0 * std::max(logn, 1.0);
    const double s = sigma * std::sqrt(static_cast<double>(r)) / theta; // sigma sqrt(r)/theta
    const double s2 = s * s;                                            // sigma^2 r / theta^2
    const double sqn = std::sqrt(static_cast<double>(n));
    const double sqm = std::sqrt(static_cast<double>(m));
    const double sqmn = sqm * sqn;
    const double sqr = std::sqrt(static_cast<double>(r));
    g.eps0 = s * (1.0 / sqm + 1.0 / sqn);
    g.eps2Inf = s * std::sqrt(logn) / sqn;
    g.epsV2Inf = s * std::sqrt(static_cast<double>(r) * logn) / sqmn;
    g.epsY = static_cast<double>(r) / static_cast<double>(n);
    g.epsXiXiU2Inf = s2 * logn * sqr / (static_cast<double>(n) * sqm);
    g.epsE0 = s2 * logn / static_cast<double>(m) + static_cast<double>(r) / static_cast<double>(n);
    g.epsXiXU2Inf = s * logn * sqr / sqmn;
    g.epsE2Inf = s2 * logn / sqmn + s * std::sqrt(static_cast<double>(r) * logn) / sqmn;
    g.eps1 = s * std::sqrt(logn) / sqmn;
    g.eps2 = 0.0;
    return g;
}

AssumptionKnobs bernsteinKnobs(double v, double H, int n, double dR) {
    if (v < 0 || H < 0 || n <= 0 || dR <= 0)
        throw DomainError("bernsteinKnobs: inputs must be positive");
    AssumptionKnobs k;
    double logn = std::log(static_cast<double>(n));
    k.tEps1 = std::sqrt(v * logn) / dR;
    k.tEps2 = H * logn / dR;
    k.eps1 = k.tEps1;
    k.eps2 = k.tEps2;
    return k;
}

} // namespace twoinf
