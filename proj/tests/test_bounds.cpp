#include "twoinf/bounds.hpp"
#include "twoinf/matrix.hpp"
#include "twoinf/rng.hpp"
#include "twoinf/subspace.hpp"

#include <doctest.h>

#include "helpers.hpp"

#include <cmath>

using namespace twoinf;
using test::randomOrthonormal;
using test::randomSymmetric;

namespace {

SymErrorProfile symProfileWith(double d0, double d1, double d2, double dEU, double epsU,
                               double lamR, double lamR1) {
    SymErrorProfile p;
    p.delta0 = d0;
    p.delta1Inf = d1;
    p.delta2Inf = d2;
    p.deltaEU = dEU;
    p.epsU = epsU;
    p.lamR = lamR;
    p.lamR1 = lamR1;
    p.cLam = (lamR - lamR1) / std::abs(lamR);
    return p;
}

} // namespace

TEST_CASE("davisKahanBound arithmetic and gap error") {
    SymErrorProfile p = symProfileWith(0, 0, 0, 0, 0.5, 2.0, 1.0);
    CHECK(davisKahanBound(p, NormFlavor::Spectral, 0.0).value == doctest::Approx(0.0));
    CHECK(davisKahanBound(p, NormFlavor::Spectral, 0.1).value == doctest::Approx(0.2));
    SymErrorProfile flat = symProfileWith(0, 0, 0, 0, 0.5, 1.0, 1.0);
    CHECK_THROWS_AS(davisKahanBound(flat, NormFlavor::Spectral, 0.1), SpectralGapError);
}

TEST_CASE("davisKahanBound is never violated on random symmetric perturbations") {
    Rng rng(61);
    for (int t = 0; t < 200; ++t) {
        int n = 10 + rng.uniformInt(0, 10);
        int r = 1 + rng.uniformInt(0, 2);
        Matrix U = randomOrthonormal(n, n, rng);
        Vector lam(n);
        for (int i = 0; i < n; ++i) lam(i) = 5.0 - i * 4.0 / (n - 1); // descending 5 -> 1
        lam.head(r).array() += 5.0;                                   // gap at r
        Matrix Y = U * lam.asDiagonal() * U.transpose();
        Matrix E = randomSymmetric(n, rng, 0.2);
        SymErrorProfile p = symErrorProfile(Y, Y + E, r);
        Matrix Ubase = U.leftCols(r);
        Matrix Uhat = leadingEigs(Y + E, r).basis;
        double stS = sinTheta(Ubase, Uhat, SinThetaFlavor::Spectral);
        double stF = sinTheta(Ubase, Uhat, SinThetaFlavor::Frobenius);
        CHECK(stS <= davisKahanBound(p, NormFlavor::Spectral, spectralNorm(E)).value + 1e-10);
        CHECK(stF <= davisKahanBound(p, NormFlavor::Frobenius, frobeniusNorm(E)).value + 1e-10);
    }
}

TEST_CASE("symTwoInfBound matches the worked arithmetic example") {
    SymErrorProfile p = symProfileWith(0.1, 0.0, 0.05, 0.04, 0.2, 1.0, 0.0);
    BoundReport b = symTwoInfBound(p);
    CHECK(b.constantExplicit);
    CHECK(b.preconditionsMet);
    CHECK(b.term("d0_epsU") == doctest::Approx(0.06).epsilon(1e-12));
    CHECK(b.term("d0_d2inf_tail") == doctest::Approx(0.04 / 3.0).epsilon(1e-12));
    CHECK(b.term("dEU") == doctest::Approx(0.16 / 3.0).epsilon(1e-12));
    CHECK(b.value == doctest::Approx(0.06 + 0.04 / 3.0 + 0.16 / 3.0).epsilon(1e-12));

    SymErrorProfile zero = symProfileWith(0, 0, 0, 0, 0.2, 1.0, 0.0);
    CHECK(symTwoInfBound(zero).value == doctest::Approx(0.0));

    SymErrorProfile far = symProfileWith(0.3, 0, 0, 0, 0.2, 1.0, 0.0);
    CHECK_FALSE(symTwoInfBound(far).preconditionsMet);
}

TEST_CASE("rankRSymBound constant-7 arithmetic and applicability") {
    SymErrorProfile p = symProfileWith(0.05, 0.1, 0.02, 0.01, 0.3, 1.0, 0.0);
    BoundReport b = rankRSymBound(p);
    CHECK(b.value == doctest::Approx(0.21).epsilon(1e-12));
    SymErrorProfile zero = symProfileWith(0, 0, 0, 0, 0.3, 1.0, 0.0);
    CHECK(rankRSymBound(zero).value == doctest::Approx(0.0));
    SymErrorProfile tail = symProfileWith(0.05, 0.1, 0.02, 0.01, 0.3, 1.0, 0.5);
    CHECK_THROWS_AS(rankRSymBound(tail), ApplicabilityError);
}

TEST_CASE("symRefinedBound sums the four displayed terms") {
    SymErrorProfile p = symProfileWith(0.1, 0, 0, 0.03, 0.2, 1.0, 0.0);
    AssumptionKnobs k;
    k.eps1 = 0.05;
    BoundReport b = symRefinedBound(p, k, 4);
    CHECK_FALSE(b.constantExplicit);
    CHECK(b.value == doctest::Approx(0.02 + 0.01 + 0.03).epsilon(1e-12));

    SymErrorProfile zero = symProfileWith(0, 0, 0, 0, 0.0, 1.0, 0.0);
    CHECK(symRefinedBound(zero, AssumptionKnobs{}, 4).value == doctest::Approx(0.0));
}

TEST_CASE("nonsymTwoInfBound bracket arithmetic") {
    NonsymErrorProfile p;
    p.epsU = 0.2;
    p.tDeltaUV0 = 0.05;
    p.tDelta0 = 0.1;
    p.tDeltaV2Inf = 0.02;
    p.tDelta2Inf = 0.08;
    p.dR = 1.0;
    p.dR1 = 0.0;
    BoundReport b = nonsymTwoInfBound(p, AssumptionKnobs{});
    CHECK(b.value == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(b.preconditionsMet);
    NonsymErrorProfile zero;
    zero.dR = 1.0;
    CHECK(nonsymTwoInfBound(zero, AssumptionKnobs{}).value == doctest::Approx(0.0));
}

TEST_CASE("symmetrizedTwoInfBound five-group arithmetic") {
    SymmetrizedProfile p;
    p.hollowFlag = 1;
    p.tDeltaXiXiU2Inf = 0.01;
    p.tDeltaXiXU2Inf = 0.02;
    p.tDeltaUU0 = 0.1;
    p.tDeltaE2Inf = 0.05;
    p.epsY = 0.05;
    p.tDeltaE0 = 0.1;
    NonsymErrorProfile np;
    np.epsU = 0.2;
    np.dR = 1.0;
    np.dR1 = 0.0;
    BoundReport b = symmetrizedTwoInfBound(p, np, AssumptionKnobs{});
    CHECK(b.value == doctest::Approx(0.07).epsilon(1e-12));
    CHECK(b.preconditionsMet);

    SymmetrizedProfile zero;
    zero.hollowFlag = 0;
    CHECK(symmetrizedTwoInfBound(zero, np, AssumptionKnobs{}).value == doctest::Approx(0.0));
}

TEST_CASE("symmetrizedRefinedBound matches the worked delta displays") {
    SymmetrizedProfile p;
    p.hollowFlag = 1;
    p.tDeltaXiXiU2Inf = 0.01;
    p.tDeltaXiXU2Inf = 0.02;
    p.tDeltaUU0 = 0.1;
    p.epsY = 0.03;
    p.tDeltaE0 = 0.1;
    NonsymErrorProfile np;
    np.epsU = 0.2;
    np.tDelta0 = 0.1;
    np.dR = 1.0;
    np.dR1 = 0.0;
    AssumptionKnobs k;
    k.tEps1 = 0.05;
    k.tEps2 = 0.0;
    BoundReport b = symmetrizedRefinedBound(p, np, k, 4);
    CHECK(b.term("tdel1") == doctest::Approx(0.071).epsilon(1e-12));
    CHECK(b.term("epsU_tdel1U") == doctest::Approx(0.2 * 0.1155).epsilon(1e-12));
    CHECK(b.value == doctest::Approx(0.0941).epsilon(1e-12));

    NonsymErrorProfile tail = np;
    tail.dR1 = 0.5;
    CHECK_THROWS_AS(symmetrizedRefinedBound(p, tail, k, 4), ApplicabilityError);

    SymmetrizedProfile zero;
    zero.hollowFlag = 1;
    zero.epsY = 0.0;
    CHECK(symmetrizedRefinedBound(zero, np, AssumptionKnobs{}, 4).value ==
          doctest::Approx(0.0));
}

TEST_CASE("bound values are the exact sum of their terms") {
    SymErrorProfile p = symProfileWith(0.07, 0.2, 0.04, 0.03, 0.4, 2.0, 0.5);
    for (const BoundReport& b :
         {symTwoInfBound(p), symRefinedBound(p, AssumptionKnobs{}, 3)}) {
        double s = 0;
        for (const auto& t : b.terms) s += t.value;
        CHECK(b.value == doctest::Approx(s).epsilon(1e-15));
    }
}

TEST_CASE("constant-free bounds are monotone in each profile field") {
    NonsymErrorProfile np;
    np.epsU = 0.2;
    np.epsV = 0.3;
    np.tDeltaUV0 = 0.05;
    np.tDelta0 = 0.1;
    np.tDeltaV2Inf = 0.02;
    np.tDelta2Inf = 0.08;
    np.tDelta2InfT = 0.07;
    np.tDeltaU0 = 0.06;
    np.dR = 1.0;
    np.dR1 = 0.0;
    SymmetrizedProfile sp;
    sp.hollowFlag = 1;
    sp.tDeltaXiXiU2Inf = 0.01;
    sp.tDeltaXiXU2Inf = 0.02;
    sp.tDeltaUU0 = 0.1;
    sp.tDeltaE2Inf = 0.05;
    sp.epsY = 0.04;
    sp.tDeltaE0 = 0.1;
    AssumptionKnobs k;
    k.tEps1 = 0.05;
    k.tEps2 = 0.01;

    const double base4 = nonsymTwoInfBound(np, k).value;
    const double base5 = symmetrizedTwoInfBound(sp, np, k).value;
    const double base6 = symmetrizedRefinedBound(sp, np, k, 3).value;
    const double bump = 0.01;

    auto checkBump = [&](auto&& setter) {
        NonsymErrorProfile np2 = np;
        SymmetrizedProfile sp2 = sp;
        setter(np2, sp2);
        CHECK(nonsymTwoInfBound(np2, k).value >= base4 - 1e-15);
        CHECK(symmetrizedTwoInfBound(sp2, np2, k).value >= base5 - 1e-15);
        CHECK(symmetrizedRefinedBound(sp2, np2, k, 3).value >= base6 - 1e-15);
    };
    checkBump([&](NonsymErrorProfile& a, SymmetrizedProfile&) { a.tDelta0 += bump; });
    checkBump([&](NonsymErrorProfile& a, SymmetrizedProfile&) { a.tDeltaUV0 += bump; });
    checkBump([&](NonsymErrorProfile& a, SymmetrizedProfile&) { a.tDeltaV2Inf += bump; });
    checkBump([&](NonsymErrorProfile& a, SymmetrizedProfile&) { a.tDelta2Inf += bump; });
    checkBump([&](NonsymErrorProfile& a, SymmetrizedProfile&) { a.tDelta2InfT += bump; });
    checkBump([&](NonsymErrorProfile& a, SymmetrizedProfile&) { a.tDeltaU0 += bump; });
    checkBump([&](NonsymErrorProfile&, SymmetrizedProfile& b) { b.tDeltaXiXiU2Inf += bump; });
    checkBump([&](NonsymErrorProfile&, SymmetrizedProfile& b) { b.tDeltaXiXU2Inf += bump; });
    checkBump([&](NonsymErrorProfile&, SymmetrizedProfile& b) { b.tDeltaUU0 += bump; });
    checkBump([&](NonsymErrorProfile&, SymmetrizedProfile& b) { b.tDeltaE2Inf += bump; });
    checkBump([&](NonsymErrorProfile&, SymmetrizedProfile& b) { b.tDeltaE0 += bump; });
    checkBump([&](NonsymErrorProfile&, SymmetrizedProfile& b) { b.epsY += bump; });
}

TEST_CASE("gaussianRateProfile closed forms") {
    GaussianRates g = gaussianRateProfile(100, 100, 1, 0.5, 0.5);
    CHECK(g.eps0 == doctest::Approx(2.0 / 10.0).epsilon(1e-12));
    GaussianRates g2 = gaussianRateProfile(100, 64, 2, 1.0, 1.0);
    CHECK(g2.epsY == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(g2.eps2 == 0.0);
    CHECK_THROWS_AS(gaussianRateProfile(0, 1, 1, 1, 1), DomainError);
}

TEST_CASE("bernsteinKnobs closed forms") {
    AssumptionKnobs k = bernsteinKnobs(0.01, 1.0, 1024, 10.0);
    double logn = std::log(1024.0);
    CHECK(k.tEps1 == doctest::Approx(std::sqrt(0.01 * logn) / 10.0));
    CHECK(k.tEps2 == doctest::Approx(logn / 10.0));
}
