#include "twoinf/matrix.hpp"
#include "twoinf/rng.hpp"
#include "twoinf/subspace.hpp"

#include <doctest.h>

#include "helpers.hpp"

#include <cmath>

using namespace twoinf;
using test::perturbBasis;
using test::randomOrthogonal;
using test::randomOrthonormal;

TEST_CASE("procrustesAlign identity and exact-rotation cases") {
    Rng rng(31);
    Matrix U = randomOrthonormal(12, 3, rng);
    Matrix W = procrustesAlign(U, U);
    CHECK(maxAbs(W - Matrix::Identity(3, 3)) < 1e-12);

    Matrix R = randomOrthogonal(3, rng);
    Matrix W2 = procrustesAlign(U, U * R);
    CHECK(maxAbs(W2 - R) < 1e-10);
}

TEST_CASE("procrustesAlign beats random orthogonal competitors in Frobenius error") {
    Rng rng(32);
    for (int t = 0; t < 10; ++t) {
        Matrix U = randomOrthonormal(20, 3, rng);
        Matrix Uhat = perturbBasis(U, 0.2, rng);
        Matrix W = procrustesAlign(U, Uhat);
        double best = frobeniusNorm(Uhat - U * W);
        for (int c = 0; c < 500; ++c) {
            Matrix O = randomOrthogonal(3, rng);
            CHECK(best <= frobeniusNorm(Uhat - U * O) + 1e-9);
        }
    }
}

TEST_CASE("procrustesAlign validates orthonormality") {
    Rng rng(33);
    Matrix U = randomOrthonormal(8, 2, rng);
    Matrix bad = U;
    bad(0, 0) += 0.1;
    CHECK_THROWS_AS(procrustesAlign(U, bad), OrthonormalityError);
    Matrix other = randomOrthonormal(9, 2, rng);
    CHECK_THROWS_AS(procrustesAlign(U, other), DimensionError);
}

TEST_CASE("sinTheta on identical, orthogonal and analytic-angle pairs") {
    Matrix U(2, 1), Uhat(2, 1);
    U << 1, 0;
    Uhat << 0, 1;
    CHECK(sinTheta(U, U, SinThetaFlavor::Spectral) == doctest::Approx(0.0));
    CHECK(sinTheta(U, Uhat, SinThetaFlavor::Spectral) == doctest::Approx(1.0));
    double th = M_PI / 6.0;
    Matrix Urot(2, 1);
    Urot << std::cos(th), std::sin(th);
    CHECK(sinTheta(U, Urot, SinThetaFlavor::Spectral) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sinTheta(U, Urot, SinThetaFlavor::Frobenius) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sinTheta rejects shape mismatches") {
    Rng rng(38);
    Matrix U = randomOrthonormal(8, 2, rng);
    Matrix W = randomOrthonormal(9, 2, rng);
    CHECK_THROWS_AS(sinTheta(U, W, SinThetaFlavor::Spectral), DimensionError);
}

TEST_CASE("alignedTwoInfError vanishes under rotation") {
    Rng rng(34);
    Matrix U = randomOrthonormal(15, 3, rng);
    CHECK(alignedTwoInfError(U, U) < 1e-12);
    Matrix R = randomOrthogonal(3, rng);
    CHECK(alignedTwoInfError(U, U * R) < 1e-10);
}

TEST_CASE("aligned error sits between the search estimate and the sin-theta cap") {
    Rng rng(35);
    for (int t = 0; t < 5; ++t) {
        Matrix U = randomOrthonormal(18, 3, rng);
        Matrix Uhat = perturbBasis(U, 0.15, rng);
        double value = alignedTwoInfError(U, Uhat);
        Matrix WU = procrustesAlign(U, Uhat);
        double est = twoInfNorm(Uhat - U * WU);
        for (int c = 0; c < 2000; ++c) {
            Matrix O = randomOrthogonal(3, rng);
            est = std::min(est, twoInfNorm(Uhat - U * O));
        }
        CHECK(value >= est - 1e-12);
        double st = sinTheta(U, Uhat, SinThetaFlavor::Spectral);
        CHECK(value <= std::sqrt(2.0) * st + 1e-9);
    }
}

TEST_CASE("supplementary subspace identities hold on random pairs") {
    Rng rng(36);
    for (int t = 0; t < 300; ++t) {
        int r = 1 + rng.uniformInt(0, 3);
        Matrix U = randomOrthonormal(20, r, rng);
        Matrix Uhat = perturbBasis(U, 0.05 + 0.4 * rng.uniform01(), rng);
        double st = sinTheta(U, Uhat, SinThetaFlavor::Spectral);
        Matrix WU = procrustesAlign(U, Uhat);
        CHECK(spectralNorm(U.transpose() * Uhat - WU) <= st * st + 1e-9);
        CHECK(spectralNorm(Uhat - U * U.transpose() * Uhat) ==
              doctest::Approx(st).epsilon(1e-9));
        CHECK(spectralNorm(Uhat - U * WU) <= std::sqrt(2.0) * st + 1e-9);
        Matrix I = Matrix::Identity(r, r);
        CHECK(spectralNorm(I - Uhat.transpose() * U * U.transpose() * Uhat) ==
              doctest::Approx(st * st).epsilon(1e-9));
    }
}

TEST_CASE("spectral sandwich with the aligner included in the candidate set") {
    Rng rng(37);
    for (int t = 0; t < 20; ++t) {
        Matrix U = randomOrthonormal(16, 3, rng);
        Matrix Uhat = perturbBasis(U, 0.2, rng);
        double st = sinTheta(U, Uhat, SinThetaFlavor::Spectral);
        Matrix WU = procrustesAlign(U, Uhat);
        double est = spectralNorm(Uhat - U * WU);
        for (int c = 0; c < 1000; ++c)
            est = std::min(est, spectralNorm(Uhat - U * randomOrthogonal(3, rng)));
        CHECK(st <= est + 1e-9);
        CHECK(est <= std::sqrt(2.0) * st + 1e-9);
        CHECK(spectralNorm(Uhat - U * WU) <= 2.0 * st + 1e-9);
    }
}
