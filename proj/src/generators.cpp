#include "twoinf/generators.hpp"
#include "twoinf/matrix.hpp"
#include "twoinf/subspace.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace twoinf {

std::vector<int> balancedSizes(int n, int r, double imbalance) {
    if (r < 1 || n < r) throw DomainError("balancedSizes: need n >= r >= 1");
    if (imbalance < 1.0) throw DomainError("balancedSizes: imbalance must be >= 1");
    std::vector<double> w(static_cast<size_t>(r), 1.0);
    if (r > 1 && imbalance > 1.0) {
        double top = imbalance * imbalance;
        for (int k = 0; k < r; ++k)
            w[static_cast<size_t>(k)] = 1.0 + (top - 1.0) * k / static_cast<double>(r - 1);
    }
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<int> sizes(static_cast<size_t>(r), 1);
    int assigned = r;
    for (int k = 0; k < r; ++k) {
        int extra = static_cast<int>(std::floor((n * w[static_cast<size_t>(k)]) / total)) - 1;
        if (extra > 0) {
            sizes[static_cast<size_t>(k)] += extra;
            assigned += extra;
        }
    }
    int k = 0;
    while (assigned < n) {
        ++sizes[static_cast<size_t>(k % r)];
        ++assigned;
        ++k;
    }
    return sizes;
}

std::vector<int> shuffledLabels(const std::vector<int>& sizes, Rng& rng) {
    std::vector<int> z;
    for (size_t k = 0; k < sizes.size(); ++k)
        z.insert(z.end(), static_cast<size_t>(sizes[k]), static_cast<int>(k));
    for (int i = static_cast<int>(z.size()) - 1; i > 0; --i) {
        int j = rng.uniformInt(0, i);
        std::swap(z[static_cast<size_t>(i)], z[static_cast<size_t>(j)]);
    }
    return z;
}

namespace {

Matrix drawNormalMatrix(int rows, int cols, Rng& rng, double scale = 1.0) {
    Matrix G(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            G(i, j) = scale * rng.normal();
    return G;
}

Matrix thinQ(const Matrix& A) {
    Eigen::HouseholderQR<Matrix> qr(A);
    return qr.householderQ() * Matrix::Identity(A.rows(), A.cols());
}

// sigma_r / sigma_1 of a matrix with few rows.
double conditioningRatio(const Matrix& A) {
    Matrix G = A * A.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(G, Eigen::EigenvaluesOnly);
    double lo = std::max(es.eigenvalues().minCoeff(), 0.0);
    double hi = std::max(es.eigenvalues().maxCoeff(), 0.0);
    if (hi <= 0) return 0.0;
    return std::sqrt(lo / hi);
}

// Truth factorization of X = Z Theta: U = U_z U_Theta, d, V from the
// eigendecomposition of the r x r Gram of sqrt(D_z) Theta.
struct Factorization {
    Matrix U;
    Vector d;
    Matrix V;
};

Factorization factorClusteredMeans(const std::vector<int>& z,
                                   const std::vector<int>& sizes,
                                   const Matrix& theta) {
    const int r = static_cast<int>(sizes.size());
    const int n = static_cast<int>(z.size());
    Vector sqrtSizes(r);
    for (int k = 0; k < r; ++k) sqrtSizes(k) = std::sqrt(static_cast<double>(sizes[static_cast<size_t>(k)]));
    Matrix Ms = sqrtSizes.asDiagonal() * theta; // r x m
    Matrix G = Ms * Ms.transpose();             // r x r
    Eigen::SelfAdjointEigenSolver<Matrix> es(G);
    Factorization f;
    f.d.resize(r);
    Matrix Utheta(r, r);
    for (int j = 0; j < r; ++j) {
        f.d(j) = std::sqrt(std::max(es.eigenvalues()(r - 1 - j), 0.0));
        Utheta.col(j) = es.eigenvectors().col(r - 1 - j);
    }
    if (f.d(r - 1) <= 1e-12 * std::max(1.0, f.d(0)))
        throw GenerationError("clustered means are rank deficient");
    f.U.resize(n, r);
    for (int i = 0; i < n; ++i)
        f.U.row(i) = Utheta.row(z[static_cast<size_t>(i)]) / sqrtSizes(z[static_cast<size_t>(i)]);
    f.V = Ms.transpose() * Utheta * f.d.cwiseInverse().asDiagonal(); // m x r
    reorthonormalize(f.V, 1e-12);
    return f;
}

} // namespace

GaussianInstance genGaussianMixture(const GaussianScenario& s) {
    if (s.n < s.r || s.m <= s.r || s.r < 1)
        throw GenerationError("genGaussianMixture: need n >= r, m > r, r >= 1");
    if (s.theta <= 0 || s.sigma < 0)
        throw GenerationError("genGaussianMixture: need theta > 0, sigma >= 0");
    Rng rng(s.seed);
    std::vector<int> sizes = balancedSizes(s.n, s.r, s.imbalance);
    std::vector<int> z = shuffledLabels(sizes, rng);

    // Theta: random rows blended toward a row-orthogonal design until the
    // conditioning floor holds, rows rescaled to norm sqrt(m) * theta.
    Matrix G = drawNormalMatrix(s.r, s.m, rng);
    Matrix O = thinQ(G.transpose()).transpose(); // r orthonormal rows
    double rowNorm = std::sqrt(static_cast<double>(s.m)) * s.theta;
    double blend = s.orthBlend;
    Matrix theta;
    bool ok = false;
    for (int attempt = 0; attempt < std::max(1, s.maxRetries); ++attempt) {
        theta = O + blend / std::sqrt(static_cast<double>(s.m)) * G;
        for (int k = 0; k < s.r; ++k) theta.row(k) *= rowNorm / theta.row(k).norm();
        if (conditioningRatio(theta) >= s.cSigma) {
            ok = true;
            break;
        }
        blend *= 0.5;
    }
    if (!ok) throw GenerationError("genGaussianMixture: conditioning floor unreachable");

    GaussianInstance inst;
    inst.X.resize(s.n, s.m);
    for (int i = 0; i < s.n; ++i) inst.X.row(i) = theta.row(z[static_cast<size_t>(i)]);
    inst.Xhat = inst.X + drawNormalMatrix(s.n, s.m, rng, s.sigma);
    inst.model = makeClusterModel(z, s.r, theta);
    Factorization f = factorClusteredMeans(z, sizes, theta);
    inst.U = std::move(f.U);
    inst.d = std::move(f.d);
    inst.V = std::move(f.V);
    return inst;
}

SbmSliceInstance genSbmSlice(const SbmModel& model) {
    const int n = model.n, r = model.r, m = model.sampleSize;
    if (r < 1 || m <= r || n <= m)
        throw GenerationError("genSbmSlice: need r >= 1, r < m < n");
    if (model.rho <= 0 || model.rho > 1 || model.b < 0 || model.b >= 1)
        throw GenerationError("genSbmSlice: need rho in (0,1], b in [0,1)");
    Matrix Q0 = Matrix::Constant(r, r, model.b);
    Q0.diagonal().setConstant(1.0);
    if (conditioningRatio(Q0) < model.cSigma)
        throw GenerationError("genSbmSlice: Q0 conditioning below cSigma");

    Rng rng(model.seed);
    std::vector<int> sizes = balancedSizes(n, r, model.imbalance);
    std::vector<int> zFull = shuffledLabels(sizes, rng);

    SbmSliceInstance inst;
    inst.zFull = zFull;
    inst.A.setZero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double p = model.rho * Q0(zFull[static_cast<size_t>(i)], zFull[static_cast<size_t>(j)]);
            std::uint8_t v = rng.bernoulli(p) ? 1 : 0;
            inst.A(i, j) = v;
            inst.A(j, i) = v;
        }
    }

    // Uniform sample S; both S and S^c must carry every community, since the
    // truth factorization needs all r blocks on both sides.
    std::vector<int> perm(static_cast<size_t>(n));
    bool found = false;
    for (int attempt = 0; attempt < model.maxRetries && !found; ++attempt) {
        std::iota(perm.begin(), perm.end(), 0);
        for (int t = 0; t < m; ++t) {
            int j = rng.uniformInt(t, n - 1);
            std::swap(perm[static_cast<size_t>(t)], perm[static_cast<size_t>(j)]);
        }
        std::vector<char> inS(static_cast<size_t>(r), 0), outS(static_cast<size_t>(r), 0);
        for (int t = 0; t < m; ++t) inS[static_cast<size_t>(zFull[static_cast<size_t>(perm[static_cast<size_t>(t)])])] = 1;
        for (int t = m; t < n; ++t) outS[static_cast<size_t>(zFull[static_cast<size_t>(perm[static_cast<size_t>(t)])])] = 1;
        found = std::all_of(inS.begin(), inS.end(), [](char c) { return c != 0; }) &&
                std::all_of(outS.begin(), outS.end(), [](char c) { return c != 0; });
    }
    if (!found)
        throw GenerationError("genSbmSlice: sampled subset kept missing a community");
    inst.sampled.assign(perm.begin(), perm.begin() + m);
    inst.rest.assign(perm.begin() + m, perm.end());
    std::sort(inst.sampled.begin(), inst.sampled.end());
    std::sort(inst.rest.begin(), inst.rest.end());

    inst.Xhat.resize(m, n - m);
    inst.X.resize(m, n - m);
    std::vector<int> zS(static_cast<size_t>(m)), zC(static_cast<size_t>(n - m));
    for (int i = 0; i < m; ++i) zS[static_cast<size_t>(i)] = zFull[static_cast<size_t>(inst.sampled[static_cast<size_t>(i)])];
    for (int j = 0; j < n - m; ++j) zC[static_cast<size_t>(j)] = zFull[static_cast<size_t>(inst.rest[static_cast<size_t>(j)])];
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n - m; ++j) {
            inst.Xhat(i, j) = static_cast<double>(inst.A(inst.sampled[static_cast<size_t>(i)], inst.rest[static_cast<size_t>(j)]));
            inst.X(i, j) = model.rho * Q0(zS[static_cast<size_t>(i)], zC[static_cast<size_t>(j)]);
        }
    }

    inst.model = makeClusterModel(zS, r, Matrix(model.rho * Q0));

    // X = Z_S (rho Q0) Z_C^T; SVD through the r x r core.
    std::vector<int> mk(static_cast<size_t>(r), 0), Nk(static_cast<size_t>(r), 0);
    for (int v : zS) ++mk[static_cast<size_t>(v)];
    for (int v : zC) ++Nk[static_cast<size_t>(v)];
    Vector sqM(r), sqN(r);
    for (int k = 0; k < r; ++k) {
        sqM(k) = std::sqrt(static_cast<double>(mk[static_cast<size_t>(k)]));
        sqN(k) = std::sqrt(static_cast<double>(Nk[static_cast<size_t>(k)]));
    }
    Matrix core = sqM.asDiagonal() * (model.rho * Q0) * sqN.asDiagonal();
    Eigen::JacobiSVD<Matrix> svd(core, Eigen::ComputeFullU | Eigen::ComputeFullV);
    inst.d = svd.singularValues();
    inst.U.resize(m, r);
    for (int i = 0; i < m; ++i)
        inst.U.row(i) = svd.matrixU().row(zS[static_cast<size_t>(i)]) / sqM(zS[static_cast<size_t>(i)]);
    inst.V.resize(n - m, r);
    for (int j = 0; j < n - m; ++j)
        inst.V.row(j) = svd.matrixV().row(zC[static_cast<size_t>(j)]) / sqN(zC[static_cast<size_t>(j)]);
    return inst;
}

Matrix topMagnitudeBasis(const Matrix& S, int k, Rng& rng, int overSample,
                         int maxIter, double tol) {
    const int n = static_cast<int>(S.rows());
    if (S.cols() != n) throw DimensionError("topMagnitudeBasis: square matrix required");
    if (k < 1 || k >= n) throw DimensionError("topMagnitudeBasis: need 1 <= k < n");
    const int p = std::min(n, k + overSample);
    Matrix Q = thinQ(drawNormalMatrix(n, p, rng));
    Matrix basis;
    for (int it = 0; it < maxIter; ++it) {
        Matrix W = S * Q;                       // n x p
        Matrix T = Q.transpose() * W;           // p x p Rayleigh quotient
        T = 0.5 * (T + T.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> es(T);
        std::vector<int> idx(static_cast<size_t>(p));
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            double ma = std::abs(es.eigenvalues()(a)), mb = std::abs(es.eigenvalues()(b));
            if (ma != mb) return ma > mb;
            return es.eigenvalues()(a) > es.eigenvalues()(b);
        });
        Matrix Y(p, k);
        Vector ritz(k);
        for (int j = 0; j < k; ++j) {
            Y.col(j) = es.eigenvectors().col(idx[static_cast<size_t>(j)]);
            ritz(j) = es.eigenvalues()(idx[static_cast<size_t>(j)]);
        }
        basis = Q * Y;
        Matrix resid = W * Y - basis * ritz.asDiagonal();
        double scale = std::max(ritz.cwiseAbs().maxCoeff(), 1e-300);
        if (resid.colwise().norm().maxCoeff() <= tol * scale) {
            reorthonormalize(basis, 1e-12);
            return basis;
        }
        Q = thinQ(W);
    }
    return leadingEigs(S, k, EigOrder::Magnitude).basis;
}

MultilayerInstance genMultilayer(const MultilayerModel& model) {
    const int n = model.n, L = model.L, M = model.M;
    if (M < 1 || L < M || n < 2)
        throw GenerationError("genMultilayer: need M >= 1, L >= M, n >= 2");
    std::vector<int> K(static_cast<size_t>(M), model.kDim);
    if (!model.kPerGroup.empty()) {
        if (static_cast<int>(model.kPerGroup.size()) != M)
            throw GenerationError("genMultilayer: kPerGroup must have M entries");
        K = model.kPerGroup;
    }
    for (int km : K)
        if (km < 1 || km >= n) throw GenerationError("genMultilayer: need 1 <= K_m < n");
    if (model.rho <= 0 || model.rho > 1 || model.bLow < 0 || model.bHigh >= 1 ||
        model.bLow > model.bHigh)
        throw GenerationError("genMultilayer: bad rho or loading mix range");

    Rng rng(model.seed);
    std::vector<int> layerSizes = balancedSizes(L, M, 1.0);
    std::vector<int> z = shuffledLabels(layerSizes, rng);

    MultilayerInstance inst;
    inst.theta.resize(M, static_cast<Eigen::Index>(n) * n);
    inst.groupBases.reserve(static_cast<size_t>(M));
    std::vector<std::vector<int>> nodeLabels(static_cast<size_t>(M));
    for (int g = 0; g < M; ++g) {
        std::vector<int> nodeSizes = balancedSizes(n, K[static_cast<size_t>(g)], 1.0);
        nodeLabels[static_cast<size_t>(g)] = shuffledLabels(nodeSizes, rng);
        Matrix Ug = Matrix::Zero(n, K[static_cast<size_t>(g)]);
        for (int i = 0; i < n; ++i) {
            int c = nodeLabels[static_cast<size_t>(g)][static_cast<size_t>(i)];
            Ug(i, c) = 1.0 / std::sqrt(static_cast<double>(nodeSizes[static_cast<size_t>(c)]));
        }
        Matrix proj = Ug * Ug.transpose();
        inst.theta.row(g) = Eigen::Map<const Vector>(proj.data(), proj.size());
        inst.groupBases.push_back(std::move(Ug));
    }

    inst.Xhat.resize(L, static_cast<Eigen::Index>(n) * n);
    if (model.storeLayers) inst.layers.reserve(static_cast<size_t>(L));
    for (int l = 0; l < L; ++l) {
        int g = z[static_cast<size_t>(l)];
        const int km = K[static_cast<size_t>(g)];
        const auto& labs = nodeLabels[static_cast<size_t>(g)];
        double b = rng.uniform(model.bLow, model.bHigh);
        Matrix B0 = Matrix::Constant(km, km, b);
        B0.diagonal().setConstant(1.0);
        // Conditioning of the loading Q^(l) = sqrt(D) (rho B0) sqrt(D).
        std::vector<int> counts(static_cast<size_t>(km), 0);
        for (int c : labs) ++counts[static_cast<size_t>(c)];
        Vector sq(km);
        for (int c = 0; c < km; ++c) sq(c) = std::sqrt(static_cast<double>(counts[static_cast<size_t>(c)]));
        Matrix Ql = sq.asDiagonal() * (model.rho * B0) * sq.asDiagonal();
        if (conditioningRatio(Ql) < model.cLambda)
            throw GenerationError("genMultilayer: loading conditioning below cLambda");

        Matrix A(n, n);
        if (model.useExpectedAdjacency) {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    A(i, j) = model.rho * B0(labs[static_cast<size_t>(i)], labs[static_cast<size_t>(j)]);
        } else {
            A.setZero();
            for (int i = 0; i < n; ++i) {
                for (int j = i + 1; j < n; ++j) {
                    double p = model.rho * B0(labs[static_cast<size_t>(i)], labs[static_cast<size_t>(j)]);
                    if (p < 0.0 || p > 1.0)
                        throw GenerationError("genMultilayer: probability outside [0,1]");
                    double v = rng.bernoulli(p) ? 1.0 : 0.0;
                    A(i, j) = v;
                    A(j, i) = v;
                }
            }
        }
        Matrix Uhat = topMagnitudeBasis(A, km, rng);
        Matrix proj = Uhat * Uhat.transpose();
        inst.Xhat.row(l) = Eigen::Map<const Vector>(proj.data(), proj.size());
        if (model.storeLayers) inst.layers.push_back(std::move(A));
    }

    inst.model = makeClusterModel(z, M, inst.theta);

    // Truth factorization via the M x M cross-Gram of the vec'd projectors.
    Matrix gramTheta(M, M);
    for (int a = 0; a < M; ++a)
        for (int b = 0; b < M; ++b)
            gramTheta(a, b) = (inst.groupBases[static_cast<size_t>(a)].transpose() *
                               inst.groupBases[static_cast<size_t>(b)])
                                  .squaredNorm();
    Vector sqL(M);
    for (int g = 0; g < M; ++g) sqL(g) = std::sqrt(static_cast<double>(layerSizes[static_cast<size_t>(g)]));
    Matrix G = sqL.asDiagonal() * gramTheta * sqL.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> es(G);
    inst.d.resize(M);
    Matrix Utheta(M, M);
    for (int j = 0; j < M; ++j) {
        inst.d(j) = std::sqrt(std::max(es.eigenvalues()(M - 1 - j), 0.0));
        Utheta.col(j) = es.eigenvectors().col(M - 1 - j);
    }
    if (inst.d(M - 1) <= 1e-12 * std::max(1.0, inst.d(0)))
        throw GenerationError("genMultilayer: group projectors are rank deficient");
    inst.U.resize(L, M);
    for (int l = 0; l < L; ++l)
        inst.U.row(l) = Utheta.row(z[static_cast<size_t>(l)]) / sqL(z[static_cast<size_t>(l)]);
    inst.V = inst.theta.transpose() * (sqL.asDiagonal() * Utheta * inst.d.cwiseInverse().asDiagonal());
    reorthonormalize(inst.V, 1e-12);
    return inst;
}

} // namespace twoinf
