#include "twoinf/kmeans.hpp"
#include "twoinf/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace twoinf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<int> assignToNearest(const Matrix& rows, const Matrix& centers) {
    const Eigen::Index n = rows.rows();
    const Eigen::Index r = centers.rows();
    std::vector<int> z(static_cast<size_t>(n), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        double best = kInf;
        int bestK = 0;
        for (Eigen::Index k = 0; k < r; ++k) {
            double d = (rows.row(i) - centers.row(k)).squaredNorm();
            if (d < best) {
                best = d;
                bestK = static_cast<int>(k);
            }
        }
        z[static_cast<size_t>(i)] = bestK;
    }
    return z;
}

// Means of assigned rows; an empty cluster is re-seeded at the point farthest
// from its current center.
Matrix updateCenters(const Matrix& rows, const std::vector<int>& z, const Matrix& prev) {
    const Eigen::Index r = prev.rows();
    Matrix centers = Matrix::Zero(r, rows.cols());
    std::vector<int> counts(static_cast<size_t>(r), 0);
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        centers.row(z[static_cast<size_t>(i)]) += rows.row(i);
        ++counts[static_cast<size_t>(z[static_cast<size_t>(i)])];
    }
    for (Eigen::Index k = 0; k < r; ++k) {
        if (counts[static_cast<size_t>(k)] > 0) {
            centers.row(k) /= static_cast<double>(counts[static_cast<size_t>(k)]);
        } else {
            Eigen::Index far = 0;
            double best = -1.0;
            for (Eigen::Index i = 0; i < rows.rows(); ++i) {
                double d = (rows.row(i) - prev.row(k)).squaredNorm();
                if (d > best) {
                    best = d;
                    far = i;
                }
            }
            centers.row(k) = rows.row(far);
        }
    }
    return centers;
}

Matrix seedCenters(const Matrix& rows, int r, Rng& rng) {
    const Eigen::Index n = rows.rows();
    Matrix centers(r, rows.cols());
    int first = rng.uniformInt(0, static_cast<int>(n) - 1);
    centers.row(0) = rows.row(first);
    std::vector<double> d2(static_cast<size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        d2[static_cast<size_t>(i)] = (rows.row(i) - centers.row(0)).squaredNorm();
    for (int k = 1; k < r; ++k) {
        double total = 0;
        for (double v : d2) total += v;
        Eigen::Index pick;
        if (total <= 0) {
            pick = rng.uniformInt(0, static_cast<int>(n) - 1);
        } else {
            double u = rng.uniform01() * total;
            double acc = 0;
            pick = n - 1;
            for (Eigen::Index i = 0; i < n; ++i) {
                acc += d2[static_cast<size_t>(i)];
                if (u < acc) {
                    pick = i;
                    break;
                }
            }
        }
        centers.row(k) = rows.row(pick);
        for (Eigen::Index i = 0; i < n; ++i) {
            double d = (rows.row(i) - centers.row(k)).squaredNorm();
            if (d < d2[static_cast<size_t>(i)]) d2[static_cast<size_t>(i)] = d;
        }
    }
    return centers;
}

struct SingleRun {
    std::vector<int> z;
    Matrix centers;
    double objective;
};

SingleRun lloydRun(const Matrix& rows, int r, int maxIters, Rng& rng) {
    Matrix centers = seedCenters(rows, r, rng);
    std::vector<int> z = assignToNearest(rows, centers);
    double prevObj = kmeansObjective(rows, centers, z);
    for (int it = 0; it < maxIters; ++it) {
        Matrix next = updateCenters(rows, z, centers);
        std::vector<int> zNext = assignToNearest(rows, next);
        double obj = kmeansObjective(rows, next, zNext);
        if (obj > prevObj + 1e-9 * (1.0 + prevObj))
            throw Error("approxKMeans: objective increased across an iteration");
        centers = std::move(next);
        bool same = (zNext == z);
        z = std::move(zNext);
        prevObj = obj;
        if (same) break;
    }
    // Termination leaves every center at the mean of its assigned rows.
    centers = updateCenters(rows, z, centers);
    double finalObj = kmeansObjective(rows, centers, z);
    return {std::move(z), std::move(centers), finalObj};
}

std::vector<int> hungarianMinAssign(const Matrix& cost) {
    const int n = static_cast<int>(cost.rows());
    std::vector<double> u(static_cast<size_t>(n) + 1, 0), v(static_cast<size_t>(n) + 1, 0);
    std::vector<int> p(static_cast<size_t>(n) + 1, 0), way(static_cast<size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<size_t>(n) + 1, kInf);
        std::vector<char> used(static_cast<size_t>(n) + 1, 0);
        do {
            used[static_cast<size_t>(j0)] = 1;
            int i0 = p[static_cast<size_t>(j0)], j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) continue;
                double cur = cost(i0 - 1, j - 1) - u[static_cast<size_t>(i0)] - v[static_cast<size_t>(j)];
                if (cur < minv[static_cast<size_t>(j)]) {
                    minv[static_cast<size_t>(j)] = cur;
                    way[static_cast<size_t>(j)] = j0;
                }
                if (minv[static_cast<size_t>(j)] < delta) {
                    delta = minv[static_cast<size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<size_t>(j)]) {
                    u[static_cast<size_t>(p[static_cast<size_t>(j)])] += delta;
                    v[static_cast<size_t>(j)] -= delta;
                } else {
                    minv[static_cast<size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (p[static_cast<size_t>(j0)] != 0);
        do {
            int j1 = way[static_cast<size_t>(j0)];
            p[static_cast<size_t>(j0)] = p[static_cast<size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> rowToCol(static_cast<size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (p[static_cast<size_t>(j)] > 0) rowToCol[static_cast<size_t>(p[static_cast<size_t>(j)]) - 1] = j - 1;
    return rowToCol;
}

} // namespace

double kmeansObjective(const Matrix& rows, const Matrix& centers, const std::vector<int>& z) {
    double obj = 0;
    for (Eigen::Index i = 0; i < rows.rows(); ++i)
        obj += (rows.row(i) - centers.row(z[static_cast<size_t>(i)])).squaredNorm();
    return obj;
}

ClusterResult approxKMeans(const Matrix& rows, int r, const KMeansParams& params) {
    const Eigen::Index n = rows.rows();
    if (n == 0 || rows.cols() == 0) throw DimensionError("approxKMeans: empty matrix");
    if (r < 1) throw DomainError("approxKMeans: r must be >= 1");
    if (r > n) throw InfeasibleError("approxKMeans: more clusters than rows");
    if (params.restarts < 1) throw DomainError("approxKMeans: restarts must be >= 1");

    ClusterResult best;
    best.objective = kInf;
    for (int j = 0; j < params.restarts; ++j) {
        Rng rng(deriveSeed(params.seed, static_cast<std::uint64_t>(j), 0x6b6d6e73ULL));
        SingleRun run = lloydRun(rows, r, params.maxIters, rng);
        if (run.objective < best.objective) {
            best.zhat = std::move(run.z);
            best.centers = std::move(run.centers);
            best.objective = run.objective;
        }
    }
    best.restartsUsed = params.restarts;
    return best;
}

std::vector<int> bestLabelPermutation(const Matrix& agreement) {
    if (agreement.rows() != agreement.cols() || agreement.rows() == 0)
        throw DimensionError("bestLabelPermutation: square matrix required");
    double mx = agreement.maxCoeff();
    Matrix cost = Matrix::Constant(agreement.rows(), agreement.cols(), mx) - agreement;
    return hungarianMinAssign(cost);
}

int misclusterCount(const std::vector<int>& zhat, const std::vector<int>& z, int r) {
    if (zhat.size() != z.size())
        throw DimensionError("misclusterCount: label vectors differ in length");
    if (r < 1) throw DomainError("misclusterCount: r must be >= 1");
    Matrix confusion = Matrix::Zero(r, r);
    for (size_t i = 0; i < z.size(); ++i) {
        int a = z[i], b = zhat[i];
        if (a < 0 || a >= r || b < 0 || b >= r)
            throw DomainError("misclusterCount: label out of range");
        confusion(a, b) += 1.0;
    }
    std::vector<int> perm = bestLabelPermutation(confusion);
    double agree = 0;
    for (int k = 0; k < r; ++k) agree += confusion(k, perm[static_cast<size_t>(k)]);
    return static_cast<int>(z.size()) - static_cast<int>(std::llround(agree));
}

double exhaustiveKMeansOptimum(const Matrix& rows, int r) {
    const int n = static_cast<int>(rows.rows());
    if (n > 12) throw DomainError("exhaustiveKMeansOptimum: oracle limited to n <= 12");
    std::vector<int> z(static_cast<size_t>(n), 0);
    double best = kInf;
    const Eigen::Index d = rows.cols();
    Matrix sums(r, d);
    std::vector<int> counts(static_cast<size_t>(r));
    while (true) {
        sums.setZero();
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < n; ++i) {
            sums.row(z[static_cast<size_t>(i)]) += rows.row(i);
            ++counts[static_cast<size_t>(z[static_cast<size_t>(i)])];
        }
        double obj = 0;
        for (int i = 0; i < n; ++i) {
            int k = z[static_cast<size_t>(i)];
            Eigen::RowVectorXd mean = sums.row(k) / static_cast<double>(counts[static_cast<size_t>(k)]);
            obj += (rows.row(i) - mean).squaredNorm();
        }
        best = std::min(best, obj);
        int pos = 0;
        while (pos < n) {
            if (++z[static_cast<size_t>(pos)] < r) break;
            z[static_cast<size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == n) break;
    }
    return best;
}

} // namespace twoinf
