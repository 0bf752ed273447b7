#include "twoinf/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace twoinf {

namespace {

double parseNumber(const std::string& tok, const char* ctx) {
    const char* b = tok.data();
    const char* e = b + tok.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t' || *(e - 1) == '\r')) --e;
    double v = 0.0;
    auto res = std::from_chars(b, e, v);
    if (res.ec != std::errc{} || res.ptr != e)
        throw IoError(std::string(ctx) + ": cannot parse number '" + tok + "'");
    if (!std::isfinite(v))
        throw IoError(std::string(ctx) + ": non-finite entry '" + tok + "'");
    return v;
}

std::ifstream openIn(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open file for reading: " + path);
    return f;
}

std::ofstream openOut(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot open file for writing: " + path);
    return f;
}

} // namespace

std::string formatDouble(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

Matrix readCsvMatrix(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ','))
            row.push_back(parseNumber(tok, "csv"));
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().empty())
        throw DimensionError("csv: empty matrix");
    Matrix A(static_cast<Eigen::Index>(rows.size()),
             static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            A(i, j) = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
    return A;
}

Matrix readCsvMatrix(const std::string& path) {
    auto f = openIn(path);
    return readCsvMatrix(f);
}

void writeCsvMatrix(std::ostream& out, const Matrix& A) {
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        for (Eigen::Index j = 0; j < A.cols(); ++j) {
            if (j) out << ',';
            out << formatDouble(A(i, j));
        }
        out << '\n';
    }
}

void writeCsvMatrix(const std::string& path, const Matrix& A) {
    auto f = openOut(path);
    writeCsvMatrix(f, A);
}

Matrix readMatrixMarketArray(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("matrix market: empty stream");
    if (line.rfind("%%MatrixMarket", 0) != 0)
        throw IoError("matrix market: missing banner");
    {
        std::stringstream ss(line);
        std::string banner, object, format, field, symmetry;
        ss >> banner >> object >> format >> field >> symmetry;
        if (object != "matrix" || format != "array" || field != "real" || symmetry != "general")
            throw IoError("matrix market: only 'matrix array real general' is supported");
    }
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '%') continue;
        break;
    }
    Eigen::Index n = 0, m = 0;
    {
        std::stringstream ss(line);
        if (!(ss >> n >> m)) throw IoError("matrix market: bad size line");
    }
    if (n <= 0 || m <= 0) throw DimensionError("matrix market: empty matrix");
    Matrix A(n, m);
    Eigen::Index count = 0;
    while (count < n * m && std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '%') continue;
        std::stringstream ss(line);
        std::string tok;
        while (ss >> tok) {
            if (count >= n * m) throw IoError("matrix market: too many entries");
            double v = parseNumber(tok, "matrix market");
            A(count % n, count / n) = v; // column-major order
            ++count;
        }
    }
    if (count != n * m) throw IoError("matrix market: too few entries");
    return A;
}

Matrix readMatrixMarketArray(const std::string& path) {
    auto f = openIn(path);
    return readMatrixMarketArray(f);
}

void writeMatrixMarketArray(std::ostream& out, const Matrix& A) {
    out << "%%MatrixMarket matrix array real general\n";
    out << A.rows() << ' ' << A.cols() << '\n';
    for (Eigen::Index j = 0; j < A.cols(); ++j)
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            out << formatDouble(A(i, j)) << '\n';
}

void writeMatrixMarketArray(const std::string& path, const Matrix& A) {
    auto f = openOut(path);
    writeMatrixMarketArray(f, A);
}

Matrix readMatrixAuto(const std::string& path) {
    auto f = openIn(path);
    int c = f.peek();
    if (c == '%') return readMatrixMarketArray(f);
    return readCsvMatrix(f);
}

void writeLabels(const std::string& path, const std::vector<int>& zeroBased) {
    auto f = openOut(path);
    for (int z : zeroBased) f << (z + 1) << '\n';
}

std::vector<int> readLabels(const std::string& path) {
    auto f = openIn(path);
    std::vector<int> out;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        int v = 0;
        auto res = std::from_chars(line.data(), line.data() + line.size(), v);
        if (res.ec != std::errc{})
            throw IoError("labels: cannot parse '" + line + "'");
        if (v < 1) throw DomainError("labels: labels are 1-based positive integers");
        out.push_back(v - 1);
    }
    if (out.empty()) throw IoError("labels: empty file");
    return out;
}

} // namespace twoinf
