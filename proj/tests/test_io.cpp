#include "twoinf/matrix.hpp"
#include "twoinf/matrix_io.hpp"
#include "twoinf/rng.hpp"

#include <doctest.h>

#include "helpers.hpp"

#include <sstream>

using namespace twoinf;
using test::randomMatrix;

TEST_CASE("csv round trip preserves values exactly") {
    Rng rng(41);
    Matrix A = randomMatrix(5, 3, rng);
    std::stringstream ss;
    writeCsvMatrix(ss, A);
    Matrix B = readCsvMatrix(ss);
    CHECK(maxAbs(A - B) == 0.0);
}

TEST_CASE("csv reader rejects bad input") {
    {
        std::stringstream ss("1,2\n3\n");
        CHECK_THROWS_AS(readCsvMatrix(ss), IoError);
    }
    {
        std::stringstream ss("1,nan\n3,4\n");
        CHECK_THROWS_AS(readCsvMatrix(ss), IoError);
    }
    {
        std::stringstream ss("1,inf\n3,4\n");
        CHECK_THROWS_AS(readCsvMatrix(ss), IoError);
    }
    {
        std::stringstream ss("");
        CHECK_THROWS_AS(readCsvMatrix(ss), DimensionError);
    }
}

TEST_CASE("matrix market array round trip") {
    Rng rng(42);
    Matrix A = randomMatrix(4, 6, rng);
    std::stringstream ss;
    writeMatrixMarketArray(ss, A);
    Matrix B = readMatrixMarketArray(ss);
    CHECK(maxAbs(A - B) == 0.0);
}

TEST_CASE("matrix market reader checks the banner and entry count") {
    {
        std::stringstream ss("%%MatrixMarket matrix coordinate real general\n2 2\n1\n");
        CHECK_THROWS_AS(readMatrixMarketArray(ss), IoError);
    }
    {
        std::stringstream ss("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n");
        CHECK_THROWS_AS(readMatrixMarketArray(ss), IoError);
    }
    {
        std::stringstream ss("%%MatrixMarket matrix array real general\n% comment\n2 1\n1\nnan\n");
        CHECK_THROWS_AS(readMatrixMarketArray(ss), IoError);
    }
}

TEST_CASE("label files are 1-based on disk") {
    std::string path = "labels_test.txt";
    writeLabels(path, {0, 2, 1});
    auto z = readLabels(path);
    REQUIRE(z.size() == 3);
    CHECK(z[0] == 0);
    CHECK(z[1] == 2);
    CHECK(z[2] == 1);
    std::remove(path.c_str());
}

TEST_CASE("formatDouble round-trips") {
    for (double x : {0.1, -3.25e-12, 12345.678901234567, 0.0}) {
        std::string s = formatDouble(x);
        CHECK(std::stod(s) == x);
    }
}
