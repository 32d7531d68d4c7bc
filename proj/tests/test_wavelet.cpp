#include <doctest.h>

#include <cmath>
#include <random>

#include "facekit/wavelet.hpp"

using namespace facekit;

namespace {

Matrix random_matrix(std::mt19937& rng, int rows, int cols, double lo = 0.0,
                     double hi = 255.0) {
    Matrix m = Matrix::zeros(rows, cols);
    std::uniform_real_distribution<double> dist(lo, hi);
    for (double& v : m.values)
        v = dist(rng);
    return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
    return worst;
}

} // namespace

TEST_CASE("haar_forward_1d pairs adjacent elements") {
    const HaarStep step = haar_forward_1d(std::vector<double>{4, 2});
    CHECK(step.averages == std::vector<double>{3});
    CHECK(step.coefficients == std::vector<double>{1});
}

TEST_CASE("haar_forward_1d of a constant signal has zero detail") {
    const std::vector<double> signal(10, 6.5);
    const HaarStep step = haar_forward_1d(signal);
    for (double a : step.averages)
        CHECK(a == 6.5);
    for (double c : step.coefficients)
        CHECK(c == 0.0);
}

TEST_CASE("haar_forward_1d rejects odd lengths") {
    CHECK_THROWS_AS(haar_forward_1d(std::vector<double>{1, 2, 3, 4, 5}), OddLength);
    CHECK_THROWS_AS(haar_forward_1d(std::vector<double>{1}), OddLength);
    CHECK_THROWS_AS(haar_forward_1d(std::vector<double>{}), OddLength);
}

TEST_CASE("haar_inverse_1d reverses the forward step") {
    HaarStep step;
    step.averages = {3};
    step.coefficients = {1};
    CHECK(haar_inverse_1d(step) == std::vector<double>{4, 2});

    SUBCASE("zero coefficients duplicate each average") {
        step.averages = {5, -2};
        step.coefficients = {0, 0};
        CHECK(haar_inverse_1d(step) == std::vector<double>{5, 5, -2, -2});
    }
    SUBCASE("length mismatch") {
        step.averages = {1, 2};
        step.coefficients = {1};
        CHECK_THROWS_AS(haar_inverse_1d(step), LengthMismatch);
    }
}

TEST_CASE("1-D round trip recovers the signal") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> dist(-100.0, 100.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> signal(64);
        for (double& v : signal)
            v = dist(rng);
        const std::vector<double> back = haar_inverse_1d(haar_forward_1d(signal));
        for (std::size_t i = 0; i < signal.size(); ++i)
            CHECK(std::abs(back[i] - signal[i]) <= 1e-12);
    }
}

TEST_CASE("dwt2_level of a constant matrix") {
    Matrix m = Matrix::zeros(8, 8);
    for (double& v : m.values)
        v = 9.25;
    const Subbands2D bands = dwt2_level(m);
    CHECK(bands.ll.rows == 4);
    CHECK(bands.ll.cols == 4);
    for (double v : bands.ll.values)
        CHECK(v == 9.25);
    for (const Matrix* detail : {&bands.lh, &bands.hl, &bands.hh})
        for (double v : detail->values)
            CHECK(v == 0.0);
}

TEST_CASE("dwt2_level on the 2x2 worked example") {
    // Row pass: [4,2] -> avg 3, detail 1; [6,0] -> avg 3, detail 3.
    // Column pass: LL=(3+3)/2, LH=(3-3)/2, HL=(1+3)/2, HH=(1-3)/2.
    Matrix m = Matrix::zeros(2, 2);
    m.at(0, 0) = 4;
    m.at(0, 1) = 2;
    m.at(1, 0) = 6;
    m.at(1, 1) = 0;
    const Subbands2D bands = dwt2_level(m);
    CHECK(bands.ll.values == std::vector<double>{3});
    CHECK(bands.lh.values == std::vector<double>{0});
    CHECK(bands.hl.values == std::vector<double>{2});
    CHECK(bands.hh.values == std::vector<double>{-1});
}

TEST_CASE("dwt2_level HH of a separable input is the outer product of details") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    std::vector<double> f(16), g(12);
    for (double& v : f)
        v = dist(rng);
    for (double& v : g)
        v = dist(rng);

    Matrix m = Matrix::zeros(static_cast<int>(g.size()), static_cast<int>(f.size()));
    for (int r = 0; r < m.rows; ++r)
        for (int c = 0; c < m.cols; ++c)
            m.at(r, c) = f[c] * g[r];

    const Subbands2D bands = dwt2_level(m);
    const HaarStep fs = haar_forward_1d(f);
    const HaarStep gs = haar_forward_1d(g);
    for (int r = 0; r < bands.hh.rows; ++r)
        for (int c = 0; c < bands.hh.cols; ++c)
            CHECK(bands.hh.at(r, c) ==
                  doctest::Approx(fs.coefficients[c] * gs.coefficients[r])
                      .epsilon(1e-12));
}

TEST_CASE("dwt2_level rejects odd dimensions") {
    CHECK_THROWS_AS(dwt2_level(Matrix::zeros(3, 4)), OddDimension);
    CHECK_THROWS_AS(dwt2_level(Matrix::zeros(4, 7)), OddDimension);
    CHECK_THROWS_AS(dwt2_level(Matrix::zeros(1, 1)), OddDimension);
}

TEST_CASE("idwt2_level inverts the worked example") {
    Subbands2D bands;
    bands.ll = Matrix::zeros(1, 1);
    bands.lh = Matrix::zeros(1, 1);
    bands.hl = Matrix::zeros(1, 1);
    bands.hh = Matrix::zeros(1, 1);
    bands.ll.values = {3};
    bands.lh.values = {1};
    bands.hl.values = {2};
    bands.hh.values = {0};
    // Undoing the column pass gives low=[4,2], high=[2,2]; undoing the row
    // pass gives [[6,2],[4,0]].
    const Matrix m = idwt2_level(bands);
    CHECK(m.rows == 2);
    CHECK(m.cols == 2);
    CHECK(m.values == std::vector<double>{6, 2, 4, 0});
}

TEST_CASE("idwt2_level of all-zero subbands is the zero matrix") {
    Subbands2D bands;
    bands.ll = Matrix::zeros(3, 5);
    bands.lh = Matrix::zeros(3, 5);
    bands.hl = Matrix::zeros(3, 5);
    bands.hh = Matrix::zeros(3, 5);
    const Matrix m = idwt2_level(bands);
    for (double v : m.values)
        CHECK(v == 0.0);
}

TEST_CASE("idwt2_level rejects mismatched subbands") {
    Subbands2D bands;
    bands.ll = Matrix::zeros(2, 2);
    bands.lh = Matrix::zeros(2, 2);
    bands.hl = Matrix::zeros(2, 3);
    bands.hh = Matrix::zeros(2, 2);
    CHECK_THROWS_AS(idwt2_level(bands), DimMismatch);
}

TEST_CASE("2-D round trip on random 128x128 matrices") {
    std::mt19937 rng(47);
    for (int trial = 0; trial < 5; ++trial) {
        const Matrix m = random_matrix(rng, 128, 128);
        const Subbands2D bands = dwt2_level(m);
        CHECK(max_abs_diff(idwt2_level(bands), m) <= 1e-9);
    }
}

TEST_CASE("multilevel reconstruction from a full subband pyramid") {
    std::mt19937 rng(53);
    const Matrix m = random_matrix(rng, 128, 128);
    for (int levels = 1; levels <= 5; ++levels) {
        std::vector<Subbands2D> pyramid;
        Matrix ll = m;
        for (int i = 0; i < levels; ++i) {
            pyramid.push_back(dwt2_level(ll));
            ll = pyramid.back().ll;
        }
        for (int i = levels - 1; i >= 0; --i) {
            pyramid[i].ll = ll;
            ll = idwt2_level(pyramid[i]);
        }
        CHECK(max_abs_diff(ll, m) <= 1e-9);
    }
}

TEST_CASE("dwt2_multilevel coefficient counts match the level table") {
    std::mt19937 rng(59);
    const Matrix m = random_matrix(rng, 128, 128);
    const std::size_t expected[] = {4096, 1024, 256, 64, 16};
    for (int level = 1; level <= 5; ++level) {
        const WaveletPyramid p = dwt2_multilevel(m, level);
        CHECK(p.level == level);
        CHECK(p.ll.rows == 128 >> level);
        CHECK(p.ll.cols == 128 >> level);
        CHECK(p.ll.values.size() == expected[level - 1]);
    }
}

TEST_CASE("dwt2_multilevel divisibility and level checks") {
    CHECK_THROWS_AS(dwt2_multilevel(Matrix::zeros(12, 12), 3), NotDivisible);
    CHECK_THROWS_AS(dwt2_multilevel(Matrix::zeros(128, 126), 1), NotDivisible);
    CHECK_THROWS_AS(dwt2_multilevel(Matrix::zeros(128, 128), 0), NotDivisible);
    CHECK_NOTHROW(dwt2_multilevel(Matrix::zeros(128, 128), 7));
    CHECK_THROWS_AS(dwt2_multilevel(Matrix::zeros(128, 128), 8), NotDivisible);
}

TEST_CASE("multilevel LL of a constant image stays that constant") {
    Matrix m = Matrix::zeros(64, 64);
    for (double& v : m.values)
        v = 40.0;
    for (int level = 1; level <= 5; ++level) {
        const WaveletPyramid p = dwt2_multilevel(m, level);
        for (double v : p.ll.values)
            CHECK(v == 40.0);
    }
}

TEST_CASE("dwt2_multilevel preserves the mean") {
    std::mt19937 rng(61);
    const Matrix m = random_matrix(rng, 64, 64);
    double mean = 0.0;
    for (double v : m.values)
        mean += v;
    mean /= static_cast<double>(m.values.size());

    for (int level = 1; level <= 5; ++level) {
        const WaveletPyramid p = dwt2_multilevel(m, level);
        double ll_mean = 0.0;
        for (double v : p.ll.values)
            ll_mean += v;
        ll_mean /= static_cast<double>(p.ll.values.size());
        CHECK(std::abs(ll_mean - mean) <= 1e-9);
    }
}

TEST_CASE("dwt2_multilevel is linear") {
    std::mt19937 rng(67);
    const Matrix x = random_matrix(rng, 32, 32);
    const Matrix y = random_matrix(rng, 32, 32);
    const double alpha = 1.75, beta = -0.5;

    Matrix combo = Matrix::zeros(32, 32);
    for (std::size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = alpha * x.values[i] + beta * y.values[i];

    for (int level : {1, 3, 5}) {
        const WaveletPyramid px = dwt2_multilevel(x, level);
        const WaveletPyramid py = dwt2_multilevel(y, level);
        const WaveletPyramid pc = dwt2_multilevel(combo, level);
        for (std::size_t i = 0; i < pc.ll.values.size(); ++i)
            CHECK(pc.ll.values[i] ==
                  doctest::Approx(alpha * px.ll.values[i] + beta * py.ll.values[i])
                      .epsilon(1e-9));
    }
}

TEST_CASE("pyramid serialization round trips") {
    std::mt19937 rng(71);
    const Matrix m = random_matrix(rng, 64, 64);
    const WaveletPyramid p = dwt2_multilevel(m, 2);
    const std::vector<std::uint8_t> bytes = serialize_pyramid(p);
    CHECK(bytes.size() == 3 + p.ll.values.size() * 8);
    CHECK(bytes[0] == 2);          // level
    CHECK(bytes[1] == 16);         // side, low byte
    CHECK(bytes[2] == 0);          // side, high byte
    const WaveletPyramid q = deserialize_pyramid(bytes);
    CHECK(q.level == p.level);
    CHECK(q.ll == p.ll);
    CHECK(serialize_pyramid(q) == bytes);
}

TEST_CASE("pyramid deserialization rejects malformed records") {
    CHECK_THROWS_AS(deserialize_pyramid(std::vector<std::uint8_t>{1}),
                    MalformedPyramid);
    std::vector<std::uint8_t> bytes{1, 2, 0}; // claims 2x2 but no payload
    CHECK_THROWS_AS(deserialize_pyramid(bytes), MalformedPyramid);
    bytes.resize(3 + 4 * 8 + 1, 0); // one byte too many
    CHECK_THROWS_AS(deserialize_pyramid(bytes), MalformedPyramid);
}
