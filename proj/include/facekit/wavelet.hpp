#ifndef FACEKIT_WAVELET_HPP
#define FACEKIT_WAVELET_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "facekit/error.hpp"

namespace facekit {

struct OddLength : Error {
    using Error::Error;
};
struct LengthMismatch : Error {
    using Error::Error;
};
struct OddDimension : Error {
    using Error::Error;
};
struct DimMismatch : Error {
    using Error::Error;
};
struct NotDivisible : Error {
    using Error::Error;
};
struct MalformedPyramid : Error {
    using Error::Error;
};

// Row-major matrix of doubles. Coefficients stay exact for 8-bit inputs
// because the /2 averaging only ever produces dyadic rationals.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    static Matrix zeros(int rows, int cols);

    double at(int r, int c) const {
        return values[static_cast<std::size_t>(r) * cols + c];
    }
    double& at(int r, int c) {
        return values[static_cast<std::size_t>(r) * cols + c];
    }

    bool operator==(const Matrix&) const = default;
};

// One forward Haar step: N/2 pairwise averages and N/2 detail coefficients.
struct HaarStep {
    std::vector<double> averages;
    std::vector<double> coefficients;
};

// averages[i] = (s[2i] + s[2i+1]) / 2, coefficients[i] = (s[2i] - s[2i+1]) / 2.
// The signal length must be even and at least 2.
HaarStep haar_forward_1d(std::span<const double> signal);

// Exact inverse: s[2i] = a[i] + c[i], s[2i+1] = a[i] - c[i].
std::vector<double> haar_inverse_1d(const HaarStep& step);

// Four half-resolution subbands. First letter is the row-direction filter,
// second the column-direction filter (L = average, H = detail).
struct Subbands2D {
    Matrix ll;
    Matrix lh;
    Matrix hl;
    Matrix hh;
};

// Separable 2-D step: rows first, then columns of both halves.
Subbands2D dwt2_level(const Matrix& image);

Matrix idwt2_level(const Subbands2D& bands);

// Multilevel approximation: only the final LL survives, detail bands of
// every level are discarded.
struct WaveletPyramid {
    int level = 0;
    Matrix ll;
};

// Applies dwt2_level `levels` times to the running LL. Both input dimensions
// must be divisible by 2^levels.
WaveletPyramid dwt2_multilevel(const Matrix& image, int levels);

// Little-endian record: level u8, side u16, then side*side float64 LL values.
std::vector<std::uint8_t> serialize_pyramid(const WaveletPyramid& pyramid);
WaveletPyramid deserialize_pyramid(std::span<const std::uint8_t> bytes);

} // namespace facekit

#endif
