#include "facekit/wavelet.hpp"

#include <cstring>
#include <string>

namespace facekit {

Matrix Matrix::zeros(int rows, int cols) {
    Matrix m;
    m.rows = rows;
    m.cols = cols;
    m.values.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    return m;
}

HaarStep haar_forward_1d(std::span<const double> signal) {
    if (signal.size() < 2 || signal.size() % 2 != 0)
        throw OddLength("signal length must be even and at least 2, got " +
                        std::to_string(signal.size()));
    const std::size_t half = signal.size() / 2;
    HaarStep step;
    step.averages.resize(half);
    step.coefficients.resize(half);
    for (std::size_t i = 0; i < half; ++i) {
        step.averages[i] = (signal[2 * i] + signal[2 * i + 1]) / 2.0;
        step.coefficients[i] = (signal[2 * i] - signal[2 * i + 1]) / 2.0;
    }
    return step;
}

std::vector<double> haar_inverse_1d(const HaarStep& step) {
    if (step.averages.size() != step.coefficients.size())
        throw LengthMismatch("averages and coefficients differ in length");
    std::vector<double> signal(step.averages.size() * 2);
    for (std::size_t i = 0; i < step.averages.size(); ++i) {
        signal[2 * i] = step.averages[i] + step.coefficients[i];
        signal[2 * i + 1] = step.averages[i] - step.coefficients[i];
    }
    return signal;
}

Subbands2D dwt2_level(const Matrix& image) {
    if (image.rows < 2 || image.cols < 2 || image.rows % 2 != 0 || image.cols % 2 != 0)
        throw OddDimension("dwt2 needs even dimensions, got " +
                           std::to_string(image.rows) + "x" + std::to_string(image.cols));
    const int hw = image.cols / 2;
    const int hh = image.rows / 2;

    // Row pass: low (averages) and high (details) halves, each rows x hw.
    Matrix low = Matrix::zeros(image.rows, hw);
    Matrix high = Matrix::zeros(image.rows, hw);
    for (int r = 0; r < image.rows; ++r) {
        for (int i = 0; i < hw; ++i) {
            const double s0 = image.at(r, 2 * i);
            const double s1 = image.at(r, 2 * i + 1);
            low.at(r, i) = (s0 + s1) / 2.0;
            high.at(r, i) = (s0 - s1) / 2.0;
        }
    }

    // Column pass over both halves.
    Subbands2D bands;
    bands.ll = Matrix::zeros(hh, hw);
    bands.lh = Matrix::zeros(hh, hw);
    bands.hl = Matrix::zeros(hh, hw);
    bands.hh = Matrix::zeros(hh, hw);
    for (int c = 0; c < hw; ++c) {
        for (int j = 0; j < hh; ++j) {
            const double l0 = low.at(2 * j, c);
            const double l1 = low.at(2 * j + 1, c);
            bands.ll.at(j, c) = (l0 + l1) / 2.0;
            bands.lh.at(j, c) = (l0 - l1) / 2.0;
            const double h0 = high.at(2 * j, c);
            const double h1 = high.at(2 * j + 1, c);
            bands.hl.at(j, c) = (h0 + h1) / 2.0;
            bands.hh.at(j, c) = (h0 - h1) / 2.0;
        }
    }
    return bands;
}

Matrix idwt2_level(const Subbands2D& bands) {
    const Matrix& ll = bands.ll;
    for (const Matrix* m : {&bands.lh, &bands.hl, &bands.hh}) {
        if (m->rows != ll.rows || m->cols != ll.cols)
            throw DimMismatch("subbands must share dimensions");
    }
    if (ll.rows < 1 || ll.cols < 1)
        throw DimMismatch("subbands must be non-empty");

    const int hh = ll.rows;
    const int hw = ll.cols;

    // Undo the column pass.
    Matrix low = Matrix::zeros(hh * 2, hw);
    Matrix high = Matrix::zeros(hh * 2, hw);
    for (int c = 0; c < hw; ++c) {
        for (int j = 0; j < hh; ++j) {
            low.at(2 * j, c) = ll.at(j, c) + bands.lh.at(j, c);
            low.at(2 * j + 1, c) = ll.at(j, c) - bands.lh.at(j, c);
            high.at(2 * j, c) = bands.hl.at(j, c) + bands.hh.at(j, c);
            high.at(2 * j + 1, c) = bands.hl.at(j, c) - bands.hh.at(j, c);
        }
    }

    // Undo the row pass.
    Matrix image = Matrix::zeros(hh * 2, hw * 2);
    for (int r = 0; r < image.rows; ++r) {
        for (int i = 0; i < hw; ++i) {
            image.at(r, 2 * i) = low.at(r, i) + high.at(r, i);
            image.at(r, 2 * i + 1) = low.at(r, i) - high.at(r, i);
        }
    }
    return image;
}

WaveletPyramid dwt2_multilevel(const Matrix& image, int levels) {
    if (levels < 1)
        throw NotDivisible("level count must be at least 1");
    const int factor = 1 << levels;
    if (image.rows % factor != 0 || image.cols % factor != 0 ||
        image.rows < factor || image.cols < factor)
        throw NotDivisible("dimensions " + std::to_string(image.rows) + "x" +
                           std::to_string(image.cols) + " are not divisible by 2^" +
                           std::to_string(levels));

    Matrix ll = image;
    for (int i = 0; i < levels; ++i)
        ll = dwt2_level(ll).ll;

    WaveletPyramid pyramid;
    pyramid.level = levels;
    pyramid.ll = std::move(ll);
    return pyramid;
}

namespace {

void put_u16_le(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_f64_le(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

double get_f64_le(const std::uint8_t* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i)
        bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

} // namespace

std::vector<std::uint8_t> serialize_pyramid(const WaveletPyramid& pyramid) {
    if (pyramid.ll.rows != pyramid.ll.cols)
        throw MalformedPyramid("pyramid LL must be square");
    if (pyramid.level < 0 || pyramid.level > 255 || pyramid.ll.rows > 0xffff)
        throw MalformedPyramid("pyramid does not fit the record format");
    std::vector<std::uint8_t> out;
    out.reserve(3 + pyramid.ll.values.size() * 8);
    out.push_back(static_cast<std::uint8_t>(pyramid.level));
    put_u16_le(out, static_cast<std::uint16_t>(pyramid.ll.rows));
    for (double v : pyramid.ll.values)
        put_f64_le(out, v);
    return out;
}

WaveletPyramid deserialize_pyramid(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 3)
        throw MalformedPyramid("pyramid record too short");
    const int level = bytes[0];
    const int side = bytes[1] | (bytes[2] << 8);
    const std::size_t count = static_cast<std::size_t>(side) * side;
    if (bytes.size() != 3 + count * 8)
        throw MalformedPyramid("pyramid record length does not match its header");

    WaveletPyramid pyramid;
    pyramid.level = level;
    pyramid.ll = Matrix::zeros(side, side);
    for (std::size_t i = 0; i < count; ++i)
        pyramid.ll.values[i] = get_f64_le(bytes.data() + 3 + i * 8);
    return pyramid;
}

} // namespace facekit
