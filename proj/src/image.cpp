#include "facekit/image.hpp"

#include <algorithm>
#include <cmath>

namespace facekit {

namespace {

// sRGB EOTF per 8-bit code value, computed once.
const double* srgb_linear_table() {
    static const auto table = [] {
        static double t[256];
        for (int i = 0; i < 256; ++i) {
            const double c = i / 255.0;
            t[i] = c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
        }
        return t;
    }();
    return table;
}

// CIE 1976 f(t) with the linear toe below (6/29)^3.
double lab_f(double t) {
    constexpr double delta = 6.0 / 29.0;
    constexpr double delta3 = delta * delta * delta;
    if (t > delta3)
        return std::cbrt(t);
    return t / (3.0 * delta * delta) + 4.0 / 29.0;
}

} // namespace

RgbImage make_rgb(int width, int height, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    if (width < 1 || height < 1)
        throw ZeroDimension("image dimensions must be at least 1x1");
    RgbImage img;
    img.width = width;
    img.height = height;
    img.data.resize(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t i = 0; i < img.data.size(); i += 3) {
        img.data[i] = r;
        img.data[i + 1] = g;
        img.data[i + 2] = b;
    }
    return img;
}

GrayImage make_gray(int width, int height, std::uint8_t value) {
    if (width < 1 || height < 1)
        throw ZeroDimension("image dimensions must be at least 1x1");
    GrayImage img;
    img.width = width;
    img.height = height;
    img.data.assign(static_cast<std::size_t>(width) * height, value);
    return img;
}

LabImage srgb_to_lab(const RgbImage& img) {
    // D65 reference white; the XYZ matrix rows sum to the white point, so
    // achromatic inputs land on a = b = 0 exactly.
    constexpr double xn = 0.95047, yn = 1.0, zn = 1.08883;
    const double* lin = srgb_linear_table();

    LabImage out;
    out.width = img.width;
    out.height = img.height;
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    out.L.resize(n);
    out.a.resize(n);
    out.b.resize(n);

    for (std::size_t i = 0; i < n; ++i) {
        const double r = lin[img.data[i * 3]];
        const double g = lin[img.data[i * 3 + 1]];
        const double b = lin[img.data[i * 3 + 2]];

        const double x = 0.4124564 * r + 0.3575761 * g + 0.1804375 * b;
        const double y = 0.2126729 * r + 0.7151522 * g + 0.0721750 * b;
        const double z = 0.0193339 * r + 0.1191920 * g + 0.9503041 * b;

        const double fx = lab_f(x / xn);
        const double fy = lab_f(y / yn);
        const double fz = lab_f(z / zn);

        out.L[i] = 116.0 * fy - 16.0;
        out.a[i] = 500.0 * (fx - fy);
        out.b[i] = 200.0 * (fy - fz);
    }
    return out;
}

GrayImage rgb_to_gray(const RgbImage& img) {
    GrayImage out;
    out.width = img.width;
    out.height = img.height;
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    out.data.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double y = 0.299 * img.data[i * 3] + 0.587 * img.data[i * 3 + 1] +
                         0.114 * img.data[i * 3 + 2];
        const long v = std::lround(y);
        out.data[i] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
    }
    return out;
}

RgbImage gray_to_rgb(const GrayImage& img) {
    RgbImage out;
    out.width = img.width;
    out.height = img.height;
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    out.data.resize(n * 3);
    for (std::size_t i = 0; i < n; ++i) {
        out.data[i * 3] = img.data[i];
        out.data[i * 3 + 1] = img.data[i];
        out.data[i * 3 + 2] = img.data[i];
    }
    return out;
}

GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h) {
    if (out_w < 1 || out_h < 1)
        throw ZeroDimension("resize target must be at least 1x1");
    if (out_w == img.width && out_h == img.height)
        return img;

    GrayImage out;
    out.width = out_w;
    out.height = out_h;
    out.data.resize(static_cast<std::size_t>(out_w) * out_h);

    const double sx = static_cast<double>(img.width) / out_w;
    const double sy = static_cast<double>(img.height) / out_h;

    for (int y = 0; y < out_h; ++y) {
        const double src_y = (y + 0.5) * sy - 0.5;
        const int y0 = static_cast<int>(std::floor(src_y));
        const double ty = src_y - y0;
        const int y0c = std::clamp(y0, 0, img.height - 1);
        const int y1c = std::clamp(y0 + 1, 0, img.height - 1);
        for (int x = 0; x < out_w; ++x) {
            const double src_x = (x + 0.5) * sx - 0.5;
            const int x0 = static_cast<int>(std::floor(src_x));
            const double tx = src_x - x0;
            const int x0c = std::clamp(x0, 0, img.width - 1);
            const int x1c = std::clamp(x0 + 1, 0, img.width - 1);

            const double top = img.at(x0c, y0c) * (1.0 - tx) + img.at(x1c, y0c) * tx;
            const double bot = img.at(x0c, y1c) * (1.0 - tx) + img.at(x1c, y1c) * tx;
            const double v = top * (1.0 - ty) + bot * ty;
            out.at(x, y) =
                static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return out;
}

} // namespace facekit
