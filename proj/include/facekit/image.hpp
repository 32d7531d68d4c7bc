#ifndef FACEKIT_IMAGE_HPP
#define FACEKIT_IMAGE_HPP

#include <cstdint>
#include <vector>

#include "facekit/error.hpp"

namespace facekit {

// Working face size for the whole pipeline.
inline constexpr int kFaceSize = 128;

struct ZeroDimension : Error {
    using Error::Error;
};

// 8-bit sRGB raster, row-major interleaved r,g,b triplets.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    const std::uint8_t* pixel(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }
    std::uint8_t* pixel(int x, int y) {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }

    bool operator==(const RgbImage&) const = default;
};

// 8-bit intensity raster, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    std::uint8_t at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }

    bool operator==(const GrayImage&) const = default;
};

// CIE L*a*b* per-pixel channels. L in [0,100]; a and b nominally in [-128,127].
struct LabImage {
    int width = 0;
    int height = 0;
    std::vector<double> L;
    std::vector<double> a;
    std::vector<double> b;
};

RgbImage make_rgb(int width, int height, std::uint8_t r = 0, std::uint8_t g = 0,
                  std::uint8_t b = 0);
GrayImage make_gray(int width, int height, std::uint8_t value = 0);

// sRGB -> CIE L*a*b*, D65 white point. Gray pixels map to a = b = 0 exactly.
LabImage srgb_to_lab(const RgbImage& img);

// BT.601 luma, rounded to nearest and clamped to [0,255].
GrayImage rgb_to_gray(const RgbImage& img);

// Grayscale promotion by channel replication.
RgbImage gray_to_rgb(const GrayImage& img);

// Bilinear resize with half-pixel-center sampling and edge clamping.
// Resizing to the input dimensions is the identity. Throws ZeroDimension.
GrayImage resize_bilinear(const GrayImage& img, int out_w, int out_h);

} // namespace facekit

#endif
