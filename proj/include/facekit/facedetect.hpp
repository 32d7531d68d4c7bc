#ifndef FACEKIT_FACEDETECT_HPP
#define FACEKIT_FACEDETECT_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "facekit/image.hpp"

namespace facekit {

struct DegenerateChannel : Error {
    using Error::Error;
};
struct NoFaceFound : Error {
    using Error::Error;
};

// Row-major boolean mask; true (1) marks candidate skin.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    bool at(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool v) {
        bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
    }
};

BinaryMask make_mask(int width, int height, bool value = false);

// Inclusive pixel bounds.
struct Box {
    int min_x = 0;
    int min_y = 0;
    int max_x = 0;
    int max_y = 0;

    int width() const { return max_x - min_x + 1; }
    int height() const { return max_y - min_y + 1; }
    bool operator==(const Box&) const = default;
};

struct Component {
    int label = 0;
    std::int64_t pixel_count = 0;
    int hole_count = 0;
    Box bbox;
};

struct DetectionResult {
    GrayImage face; // cropped and resized to 128x128
    Box bbox;
    Component component;
};

// Affine rescale onto [0,1] over the channel's own min/max.
// Throws DegenerateChannel when all values are equal.
std::vector<double> rescale_unit(std::span<const double> values);

// Otsu's threshold over 256 histogram bins of values already rescaled to
// [0,1]. Class statistics use exact per-bin sums; ties resolve to the lowest
// cutoff. The returned value is the upper edge of the last low-class bin.
double otsu_threshold(std::span<const double> values);

// bit = value > t (strict, so a degenerate all-equal channel maps to all-false).
BinaryMask binarize(std::span<const double> values, int width, int height, double t);

// Otsu + binarize on the a and b channels independently, OR-combined.
// A degenerate channel contributes nothing; both degenerate gives all-false.
BinaryMask skin_mask(const LabImage& lab);

// 8-connected labeling of true pixels; labels follow raster-scan discovery
// order starting at 1. hole_count is left at 0 (see count_holes).
std::vector<Component> connected_components(const BinaryMask& mask);

// Per-pixel labels (0 = background) consistent with connected_components.
std::vector<int> component_labels(const BinaryMask& mask);

// Number of 4-connected false regions inside comp's bbox that do not reach
// the bbox border (foreground 8-connected, background 4-connected).
int count_holes(const BinaryMask& mask, const Component& comp);

// Among components with at least one hole, the one with the largest pixel
// count; ties break toward the lowest label. Throws NoFaceFound.
Component select_face(const std::vector<Component>& components);

// Full chain: Lab -> skin mask -> components -> holes -> selection -> crop
// from the grayscale of the original -> resize to 128x128.
DetectionResult detect_face(const RgbImage& img);

} // namespace facekit

#endif
