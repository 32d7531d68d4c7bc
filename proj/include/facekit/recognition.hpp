#ifndef FACEKIT_RECOGNITION_HPP
#define FACEKIT_RECOGNITION_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "facekit/image.hpp"

namespace facekit {

struct EmptyImage : Error {
    using Error::Error;
};
struct BlackImage : Error {
    using Error::Error;
};
struct WrongDimensions : Error {
    using Error::Error;
};
struct BadLevel : Error {
    using Error::Error;
};
struct LevelMismatch : Error {
    using Error::Error;
};
struct EmptyGallery : Error {
    using Error::Error;
};
struct EmptyEnrollment : Error {
    using Error::Error;
};
struct MalformedGallery : Error {
    using Error::Error;
};

inline constexpr int kMinLevel = 1;
inline constexpr int kMaxLevel = 5;

// Gain factor that equalizes a test image's mean intensity to the enrolled
// reference mean.
struct NormalizationParams {
    double reference_average = 0.0;
    double test_average = 0.0;
    double factor = 0.0;
};

// Arithmetic mean pixel intensity, unrounded.
double average_intensity(const GrayImage& img);

NormalizationParams make_normalization(double reference_average, double test_average);

// Scales every pixel by reference_average / test_average, rounding to
// nearest and clamping to [0,255]. Throws BlackImage when either average
// is zero.
GrayImage normalize(const GrayImage& test, double reference_average);

// Flattened LL coefficients of a 128x128 face at the given level.
struct Template {
    std::string identity;
    int level = 0;
    std::vector<double> coefficients;
    bool normalized = false;
};

// Coefficient count for a 128x128 face at `level`: (128 / 2^level)^2.
std::int64_t coefficient_count(int level);

Template extract_template(const GrayImage& face, int level, std::string identity,
                          bool normalized);

double euclidean_distance(const Template& t1, const Template& t2);

struct Gallery {
    std::vector<Template> entries;
    double reference_average = 0.0;
    int level = 0;
};

struct MatchResult {
    std::string identity;
    double distance = 0.0;
    std::optional<double> runner_up_distance; // best distance among other identities
};

// Nearest neighbor over all gallery templates; ties break toward the
// earliest enrolled entry.
MatchResult identify(const Template& probe, const Gallery& gallery);

// Builds a gallery from (label, 128x128 face) pairs. reference_average is
// the mean of average_intensity over all enrolled faces. When
// use_normalization is set, each face is normalized to that average before
// template extraction, so probes normalized the same way compare in a
// consistent intensity frame.
Gallery enroll(const std::vector<std::pair<std::string, GrayImage>>& face_images,
               int level, bool use_normalization);

// Gallery file: magic "FKGAL1", level u8, reference_average f64 LE,
// entry count u32 LE, then per entry: label length u16 LE + UTF-8 bytes,
// coefficient count u32 LE, f64 LE coefficients. Round trips bit-exactly.
std::vector<std::uint8_t> encode_gallery(const Gallery& gallery);
Gallery decode_gallery(std::span<const std::uint8_t> bytes);

void save_gallery(const std::filesystem::path& path, const Gallery& gallery);
Gallery load_gallery(const std::filesystem::path& path);

} // namespace facekit

#endif
