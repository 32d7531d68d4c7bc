#ifndef FACEKIT_SYNTHETIC_HPP
#define FACEKIT_SYNTHETIC_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>

#include "facekit/evaluation.hpp"
#include "facekit/facedetect.hpp"
#include "facekit/image.hpp"

namespace facekit {

// Parametric portrait: a skin-tone ellipse with two eye holes and a mouth
// hole on a cool background, optionally with a hole-free skin rectangle
// standing in for a hand.
struct FaceGeometry {
    double cx = 0, cy = 0; // face ellipse center, pixels
    double rx = 0, ry = 0; // face semi-axes
    double eye_dx = 0, eye_dy = 0; // eye offsets from the face center
    double eye_rx = 0, eye_ry = 0; // eye semi-axes
    double mouth_dy = 0;           // mouth center below the face center
    double mouth_rx = 0, mouth_ry = 0;
    std::array<std::uint8_t, 3> skin{};
    std::array<std::uint8_t, 3> background{};
    std::array<std::uint8_t, 3> feature{}; // eye and mouth fill
    std::optional<Box> decoy;              // solid skin rectangle, no holes
};

// Deterministic geometry for one identity. Skin tones stay warm (positive
// a and b) and backgrounds cool so the chroma thresholds can separate them.
FaceGeometry face_geometry(std::uint64_t identity_seed, int width, int height);

// Places a solid skin rectangle beside the face, clear of the face's
// bounding box and smaller than the face.
void add_decoy(FaceGeometry& geometry, int width, int height);

RgbImage render_portrait(const FaceGeometry& geometry, int width, int height);

// pixel' = clamp(round(gain * pixel + N(0, sigma))), per channel.
RgbImage apply_gain_noise(const RgbImage& img, double gain, double sigma,
                          std::uint64_t seed);

// Tight bounding box of the rasterized face ellipse (ground truth for
// detection tests).
Box face_extent(const FaceGeometry& geometry, int width, int height);

struct SyntheticDatasetSpec {
    int identities = 10;
    int references_per_identity = 5;
    int probes_per_identity = 5;
    int width = 160;
    int height = 120;
    double reference_noise_sigma = 2.0;
    double probe_noise_sigma = 10.0;
    double probe_gain_min = 1.0; // probes carry a global gain drawn from
    double probe_gain_max = 1.0; // [gain_min, gain_max]
    std::uint64_t seed = 1;
};

// Writes reference and probe PPMs plus manifest.tsv into `dir` and returns
// the dataset. Probes are their paired reference image with gain and noise
// applied, so probe j of an identity degrades reference (j mod refs).
Dataset generate_synthetic_dataset(const SyntheticDatasetSpec& spec,
                                   const std::filesystem::path& dir);

} // namespace facekit

#endif
