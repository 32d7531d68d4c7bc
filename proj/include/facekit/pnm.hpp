#ifndef FACEKIT_PNM_HPP
#define FACEKIT_PNM_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "facekit/image.hpp"

namespace facekit {

struct MalformedHeader : Error {
    using Error::Error;
};
struct TruncatedPixelData : Error {
    using Error::Error;
};
struct UnsupportedMaxval : Error {
    using Error::Error;
};
struct IoError : Error {
    using Error::Error;
};

// Decodes a binary PPM (P6) or PGM (P5) buffer with maxval 255. PGM pixels
// are promoted to RGB by channel replication. Header tokens are separated by
// whitespace; '#' comment lines are permitted.
RgbImage decode_image(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_ppm(const RgbImage& img);
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);

RgbImage read_image(const std::filesystem::path& path);
void write_ppm(const std::filesystem::path& path, const RgbImage& img);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

} // namespace facekit

#endif
