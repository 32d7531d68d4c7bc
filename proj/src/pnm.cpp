#include "facekit/pnm.hpp"

#include <cstring>
#include <fstream>
#include <limits>
#include <string>

namespace facekit {

namespace {

constexpr std::int64_t kMaxPixels = std::int64_t{1} << 26;

bool is_pnm_space(std::uint8_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

// Scanner over the ASCII header. '#' starts a comment running to end of line.
struct HeaderScanner {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    void skip_space_and_comments() {
        while (pos < bytes.size()) {
            if (is_pnm_space(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n')
                    ++pos;
            } else {
                break;
            }
        }
    }

    std::int64_t next_int(const char* what) {
        skip_space_and_comments();
        if (pos >= bytes.size() || bytes[pos] < '0' || bytes[pos] > '9')
            throw MalformedHeader(std::string("expected ") + what + " in PNM header");
        std::int64_t value = 0;
        while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
            value = value * 10 + (bytes[pos] - '0');
            if (value > std::numeric_limits<std::int32_t>::max())
                throw MalformedHeader(std::string(what) + " out of range");
            ++pos;
        }
        return value;
    }
};

} // namespace

RgbImage decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
        throw MalformedHeader("not a binary PPM (P6) or PGM (P5) file");
    const bool color = bytes[1] == '6';

    HeaderScanner scan{bytes, 2};
    const std::int64_t width = scan.next_int("width");
    const std::int64_t height = scan.next_int("height");
    const std::int64_t maxval = scan.next_int("maxval");
    if (width < 1 || height < 1)
        throw MalformedHeader("dimensions must be at least 1x1");
    if (width * height > kMaxPixels)
        throw MalformedHeader("image too large");
    if (maxval != 255)
        throw UnsupportedMaxval("maxval must be 255");

    // Exactly one whitespace byte separates the header from the payload.
    if (scan.pos >= bytes.size() || !is_pnm_space(bytes[scan.pos]))
        throw MalformedHeader("missing separator before pixel data");
    ++scan.pos;

    const std::size_t channels = color ? 3 : 1;
    const std::size_t need = static_cast<std::size_t>(width) * height * channels;
    if (bytes.size() - scan.pos < need)
        throw TruncatedPixelData("pixel payload shorter than header promises");

    RgbImage img;
    img.width = static_cast<int>(width);
    img.height = static_cast<int>(height);
    img.data.resize(static_cast<std::size_t>(width) * height * 3);
    const std::uint8_t* src = bytes.data() + scan.pos;
    if (color) {
        std::memcpy(img.data.data(), src, need);
    } else {
        for (std::size_t i = 0; i < need; ++i) {
            img.data[i * 3] = src[i];
            img.data[i * 3 + 1] = src[i];
            img.data[i * 3 + 2] = src[i];
        }
    }
    return img;
}

namespace {

std::vector<std::uint8_t> encode_pnm(const char* magic, int width, int height,
                                     std::span<const std::uint8_t> payload) {
    std::string header = std::string(magic) + "\n" + std::to_string(width) + " " +
                         std::to_string(height) + "\n255\n";
    std::vector<std::uint8_t> out;
    out.reserve(header.size() + payload.size());
    out.insert(out.end(), header.begin(), header.end());
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

} // namespace

std::vector<std::uint8_t> encode_ppm(const RgbImage& img) {
    return encode_pnm("P6", img.width, img.height, img.data);
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& img) {
    return encode_pnm("P5", img.width, img.height, img.data);
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("read failed for " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("write failed for " + path.string());
}

RgbImage read_image(const std::filesystem::path& path) {
    return decode_image(read_file(path));
}

void write_ppm(const std::filesystem::path& path, const RgbImage& img) {
    write_file(path, encode_ppm(img));
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
    write_file(path, encode_pgm(img));
}

} // namespace facekit
