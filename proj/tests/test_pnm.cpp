#include <doctest.h>

#include <random>
#include <string>

#include "facekit/pnm.hpp"
#include "test_support.hpp"

using namespace facekit;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) {
    return {s.begin(), s.end()};
}

} // namespace

TEST_CASE("decode_image reads a P6 header and payload") {
    auto file = bytes_of("P6 2 1 255\n");
    const std::uint8_t pixels[6] = {255, 0, 0, 0, 0, 255};
    file.insert(file.end(), pixels, pixels + 6);

    const RgbImage img = decode_image(file);
    CHECK(img.width == 2);
    CHECK(img.height == 1);
    CHECK(img.data == std::vector<std::uint8_t>{255, 0, 0, 0, 0, 255});
}

TEST_CASE("decode_image promotes P5 to RGB by replication") {
    auto file = bytes_of("P5\n1 1\n255\n");
    file.push_back(7);
    const RgbImage img = decode_image(file);
    CHECK(img.width == 1);
    CHECK(img.height == 1);
    CHECK(img.data == std::vector<std::uint8_t>{7, 7, 7});
}

TEST_CASE("decode_image accepts header comments") {
    auto file = bytes_of("P5\n# a comment\n2 # trailing\n1\n# more\n255\n");
    file.push_back(1);
    file.push_back(2);
    const RgbImage img = decode_image(file);
    CHECK(img.width == 2);
    CHECK(img.data[0] == 1);
    CHECK(img.data[3] == 2);
}

TEST_CASE("decode_image error cases") {
    SUBCASE("short payload") {
        auto file = bytes_of("P6 4 4 255\n");
        file.resize(file.size() + 30, 0); // 4x4 needs 48 bytes
        CHECK_THROWS_AS(decode_image(file), TruncatedPixelData);
    }
    SUBCASE("wrong magic") {
        CHECK_THROWS_AS(decode_image(bytes_of("P3 1 1 255\n0 0 0")), MalformedHeader);
    }
    SUBCASE("unsupported maxval") {
        auto file = bytes_of("P5 1 1 254\n");
        file.push_back(0);
        CHECK_THROWS_AS(decode_image(file), UnsupportedMaxval);
    }
    SUBCASE("maxval 65535") {
        auto file = bytes_of("P5 1 1 65535\n");
        file.resize(file.size() + 2, 0);
        CHECK_THROWS_AS(decode_image(file), UnsupportedMaxval);
    }
    SUBCASE("zero width") {
        CHECK_THROWS_AS(decode_image(bytes_of("P5 0 1 255\n")), MalformedHeader);
    }
    SUBCASE("missing dimension") {
        CHECK_THROWS_AS(decode_image(bytes_of("P6 2\n")), MalformedHeader);
    }
    SUBCASE("empty input") {
        CHECK_THROWS_AS(decode_image(std::vector<std::uint8_t>{}), MalformedHeader);
    }
}

TEST_CASE("encode/decode round trip is bit-exact") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> dim(1, 24);
        const RgbImage rgb = testsupport::random_rgb(rng, dim(rng), dim(rng));
        CHECK(decode_image(encode_ppm(rgb)) == rgb);

        const GrayImage gray = testsupport::random_gray(rng, dim(rng), dim(rng));
        CHECK(decode_image(encode_pgm(gray)) == gray_to_rgb(gray));
    }
}

TEST_CASE("file io round trip and missing-file error") {
    testsupport::TempDir dir;
    std::mt19937 rng(29);
    const RgbImage img = testsupport::random_rgb(rng, 5, 3);
    const auto path = dir.path() / "img.ppm";
    write_ppm(path, img);
    CHECK(read_image(path) == img);
    CHECK_THROWS_AS(read_image(dir.path() / "nope.ppm"), IoError);
}
