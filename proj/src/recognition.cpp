#include "facekit/recognition.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "facekit/pnm.hpp"
#include "facekit/wavelet.hpp"

namespace facekit {

double average_intensity(const GrayImage& img) {
    if (img.data.empty())
        throw EmptyImage("image has no pixels");
    double sum = 0.0;
    for (std::uint8_t v : img.data)
        sum += v;
    return sum / static_cast<double>(img.data.size());
}

NormalizationParams make_normalization(double reference_average, double test_average) {
    if (test_average <= 0.0)
        throw BlackImage("test image average intensity is zero");
    if (reference_average <= 0.0)
        throw BlackImage("reference average intensity is zero");
    return {reference_average, test_average, reference_average / test_average};
}

GrayImage normalize(const GrayImage& test, double reference_average) {
    const NormalizationParams params =
        make_normalization(reference_average, average_intensity(test));
    GrayImage out = test;
    for (std::uint8_t& v : out.data) {
        const long scaled = std::lround(v * params.factor);
        v = static_cast<std::uint8_t>(std::clamp(scaled, 0L, 255L));
    }
    return out;
}

std::int64_t coefficient_count(int level) {
    if (level < kMinLevel || level > kMaxLevel)
        throw BadLevel("level must be in [1,5], got " + std::to_string(level));
    const std::int64_t side = kFaceSize >> level;
    return side * side;
}

Template extract_template(const GrayImage& face, int level, std::string identity,
                          bool normalized) {
    if (level < kMinLevel || level > kMaxLevel)
        throw BadLevel("level must be in [1,5], got " + std::to_string(level));
    if (face.width != kFaceSize || face.height != kFaceSize)
        throw WrongDimensions("face must be 128x128, got " + std::to_string(face.width) +
                              "x" + std::to_string(face.height));

    Matrix m = Matrix::zeros(face.height, face.width);
    for (std::size_t i = 0; i < face.data.size(); ++i)
        m.values[i] = face.data[i];

    WaveletPyramid pyramid = dwt2_multilevel(m, level);

    Template t;
    t.identity = std::move(identity);
    t.level = level;
    t.coefficients = std::move(pyramid.ll.values); // already row-major
    t.normalized = normalized;
    return t;
}

double euclidean_distance(const Template& t1, const Template& t2) {
    if (t1.level != t2.level || t1.coefficients.size() != t2.coefficients.size())
        throw LevelMismatch("templates have different levels or coefficient counts");
    double sum = 0.0;
    for (std::size_t i = 0; i < t1.coefficients.size(); ++i) {
        const double d = t1.coefficients[i] - t2.coefficients[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

MatchResult identify(const Template& probe, const Gallery& gallery) {
    if (gallery.entries.empty())
        throw EmptyGallery("gallery has no templates");

    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < gallery.entries.size(); ++i) {
        const double d = euclidean_distance(probe, gallery.entries[i]);
        if (d < best_dist) {
            best_dist = d;
            best = i;
        }
    }

    MatchResult result;
    result.identity = gallery.entries[best].identity;
    result.distance = best_dist;
    for (const Template& entry : gallery.entries) {
        if (entry.identity == result.identity)
            continue;
        const double d = euclidean_distance(probe, entry);
        if (!result.runner_up_distance || d < *result.runner_up_distance)
            result.runner_up_distance = d;
    }
    return result;
}

Gallery enroll(const std::vector<std::pair<std::string, GrayImage>>& face_images,
               int level, bool use_normalization) {
    if (face_images.empty())
        throw EmptyEnrollment("no images to enroll");
    if (level < kMinLevel || level > kMaxLevel)
        throw BadLevel("level must be in [1,5], got " + std::to_string(level));

    double sum = 0.0;
    for (const auto& [label, face] : face_images) {
        if (face.width != kFaceSize || face.height != kFaceSize)
            throw WrongDimensions("enrolled face for '" + label + "' must be 128x128");
        sum += average_intensity(face);
    }

    Gallery gallery;
    gallery.level = level;
    gallery.reference_average = sum / static_cast<double>(face_images.size());
    gallery.entries.reserve(face_images.size());
    for (const auto& [label, face] : face_images) {
        if (use_normalization) {
            gallery.entries.push_back(extract_template(
                normalize(face, gallery.reference_average), level, label, true));
        } else {
            gallery.entries.push_back(extract_template(face, level, label, false));
        }
    }
    return gallery;
}

namespace {

constexpr char kGalleryMagic[6] = {'F', 'K', 'G', 'A', 'L', '1'};

void put_u16_le(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64_le(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

struct Reader {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    void need(std::size_t n) {
        if (bytes.size() - pos < n)
            throw MalformedGallery("gallery file truncated");
    }
    std::uint8_t u8() {
        need(1);
        return bytes[pos++];
    }
    std::uint16_t u16() {
        need(2);
        const std::uint16_t v =
            static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
        pos += 8;
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }
    std::string str(std::size_t n) {
        need(n);
        std::string s(reinterpret_cast<const char*>(bytes.data() + pos), n);
        pos += n;
        return s;
    }
};

} // namespace

std::vector<std::uint8_t> encode_gallery(const Gallery& gallery) {
    if (gallery.level < kMinLevel || gallery.level > kMaxLevel)
        throw BadLevel("gallery level must be in [1,5]");
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kGalleryMagic, kGalleryMagic + sizeof kGalleryMagic);
    out.push_back(static_cast<std::uint8_t>(gallery.level));
    put_f64_le(out, gallery.reference_average);
    put_u32_le(out, static_cast<std::uint32_t>(gallery.entries.size()));
    for (const Template& t : gallery.entries) {
        if (t.identity.size() > 0xffff)
            throw MalformedGallery("label too long for gallery format");
        put_u16_le(out, static_cast<std::uint16_t>(t.identity.size()));
        out.insert(out.end(), t.identity.begin(), t.identity.end());
        put_u32_le(out, static_cast<std::uint32_t>(t.coefficients.size()));
        for (double c : t.coefficients)
            put_f64_le(out, c);
    }
    return out;
}

Gallery decode_gallery(std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    r.need(sizeof kGalleryMagic);
    if (std::memcmp(bytes.data(), kGalleryMagic, sizeof kGalleryMagic) != 0)
        throw MalformedGallery("bad gallery magic");
    r.pos = sizeof kGalleryMagic;

    Gallery gallery;
    gallery.level = r.u8();
    if (gallery.level < kMinLevel || gallery.level > kMaxLevel)
        throw MalformedGallery("gallery level out of range");
    gallery.reference_average = r.f64();
    const std::uint32_t count = r.u32();
    const auto expected_coeffs =
        static_cast<std::uint32_t>(coefficient_count(gallery.level));

    gallery.entries.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        Template t;
        const std::uint16_t label_len = r.u16();
        t.identity = r.str(label_len);
        t.level = gallery.level;
        const std::uint32_t ncoeff = r.u32();
        if (ncoeff != expected_coeffs)
            throw MalformedGallery("entry coefficient count does not match level");
        t.coefficients.resize(ncoeff);
        for (std::uint32_t j = 0; j < ncoeff; ++j)
            t.coefficients[j] = r.f64();
        gallery.entries.push_back(std::move(t));
    }
    if (r.pos != bytes.size())
        throw MalformedGallery("trailing bytes after last gallery entry");
    return gallery;
}

void save_gallery(const std::filesystem::path& path, const Gallery& gallery) {
    write_file(path, encode_gallery(gallery));
}

Gallery load_gallery(const std::filesystem::path& path) {
    return decode_gallery(read_file(path));
}

} // namespace facekit
