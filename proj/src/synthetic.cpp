#include "facekit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "facekit/pnm.hpp"

namespace facekit {

namespace {

// splitmix64; self-contained so rendered datasets are stable across
// standard library versions.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double gaussian() {
        double u1 = uniform();
        if (u1 <= 0.0)
            u1 = 0x1.0p-53;
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }
    int pick(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

constexpr std::array<std::array<std::uint8_t, 3>, 6> kBackgrounds = {{
    {175, 175, 175}, // light gray
    {85, 85, 85},    // dark gray
    {106, 130, 160}, // slate
    {135, 190, 225}, // sky
    {70, 140, 140},  // teal
    {120, 140, 155}, // steel
}};

bool inside_ellipse(double x, double y, double cx, double cy, double rx, double ry) {
    const double nx = (x - cx) / rx;
    const double ny = (y - cy) / ry;
    return nx * nx + ny * ny <= 1.0;
}

} // namespace

FaceGeometry face_geometry(std::uint64_t identity_seed, int width, int height) {
    Rng rng(identity_seed);
    FaceGeometry g;
    g.cx = rng.uniform(0.40, 0.60) * width;
    g.cy = rng.uniform(0.42, 0.58) * height;
    g.rx = rng.uniform(0.22, 0.30) * width;
    g.ry = rng.uniform(0.30, 0.40) * height;

    g.eye_dx = rng.uniform(0.35, 0.55) * g.rx;
    g.eye_dy = rng.uniform(0.25, 0.42) * g.ry;
    g.eye_rx = rng.uniform(0.10, 0.17) * g.rx;
    g.eye_ry = rng.uniform(0.08, 0.14) * g.ry;

    g.mouth_dy = rng.uniform(0.40, 0.58) * g.ry;
    g.mouth_rx = rng.uniform(0.25, 0.45) * g.rx;
    g.mouth_ry = rng.uniform(0.06, 0.12) * g.ry;

    const double r = rng.uniform(180.0, 215.0);
    const double green = r * rng.uniform(0.68, 0.76);
    const double blue = green * rng.uniform(0.62, 0.75);
    g.skin = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(green),
              static_cast<std::uint8_t>(blue)};
    g.background = kBackgrounds[rng.pick(static_cast<int>(kBackgrounds.size()))];
    // Holes rendered in the background color keep each chroma channel
    // bimodal, so the adaptive threshold always lands between background
    // and skin.
    g.feature = g.background;
    return g;
}

void add_decoy(FaceGeometry& geometry, int width, int height) {
    const int face_left = static_cast<int>(std::floor(geometry.cx - geometry.rx));
    const int face_right = static_cast<int>(std::ceil(geometry.cx + geometry.rx));
    const int left_room = face_left;
    const int right_room = width - 1 - face_right;

    Box decoy;
    const int gap = 5; // keeps the rectangle 8-disconnected from the face
    if (left_room >= right_room) {
        decoy.max_x = face_left - gap;
        decoy.min_x = std::max(2, decoy.max_x - 18);
    } else {
        decoy.min_x = face_right + gap;
        decoy.max_x = std::min(width - 3, decoy.min_x + 18);
    }
    decoy.min_y = height / 2;
    decoy.max_y = std::min(height - 3, decoy.min_y + height / 3);
    geometry.decoy = decoy;
}

RgbImage render_portrait(const FaceGeometry& g, int width, int height) {
    RgbImage img = make_rgb(width, height, g.background[0], g.background[1],
                            g.background[2]);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::array<std::uint8_t, 3>* color = nullptr;
            if (inside_ellipse(x, y, g.cx, g.cy, g.rx, g.ry)) {
                const bool eye_l = inside_ellipse(x, y, g.cx - g.eye_dx,
                                                  g.cy - g.eye_dy, g.eye_rx, g.eye_ry);
                const bool eye_r = inside_ellipse(x, y, g.cx + g.eye_dx,
                                                  g.cy - g.eye_dy, g.eye_rx, g.eye_ry);
                const bool mouth = inside_ellipse(x, y, g.cx, g.cy + g.mouth_dy,
                                                  g.mouth_rx, g.mouth_ry);
                color = (eye_l || eye_r || mouth) ? &g.feature : &g.skin;
            } else if (g.decoy && x >= g.decoy->min_x && x <= g.decoy->max_x &&
                       y >= g.decoy->min_y && y <= g.decoy->max_y) {
                color = &g.skin;
            }
            if (color) {
                std::uint8_t* p = img.pixel(x, y);
                p[0] = (*color)[0];
                p[1] = (*color)[1];
                p[2] = (*color)[2];
            }
        }
    }
    return img;
}

RgbImage apply_gain_noise(const RgbImage& img, double gain, double sigma,
                          std::uint64_t seed) {
    if (gain == 1.0 && sigma == 0.0)
        return img;
    Rng rng(seed);
    RgbImage out = img;
    for (std::uint8_t& v : out.data) {
        double value = gain * v;
        if (sigma > 0.0)
            value += sigma * rng.gaussian();
        v = static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
    }
    return out;
}

Box face_extent(const FaceGeometry& g, int width, int height) {
    Box box{width, height, -1, -1};
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (!inside_ellipse(x, y, g.cx, g.cy, g.rx, g.ry))
                continue;
            box.min_x = std::min(box.min_x, x);
            box.max_x = std::max(box.max_x, x);
            box.min_y = std::min(box.min_y, y);
            box.max_y = std::max(box.max_y, y);
        }
    }
    return box;
}

Dataset generate_synthetic_dataset(const SyntheticDatasetSpec& spec,
                                   const std::filesystem::path& dir) {
    if (spec.identities < 1 || spec.references_per_identity < 1 ||
        spec.probes_per_identity < 0)
        throw DatasetError("synthetic dataset needs at least one identity and reference");
    std::filesystem::create_directories(dir);

    Rng rng(spec.seed);
    Dataset dataset;
    char name[64];
    for (int id = 0; id < spec.identities; ++id) {
        const std::uint64_t identity_seed =
            spec.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(id + 1));
        const FaceGeometry base = face_geometry(identity_seed, spec.width, spec.height);
        std::snprintf(name, sizeof name, "id%03d", id);
        const std::string label = name;

        std::vector<RgbImage> refs;
        for (int r = 0; r < spec.references_per_identity; ++r) {
            FaceGeometry g = base;
            g.cx += rng.uniform(-2.0, 2.0);
            g.cy += rng.uniform(-2.0, 2.0);
            g.mouth_rx *= rng.uniform(0.95, 1.05);
            g.eye_dx *= rng.uniform(0.97, 1.03);
            const RgbImage img = apply_gain_noise(
                render_portrait(g, spec.width, spec.height), 1.0,
                spec.reference_noise_sigma, rng.next());
            std::snprintf(name, sizeof name, "%s_ref%d.ppm", label.c_str(), r);
            write_ppm(dir / name, img);
            dataset.references.push_back({label, name});
            refs.push_back(img);
        }
        for (int p = 0; p < spec.probes_per_identity; ++p) {
            const RgbImage& ref = refs[p % refs.size()];
            const double gain = rng.uniform(spec.probe_gain_min, spec.probe_gain_max);
            const RgbImage img =
                apply_gain_noise(ref, gain, spec.probe_noise_sigma, rng.next());
            std::snprintf(name, sizeof name, "%s_probe%d.ppm", label.c_str(), p);
            write_ppm(dir / name, img);
            dataset.probes.push_back({label, name});
        }
    }
    save_manifest(dir / "manifest.tsv", dataset);

    // Hand back paths resolved the way load_manifest would resolve them.
    for (DatasetItem& item : dataset.references)
        item.path = dir / item.path;
    for (DatasetItem& item : dataset.probes)
        item.path = dir / item.path;
    return dataset;
}

} // namespace facekit
