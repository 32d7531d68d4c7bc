#include "facekit/facedetect.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace facekit {

BinaryMask make_mask(int width, int height, bool value) {
    BinaryMask mask;
    mask.width = width;
    mask.height = height;
    mask.bits.assign(static_cast<std::size_t>(width) * height, value ? 1 : 0);
    return mask;
}

std::vector<double> rescale_unit(std::span<const double> values) {
    if (values.empty())
        throw DegenerateChannel("empty channel");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (lo == hi)
        throw DegenerateChannel("all channel values are equal");
    std::vector<double> out(values.size());
    const double inv = 1.0 / (hi - lo);
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = (values[i] - lo) * inv;
    return out;
}

double otsu_threshold(std::span<const double> values) {
    constexpr int kBins = 256;
    if (values.empty())
        throw DegenerateChannel("empty channel");

    std::array<std::int64_t, kBins> count{};
    std::array<double, kBins> sum{};
    for (double v : values) {
        int bin = static_cast<int>(v * kBins);
        bin = std::clamp(bin, 0, kBins - 1);
        ++count[bin];
        sum[bin] += v;
    }

    double total_sum = 0.0;
    for (double s : sum)
        total_sum += s;
    const auto total = static_cast<std::int64_t>(values.size());

    // Cutoff k assigns bins 0..k to the low class. Maximize
    // n0*n1*(mu0 - mu1)^2, a monotone transform of the between-class variance.
    double best = -1.0;
    int best_k = -1;
    std::int64_t n0 = 0;
    double s0 = 0.0;
    for (int k = 0; k < kBins - 1; ++k) {
        n0 += count[k];
        s0 += sum[k];
        const std::int64_t n1 = total - n0;
        if (n0 == 0 || n1 == 0)
            continue;
        const double mu0 = s0 / n0;
        const double mu1 = (total_sum - s0) / n1;
        const double spread = mu0 - mu1;
        const double score = static_cast<double>(n0) * static_cast<double>(n1) * spread * spread;
        if (score > best) {
            best = score;
            best_k = k;
        }
    }
    if (best_k < 0)
        throw DegenerateChannel("channel has no variance to split");
    return (best_k + 1) / static_cast<double>(kBins);
}

BinaryMask binarize(std::span<const double> values, int width, int height, double t) {
    BinaryMask mask = make_mask(width, height);
    for (std::size_t i = 0; i < values.size(); ++i)
        mask.bits[i] = values[i] > t ? 1 : 0;
    return mask;
}

BinaryMask skin_mask(const LabImage& lab) {
    BinaryMask mask = make_mask(lab.width, lab.height);
    for (const std::vector<double>* channel : {&lab.a, &lab.b}) {
        try {
            const std::vector<double> scaled = rescale_unit(*channel);
            const double t = otsu_threshold(scaled);
            const BinaryMask part = binarize(scaled, lab.width, lab.height, t);
            for (std::size_t i = 0; i < mask.bits.size(); ++i)
                mask.bits[i] |= part.bits[i];
        } catch (const DegenerateChannel&) {
            // flat channel, nothing to contribute
        }
    }
    return mask;
}

namespace {

std::vector<Component> scan_components(const BinaryMask& mask, std::vector<int>& labels) {
    const int w = mask.width, h = mask.height;
    labels.assign(static_cast<std::size_t>(w) * h, 0);
    std::vector<Component> components;
    std::vector<std::pair<int, int>> stack;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (!mask.bits[idx] || labels[idx] != 0)
                continue;

            Component comp;
            comp.label = static_cast<int>(components.size()) + 1;
            comp.bbox = {x, y, x, y};
            labels[idx] = comp.label;
            stack.clear();
            stack.emplace_back(x, y);
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                ++comp.pixel_count;
                comp.bbox.min_x = std::min(comp.bbox.min_x, cx);
                comp.bbox.max_x = std::max(comp.bbox.max_x, cx);
                comp.bbox.min_y = std::min(comp.bbox.min_y, cy);
                comp.bbox.max_y = std::max(comp.bbox.max_y, cy);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0)
                            continue;
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h)
                            continue;
                        const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
                        if (mask.bits[nidx] && labels[nidx] == 0) {
                            labels[nidx] = comp.label;
                            stack.emplace_back(nx, ny);
                        }
                    }
                }
            }
            components.push_back(comp);
        }
    }
    return components;
}

} // namespace

std::vector<Component> connected_components(const BinaryMask& mask) {
    std::vector<int> labels;
    return scan_components(mask, labels);
}

std::vector<int> component_labels(const BinaryMask& mask) {
    std::vector<int> labels;
    scan_components(mask, labels);
    return labels;
}

int count_holes(const BinaryMask& mask, const Component& comp) {
    const Box& box = comp.bbox;
    const int bw = box.width(), bh = box.height();

    // visited marks background cells already assigned: either reachable from
    // the bbox border (outside) or part of a counted hole.
    std::vector<std::uint8_t> visited(static_cast<std::size_t>(bw) * bh, 0);
    auto local = [bw](int lx, int ly) { return static_cast<std::size_t>(ly) * bw + lx; };
    auto is_background = [&](int lx, int ly) {
        return !mask.at(box.min_x + lx, box.min_y + ly);
    };

    std::vector<std::pair<int, int>> stack;
    auto flood4 = [&](int sx, int sy) {
        stack.clear();
        stack.emplace_back(sx, sy);
        visited[local(sx, sy)] = 1;
        while (!stack.empty()) {
            const auto [cx, cy] = stack.back();
            stack.pop_back();
            constexpr int dx[4] = {1, -1, 0, 0};
            constexpr int dy[4] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d) {
                const int nx = cx + dx[d], ny = cy + dy[d];
                if (nx < 0 || ny < 0 || nx >= bw || ny >= bh)
                    continue;
                if (visited[local(nx, ny)] || !is_background(nx, ny))
                    continue;
                visited[local(nx, ny)] = 1;
                stack.emplace_back(nx, ny);
            }
        }
    };

    // Everything reachable from a border background cell is outside.
    for (int lx = 0; lx < bw; ++lx) {
        if (is_background(lx, 0) && !visited[local(lx, 0)])
            flood4(lx, 0);
        if (is_background(lx, bh - 1) && !visited[local(lx, bh - 1)])
            flood4(lx, bh - 1);
    }
    for (int ly = 0; ly < bh; ++ly) {
        if (is_background(0, ly) && !visited[local(0, ly)])
            flood4(0, ly);
        if (is_background(bw - 1, ly) && !visited[local(bw - 1, ly)])
            flood4(bw - 1, ly);
    }

    // Remaining background regions are enclosed.
    int holes = 0;
    for (int ly = 0; ly < bh; ++ly) {
        for (int lx = 0; lx < bw; ++lx) {
            if (is_background(lx, ly) && !visited[local(lx, ly)]) {
                ++holes;
                flood4(lx, ly);
            }
        }
    }
    return holes;
}

Component select_face(const std::vector<Component>& components) {
    const Component* best = nullptr;
    for (const Component& comp : components) {
        if (comp.hole_count < 1)
            continue;
        if (!best || comp.pixel_count > best->pixel_count)
            best = &comp;
    }
    if (!best)
        throw NoFaceFound("no skin component with a hole");
    return *best;
}

namespace {

GrayImage crop(const GrayImage& img, const Box& box) {
    GrayImage out = make_gray(box.width(), box.height());
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            out.at(x, y) = img.at(box.min_x + x, box.min_y + y);
    return out;
}

} // namespace

DetectionResult detect_face(const RgbImage& img) {
    const LabImage lab = srgb_to_lab(img);
    const BinaryMask mask = skin_mask(lab);
    std::vector<Component> components = connected_components(mask);
    if (components.empty())
        throw NoFaceFound("skin mask is empty");
    for (Component& comp : components)
        comp.hole_count = count_holes(mask, comp);

    DetectionResult result;
    result.component = select_face(components);
    result.bbox = result.component.bbox;
    const GrayImage gray = rgb_to_gray(img);
    result.face = resize_bilinear(crop(gray, result.bbox), kFaceSize, kFaceSize);
    return result;
}

} // namespace facekit
