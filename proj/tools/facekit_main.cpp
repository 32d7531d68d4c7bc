// facekit: face detection and recognition command line.
//
// Exit codes: 0 success, 1 I/O or format error, 2 no face found.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "facekit/evaluation.hpp"
#include "facekit/facedetect.hpp"
#include "facekit/pnm.hpp"
#include "facekit/recognition.hpp"
#include "facekit/synthetic.hpp"

namespace fs = std::filesystem;
using namespace facekit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoFace = 2;

GrayImage image_to_face(const RgbImage& img, bool pre_cropped) {
    if (!pre_cropped)
        return detect_face(img).face;
    GrayImage face = rgb_to_gray(img);
    if (face.width != kFaceSize || face.height != kFaceSize)
        face = resize_bilinear(face, kFaceSize, kFaceSize);
    return face;
}

GrayImage mask_to_pgm(const BinaryMask& mask) {
    GrayImage img = make_gray(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.bits.size(); ++i)
        img.data[i] = mask.bits[i] ? 255 : 0;
    return img;
}

GrayImage components_to_pgm(const BinaryMask& mask) {
    GrayImage out = make_gray(mask.width, mask.height);
    const std::vector<int> labels = component_labels(mask);
    int n = 0;
    for (int l : labels)
        n = std::max(n, l);
    if (n == 0)
        return out;
    for (std::size_t i = 0; i < labels.size(); ++i)
        out.data[i] = labels[i]
                          ? static_cast<std::uint8_t>(60 + (195 * labels[i]) / n)
                          : 0;
    return out;
}

int cmd_detect(const fs::path& input, const std::optional<fs::path>& debug_dir) {
    RgbImage img;
    try {
        img = read_image(input);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }

    DetectionResult result;
    try {
        result = detect_face(img);
    } catch (const NoFaceFound& e) {
        std::fprintf(stderr, "no face found: %s\n", e.what());
        if (debug_dir) {
            fs::create_directories(*debug_dir);
            const BinaryMask mask = skin_mask(srgb_to_lab(img));
            write_pgm(*debug_dir / (input.stem().string() + ".mask.pgm"),
                      mask_to_pgm(mask));
        }
        return kExitNoFace;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }

    try {
        const fs::path face_path =
            input.parent_path() / (input.stem().string() + ".face.pgm");
        write_pgm(face_path, result.face);
        std::printf("face\t%s\n", face_path.string().c_str());
        std::printf("bbox\t%d\t%d\t%d\t%d\n", result.bbox.min_x, result.bbox.min_y,
                    result.bbox.max_x, result.bbox.max_y);
        std::printf("holes\t%d\n", result.component.hole_count);
        if (debug_dir) {
            fs::create_directories(*debug_dir);
            const BinaryMask mask = skin_mask(srgb_to_lab(img));
            write_pgm(*debug_dir / (input.stem().string() + ".mask.pgm"),
                      mask_to_pgm(mask));
            write_pgm(*debug_dir / (input.stem().string() + ".components.pgm"),
                      components_to_pgm(mask));
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return kExitOk;
}

int cmd_enroll(const fs::path& manifest, const fs::path& gallery_path, int level,
               bool use_normalization, bool pre_cropped) {
    try {
        const Dataset dataset = load_manifest(manifest);
        if (dataset.references.empty()) {
            std::fprintf(stderr, "error: manifest has no ref entries\n");
            return kExitError;
        }
        std::vector<std::pair<std::string, GrayImage>> faces;
        faces.reserve(dataset.references.size());
        for (const DatasetItem& item : dataset.references)
            faces.emplace_back(item.label,
                               image_to_face(read_image(item.path), pre_cropped));
        const Gallery gallery = enroll(faces, level, use_normalization);
        save_gallery(gallery_path, gallery);
        std::printf("templates\t%zu\n", gallery.entries.size());
        std::printf("reference_average\t%.6f\n", gallery.reference_average);
        return kExitOk;
    } catch (const NoFaceFound& e) {
        std::fprintf(stderr, "no face found: %s\n", e.what());
        return kExitNoFace;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
}

int cmd_identify(const fs::path& input, const fs::path& gallery_path,
                 bool use_normalization, bool pre_cropped) {
    Gallery gallery;
    RgbImage img;
    try {
        gallery = load_gallery(gallery_path);
        img = read_image(input);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    try {
        GrayImage face = image_to_face(img, pre_cropped);
        if (use_normalization)
            face = normalize(face, gallery.reference_average);
        const Template probe =
            extract_template(face, gallery.level, "probe", use_normalization);
        const MatchResult match = identify(probe, gallery);
        if (match.runner_up_distance)
            std::printf("%s\t%.6f\t%.6f\n", match.identity.c_str(), match.distance,
                        *match.runner_up_distance);
        else
            std::printf("%s\t%.6f\t-\n", match.identity.c_str(), match.distance);
        return kExitOk;
    } catch (const NoFaceFound& e) {
        std::fprintf(stderr, "no face found: %s\n", e.what());
        return kExitNoFace;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
}

int cmd_evaluate(const std::optional<fs::path>& manifest, int synthetic_identities,
                 std::uint64_t seed, const std::optional<fs::path>& dump_dir,
                 const std::vector<int>& levels, bool normalized_arm,
                 bool pre_cropped, const std::optional<fs::path>& csv_path) {
    try {
        Dataset dataset;
        if (manifest) {
            dataset = load_manifest(*manifest);
        } else {
            const fs::path dir =
                dump_dir ? *dump_dir
                         : fs::temp_directory_path() /
                               ("facekit-synth-" + std::to_string(seed));
            SyntheticDatasetSpec spec;
            spec.identities = synthetic_identities;
            spec.seed = seed;
            dataset = generate_synthetic_dataset(spec, dir);
            std::fprintf(stderr, "synthetic dataset written to %s\n",
                         dir.string().c_str());
        }

        ExperimentOptions options;
        options.levels = levels;
        options.normalized_arm = normalized_arm;
        options.pre_cropped = pre_cropped;
        const EvalReport report = run_experiment(dataset, options);

        for (const ItemFailure& failure : report.failures)
            std::fprintf(stderr, "warning: %s %s (%s): %s\n", failure.role.c_str(),
                         failure.label.c_str(), failure.path.string().c_str(),
                         failure.reason.c_str());
        std::fputs(format_report_table(report).c_str(), stdout);
        std::printf("best_level\t%d\n", best_level(report));
        if (csv_path)
            write_report_csv(*csv_path, report);
        return kExitOk;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Face detection and recognition via skin segmentation and "
                 "multilevel Haar wavelet templates"};
    app.require_subcommand(1);

    std::string input;
    std::string manifest;
    std::string gallery_path;
    std::string debug_dir;
    std::string csv_path;
    std::string dump_dir;
    int level = 3;
    std::vector<int> levels{1, 2, 3, 4, 5};
    bool no_normalize = false;
    bool pre_cropped = false;
    int synthetic_identities = 0;
    std::uint64_t seed = 1;

    CLI::App* detect = app.add_subcommand("detect", "extract the frontal face");
    detect->add_option("image", input, "input PPM/PGM")->required();
    detect->add_option("--debug-dir", debug_dir, "write mask and component PGMs here");

    CLI::App* enroll_cmd = app.add_subcommand("enroll", "build a gallery from a manifest");
    enroll_cmd->add_option("--manifest", manifest, "ref manifest (role\\tlabel\\tpath)")
        ->required();
    enroll_cmd->add_option("--gallery", gallery_path, "output gallery file")->required();
    enroll_cmd->add_option("--level", level, "DWT level, 1..5")->default_val(3);
    enroll_cmd->add_flag("--no-normalize", no_normalize, "skip intensity normalization");
    enroll_cmd->add_flag("--pre-cropped", pre_cropped, "inputs are already face crops");

    CLI::App* identify_cmd = app.add_subcommand("identify", "match a probe image");
    identify_cmd->add_option("image", input, "probe PPM/PGM")->required();
    identify_cmd->add_option("--gallery", gallery_path, "gallery file")->required();
    identify_cmd->add_flag("--no-normalize", no_normalize,
                           "skip intensity normalization");
    identify_cmd->add_flag("--pre-cropped", pre_cropped, "input is already a face crop");

    CLI::App* evaluate_cmd =
        app.add_subcommand("evaluate", "per-level recognition rates, raw and normalized");
    evaluate_cmd->add_option("--manifest", manifest, "dataset manifest");
    evaluate_cmd->add_option("--synthetic", synthetic_identities,
                             "generate a synthetic dataset with this many identities");
    evaluate_cmd->add_option("--seed", seed, "synthetic generator seed");
    evaluate_cmd->add_option("--dump-dir", dump_dir, "where to write the synthetic dataset");
    evaluate_cmd->add_option("--levels", levels, "DWT levels to evaluate")
        ->delimiter(',');
    evaluate_cmd->add_flag("--no-normalize", no_normalize, "raw arm only");
    evaluate_cmd->add_flag("--pre-cropped", pre_cropped, "inputs are already face crops");
    evaluate_cmd->add_option("--csv", csv_path, "also write the report as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    auto opt_path = [](const std::string& s) {
        return s.empty() ? std::optional<fs::path>{} : std::optional<fs::path>{s};
    };

    if (detect->parsed())
        return cmd_detect(input, opt_path(debug_dir));
    if (enroll_cmd->parsed()) {
        if (level < kMinLevel || level > kMaxLevel) {
            std::fprintf(stderr, "error: --level must be in [1,5]\n");
            return kExitError;
        }
        return cmd_enroll(manifest, gallery_path, level, !no_normalize, pre_cropped);
    }
    if (identify_cmd->parsed())
        return cmd_identify(input, gallery_path, !no_normalize, pre_cropped);
    if (evaluate_cmd->parsed()) {
        if (manifest.empty() && synthetic_identities <= 0) {
            std::fprintf(stderr, "error: pass --manifest or --synthetic N\n");
            return kExitError;
        }
        for (int l : levels) {
            if (l < kMinLevel || l > kMaxLevel) {
                std::fprintf(stderr, "error: --levels entries must be in [1,5]\n");
                return kExitError;
            }
        }
        return cmd_evaluate(opt_path(manifest), synthetic_identities, seed,
                            opt_path(dump_dir), levels, !no_normalize, pre_cropped,
                            opt_path(csv_path));
    }
    return kExitError;
}
