#ifndef FACEKIT_EVALUATION_HPP
#define FACEKIT_EVALUATION_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "facekit/error.hpp"

namespace facekit {

struct DatasetError : Error {
    using Error::Error;
};
struct EmptyReport : Error {
    using Error::Error;
};

struct DatasetItem {
    std::string label;
    std::filesystem::path path;
};

// Closed-set identification dataset: enrolled references and labeled probes.
struct Dataset {
    std::vector<DatasetItem> references;
    std::vector<DatasetItem> probes;
};

// Manifest lines are `role<TAB>label<TAB>path` with role in {ref, probe}.
// Blank lines and lines starting with '#' are skipped. Relative paths are
// resolved against the manifest's directory.
Dataset load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const Dataset& dataset);

struct EvalRow {
    int level = 0;
    bool normalized = false;
    std::int64_t coefficient_count = 0;
    int correct = 0;
    int total = 0;
    double rate = 0.0;
};

// Per-item problem (missing file, undetectable face); the run continues and
// the item counts as incorrect.
struct ItemFailure {
    std::string role;
    std::string label;
    std::filesystem::path path;
    std::string reason;
};

struct EvalReport {
    std::vector<EvalRow> rows;
    std::vector<ItemFailure> failures;
};

struct ExperimentOptions {
    std::vector<int> levels{1, 2, 3, 4, 5};
    bool normalized_arm = true; // run the raw arm plus the normalized arm
    bool pre_cropped = false;   // inputs are already face crops, skip detection
    int threads = 0;            // 0 = FACEKIT_THREADS env, then hardware
};

// Enrolls the references and identifies every probe, once per requested
// level and arm. Rows come out ordered by level, raw arm first.
EvalReport run_experiment(const Dataset& dataset, const ExperimentOptions& options);

// Level whose normalized-arm rate is highest (raw arm when no normalized
// rows exist); ties break toward the smaller level.
int best_level(const EvalReport& report);

std::string format_report_table(const EvalReport& report);
std::string format_report_csv(const EvalReport& report);
void write_report_csv(const std::filesystem::path& path, const EvalReport& report);

// Worker count: `requested` when positive, else FACEKIT_THREADS when set to
// a positive integer, else hardware concurrency.
int thread_budget(int requested = 0);

} // namespace facekit

#endif
