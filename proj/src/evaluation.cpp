#include "facekit/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "facekit/facedetect.hpp"
#include "facekit/pnm.hpp"
#include "facekit/recognition.hpp"

namespace facekit {

Dataset load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw DatasetError("cannot open manifest " + path.string());
    const std::filesystem::path base = path.has_parent_path()
                                           ? path.parent_path()
                                           : std::filesystem::path(".");

    Dataset dataset;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        const std::size_t tab1 = line.find('\t');
        const std::size_t tab2 = tab1 == std::string::npos ? std::string::npos
                                                           : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos)
            throw DatasetError("manifest line " + std::to_string(line_no) +
                               ": expected role<TAB>label<TAB>path");
        const std::string role = line.substr(0, tab1);
        const std::string label = line.substr(tab1 + 1, tab2 - tab1 - 1);
        std::filesystem::path file = line.substr(tab2 + 1);
        if (label.empty() || file.empty())
            throw DatasetError("manifest line " + std::to_string(line_no) +
                               ": empty label or path");
        if (file.is_relative())
            file = base / file;
        if (role == "ref") {
            dataset.references.push_back({label, std::move(file)});
        } else if (role == "probe") {
            dataset.probes.push_back({label, std::move(file)});
        } else {
            throw DatasetError("manifest line " + std::to_string(line_no) +
                               ": unknown role '" + role + "'");
        }
    }
    return dataset;
}

void save_manifest(const std::filesystem::path& path, const Dataset& dataset) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw DatasetError("cannot write manifest " + path.string());
    for (const DatasetItem& item : dataset.references)
        out << "ref\t" << item.label << '\t' << item.path.string() << '\n';
    for (const DatasetItem& item : dataset.probes)
        out << "probe\t" << item.label << '\t' << item.path.string() << '\n';
    if (!out)
        throw DatasetError("write failed for manifest " + path.string());
}

int thread_budget(int requested) {
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("FACEKIT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

// Runs fn(i) for i in [0,n) over `threads` workers on contiguous chunks.
// The first exception, if any, is rethrown on the calling thread.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (n == 0)
        return;
    const int workers = std::min<std::size_t>(std::max(threads, 1), n);
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t begin = static_cast<std::size_t>(w) * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end)
            break;
        pool.emplace_back([&, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i)
                    fn(i);
            } catch (...) {
                std::scoped_lock lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool)
        t.join();
    if (failure)
        std::rethrow_exception(failure);
}

struct LoadedItem {
    std::optional<GrayImage> face;
    std::string failure; // empty when the face loaded
};

LoadedItem load_face(const DatasetItem& item, bool pre_cropped) {
    LoadedItem loaded;
    try {
        const RgbImage img = read_image(item.path);
        if (pre_cropped) {
            GrayImage face = rgb_to_gray(img);
            if (face.width != kFaceSize || face.height != kFaceSize)
                face = resize_bilinear(face, kFaceSize, kFaceSize);
            loaded.face = std::move(face);
        } else {
            loaded.face = detect_face(img).face;
        }
    } catch (const Error& e) {
        loaded.failure = e.what();
    }
    return loaded;
}

} // namespace

EvalReport run_experiment(const Dataset& dataset, const ExperimentOptions& options) {
    if (dataset.references.empty())
        throw DatasetError("dataset has no reference entries");
    if (dataset.probes.empty())
        throw DatasetError("dataset has no probe entries");
    for (int level : options.levels)
        coefficient_count(level); // validates the range up front

    const int threads = thread_budget(options.threads);

    std::vector<LoadedItem> ref_items(dataset.references.size());
    parallel_for(ref_items.size(), threads, [&](std::size_t i) {
        ref_items[i] = load_face(dataset.references[i], options.pre_cropped);
    });
    std::vector<LoadedItem> probe_items(dataset.probes.size());
    parallel_for(probe_items.size(), threads, [&](std::size_t i) {
        probe_items[i] = load_face(dataset.probes[i], options.pre_cropped);
    });

    EvalReport report;
    std::vector<std::pair<std::string, GrayImage>> enrollable;
    for (std::size_t i = 0; i < ref_items.size(); ++i) {
        if (ref_items[i].face) {
            enrollable.emplace_back(dataset.references[i].label, *ref_items[i].face);
        } else {
            report.failures.push_back({"ref", dataset.references[i].label,
                                       dataset.references[i].path,
                                       ref_items[i].failure});
        }
    }
    for (std::size_t i = 0; i < probe_items.size(); ++i) {
        if (!probe_items[i].face)
            report.failures.push_back({"probe", dataset.probes[i].label,
                                       dataset.probes[i].path,
                                       probe_items[i].failure});
    }

    const int total = static_cast<int>(dataset.probes.size());
    for (int level : options.levels) {
        const int arms = options.normalized_arm ? 2 : 1;
        for (int arm = 0; arm < arms; ++arm) {
            const bool normalized = arm == 1;
            EvalRow row;
            row.level = level;
            row.normalized = normalized;
            row.coefficient_count = coefficient_count(level);
            row.total = total;

            if (!enrollable.empty()) {
                const Gallery gallery = enroll(enrollable, level, normalized);
                std::atomic<int> correct{0};
                parallel_for(probe_items.size(), threads, [&](std::size_t i) {
                    if (!probe_items[i].face)
                        return;
                    try {
                        GrayImage face = *probe_items[i].face;
                        if (normalized)
                            face = normalize(face, gallery.reference_average);
                        const Template probe = extract_template(
                            face, level, dataset.probes[i].label, normalized);
                        if (identify(probe, gallery).identity == dataset.probes[i].label)
                            correct.fetch_add(1, std::memory_order_relaxed);
                    } catch (const Error&) {
                        // counted as incorrect
                    }
                });
                row.correct = correct.load();
            }
            row.rate = total > 0 ? static_cast<double>(row.correct) / total : 0.0;
            report.rows.push_back(row);
        }
    }
    return report;
}

int best_level(const EvalReport& report) {
    if (report.rows.empty())
        throw EmptyReport("report has no rows");
    const bool has_normalized =
        std::any_of(report.rows.begin(), report.rows.end(),
                    [](const EvalRow& r) { return r.normalized; });
    const EvalRow* best = nullptr;
    for (const EvalRow& row : report.rows) {
        if (row.normalized != has_normalized)
            continue;
        if (!best || row.rate > best->rate ||
            (row.rate == best->rate && row.level < best->level))
            best = &row;
    }
    return best->level;
}

namespace {

std::string format_rate(double rate) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", rate);
    return buf;
}

} // namespace

std::string format_report_table(const EvalReport& report) {
    // One line per level, Table-I shaped: raw column then normalized column.
    std::map<int, std::pair<const EvalRow*, const EvalRow*>> by_level;
    std::vector<int> order;
    for (const EvalRow& row : report.rows) {
        if (!by_level.count(row.level))
            order.push_back(row.level);
        auto& slot = by_level[row.level];
        (row.normalized ? slot.second : slot.first) = &row;
    }

    std::ostringstream out;
    char line[128];
    std::snprintf(line, sizeof line, "%-6s  %-12s  %-10s  %-10s\n", "Level",
                  "Coefficients", "Rate(raw)", "Rate(norm)");
    out << line;
    for (int level : order) {
        const auto& [raw, norm] = by_level[level];
        const EvalRow* any = raw ? raw : norm;
        std::snprintf(line, sizeof line, "%-6d  %-12lld  %-10s  %-10s\n", level,
                      static_cast<long long>(any->coefficient_count),
                      raw ? format_rate(raw->rate).c_str() : "-",
                      norm ? format_rate(norm->rate).c_str() : "-");
        out << line;
    }
    return out.str();
}

std::string format_report_csv(const EvalReport& report) {
    std::ostringstream out;
    out << "level,coefficients,arm,correct,total,rate\n";
    for (const EvalRow& row : report.rows) {
        out << row.level << ',' << row.coefficient_count << ','
            << (row.normalized ? "normalized" : "raw") << ',' << row.correct << ','
            << row.total << ',' << format_rate(row.rate) << '\n';
    }
    return out.str();
}

void write_report_csv(const std::filesystem::path& path, const EvalReport& report) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw DatasetError("cannot write csv " + path.string());
    out << format_report_csv(report);
    if (!out)
        throw DatasetError("write failed for csv " + path.string());
}

} // namespace facekit
