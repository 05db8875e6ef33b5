#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "somcheck/config.hpp"
#include "somcheck/reason.hpp"
#include "somcheck/reflow.hpp"

namespace somcheck {

struct AppVerdict {
    std::string app_id;
    bool truth_label = false;      // T(a)
    bool predicted_label = false;  // P(a): any non-normal report
};

struct Rates {
    std::optional<double> fpr;  // fractions in [0,1]; absent when undefined
    std::optional<double> fnr;
};

struct TypePRFRow {
    CoarseType type = CoarseType::Normal;
    long tp = 0, fp = 0, fn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct ScenarioRow {
    CoarseType type = CoarseType::Normal;
    long total = 0;
    long split_fold = 0;
    double split_share = 0.0;  // fraction of total
};

struct MetricTable {
    std::vector<TypePRFRow> prf;
    Rates rates;
    std::vector<ScenarioRow> scenarios;
    long apps = 0;
    long screenshots = 0;
};

/// Fraction rendered as a percentage with 2 decimals, half-up.
std::string format_pct(double fraction);

std::vector<AppVerdict> app_level_verdicts(
    const std::map<std::string, std::vector<std::vector<DefectReport>>>& reports_by_app,
    const std::map<std::string, bool>& truth_by_app);

Rates fpr_fnr(const std::vector<AppVerdict>& verdicts);

/// Screenshot-granularity, type-presence matching: a TP for a coarse type is a
/// screenshot where both the report set and the truth set contain it.
struct ScreenshotTypes {
    std::set<CoarseType> predicted;
    std::set<CoarseType> truth;
    bool split_fold = false;  // anything other than FullScreen
};

std::vector<TypePRFRow> type_prf(const std::vector<ScreenshotTypes>& screenshots);

/// Per-instance detected counts split by scenario, one row per coarse type.
std::vector<ScenarioRow> scenario_counts(
    const std::vector<std::pair<bool, std::vector<CoarseType>>>& instances_by_screenshot);

struct TripletError {
    std::string triplet_id;  // "<layout>/<state>"
    std::string message;
};

struct PipelineResult {
    int processed = 0;
    int failed = 0;
    std::vector<TripletError> errors;
    int exit_code = 0;  // 0 success, 2 partial failure
    std::optional<MetricTable> metrics;
};

struct PipelineOptions {
    BackendKind backend = BackendKind::Geometric;
    RemoteConfig remote;  // used when backend == RemoteModel
    int jobs = 0;         // 0: library default
    bool write_som = true;
};

/// Walks `corpus_dir` for triplet directories, runs parse -> filter -> order ->
/// markset -> analyze per triplet, writes per-triplet artifacts under
/// `out_dir`, then aggregates metrics. Faults are isolated per triplet.
PipelineResult run_pipeline(const std::filesystem::path& corpus_dir,
                            const std::filesystem::path& out_dir,
                            const Config& cfg, const PipelineOptions& opts);

/// Single-threaded reference loop for the OpenMP pipeline; identical output.
PipelineResult run_pipeline_serial(const std::filesystem::path& corpus_dir,
                                   const std::filesystem::path& out_dir,
                                   const Config& cfg, const PipelineOptions& opts);

/// Recomputes metrics from report and truth files on disk.
MetricTable evaluate(const std::filesystem::path& corpus_dir,
                     const std::filesystem::path& out_dir);

std::string metrics_to_json(const MetricTable& m);
std::string render_metrics_table(const MetricTable& m);

/// Triplet directories (containing screen.png, hierarchy.json, context.json)
/// under root, sorted by path for determinism.
std::vector<std::filesystem::path> find_triplet_dirs(const std::filesystem::path& root);

}  // namespace somcheck
