#include "somcheck/harness.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "somcheck/errors.hpp"

namespace somcheck {

using nlohmann::json;

std::string format_pct(double fraction) {
    const long long scaled = std::llround(fraction * 10000.0);
    std::ostringstream ss;
    ss << scaled / 100 << '.' << (scaled % 100) / 10 << (scaled % 100) % 10;
    return ss.str();
}

std::vector<AppVerdict> app_level_verdicts(
    const std::map<std::string, std::vector<std::vector<DefectReport>>>& reports_by_app,
    const std::map<std::string, bool>& truth_by_app) {
    std::vector<AppVerdict> out;
    for (const auto& [app, screens] : reports_by_app) {
        auto t = truth_by_app.find(app);
        if (t == truth_by_app.end())
            throw MissingTruth("no ground truth for app " + app);
        AppVerdict v;
        v.app_id = app;
        v.truth_label = t->second;
        for (const auto& reports : screens)
            for (const auto& r : reports)
                if (r.defect_type != DefectType::Normal) v.predicted_label = true;
        out.push_back(std::move(v));
    }
    return out;
}

Rates fpr_fnr(const std::vector<AppVerdict>& verdicts) {
    long neg = 0, pos = 0, false_pos = 0, false_neg = 0;
    for (const auto& v : verdicts) {
        if (v.truth_label) {
            ++pos;
            if (!v.predicted_label) ++false_neg;
        } else {
            ++neg;
            if (v.predicted_label) ++false_pos;
        }
    }
    Rates r;
    if (neg > 0) r.fpr = static_cast<double>(false_pos) / neg;
    if (pos > 0) r.fnr = static_cast<double>(false_neg) / pos;
    return r;
}

namespace {

const CoarseType kMetricTypes[] = {
    CoarseType::TextOverlap,   CoarseType::TextTruncation,
    CoarseType::WidgetOcclusion, CoarseType::MissingImage,
    CoarseType::NullDisplay,   CoarseType::NavBarOverlap,
    CoarseType::SplitMismatch, CoarseType::FoldableMismatch,
};

}  // namespace

std::vector<TypePRFRow> type_prf(const std::vector<ScreenshotTypes>& screenshots) {
    std::vector<TypePRFRow> rows;
    for (CoarseType t : kMetricTypes) {
        TypePRFRow row;
        row.type = t;
        for (const auto& s : screenshots) {
            const bool p = s.predicted.count(t) > 0;
            const bool g = s.truth.count(t) > 0;
            if (p && g) ++row.tp;
            else if (p) ++row.fp;
            else if (g) ++row.fn;
        }
        row.precision = row.tp + row.fp > 0
                            ? static_cast<double>(row.tp) / (row.tp + row.fp) : 0.0;
        row.recall = row.tp + row.fn > 0
                         ? static_cast<double>(row.tp) / (row.tp + row.fn) : 0.0;
        row.f1 = row.precision + row.recall > 0.0
                     ? 2.0 * row.precision * row.recall / (row.precision + row.recall)
                     : 0.0;
        rows.push_back(row);
    }
    return rows;
}

std::vector<ScenarioRow> scenario_counts(
    const std::vector<std::pair<bool, std::vector<CoarseType>>>& instances_by_screenshot) {
    std::vector<ScenarioRow> rows;
    for (CoarseType t : kMetricTypes) {
        ScenarioRow row;
        row.type = t;
        for (const auto& [split_fold, types] : instances_by_screenshot) {
            for (CoarseType ct : types) {
                if (ct != t) continue;
                ++row.total;
                if (split_fold) ++row.split_fold;
            }
        }
        row.split_share =
            row.total > 0 ? static_cast<double>(row.split_fold) / row.total : 0.0;
        rows.push_back(row);
    }
    return rows;
}

std::vector<std::filesystem::path> find_triplet_dirs(const std::filesystem::path& root) {
    namespace fs = std::filesystem;
    std::vector<fs::path> dirs;
    if (!fs::exists(root)) return dirs;
    for (auto it = fs::recursive_directory_iterator(root);
         it != fs::recursive_directory_iterator(); ++it) {
        if (!it->is_directory()) continue;
        const auto& d = it->path();
        if (fs::exists(d / "screen.png") && fs::exists(d / "hierarchy.json") &&
            fs::exists(d / "context.json"))
            dirs.push_back(d);
    }
    std::sort(dirs.begin(), dirs.end());
    return dirs;
}

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw Error("cannot open " + p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << content;
}

std::string triplet_id(const std::filesystem::path& corpus_dir,
                       const std::filesystem::path& dir) {
    return std::filesystem::relative(dir, corpus_dir).generic_string();
}

std::unique_ptr<ReasonBackend> make_backend(const Config& cfg,
                                            const PipelineOptions& opts) {
    if (opts.backend == BackendKind::Geometric)
        return std::make_unique<GeometricBackend>(cfg.oracle, cfg.filter);
    return std::make_unique<RemoteBackend>(opts.remote);
}

void process_triplet(const std::filesystem::path& dir,
                     const std::filesystem::path& out, const Config& cfg,
                     const PipelineOptions& opts, ReasonBackend& backend) {
    const auto triplet =
        load_triplet(dir / "screen.png", dir / "hierarchy.json", dir / "context.json");
    const auto retained = dedup_widgets(filter_widgets(triplet.widgets, cfg.filter));
    const auto graph =
        build_adjacency(retained, cfg.layout, triplet.context.screen_size);
    const auto ordered = reading_order(graph, retained);
    const auto markset = build_markset(triplet, ordered, retained, cfg.filter);
    const auto mw = marked_widgets(ordered, retained);
    const auto reports = backend.analyze(markset, mw, triplet.context);

    std::filesystem::create_directories(out);
    if (opts.write_som) {
        save_png(markset.marked_image, out / "screen.som.png");
        write_file(out / "mapping.json", mapping_to_json(markset.mapping));
    }
    write_file(out / "report.json", reports_to_json(reports));
}

MetricTable aggregate_metrics(const std::filesystem::path& corpus_dir,
                              const std::filesystem::path& out_dir,
                              const std::vector<std::filesystem::path>& dirs) {
    MetricTable m;
    std::map<std::string, std::vector<std::vector<DefectReport>>> reports_by_app;
    std::map<std::string, bool> truth_by_app;
    std::vector<ScreenshotTypes> shots;
    std::vector<std::pair<bool, std::vector<CoarseType>>> detected;

    for (const auto& dir : dirs) {
        const auto id = triplet_id(corpus_dir, dir);
        const auto report_path = out_dir / id / "report.json";
        if (!std::filesystem::exists(report_path)) continue;  // failed triplet
        const auto reports = reports_from_json(read_file(report_path));
        const auto ctx = parse_context(read_file(dir / "context.json"));

        ScreenshotTypes st;
        st.split_fold = ctx.window_mode != WindowMode::FullScreen;
        std::vector<CoarseType> inst;
        for (const auto& r : reports) {
            if (r.defect_type == DefectType::Normal) continue;
            st.predicted.insert(coarse_type(r.defect_type));
            inst.push_back(coarse_type(r.defect_type));
        }
        bool truth_defective = false;
        const auto truth_path = dir / "truth.json";
        if (std::filesystem::exists(truth_path)) {
            for (const auto& t : truth_from_json(read_file(truth_path))) {
                st.truth.insert(coarse_type(t.type));
                truth_defective = true;
            }
        }
        shots.push_back(std::move(st));
        detected.emplace_back(ctx.window_mode != WindowMode::FullScreen, std::move(inst));
        reports_by_app[ctx.app_id].push_back(reports);
        truth_by_app[ctx.app_id] = truth_by_app[ctx.app_id] || truth_defective;
        ++m.screenshots;
    }

    m.prf = type_prf(shots);
    m.scenarios = scenario_counts(detected);
    if (!reports_by_app.empty())
        m.rates = fpr_fnr(app_level_verdicts(reports_by_app, truth_by_app));
    m.apps = static_cast<long>(reports_by_app.size());
    return m;
}

PipelineResult run_pipeline_impl(const std::filesystem::path& corpus_dir,
                                 const std::filesystem::path& out_dir,
                                 const Config& cfg, const PipelineOptions& opts,
                                 bool parallel) {
    PipelineResult result;
    const auto dirs = find_triplet_dirs(corpus_dir);
    std::filesystem::create_directories(out_dir);
    if (dirs.empty()) {
        const std::string msg = "no triplets found in " + corpus_dir.string();
        result.errors.push_back({"", msg});
        write_file(out_dir / "errors.json",
                   json::array({{{"triplet", ""}, {"error", msg}}}).dump(2));
        result.exit_code = 2;
        return result;
    }

    const int n = static_cast<int>(dirs.size());
    std::vector<std::string> failures(n);

    auto run_one = [&](int i, ReasonBackend& backend) {
        try {
            process_triplet(dirs[i], out_dir / triplet_id(corpus_dir, dirs[i]), cfg,
                            opts, backend);
        } catch (const std::exception& e) {
            failures[i] = e.what();
        }
    };

    if (parallel) {
        const int jobs = opts.jobs > 0 ? opts.jobs : 0;
#pragma omp parallel num_threads(jobs > 0 ? jobs : omp_get_max_threads())
        {
            auto backend = make_backend(cfg, opts);
#pragma omp for schedule(dynamic)
            for (int i = 0; i < n; ++i) run_one(i, *backend);
        }
    } else {
        auto backend = make_backend(cfg, opts);
        for (int i = 0; i < n; ++i) run_one(i, *backend);
    }

    json manifest = json::array();
    for (int i = 0; i < n; ++i) {
        if (failures[i].empty()) {
            ++result.processed;
            continue;
        }
        ++result.failed;
        const auto id = triplet_id(corpus_dir, dirs[i]);
        result.errors.push_back({id, failures[i]});
        manifest.push_back({{"triplet", id}, {"error", failures[i]}});
    }
    write_file(out_dir / "errors.json", manifest.dump(2));

    result.metrics = aggregate_metrics(corpus_dir, out_dir, dirs);
    write_file(out_dir / "metrics.json", metrics_to_json(*result.metrics));
    write_file(out_dir / "metrics.txt", render_metrics_table(*result.metrics));
    result.exit_code = result.failed > 0 ? 2 : 0;
    return result;
}

}  // namespace

PipelineResult run_pipeline(const std::filesystem::path& corpus_dir,
                            const std::filesystem::path& out_dir, const Config& cfg,
                            const PipelineOptions& opts) {
    return run_pipeline_impl(corpus_dir, out_dir, cfg, opts, true);
}

PipelineResult run_pipeline_serial(const std::filesystem::path& corpus_dir,
                                   const std::filesystem::path& out_dir,
                                   const Config& cfg, const PipelineOptions& opts) {
    return run_pipeline_impl(corpus_dir, out_dir, cfg, opts, false);
}

MetricTable evaluate(const std::filesystem::path& corpus_dir,
                     const std::filesystem::path& out_dir) {
    return aggregate_metrics(corpus_dir, out_dir, find_triplet_dirs(corpus_dir));
}

std::string metrics_to_json(const MetricTable& m) {
    json j;
    j["matching"] = "type-presence per screenshot, subtype-insensitive";
    j["apps"] = m.apps;
    j["screenshots"] = m.screenshots;
    j["fpr_pct"] = m.rates.fpr ? json(format_pct(*m.rates.fpr)) : json(nullptr);
    j["fnr_pct"] = m.rates.fnr ? json(format_pct(*m.rates.fnr)) : json(nullptr);
    json prf = json::array();
    for (const auto& r : m.prf) {
        prf.push_back({{"type", to_string(r.type)},
                       {"tp", r.tp},
                       {"fp", r.fp},
                       {"fn", r.fn},
                       {"precision_pct", format_pct(r.precision)},
                       {"recall_pct", format_pct(r.recall)},
                       {"f1_pct", format_pct(r.f1)}});
    }
    j["per_type"] = prf;
    json sc = json::array();
    for (const auto& r : m.scenarios) {
        sc.push_back({{"type", to_string(r.type)},
                      {"total", r.total},
                      {"split_fold", r.split_fold},
                      {"split_share_pct", format_pct(r.split_share)}});
    }
    j["scenarios"] = sc;
    return j.dump(2);
}

std::string render_metrics_table(const MetricTable& m) {
    std::ostringstream out;
    out << "Apps: " << m.apps << "  Screenshots: " << m.screenshots << "\n";
    out << "FPR: " << (m.rates.fpr ? format_pct(*m.rates.fpr) + "%" : "n/a")
        << "  FNR: " << (m.rates.fnr ? format_pct(*m.rates.fnr) + "%" : "n/a")
        << "\n\n";
    out << "Defect type          TP    FP    FN    Prec    Rec     F1\n";
    for (const auto& r : m.prf) {
        char line[128];
        std::snprintf(line, sizeof line, "%-18s %5ld %5ld %5ld  %6s  %6s  %6s\n",
                      to_string(r.type).c_str(), r.tp, r.fp, r.fn,
                      format_pct(r.precision).c_str(), format_pct(r.recall).c_str(),
                      format_pct(r.f1).c_str());
        out << line;
    }
    out << "\nDefect type         Total  Split/Fold  Share\n";
    for (const auto& r : m.scenarios) {
        char line[128];
        std::snprintf(line, sizeof line, "%-18s %6ld  %6ld (%s%%)\n",
                      to_string(r.type).c_str(), r.total, r.split_fold,
                      format_pct(r.split_share).c_str());
        out << line;
    }
    return out.str();
}

}  // namespace somcheck
