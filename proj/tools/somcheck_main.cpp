// somcheck — GUI display-defect detection for multi-window scenarios.
//
// Subcommands:
//   generate   write a seeded synthetic corpus with ground-truth labels
//   ingest     validate one evidence triplet and print a summary
//   filter     print retained widget metadata for one triplet
//   som        write the marked screenshot and mapping table for one triplet
//   analyze    diagnose one triplet and print the defect report
//   run        full pipeline over a corpus directory
//   eval       recompute metrics from existing reports and truth files

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "somcheck/config.hpp"
#include "somcheck/harness.hpp"

using namespace somcheck;

namespace {

Config load_cfg(const std::string& path) {
    return path.empty() ? Config{} : load_config(path);
}

RemoteConfig remote_from_env() {
    RemoteConfig rc;
    if (const char* e = std::getenv("REASON_ENDPOINT")) rc.endpoint = e;
    if (const char* k = std::getenv("REASON_API_KEY")) rc.api_key = k;
    if (const char* m = std::getenv("REASON_MODEL")) rc.model = m;
    return rc;
}

struct TripletArgs {
    std::string dir;
};

EvidenceTriplet load_from_dir(const std::string& dir) {
    const std::filesystem::path d(dir);
    return load_triplet(d / "screen.png", d / "hierarchy.json", d / "context.json");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GUI display-defect detection pipeline"};
    app.require_subcommand(1);

    std::string config_path, out_dir, corpus_dir, triplet_dir, backend_name = "geometric";
    std::uint64_t seed = 7;
    int layouts = 50;
    int jobs = 0;

    auto* gen = app.add_subcommand("generate", "Generate a labelled reflow corpus");
    gen->add_option("--seed", seed, "Corpus seed");
    gen->add_option("--layouts", layouts, "Number of layouts");
    gen->add_option("--out", out_dir, "Output directory")->required();
    gen->add_option("--config", config_path, "Config file");

    auto* ingest = app.add_subcommand("ingest", "Validate one triplet directory");
    ingest->add_option("dir", triplet_dir, "Triplet directory")->required();

    auto* filt = app.add_subcommand("filter", "Print retained widgets for a triplet");
    filt->add_option("dir", triplet_dir, "Triplet directory")->required();
    filt->add_option("--config", config_path, "Config file");

    auto* som = app.add_subcommand("som", "Write marked screenshot + mapping table");
    som->add_option("dir", triplet_dir, "Triplet directory")->required();
    som->add_option("--config", config_path, "Config file");
    som->add_option("--out", out_dir, "Output directory (default: triplet dir)");

    auto* analyze = app.add_subcommand("analyze", "Diagnose one triplet");
    analyze->add_option("dir", triplet_dir, "Triplet directory")->required();
    analyze->add_option("--backend", backend_name, "geometric|remote");
    analyze->add_option("--config", config_path, "Config file");

    auto* run = app.add_subcommand("run", "Full pipeline over a corpus");
    run->add_option("--corpus", corpus_dir, "Corpus directory")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--backend", backend_name, "geometric|remote");
    run->add_option("--config", config_path, "Config file");
    run->add_option("--jobs", jobs, "Parallel workers (0 = all cores)");

    auto* eval = app.add_subcommand("eval", "Metrics from existing reports");
    eval->add_option("--corpus", corpus_dir, "Corpus directory")->required();
    eval->add_option("--out", out_dir, "Report directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const Config cfg = load_cfg(config_path);

        if (gen->parsed()) {
            const std::vector<WindowOp> ops = {
                WindowOp::split(0.3), WindowOp::split(0.5), WindowOp::fold(true),
                WindowOp::drag_up(cfg.reflow.unfolded_size.second / 4),
                WindowOp::drag_down(cfg.reflow.unfolded_size.second / 10)};
            auto records = generate_corpus(seed, layouts, ops, out_dir, cfg.reflow,
                                           cfg.oracle, cfg.filter);
            std::cout << "wrote " << records.size() << " labelled triplets under "
                      << out_dir << "\n";
            return 0;
        }
        if (ingest->parsed()) {
            std::vector<std::string> warnings;
            const std::filesystem::path d(triplet_dir);
            auto t = load_triplet(d / "screen.png", d / "hierarchy.json",
                                  d / "context.json", &warnings);
            std::cout << "ok: " << t.widgets.size() << " widgets, screen "
                      << t.context.screen_size.first << "x"
                      << t.context.screen_size.second << ", mode "
                      << to_string(t.context.window_mode) << "\n";
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
            return 0;
        }
        if (filt->parsed()) {
            auto t = load_from_dir(triplet_dir);
            auto retained = dedup_widgets(filter_widgets(t.widgets, cfg.filter));
            auto graph = build_adjacency(retained, cfg.layout, t.context.screen_size);
            auto ordered = reading_order(graph, retained);
            for (const auto& item : serialize_metadata(ordered, retained).items) {
                std::cout << item.id << "\t" << item.widget_type << "\t"
                          << (item.text ? *item.text : "-") << "\t["
                          << item.bounds.x1 << "," << item.bounds.y1 << ","
                          << item.bounds.x2 << "," << item.bounds.y2 << "]\n";
            }
            return 0;
        }
        if (som->parsed()) {
            auto t = load_from_dir(triplet_dir);
            auto retained = dedup_widgets(filter_widgets(t.widgets, cfg.filter));
            auto graph = build_adjacency(retained, cfg.layout, t.context.screen_size);
            auto ordered = reading_order(graph, retained);
            auto ms = build_markset(t, ordered, retained, cfg.filter);
            const std::filesystem::path out =
                out_dir.empty() ? std::filesystem::path(triplet_dir)
                                : std::filesystem::path(out_dir);
            std::filesystem::create_directories(out);
            save_png(ms.marked_image, out / "screen.som.png");
            std::ofstream(out / "mapping.json") << mapping_to_json(ms.mapping);
            std::cout << "wrote " << (out / "screen.som.png").string() << " ("
                      << ms.mapping.size() << " marks)\n";
            return 0;
        }
        if (analyze->parsed() || run->parsed() || eval->parsed()) {
            PipelineOptions opts;
            opts.backend = backend_name == "remote" ? BackendKind::RemoteModel
                                                    : BackendKind::Geometric;
            opts.remote = remote_from_env();
            opts.jobs = jobs;
            if (opts.backend == BackendKind::RemoteModel && opts.remote.endpoint.empty()) {
                std::cerr << "error: REASON_ENDPOINT not set\n";
                return 1;
            }

            if (analyze->parsed()) {
                auto t = load_from_dir(triplet_dir);
                auto retained = dedup_widgets(filter_widgets(t.widgets, cfg.filter));
                auto graph =
                    build_adjacency(retained, cfg.layout, t.context.screen_size);
                auto ordered = reading_order(graph, retained);
                auto ms = build_markset(t, ordered, retained, cfg.filter);
                auto mw = marked_widgets(ordered, retained);
                std::unique_ptr<ReasonBackend> backend;
                if (opts.backend == BackendKind::Geometric)
                    backend = std::make_unique<GeometricBackend>(cfg.oracle, cfg.filter);
                else
                    backend = std::make_unique<RemoteBackend>(opts.remote);
                std::cout << reports_to_json(backend->analyze(ms, mw, t.context))
                          << "\n";
                return 0;
            }
            if (run->parsed()) {
                auto result = run_pipeline(corpus_dir, out_dir, cfg, opts);
                std::cout << "processed " << result.processed << ", failed "
                          << result.failed << "\n";
                for (const auto& e : result.errors)
                    std::cerr << "error [" << e.triplet_id << "]: " << e.message << "\n";
                if (result.metrics)
                    std::cout << render_metrics_table(*result.metrics);
                return result.exit_code;
            }
            // eval
            auto metrics = evaluate(corpus_dir, out_dir);
            std::cout << render_metrics_table(metrics);
            std::ofstream(std::filesystem::path(out_dir) / "metrics.json")
                << metrics_to_json(metrics);
            std::ofstream(std::filesystem::path(out_dir) / "metrics.txt")
                << render_metrics_table(metrics);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
