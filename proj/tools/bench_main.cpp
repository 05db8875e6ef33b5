// Benchmark comparing the serial reference paths against the OpenMP kernels:
// adjacency-graph construction and the per-triplet pipeline loop.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "somcheck/config.hpp"
#include "somcheck/harness.hpp"

using namespace somcheck;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Widget> random_widgets(int n, std::mt19937_64& rng) {
    std::vector<Widget> out;
    for (int i = 0; i < n; ++i) {
        Widget w;
        w.id = i;
        w.document_order = i;
        w.widget_type = "TextView";
        w.text = "w" + std::to_string(i);
        const int x = static_cast<int>(rng() % 1700);
        const int y = static_cast<int>(rng() % 2000);
        w.bounds = {x, y, x + 40 + static_cast<int>(rng() % 200),
                    y + 30 + static_cast<int>(rng() % 90)};
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());

    // Kernel 1: adjacency construction on large widget sets.
    std::mt19937_64 rng(42);
    for (int n : {500, 2000, 5000}) {
        const auto widgets = random_widgets(n, rng);
        const LayoutConfig lcfg;
        auto t0 = Clock::now();
        const auto serial = build_adjacency_serial(widgets, lcfg, {1812, 2092});
        const double ts = seconds_since(t0);
        t0 = Clock::now();
        const auto parallel = build_adjacency(widgets, lcfg, {1812, 2092});
        const double tp = seconds_since(t0);
        std::printf("adjacency n=%-5d serial %.3fs  parallel %.3fs  speedup %.2fx  %s\n",
                    n, ts, tp, ts / tp, serial == parallel ? "match" : "MISMATCH");
    }

    // Kernel 2: full pipeline over a generated corpus.
    const auto tmp = std::filesystem::temp_directory_path() / "somcheck_bench";
    std::filesystem::remove_all(tmp);
    const Config cfg;
    const std::vector<WindowOp> ops = {WindowOp::split(0.5), WindowOp::fold(true)};
    generate_corpus(11, 20, ops, tmp / "corpus", cfg.reflow, cfg.oracle, cfg.filter);

    PipelineOptions opts;
    auto t0 = Clock::now();
    run_pipeline_serial(tmp / "corpus", tmp / "out_serial", cfg, opts);
    const double ts = seconds_since(t0);
    t0 = Clock::now();
    run_pipeline(tmp / "corpus", tmp / "out_parallel", cfg, opts);
    const double tp = seconds_since(t0);
    std::printf("\npipeline 60 triplets: serial %.2fs  parallel %.2fs  speedup %.2fx\n",
                ts, tp, ts / tp);
    std::filesystem::remove_all(tmp);
    return 0;
}
