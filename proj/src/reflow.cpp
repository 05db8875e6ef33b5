#include "somcheck/reflow.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>

#include <json.hpp>

#include "somcheck/errors.hpp"

namespace somcheck {

using nlohmann::json;

std::string to_string(Anchor a) {
    switch (a) {
        case Anchor::TopLeft: return "TopLeft";
        case Anchor::TopRight: return "TopRight";
        case Anchor::BottomLeft: return "BottomLeft";
        case Anchor::BottomRight: return "BottomRight";
        case Anchor::Center: return "Center";
        case Anchor::FillWidth: return "FillWidth";
    }
    return "TopLeft";
}

Anchor anchor_from_string(const std::string& s) {
    if (s == "TopLeft") return Anchor::TopLeft;
    if (s == "TopRight") return Anchor::TopRight;
    if (s == "BottomLeft") return Anchor::BottomLeft;
    if (s == "BottomRight") return Anchor::BottomRight;
    if (s == "Center") return Anchor::Center;
    if (s == "FillWidth") return Anchor::FillWidth;
    throw MalformedDocument("unknown anchor: " + s);
}

std::string layout_spec_to_json(const LayoutSpec& spec) {
    json nodes = json::array();
    for (const auto& n : spec.widgets) {
        json o;
        o["name"] = n.name;
        o["widget_type"] = n.widget_type;
        o["text"] = n.text ? json(*n.text) : json(nullptr);
        o["intrinsic_size"] = {n.intrinsic_size.first, n.intrinsic_size.second};
        o["anchor"] = to_string(n.anchor);
        o["margin"] = n.margin;
        if (n.image_content) o["image_content"] = *n.image_content;
        nodes.push_back(std::move(o));
    }
    json j;
    j["widgets"] = nodes;
    j["base_window"] = {spec.base_window.first, spec.base_window.second};
    return j.dump(2);
}

LayoutSpec layout_spec_from_json(const std::string& raw) {
    json j;
    try {
        j = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw MalformedDocument(std::string("layout spec parse error: ") + e.what());
    }
    LayoutSpec spec;
    spec.base_window = {j.at("base_window").at(0), j.at("base_window").at(1)};
    for (const auto& o : j.at("widgets")) {
        LayoutNode n;
        n.name = o.at("name").get<std::string>();
        n.widget_type = o.at("widget_type").get<std::string>();
        if (!o.at("text").is_null()) n.text = o.at("text").get<std::string>();
        n.intrinsic_size = {o.at("intrinsic_size").at(0), o.at("intrinsic_size").at(1)};
        n.anchor = anchor_from_string(o.at("anchor").get<std::string>());
        n.margin = o.at("margin").get<int>();
        if (o.contains("image_content") && !o["image_content"].is_null())
            n.image_content = o["image_content"].get<bool>();
        spec.widgets.push_back(std::move(n));
    }
    return spec;
}

std::string state_id(const WindowOp& op) {
    switch (op.kind) {
        case WindowOp::Kind::SplitTest:
            return "split" + std::to_string(static_cast<int>(std::lround(op.ratio * 100)));
        case WindowOp::Kind::FoldTest:
            return op.folded ? "folded" : "unfolded";
        case WindowOp::Kind::DragUp:
            return "dragup" + std::to_string(op.delta);
        case WindowOp::Kind::DragDown:
            return "dragdown" + std::to_string(op.delta);
    }
    return "op";
}

namespace {

bool interactive_type(const std::string& t) {
    static const FilterConfig defaults;
    return defaults.interactive_types.count(t) > 0;
}

}  // namespace

std::vector<Widget> reflow(const LayoutSpec& spec, const Bounds& window) {
    if (window.width() <= 0 || window.height() <= 0)
        throw DegenerateWindow("window must have positive extent");

    std::vector<Widget> out;
    out.reserve(spec.widgets.size());
    int idx = 0;
    for (const auto& n : spec.widgets) {
        const int w = n.intrinsic_size.first;
        const int h = n.intrinsic_size.second;
        const int m = n.margin;
        Bounds b;
        switch (n.anchor) {
            case Anchor::TopLeft:
                b = {window.x1 + m, window.y1 + m, window.x1 + m + w, window.y1 + m + h};
                break;
            case Anchor::TopRight:
                b = {window.x2 - m - w, window.y1 + m, window.x2 - m, window.y1 + m + h};
                break;
            case Anchor::BottomLeft:
                b = {window.x1 + m, window.y2 - m - h, window.x1 + m + w, window.y2 - m};
                break;
            case Anchor::BottomRight:
                b = {window.x2 - m - w, window.y2 - m - h, window.x2 - m, window.y2 - m};
                break;
            case Anchor::Center: {
                const int cx = (window.x1 + window.x2) / 2;
                const int cy = (window.y1 + window.y2) / 2;
                b = {cx - w / 2, cy - h / 2, cx - w / 2 + w, cy - h / 2 + h};
                break;
            }
            case Anchor::FillWidth: {
                // Stretches to the window but never below the intrinsic width.
                const int x1 = window.x1 + m;
                const int x2 = std::max(window.x2 - m, x1 + w);
                b = {x1, window.y1 + m, x2, window.y1 + m + h};
                break;
            }
        }
        Widget widget;
        widget.id = idx;
        widget.widget_type = n.widget_type;
        widget.text = n.text;
        widget.bounds = b;
        widget.clickable = interactive_type(n.widget_type);
        widget.resource_id = "app:id/" + n.name;
        widget.visible = true;
        widget.content_present = n.image_content;
        widget.document_order = idx;
        out.push_back(std::move(widget));
        ++idx;
    }
    return out;
}

RuntimeContext apply_window_op(const RuntimeContext& ctx, const WindowOp& op,
                               const ReflowConfig& cfg) {
    RuntimeContext out = ctx;
    switch (op.kind) {
        case WindowOp::Kind::SplitTest: {
            if (op.ratio <= 0.0 || op.ratio >= 1.0)
                throw InvalidOp("split ratio must lie in (0,1)");
            const int h = static_cast<int>(std::lround(op.ratio * ctx.screen_size.second));
            out.window_bounds = {0, 0, ctx.screen_size.first, h};
            out.window_mode = WindowMode::SplitScreen;
            out.split_ratio = op.ratio;
            break;
        }
        case WindowOp::Kind::FoldTest: {
            out.screen_size = op.folded ? cfg.folded_size : cfg.unfolded_size;
            out.window_mode = op.folded ? WindowMode::Folded : WindowMode::Unfolded;
            out.window_bounds = {0, 0, out.screen_size.first, out.screen_size.second};
            out.split_ratio.reset();
            break;
        }
        case WindowOp::Kind::DragUp:
        case WindowOp::Kind::DragDown: {
            if (op.delta <= 0) throw InvalidOp("drag delta must be positive");
            const int dir = op.kind == WindowOp::Kind::DragUp ? -1 : 1;
            int y2 = ctx.window_bounds.y2 + dir * op.delta;
            y2 = std::min(y2, ctx.screen_size.second);
            const int min_h =
                static_cast<int>(std::lround(0.10 * ctx.screen_size.second));
            if (y2 - ctx.window_bounds.y1 < min_h)
                throw InvalidOp("drag would shrink the window below 10% screen height");
            out.window_bounds.y2 = y2;
            out.window_mode = WindowMode::Freeform;
            out.split_ratio.reset();
            break;
        }
    }
    return out;
}

std::vector<TruthEntry> ground_truth(const LayoutSpec& spec,
                                     const std::vector<Widget>& widgets,
                                     const RuntimeContext& ctx,
                                     const OracleConfig& ocfg,
                                     const FilterConfig& fcfg) {
    std::map<int, std::string> names;
    for (std::size_t i = 0; i < spec.widgets.size() && i < widgets.size(); ++i)
        names[widgets[i].id] = spec.widgets[i].name;

    const auto retained = dedup_widgets(filter_widgets(widgets, fcfg));
    std::vector<MarkedWidget> mw;
    mw.reserve(retained.size());
    int k = 1;
    for (const auto& w : retained) mw.push_back({k++, w});

    std::map<int, std::string> by_marker;
    for (const auto& m : mw) by_marker[m.marker] = names.at(m.widget.id);

    std::vector<TruthEntry> truth;
    for (const auto& r : analyze_geometric(mw, ctx, ocfg, fcfg)) {
        if (r.defect_type == DefectType::Normal) continue;
        TruthEntry e;
        e.type = r.defect_type;
        for (int marker : r.location) e.names.insert(by_marker.at(marker));
        truth.push_back(std::move(e));
    }
    std::sort(truth.begin(), truth.end(), [](const TruthEntry& a, const TruthEntry& b) {
        if (a.type != b.type) return a.type < b.type;
        return a.names < b.names;
    });
    return truth;
}

Image render_synthetic(const std::vector<Widget>& widgets, const RuntimeContext& ctx,
                       const FilterConfig& fcfg) {
    Image img(ctx.screen_size.first, ctx.screen_size.second, {40, 40, 48});
    img.fill_rect(ctx.window_bounds, {245, 245, 245});
    std::vector<const Widget*> order;
    for (const auto& w : widgets) order.push_back(&w);
    std::sort(order.begin(), order.end(), [](const Widget* a, const Widget* b) {
        return a->document_order < b->document_order;
    });
    for (const Widget* w : order) {
        img.fill_rect(w->bounds, category_color(categorize(*w, fcfg)));
        if (has_text(*w)) img.hatch_rect(w->bounds, {255, 255, 255}, 7);
    }
    return img;
}

std::string truth_to_json(const std::vector<TruthEntry>& truth) {
    json arr = json::array();
    for (const auto& e : truth) {
        json o;
        o["type"] = to_string(e.type);
        o["names"] = std::vector<std::string>(e.names.begin(), e.names.end());
        arr.push_back(std::move(o));
    }
    return arr.dump(2);
}

std::vector<TruthEntry> truth_from_json(const std::string& raw) {
    json arr;
    try {
        arr = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw MalformedDocument(std::string("truth parse error: ") + e.what());
    }
    std::vector<TruthEntry> out;
    for (const auto& o : arr) {
        TruthEntry e;
        e.type = defect_type_from_string(o.at("type").get<std::string>());
        for (const auto& n : o.at("names")) e.names.insert(n.get<std::string>());
        out.push_back(std::move(e));
    }
    return out;
}

namespace {

// Bounded draws from the raw engine; std::uniform_int_distribution is not
// bit-reproducible across standard libraries.
int rnd(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

bool chance(std::mt19937_64& rng, int one_in) { return rng() % one_in == 0; }

LayoutSpec random_layout(std::mt19937_64& rng, int layout_index,
                         const ReflowConfig& rcfg) {
    const int W = rcfg.unfolded_size.first;
    const int H = rcfg.unfolded_size.second;
    LayoutSpec spec;
    spec.base_window = {W, H};

    if (chance(rng, 12)) {
        // Sparse screen: a lone header, a null-display candidate everywhere.
        spec.widgets.push_back({"header", "TextView",
                                "Screen " + std::to_string(layout_index),
                                {rnd(rng, W / 3, W / 2), rnd(rng, H / 20, H / 14)},
                                Anchor::TopLeft, rnd(rng, 12, 28), std::nullopt});
        return spec;
    }

    // Wide header; its intrinsic width exceeds the folded screen, so fold
    // tests clip it at the right edge.
    spec.widgets.push_back({"header", "TextView",
                            "Title " + std::to_string(layout_index),
                            {rnd(rng, W * 62 / 100, W * 92 / 100),
                             rnd(rng, H * 4 / 100, H * 55 / 1000)},
                            Anchor::FillWidth, rnd(rng, 12, 28), std::nullopt});

    // Image block in the top-right corner; clear of everything in every
    // state, so it only ever contributes missing-image labels.
    spec.widgets.push_back({"hero", "ImageButton", std::nullopt,
                            {rnd(rng, W * 15 / 100, W / 4),
                             rnd(rng, H / 10, H * 15 / 100)},
                            Anchor::TopRight, rnd(rng, H * 8 / 100, H * 12 / 100),
                            chance(rng, 8) ? std::optional<bool>(false)
                                           : std::optional<bool>(true)});

    // Content staircase. Top rows survive the full window but fall outside
    // split windows (bottom truncation) or past the folded width (side
    // truncation for the deep row).
    spec.widgets.push_back({"row0", chance(rng, 3) ? "Button" : "TextView",
                            "Row 0",
                            {rnd(rng, W * 15 / 100, W / 4),
                             rnd(rng, H / 20, H * 7 / 100)},
                            Anchor::TopLeft, H * 26 / 100, std::nullopt});
    spec.widgets.push_back({"content", "TextView",
                            "Content " + std::to_string(layout_index),
                            {rnd(rng, W / 4, W * 45 / 100),
                             rnd(rng, H * 6 / 100, H * 9 / 100)},
                            Anchor::TopLeft, rnd(rng, H * 34 / 100, H * 38 / 100),
                            std::nullopt});
    if (chance(rng, 2))
        spec.widgets.push_back({"row2", chance(rng, 3) ? "Button" : "TextView",
                                "Row 2",
                                {rnd(rng, W * 15 / 100, W / 4),
                                 rnd(rng, H / 20, H * 7 / 100)},
                                Anchor::TopLeft, H * 58 / 100, std::nullopt});

    // Bottom bar. Anchored to the window bottom, it rides up into the
    // content band when the window shrinks; a text bar collides as text
    // overlap, an image bar as occlusion.
    const bool text_toolbar = chance(rng, 2);
    spec.widgets.push_back({"toolbar", text_toolbar ? "Button" : "ImageButton",
                            text_toolbar ? std::optional<std::string>("Done")
                                         : std::nullopt,
                            {rnd(rng, W * 35 / 100, W * 7 / 10),
                             rnd(rng, H * 6 / 100, H * 9 / 100)},
                            Anchor::BottomLeft, rnd(rng, H / 100, H * 3 / 100),
                            std::nullopt});
    spec.widgets.push_back({"badge", "ImageButton", std::nullopt,
                            {rnd(rng, W * 12 / 100, W / 5),
                             rnd(rng, H / 20, H * 9 / 100)},
                            Anchor::BottomRight, rnd(rng, H / 100, H * 4 / 100),
                            std::nullopt});

    if (chance(rng, 6)) {
        // Full-screen defect: two labels stamped onto the same spot.
        const int m = rnd(rng, H / 10, H * 13 / 100);
        const int w = rnd(rng, W / 4, W / 3);
        const int h = rnd(rng, H * 4 / 100, H * 6 / 100);
        spec.widgets.push_back({"fs_a", "TextView", "Alpha", {w, h},
                                Anchor::TopLeft, m, std::nullopt});
        spec.widgets.push_back({"fs_b", "TextView", "Beta",
                                {w - rnd(rng, 0, w / 5), h},
                                Anchor::TopLeft, m + rnd(rng, 0, h / 4),
                                std::nullopt});
    }
    return spec;
}

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error("cannot write " + p.string());
    f << content;
}

std::string layout_id(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "app%03d", index);
    return buf;
}

}  // namespace

std::vector<CorpusRecord> generate_corpus(std::uint64_t seed, int n_layouts,
                                          const std::vector<WindowOp>& ops,
                                          const std::filesystem::path& out_dir,
                                          const ReflowConfig& rcfg,
                                          const OracleConfig& ocfg,
                                          const FilterConfig& fcfg) {
    if (n_layouts <= 0) throw Error("n_layouts must be positive");
    std::vector<CorpusRecord> records;
    std::mt19937_64 rng(seed);

    for (int li = 0; li < n_layouts; ++li) {
        const LayoutSpec spec = random_layout(rng, li, rcfg);
        const std::string lid = layout_id(li);
        const auto layout_dir = out_dir / lid;
        std::filesystem::create_directories(layout_dir);
        write_file(layout_dir / "layout.json", layout_spec_to_json(spec));

        RuntimeContext base;
        base.app_id = lid;
        base.activity = "MainActivity";
        base.window_mode = WindowMode::FullScreen;
        base.screen_size = spec.base_window;
        base.window_bounds = {0, 0, spec.base_window.first, spec.base_window.second};
        base.system_inset_bottom = 0;
        base.timestamp = "2026-01-01T00:00:00Z";

        auto emit = [&](const RuntimeContext& ctx, const std::string& sid) {
            const auto widgets = reflow(spec, ctx.window_bounds);
            const auto truth = ground_truth(spec, widgets, ctx, ocfg, fcfg);
            const auto dir = layout_dir / sid;
            std::filesystem::create_directories(dir);
            save_png(render_synthetic(widgets, ctx, fcfg), dir / "screen.png");
            write_file(dir / "hierarchy.json", dump_widgets(widgets));
            write_file(dir / "context.json", serialize_context(ctx));
            write_file(dir / "truth.json", truth_to_json(truth));
            records.push_back({lid, sid, dir, truth, ctx.window_mode});
        };

        emit(base, "full");
        for (const auto& op : ops) emit(apply_window_op(base, op, rcfg), state_id(op));
    }
    return records;
}

}  // namespace somcheck
