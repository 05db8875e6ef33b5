#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "somcheck/errors.hpp"
#include "somcheck/evidence.hpp"

using namespace somcheck;
namespace fs = std::filesystem;

namespace {

std::string node(int id, const std::string& cls, const std::string& text,
                 const std::string& bounds, const std::string& children,
                 bool clickable = false) {
    std::string t = text.empty() ? "null" : "\"" + text + "\"";
    return "{\"temp_id\":" + std::to_string(id) + ",\"class\":\"" + cls +
           "\",\"text\":" + t + ",\"bounds\":" + bounds +
           ",\"clickable\":" + (clickable ? "true" : "false") +
           ",\"resource_id\":null,\"children\":[" + children + "]}";
}

std::string doc(const std::string& nodes) {
    return "{\"views\":[" + nodes + "]}";
}

fs::path temp_dir(const std::string& tag) {
    fs::path d = fs::temp_directory_path() / ("somcheck_ev_" + tag);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

}  // namespace

TEST_CASE("single node maps fields directly") {
    auto r = parse_hierarchy(doc(
        node(0, "TextView", "OK", "[[0,0],[100,40]]", "")));
    REQUIRE(r.widgets.size() == 1);
    const Widget& w = r.widgets[0];
    CHECK(w.widget_type == "TextView");
    CHECK(w.text == "OK");
    CHECK(w.bounds == Bounds{0, 0, 100, 40});
    CHECK_FALSE(w.clickable);
    CHECK(w.visible);
    CHECK_FALSE(w.content_present.has_value());
    CHECK(w.document_order == 0);
}

TEST_CASE("empty views array yields empty widget list") {
    auto r = parse_hierarchy(doc(""));
    CHECK(r.widgets.empty());
    CHECK(r.warnings.empty());
}

TEST_CASE("seven-node three-level tree comes out in depth-first pre-order") {
    // Tree:      0
    //          /   \
    //         1     4
    //        / \   / \
    //       2   3 5   6
    // Pre-order: 0 1 2 3 4 5 6. Nodes are listed out of order in the file
    // to prove the traversal follows children links, not file order.
    std::string nodes =
        node(4, "LinearLayout", "", "[[200,0],[400,200]]", "5,6") + "," +
        node(0, "FrameLayout", "", "[[0,0],[400,400]]", "1,4", true) + "," +
        node(6, "TextView", "f", "[[300,0],[400,100]]", "") + "," +
        node(1, "LinearLayout", "", "[[0,0],[200,200]]", "2,3") + "," +
        node(3, "TextView", "d", "[[100,0],[200,100]]", "") + "," +
        node(2, "TextView", "c", "[[0,0],[100,100]]", "") + "," +
        node(5, "TextView", "e", "[[200,0],[300,100]]", "");
    auto r = parse_hierarchy(doc(nodes));
    REQUIRE(r.widgets.size() == 7);
    const std::vector<int> want_ids = {0, 1, 2, 3, 4, 5, 6};
    for (int i = 0; i < 7; ++i) {
        CHECK(r.widgets[i].id == want_ids[i]);
        CHECK(r.widgets[i].document_order == i);
    }
}

TEST_CASE("node without bounds is dropped with a warning") {
    std::string no_bounds =
        "{\"temp_id\":1,\"class\":\"View\",\"text\":null,\"clickable\":false,"
        "\"resource_id\":null,\"children\":[]}";
    auto r = parse_hierarchy(doc(
        node(0, "TextView", "a", "[[0,0],[10,10]]", "") + "," + no_bounds));
    CHECK(r.widgets.size() == 1);
    CHECK(r.widgets[0].id == 0);
    REQUIRE(r.warnings.size() == 1);
}

TEST_CASE("flipped bounds are normalized with a warning") {
    auto r = parse_hierarchy(doc(
        node(0, "TextView", "a", "[[100,40],[0,0]]", "")));
    REQUIRE(r.widgets.size() == 1);
    CHECK(r.widgets[0].bounds == Bounds{0, 0, 100, 40});
    CHECK(r.warnings.size() == 1);
}

TEST_CASE("duplicate temp_id is rejected") {
    std::string nodes = node(3, "TextView", "a", "[[0,0],[10,10]]", "") + "," +
                        node(3, "TextView", "b", "[[0,20],[10,30]]", "");
    CHECK_THROWS_AS(parse_hierarchy(doc(nodes)), MalformedDocument);
}

TEST_CASE("syntactically broken document is rejected") {
    CHECK_THROWS_AS(parse_hierarchy("{\"views\": [nope"), MalformedDocument);
    CHECK_THROWS_AS(parse_hierarchy("{}"), MalformedDocument);
}

TEST_CASE("dump then reparse reproduces the widget list") {
    std::string nodes =
        node(0, "FrameLayout", "", "[[0,0],[400,400]]", "1,2", true) + "," +
        node(1, "TextView", "  spaced  ", "[[5,5],[100,60]]", "") + "," +
        node(2, "Button", "Go", "[[120,5],[220,60]]", "", true);
    auto first = parse_hierarchy(doc(nodes)).widgets;
    auto second = parse_hierarchy(dump_widgets(first)).widgets;
    CHECK(first == second);
    // Idempotence: a second dump/parse cycle changes nothing further.
    auto third = parse_hierarchy(dump_widgets(second)).widgets;
    CHECK(second == third);
}

TEST_CASE("repeated parses of the same bytes agree") {
    std::string raw = doc(node(0, "TextView", "x", "[[0,0],[50,20]]", "1") +
                          "," + node(1, "View", "", "[[0,30],[50,50]]", ""));
    auto a = parse_hierarchy(raw).widgets;
    auto b = parse_hierarchy(raw).widgets;
    CHECK(a == b);
}

TEST_CASE("context serialization round-trips") {
    RuntimeContext ctx;
    ctx.app_id = "com.example.app";
    ctx.activity = "MainActivity";
    ctx.window_mode = WindowMode::SplitScreen;
    ctx.window_bounds = {0, 0, 1080, 960};
    ctx.screen_size = {1080, 1920};
    ctx.system_inset_bottom = 48;
    ctx.split_ratio = 0.5;
    ctx.timestamp = "2026-01-01T00:00:00Z";
    CHECK(parse_context(serialize_context(ctx)) == ctx);
}

TEST_CASE("window mode names round-trip") {
    for (WindowMode m : {WindowMode::FullScreen, WindowMode::SplitScreen,
                         WindowMode::Folded, WindowMode::Unfolded,
                         WindowMode::Freeform})
        CHECK(window_mode_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(window_mode_from_string("Sideways"), ContextInvalid);
}

TEST_CASE("split ratio outside split mode is invalid") {
    RuntimeContext ctx;
    ctx.app_id = "a";
    ctx.activity = "b";
    ctx.window_mode = WindowMode::FullScreen;
    ctx.window_bounds = {0, 0, 100, 100};
    ctx.screen_size = {100, 100};
    ctx.split_ratio = 0.5;
    CHECK_THROWS_AS(validate_context(ctx), ContextInvalid);

    ctx.split_ratio.reset();
    CHECK_NOTHROW(validate_context(ctx));

    // Split mode without a ratio is equally inconsistent.
    ctx.window_mode = WindowMode::SplitScreen;
    CHECK_THROWS_AS(validate_context(ctx), ContextInvalid);
}

TEST_CASE("window bounds must sit inside the screen") {
    RuntimeContext ctx;
    ctx.app_id = "a";
    ctx.activity = "b";
    ctx.window_bounds = {0, 0, 200, 100};
    ctx.screen_size = {100, 100};
    CHECK_THROWS_AS(validate_context(ctx), ContextInvalid);
}

TEST_CASE("load_triplet accepts matching dimensions and rejects mismatches") {
    fs::path d = temp_dir("load");
    Image img(120, 80);
    save_png(img, d / "screen.png");
    std::ofstream(d / "hierarchy.json")
        << doc(node(0, "TextView", "hi", "[[0,0],[50,20]]", ""));

    RuntimeContext ctx;
    ctx.app_id = "app";
    ctx.activity = "act";
    ctx.window_bounds = {0, 0, 120, 80};
    ctx.screen_size = {120, 80};
    ctx.timestamp = "2026-01-01T00:00:00Z";
    std::ofstream(d / "context.json") << serialize_context(ctx);

    auto t = load_triplet(d / "screen.png", d / "hierarchy.json",
                          d / "context.json");
    CHECK(t.image.width() == 120);
    CHECK(t.widgets.size() == 1);
    CHECK(t.context == ctx);

    // Same files with a lying screen_size must be rejected.
    ctx.screen_size = {64, 64};
    ctx.window_bounds = {0, 0, 64, 64};
    std::ofstream(d / "context.json", std::ios::trunc) << serialize_context(ctx);
    CHECK_THROWS_AS(load_triplet(d / "screen.png", d / "hierarchy.json",
                                 d / "context.json"),
                    DimensionMismatch);
    fs::remove_all(d);
}
