#include <doctest.h>

#include <random>
#include <set>

#include "somcheck/errors.hpp"
#include "somcheck/som.hpp"

using namespace somcheck;

namespace {

Widget box(int id, Bounds b, const char* type = "Button", bool click = true) {
    Widget w;
    w.id = id;
    w.document_order = id;
    w.widget_type = type;
    w.bounds = b;
    w.clickable = click;
    if (std::string(type) == "TextView") w.text = "t" + std::to_string(id);
    return w;
}

std::vector<Widget> random_fixture(std::mt19937_64& rng, int n, int W, int H) {
    static const char* types[] = {"Button", "TextView", "ImageView", "View"};
    std::vector<Widget> out;
    for (int i = 0; i < n; ++i) {
        int x = int(rng() % std::uint64_t(W - 30));
        int y = int(rng() % std::uint64_t(H - 30));
        auto w = box(i, {x, y, x + 20 + int(rng() % 150),
                         y + 20 + int(rng() % 100)},
                     types[rng() % 4], rng() % 2 == 0);
        out.push_back(w);
    }
    return out;
}

OrderedWidgets identity_order(const std::vector<Widget>& ws) {
    OrderedWidgets o;
    for (const auto& w : ws) o.sequence.push_back(w.id);
    return o;
}

}  // namespace

TEST_CASE("markers are assigned 1..m in reading order") {
    auto w7 = box(7, {50, 50, 150, 100});
    auto w2 = box(2, {200, 50, 300, 100});
    auto w9 = box(9, {350, 50, 450, 100});
    OrderedWidgets pi{{7, 2, 9}};
    auto marks = assign_marks(pi, {w2, w7, w9}, {1080, 1920});
    REQUIRE(marks.size() == 3);
    CHECK(marks[0].marker_id == 1);
    CHECK(marks[0].widget_id == 7);
    CHECK(marks[1].marker_id == 2);
    CHECK(marks[1].widget_id == 2);
    CHECK(marks[2].marker_id == 3);
    CHECK(marks[2].widget_id == 9);
    CHECK(assign_marks({}, {}, {1080, 1920}).empty());
}

TEST_CASE("label anchor stays on canvas for corner widgets") {
    auto w = box(0, {0, 0, 60, 40});
    auto marks = assign_marks(identity_order({w}), {w}, {200, 200});
    REQUIRE(marks.size() == 1);
    CHECK(marks[0].label_anchor.first >= 0);
    CHECK(marks[0].label_anchor.second >= 0);
    CHECK(marks[0].label_anchor.first < 200);
    CHECK(marks[0].label_anchor.second < 200);
}

TEST_CASE("category assignment and colors") {
    FilterConfig cfg;
    CHECK(categorize(box(0, {0, 0, 9, 9}, "Button", false), cfg) ==
          WidgetCategory::Interactive);
    CHECK(categorize(box(0, {0, 0, 9, 9}, "View", true), cfg) ==
          WidgetCategory::Interactive);
    CHECK(categorize(box(0, {0, 0, 9, 9}, "TextView", false), cfg) ==
          WidgetCategory::Text);
    CHECK(categorize(box(0, {0, 0, 9, 9}, "ImageView", false), cfg) ==
          WidgetCategory::ImageLike);
    CHECK(categorize(box(0, {0, 0, 9, 9}, "View", false), cfg) ==
          WidgetCategory::Other);
    std::set<std::string> seen;
    for (auto c : {WidgetCategory::Interactive, WidgetCategory::Text,
                   WidgetCategory::ImageLike, WidgetCategory::Other}) {
        Color col = category_color(c);
        seen.insert(std::to_string(col.r) + "," + std::to_string(col.g) + "," +
                    std::to_string(col.b));
    }
    CHECK(seen.size() == 4);  // four distinct category colors
}

TEST_CASE("zero marks leave the image untouched") {
    Image img(100, 80, {30, 30, 30});
    FilterConfig cfg;
    auto out = render_overlay(img, {}, {}, cfg);
    CHECK(out == img);
}

TEST_CASE("tiny canvases are rejected") {
    FilterConfig cfg;
    auto w = box(0, {0, 0, 5, 5});
    auto marks = assign_marks(identity_order({w}), {w}, {4, 4});
    CHECK_THROWS_AS(render_overlay(Image(4, 4), marks, {w}, cfg), ImageTooSmall);
}

TEST_CASE("overlay touches only strokes and label boxes") {
    FilterConfig cfg;
    Image img(400, 300, {10, 20, 30});
    auto w = box(0, {100, 80, 260, 200});
    auto marks = assign_marks(identity_order({w}), {w}, {400, 300});
    auto out = render_overlay(img, marks, {w}, cfg);

    // A pixel well inside the box interior and one well outside must both
    // keep their original color; the stroke itself must change.
    CHECK(out.get(180, 140) == Color{10, 20, 30});
    CHECK(out.get(350, 250) == Color{10, 20, 30});
    CHECK(out.get(100, 140) != Color{10, 20, 30});
}

TEST_CASE("re-rendering is byte-identical") {
    FilterConfig cfg;
    std::mt19937_64 rng(2024);
    auto ws = random_fixture(rng, 12, 640, 480);
    Image img(640, 480, {80, 80, 90});
    auto marks = assign_marks(identity_order(ws), ws, {640, 480});
    auto a = render_overlay(img, marks, ws, cfg);
    auto b = render_overlay(img, marks, ws, cfg);
    CHECK(encode_png(a) == encode_png(b));
}

TEST_CASE("markset carries the five mapping attributes") {
    FilterConfig cfg;
    auto a = box(0, {10, 10, 110, 60}, "TextView", false);
    auto b = box(1, {10, 80, 110, 130});
    EvidenceTriplet t;
    t.image = Image(300, 200);
    t.widgets = {a, b};
    t.context.screen_size = {300, 200};
    t.context.window_bounds = {0, 0, 300, 200};
    auto ms = build_markset(t, identity_order({a, b}), {a, b}, cfg);
    REQUIRE(ms.mapping.size() == 2);
    CHECK(ms.mapping[0].marker == 1);
    CHECK(ms.mapping[0].widget_type == "TextView");
    CHECK(ms.mapping[0].text == a.text);
    CHECK(ms.mapping[0].bounds == a.bounds);
    CHECK(ms.mapping[0].clickable == a.clickable);
    CHECK(ms.marked_image.width() == ms.raw_image.width());
    CHECK(ms.marked_image.height() == ms.raw_image.height());
}

TEST_CASE("properties over 100 random fixtures") {
    FilterConfig cfg;
    std::mt19937_64 rng(555);
    for (int iter = 0; iter < 100; ++iter) {
        int n = int(rng() % 20);
        auto ws = random_fixture(rng, n, 800, 600);
        auto pi = identity_order(ws);
        auto marks = assign_marks(pi, ws, {800, 600});

        // Bijection: markers 1..n, widget ids distinct and complete.
        REQUIRE(marks.size() == ws.size());
        std::set<int> markers, widgets;
        for (const auto& m : marks) {
            markers.insert(m.marker_id);
            widgets.insert(m.widget_id);
        }
        CHECK(markers.size() == ws.size());
        CHECK(widgets.size() == ws.size());
        if (!marks.empty()) {
            CHECK(*markers.begin() == 1);
            CHECK(*markers.rbegin() == int(ws.size()));
        }

        // Conservatism: count changed pixels, then verify every changed
        // pixel lies inside an inflated widget box or a label box region.
        Image img(800, 600, {5, 5, 5});
        auto out = render_overlay(img, marks, ws, cfg);
        for (int y = 0; y < 600; y += 7)
            for (int x = 0; x < 800; x += 7) {
                if (out.get(x, y) == img.get(x, y)) continue;
                bool near_any = false;
                for (const auto& w : ws) {
                    Bounds inflated{w.bounds.x1 - 2, w.bounds.y1 - 2,
                                    w.bounds.x2 + 2, w.bounds.y2 + 2};
                    // Label boxes hang off the top-left corner; allow a
                    // generous pad there.
                    Bounds label{w.bounds.x1 - 2, w.bounds.y1 - 2,
                                 w.bounds.x1 + 60, w.bounds.y1 + 30};
                    if ((x >= inflated.x1 && x <= inflated.x2 &&
                         y >= inflated.y1 && y <= inflated.y2) ||
                        (x >= label.x1 && x <= label.x2 && y >= label.y1 &&
                         y <= label.y2)) {
                        near_any = true;
                        break;
                    }
                }
                CHECK(near_any);
            }

        // Mapping round-trip.
        EvidenceTriplet t;
        t.image = img;
        t.widgets = ws;
        t.context.screen_size = {800, 600};
        t.context.window_bounds = {0, 0, 800, 600};
        auto ms = build_markset(t, pi, ws, cfg);
        CHECK(mapping_from_json(mapping_to_json(ms.mapping)) == ms.mapping);
    }
}
