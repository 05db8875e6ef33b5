#include "somcheck/evidence.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "somcheck/errors.hpp"

namespace somcheck {

using nlohmann::json;

std::string to_string(WindowMode m) {
    switch (m) {
        case WindowMode::FullScreen: return "FullScreen";
        case WindowMode::SplitScreen: return "SplitScreen";
        case WindowMode::Folded: return "Folded";
        case WindowMode::Unfolded: return "Unfolded";
        case WindowMode::Freeform: return "Freeform";
    }
    return "FullScreen";
}

WindowMode window_mode_from_string(const std::string& s) {
    if (s == "FullScreen") return WindowMode::FullScreen;
    if (s == "SplitScreen") return WindowMode::SplitScreen;
    if (s == "Folded") return WindowMode::Folded;
    if (s == "Unfolded") return WindowMode::Unfolded;
    if (s == "Freeform") return WindowMode::Freeform;
    throw ContextInvalid("unknown window_mode: " + s);
}

namespace {

std::optional<std::string> opt_string(const json& node, const char* key) {
    auto it = node.find(key);
    if (it == node.end() || it->is_null()) return std::nullopt;
    return it->get<std::string>();
}

std::optional<Widget> widget_from_node(const json& node,
                                       std::vector<std::string>& warnings) {
    Widget w;
    w.id = node.value("temp_id", 0);
    w.widget_type = node.value("class", "");
    w.text = opt_string(node, "text");
    w.clickable = node.value("clickable", false);
    w.resource_id = opt_string(node, "resource_id");
    w.visible = node.value("visible", true);
    auto cp = node.find("content_present");
    if (cp != node.end() && !cp->is_null()) w.content_present = cp->get<bool>();

    auto b = node.find("bounds");
    if (b == node.end() || !b->is_array() || b->size() != 2 ||
        !(*b)[0].is_array() || !(*b)[1].is_array()) {
        warnings.push_back("node " + std::to_string(w.id) + " lacks bounds, dropped");
        return std::nullopt;
    }
    Bounds bounds{(*b)[0][0].get<int>(), (*b)[0][1].get<int>(),
                  (*b)[1][0].get<int>(), (*b)[1][1].get<int>()};
    if (bounds.x1 > bounds.x2 || bounds.y1 > bounds.y2) {
        warnings.push_back("node " + std::to_string(w.id) +
                           " has flipped bounds, normalized");
        bounds = bounds.normalized();
    }
    w.bounds = bounds;
    return w;
}

}  // namespace

ParseResult parse_hierarchy(const std::string& raw) {
    json doc;
    try {
        doc = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw MalformedDocument(std::string("hierarchy parse error: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("views") || !doc["views"].is_array())
        throw MalformedDocument("hierarchy document lacks a 'views' array");

    ParseResult result;
    const json& views = doc["views"];

    std::map<int, const json*> by_id;
    std::set<int> referenced;
    for (const auto& node : views) {
        if (!node.is_object()) throw MalformedDocument("non-object view node");
        const int id = node.value("temp_id", 0);
        if (!by_id.emplace(id, &node).second)
            throw MalformedDocument("duplicate temp_id " + std::to_string(id));
        for (const auto& c : node.value("children", std::vector<int>{}))
            referenced.insert(c);
    }

    // Depth-first pre-order over roots in document order.
    std::set<int> visited;
    int order = 0;
    auto visit = [&](auto&& self, const json& node) -> void {
        const int id = node.value("temp_id", 0);
        if (!visited.insert(id).second) return;
        if (auto w = widget_from_node(node, result.warnings)) {
            w->document_order = order++;
            result.widgets.push_back(std::move(*w));
        }
        for (const auto& c : node.value("children", std::vector<int>{})) {
            auto it = by_id.find(c);
            if (it != by_id.end()) self(self, *it->second);
        }
    };
    for (const auto& node : views) {
        const int id = node.value("temp_id", 0);
        if (!referenced.count(id)) visit(visit, node);
    }
    // Orphan cycles (never reachable from a root) still get visited.
    for (const auto& node : views) visit(visit, node);
    return result;
}

std::string dump_widgets(const std::vector<Widget>& widgets) {
    json views = json::array();
    for (const auto& w : widgets) {
        json node;
        node["temp_id"] = w.id;
        node["class"] = w.widget_type;
        node["text"] = w.text ? json(*w.text) : json(nullptr);
        node["bounds"] = {{w.bounds.x1, w.bounds.y1}, {w.bounds.x2, w.bounds.y2}};
        node["clickable"] = w.clickable;
        node["resource_id"] = w.resource_id ? json(*w.resource_id) : json(nullptr);
        node["visible"] = w.visible;
        if (w.content_present) node["content_present"] = *w.content_present;
        node["children"] = json::array();
        views.push_back(std::move(node));
    }
    return json{{"views", views}}.dump(2);
}

std::string serialize_context(const RuntimeContext& ctx) {
    json j;
    j["app_id"] = ctx.app_id;
    j["activity"] = ctx.activity;
    j["window_mode"] = to_string(ctx.window_mode);
    j["window_bounds"] = {ctx.window_bounds.x1, ctx.window_bounds.y1,
                          ctx.window_bounds.x2, ctx.window_bounds.y2};
    j["screen_size"] = {ctx.screen_size.first, ctx.screen_size.second};
    j["system_inset_bottom"] = ctx.system_inset_bottom;
    if (ctx.split_ratio) j["split_ratio"] = *ctx.split_ratio;
    j["timestamp"] = ctx.timestamp;
    return j.dump(2);
}

RuntimeContext parse_context(const std::string& raw) {
    json j;
    try {
        j = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw MalformedDocument(std::string("context parse error: ") + e.what());
    }
    RuntimeContext ctx;
    try {
        ctx.app_id = j.at("app_id").get<std::string>();
        ctx.activity = j.at("activity").get<std::string>();
        ctx.window_mode = window_mode_from_string(j.at("window_mode").get<std::string>());
        const auto& wb = j.at("window_bounds");
        ctx.window_bounds = {wb.at(0), wb.at(1), wb.at(2), wb.at(3)};
        ctx.screen_size = {j.at("screen_size").at(0), j.at("screen_size").at(1)};
        ctx.system_inset_bottom = j.value("system_inset_bottom", 0);
        if (j.contains("split_ratio") && !j["split_ratio"].is_null())
            ctx.split_ratio = j["split_ratio"].get<double>();
        ctx.timestamp = j.value("timestamp", "");
    } catch (const json::exception& e) {
        throw MalformedDocument(std::string("context field error: ") + e.what());
    }
    validate_context(ctx);
    return ctx;
}

void validate_context(const RuntimeContext& ctx) {
    const Bounds screen{0, 0, ctx.screen_size.first, ctx.screen_size.second};
    const auto& w = ctx.window_bounds;
    if (!w.valid() || w.x2 > screen.x2 || w.y2 > screen.y2)
        throw ContextInvalid("window_bounds outside the screen rectangle");
    const bool split = ctx.window_mode == WindowMode::SplitScreen;
    if (split != ctx.split_ratio.has_value())
        throw ContextInvalid("split_ratio present iff window_mode is SplitScreen");
    if (ctx.split_ratio && (*ctx.split_ratio <= 0.0 || *ctx.split_ratio >= 1.0))
        throw ContextInvalid("split_ratio must lie in (0,1)");
}

namespace {

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw Error("cannot open " + p.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

EvidenceTriplet load_triplet(const std::filesystem::path& image_path,
                             const std::filesystem::path& hierarchy_path,
                             const std::filesystem::path& context_path,
                             std::vector<std::string>* warnings) {
    EvidenceTriplet t;
    t.context = parse_context(read_file(context_path));
    auto parsed = parse_hierarchy(read_file(hierarchy_path));
    t.widgets = std::move(parsed.widgets);
    if (warnings)
        warnings->insert(warnings->end(), parsed.warnings.begin(), parsed.warnings.end());
    t.image = load_png(image_path);
    if (t.image.width() != t.context.screen_size.first ||
        t.image.height() != t.context.screen_size.second)
        throw DimensionMismatch(
            "image " + std::to_string(t.image.width()) + "x" +
            std::to_string(t.image.height()) + " vs declared screen " +
            std::to_string(t.context.screen_size.first) + "x" +
            std::to_string(t.context.screen_size.second));
    return t;
}

}  // namespace somcheck
