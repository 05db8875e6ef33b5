#include "somcheck/som.hpp"

#include <algorithm>
#include <map>

#include <json.hpp>

#include "somcheck/errors.hpp"

namespace somcheck {

using nlohmann::json;

WidgetCategory categorize(const Widget& w, const FilterConfig& cfg) {
    if (cfg.interactive_types.count(w.widget_type) || w.clickable)
        return WidgetCategory::Interactive;
    if (w.widget_type.find("Text") != std::string::npos || has_text(w))
        return WidgetCategory::Text;
    if (w.widget_type.find("Image") != std::string::npos)
        return WidgetCategory::ImageLike;
    return WidgetCategory::Other;
}

Color category_color(WidgetCategory c) {
    switch (c) {
        case WidgetCategory::Interactive: return {220, 30, 30};
        case WidgetCategory::Text: return {20, 90, 220};
        case WidgetCategory::ImageLike: return {20, 160, 60};
        case WidgetCategory::Other: return {150, 80, 180};
    }
    return {0, 0, 0};
}

std::vector<Mark> assign_marks(const OrderedWidgets& ordered,
                               const std::vector<Widget>& widgets,
                               std::pair<int, int> screen_size) {
    std::map<int, const Widget*> by_id;
    for (const auto& w : widgets) by_id[w.id] = &w;

    std::vector<Mark> marks;
    marks.reserve(ordered.sequence.size());
    int k = 1;
    for (int id : ordered.sequence) {
        const Widget& w = *by_id.at(id);
        const int label_w = Image::text_width(std::to_string(k));
        const int label_h = Image::text_height();
        int ax = std::clamp(w.bounds.x1, 0, std::max(0, screen_size.first - label_w - 4));
        int ay = std::clamp(w.bounds.y1, 0, std::max(0, screen_size.second - label_h - 4));
        marks.push_back({k, id, {ax, ay}});
        ++k;
    }
    return marks;
}

Image render_overlay(const Image& image, const std::vector<Mark>& marks,
                     const std::vector<Widget>& widgets, const FilterConfig& cfg) {
    if (image.width() < 8 || image.height() < 8)
        throw ImageTooSmall("overlay target must be at least 8x8 px");
    std::map<int, const Widget*> by_id;
    for (const auto& w : widgets) by_id[w.id] = &w;

    Image out = image;
    for (const auto& m : marks) {
        const Widget& w = *by_id.at(m.widget_id);
        const Color c = category_color(categorize(w, cfg));
        out.draw_rect_outline(w.bounds, c, 2);

        const std::string label = std::to_string(m.marker_id);
        const auto [ax, ay] = m.label_anchor;
        const Bounds box{ax, ay, ax + Image::text_width(label) + 4,
                         ay + Image::text_height() + 4};
        out.fill_rect(box, c);
        out.draw_text(ax + 2, ay + 2, label, {255, 255, 255});
    }
    return out;
}

MarkSet build_markset(const EvidenceTriplet& triplet, const OrderedWidgets& ordered,
                      const std::vector<Widget>& widgets, const FilterConfig& cfg) {
    std::map<int, const Widget*> by_id;
    for (const auto& w : widgets) by_id[w.id] = &w;

    MarkSet ms;
    ms.raw_image = triplet.image;
    const auto marks = assign_marks(ordered, widgets, triplet.context.screen_size);
    ms.marked_image = render_overlay(triplet.image, marks, widgets, cfg);
    for (const auto& m : marks) {
        const Widget& w = *by_id.at(m.widget_id);
        ms.mapping.push_back({m.marker_id, w.widget_type, w.text, w.bounds, w.clickable});
    }
    return ms;
}

std::string mapping_to_json(const MappingTable& mapping) {
    json arr = json::array();
    for (const auto& e : mapping) {
        json o;
        o["marker"] = e.marker;
        o["type"] = e.widget_type;
        o["text"] = e.text ? json(*e.text) : json(nullptr);
        o["bounds"] = {e.bounds.x1, e.bounds.y1, e.bounds.x2, e.bounds.y2};
        o["clickable"] = e.clickable;
        arr.push_back(std::move(o));
    }
    return arr.dump(2);
}

MappingTable mapping_from_json(const std::string& raw) {
    json arr;
    try {
        arr = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw MalformedDocument(std::string("mapping parse error: ") + e.what());
    }
    if (!arr.is_array()) throw MalformedDocument("mapping table must be an array");
    MappingTable out;
    for (const auto& o : arr) {
        MappingEntry e;
        e.marker = o.at("marker").get<int>();
        e.widget_type = o.at("type").get<std::string>();
        if (!o.at("text").is_null()) e.text = o.at("text").get<std::string>();
        const auto& b = o.at("bounds");
        e.bounds = {b.at(0), b.at(1), b.at(2), b.at(3)};
        e.clickable = o.at("clickable").get<bool>();
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace somcheck
