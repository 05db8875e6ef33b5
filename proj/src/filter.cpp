#include "somcheck/filter.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

namespace somcheck {

namespace {

std::string trim(const std::string& s) {
    auto b = s.begin();
    auto e = s.end();
    while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
    while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
    return {b, e};
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

bool has_text(const Widget& w) { return w.text && !trim(*w.text).empty(); }

bool is_decorative(const std::optional<std::string>& rid, const FilterConfig& cfg) {
    if (!rid) return false;
    const std::string r = lower(*rid);
    return std::any_of(cfg.decorative_keywords.begin(), cfg.decorative_keywords.end(),
                       [&](const std::string& kw) {
                           return r.find(lower(kw)) != std::string::npos;
                       });
}

bool is_semantic(const Widget& w, const FilterConfig& cfg) {
    return w.clickable || has_text(w) || cfg.interactive_types.count(w.widget_type) > 0;
}

std::vector<Widget> filter_widgets(const std::vector<Widget>& widgets,
                                   const FilterConfig& cfg) {
    std::vector<Widget> out;
    for (const auto& w : widgets) {
        if (!w.visible) continue;
        if (w.bounds.width() < cfg.min_width_px) continue;
        if (w.bounds.height() < cfg.min_height_px) continue;
        if (area(w.bounds) < cfg.min_area_px2) continue;
        if (is_decorative(w.resource_id, cfg)) continue;
        if (cfg.container_types.count(w.widget_type) && !w.clickable && !has_text(w))
            continue;
        if (!is_semantic(w, cfg)) continue;
        out.push_back(w);
    }
    return out;
}

std::vector<Widget> dedup_widgets(const std::vector<Widget>& widgets) {
    std::vector<Widget> out;
    std::vector<std::tuple<std::string, std::string, std::string>> seen;
    for (const auto& w : widgets) {
        if (!has_text(w)) {
            out.push_back(w);
            continue;
        }
        auto key = std::make_tuple(w.widget_type, lower(trim(*w.text)),
                                   w.resource_id.value_or(""));
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(std::move(key));
        out.push_back(w);
    }
    return out;
}

}  // namespace somcheck
