#include "somcheck/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "somcheck/errors.hpp"

namespace somcheck {

using nlohmann::json;

namespace {

void load_string_set(const json& j, const char* key, std::set<std::string>& out) {
    if (!j.contains(key)) return;
    out.clear();
    for (const auto& s : j[key]) out.insert(s.get<std::string>());
    if (out.empty()) throw Error(std::string("config set '") + key + "' is empty");
}

AdjacencyThreshold load_threshold(const json& j, AdjacencyThreshold def) {
    AdjacencyThreshold t = def;
    if (j.is_array() && j.size() == 3) {
        t.min_px = j[0].get<int>();
        t.max_px = j[1].get<int>();
        t.frac = j[2].get<double>();
    }
    if (t.min_px <= 0 || t.min_px > t.max_px || t.frac <= 0.0 || t.frac >= 1.0)
        throw Error("invalid adjacency threshold triple");
    return t;
}

}  // namespace

Config parse_config(const std::string& raw) {
    json j;
    try {
        j = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw MalformedDocument(std::string("config parse error: ") + e.what());
    }
    Config cfg;
    if (j.contains("filter")) {
        const auto& f = j["filter"];
        cfg.filter.min_width_px = f.value("min_width_px", cfg.filter.min_width_px);
        cfg.filter.min_height_px = f.value("min_height_px", cfg.filter.min_height_px);
        cfg.filter.min_area_px2 = f.value("min_area_px2", cfg.filter.min_area_px2);
        if (cfg.filter.min_width_px <= 0 || cfg.filter.min_height_px <= 0 ||
            cfg.filter.min_area_px2 <= 0)
            throw Error("filter thresholds must be positive");
        load_string_set(f, "decorative_keywords", cfg.filter.decorative_keywords);
        load_string_set(f, "interactive_types", cfg.filter.interactive_types);
        load_string_set(f, "container_types", cfg.filter.container_types);
    }
    if (j.contains("layout")) {
        const auto& l = j["layout"];
        if (l.contains("horizontal"))
            cfg.layout.horizontal = load_threshold(l["horizontal"], cfg.layout.horizontal);
        if (l.contains("vertical"))
            cfg.layout.vertical = load_threshold(l["vertical"], cfg.layout.vertical);
    }
    if (j.contains("oracle")) {
        const auto& o = j["oracle"];
        cfg.oracle.overlap_ratio = o.value("overlap_ratio", cfg.oracle.overlap_ratio);
        cfg.oracle.coverage_ratio = o.value("coverage_ratio", cfg.oracle.coverage_ratio);
        cfg.oracle.containment_ratio =
            o.value("containment_ratio", cfg.oracle.containment_ratio);
        cfg.oracle.clip_slack_px = o.value("clip_slack_px", cfg.oracle.clip_slack_px);
        cfg.oracle.navbar_slack_px = o.value("navbar_slack_px", cfg.oracle.navbar_slack_px);
        cfg.oracle.null_display_window_frac =
            o.value("null_display_window_frac", cfg.oracle.null_display_window_frac);
        cfg.oracle.null_display_max_widgets =
            o.value("null_display_max_widgets", cfg.oracle.null_display_max_widgets);
    }
    if (j.contains("reflow")) {
        const auto& r = j["reflow"];
        if (r.contains("folded_size"))
            cfg.reflow.folded_size = {r["folded_size"].at(0), r["folded_size"].at(1)};
        if (r.contains("unfolded_size"))
            cfg.reflow.unfolded_size = {r["unfolded_size"].at(0), r["unfolded_size"].at(1)};
    }
    return cfg;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open config " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

}  // namespace somcheck
