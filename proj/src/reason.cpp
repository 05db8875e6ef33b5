#include "somcheck/reason.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <json.hpp>

#include "somcheck/errors.hpp"
#include "somcheck/geometry.hpp"

namespace somcheck {

using nlohmann::json;

std::string to_string(DefectType t) {
    switch (t) {
        case DefectType::TextOverlap: return "text_overlap";
        case DefectType::TextTruncationTop: return "text_truncation_top";
        case DefectType::TextTruncationBottom: return "text_truncation_bottom";
        case DefectType::TextTruncationSide: return "text_truncation_side";
        case DefectType::WidgetOverText: return "widget_over_text";
        case DefectType::TextOverWidget: return "text_over_widget";
        case DefectType::WidgetOverWidget: return "widget_over_widget";
        case DefectType::MissingImage: return "missing_image";
        case DefectType::NullDisplay: return "null_display";
        case DefectType::NavBarOverlap: return "nav_bar_overlap";
        case DefectType::SplitMismatch: return "split_mismatch";
        case DefectType::FoldableMismatch: return "foldable_mismatch";
        case DefectType::Normal: return "normal";
    }
    return "normal";
}

DefectType defect_type_from_string(const std::string& s) {
    static const std::map<std::string, DefectType> table = {
        {"text_overlap", DefectType::TextOverlap},
        {"text_truncation_top", DefectType::TextTruncationTop},
        {"text_truncation_bottom", DefectType::TextTruncationBottom},
        {"text_truncation_side", DefectType::TextTruncationSide},
        {"widget_over_text", DefectType::WidgetOverText},
        {"text_over_widget", DefectType::TextOverWidget},
        {"widget_over_widget", DefectType::WidgetOverWidget},
        {"missing_image", DefectType::MissingImage},
        {"null_display", DefectType::NullDisplay},
        {"nav_bar_overlap", DefectType::NavBarOverlap},
        {"split_mismatch", DefectType::SplitMismatch},
        {"foldable_mismatch", DefectType::FoldableMismatch},
        {"normal", DefectType::Normal},
    };
    auto it = table.find(s);
    if (it == table.end()) throw UnknownDefectType("unknown defect type: " + s);
    return it->second;
}

CoarseType coarse_type(DefectType t) {
    switch (t) {
        case DefectType::TextTruncationTop:
        case DefectType::TextTruncationBottom:
        case DefectType::TextTruncationSide:
            return CoarseType::TextTruncation;
        case DefectType::WidgetOverText:
        case DefectType::TextOverWidget:
        case DefectType::WidgetOverWidget:
            return CoarseType::WidgetOcclusion;
        case DefectType::TextOverlap: return CoarseType::TextOverlap;
        case DefectType::MissingImage: return CoarseType::MissingImage;
        case DefectType::NullDisplay: return CoarseType::NullDisplay;
        case DefectType::NavBarOverlap: return CoarseType::NavBarOverlap;
        case DefectType::SplitMismatch: return CoarseType::SplitMismatch;
        case DefectType::FoldableMismatch: return CoarseType::FoldableMismatch;
        case DefectType::Normal: return CoarseType::Normal;
    }
    return CoarseType::Normal;
}

std::string to_string(CoarseType t) {
    switch (t) {
        case CoarseType::TextOverlap: return "text_overlap";
        case CoarseType::TextTruncation: return "text_truncation";
        case CoarseType::WidgetOcclusion: return "widget_occlusion";
        case CoarseType::MissingImage: return "missing_image";
        case CoarseType::NullDisplay: return "null_display";
        case CoarseType::NavBarOverlap: return "nav_bar_overlap";
        case CoarseType::SplitMismatch: return "split_mismatch";
        case CoarseType::FoldableMismatch: return "foldable_mismatch";
        case CoarseType::Normal: return "normal";
    }
    return "normal";
}

namespace {

bool entry_has_text(const Widget& w) {
    return w.text && !std::all_of(w.text->begin(), w.text->end(), [](unsigned char c) {
        return std::isspace(c);
    });
}

bool is_image_type(const Widget& w) {
    return w.widget_type.find("Image") != std::string::npos;
}

bool contained(const Bounds& inner, const Bounds& outer, double ratio) {
    const auto inter = intersection_area(inner, outer);
    const auto a = area(inner);
    return a > 0 && static_cast<double>(inter) >= ratio * static_cast<double>(a);
}

void sort_reports(std::vector<DefectReport>& reports) {
    std::sort(reports.begin(), reports.end(),
              [](const DefectReport& a, const DefectReport& b) {
                  if (a.defect_type != b.defect_type)
                      return a.defect_type < b.defect_type;
                  const int ma = a.location.empty() ? 0 : *a.location.begin();
                  const int mb = b.location.empty() ? 0 : *b.location.begin();
                  if (ma != mb) return ma < mb;
                  return a.location < b.location;
              });
}

}  // namespace

std::vector<DefectReport> detect_text_overlap(const std::vector<MarkedWidget>& mw,
                                              const RuntimeContext&,
                                              const OracleConfig& cfg) {
    std::vector<DefectReport> out;
    for (std::size_t i = 0; i < mw.size(); ++i) {
        for (std::size_t j = i + 1; j < mw.size(); ++j) {
            const Widget& a = mw[i].widget;
            const Widget& b = mw[j].widget;
            if (!entry_has_text(a) || !entry_has_text(b)) continue;
            const auto inter = intersection_area(a.bounds, b.bounds);
            if (inter <= 0) continue;
            const auto smaller = std::min(area(a.bounds), area(b.bounds));
            if (smaller <= 0) continue;
            if (static_cast<double>(inter) <= cfg.overlap_ratio * static_cast<double>(smaller))
                continue;
            if (contained(a.bounds, b.bounds, cfg.containment_ratio) ||
                contained(b.bounds, a.bounds, cfg.containment_ratio))
                continue;
            DefectReport r;
            r.defect_type = DefectType::TextOverlap;
            r.location = {mw[i].marker, mw[j].marker};
            r.evidence = "text boxes of markers " + std::to_string(mw[i].marker) +
                         " and " + std::to_string(mw[j].marker) + " overlap " +
                         std::to_string(100 * inter / smaller) + "% of the smaller box";
            r.explanation = "two text widgets occupy the same region";
            out.push_back(std::move(r));
        }
    }
    sort_reports(out);
    return out;
}

std::vector<DefectReport> detect_truncation(const std::vector<MarkedWidget>& mw,
                                            const RuntimeContext& ctx,
                                            const OracleConfig& cfg) {
    std::vector<DefectReport> out;
    const Bounds& win = ctx.window_bounds;
    for (const auto& m : mw) {
        const Widget& w = m.widget;
        if (!entry_has_text(w)) continue;
        const int top = win.y1 - w.bounds.y1;
        const int bottom = w.bounds.y2 - win.y2;
        const int left = win.x1 - w.bounds.x1;
        const int right = w.bounds.x2 - win.x2;
        DefectType t;
        int clip;
        if (bottom > cfg.clip_slack_px) {
            t = DefectType::TextTruncationBottom;
            clip = bottom;
        } else if (top > cfg.clip_slack_px) {
            t = DefectType::TextTruncationTop;
            clip = top;
        } else if (left > cfg.clip_slack_px || right > cfg.clip_slack_px) {
            t = DefectType::TextTruncationSide;
            clip = std::max(left, right);
        } else {
            continue;
        }
        DefectReport r;
        r.defect_type = t;
        r.location = {m.marker};
        r.evidence = "marker " + std::to_string(m.marker) + " extends " +
                     std::to_string(clip) + " px beyond the window edge";
        r.explanation = "text widget is clipped by the window boundary";
        out.push_back(std::move(r));
    }
    sort_reports(out);
    return out;
}

std::vector<DefectReport> detect_occlusion(const std::vector<MarkedWidget>& mw,
                                           const RuntimeContext&,
                                           const OracleConfig& cfg,
                                           const FilterConfig& fcfg) {
    std::vector<DefectReport> out;
    for (std::size_t i = 0; i < mw.size(); ++i) {
        for (std::size_t j = i + 1; j < mw.size(); ++j) {
            // Later document order draws on top.
            const MarkedWidget& upper =
                mw[i].widget.document_order > mw[j].widget.document_order ? mw[i] : mw[j];
            const MarkedWidget& lower =
                mw[i].widget.document_order > mw[j].widget.document_order ? mw[j] : mw[i];
            const bool upper_text = entry_has_text(upper.widget);
            const bool lower_text = entry_has_text(lower.widget);
            if (upper_text && lower_text) continue;  // text-overlap territory
            const bool lower_relevant =
                lower_text || lower.widget.clickable ||
                fcfg.interactive_types.count(lower.widget.widget_type) > 0;
            if (!lower_relevant) continue;
            const auto inter =
                intersection_area(upper.widget.bounds, lower.widget.bounds);
            const auto lower_area = area(lower.widget.bounds);
            if (inter <= 0 || lower_area <= 0) continue;
            if (static_cast<double>(inter) <
                cfg.coverage_ratio * static_cast<double>(lower_area))
                continue;
            if (contained(upper.widget.bounds, lower.widget.bounds, cfg.containment_ratio) ||
                contained(lower.widget.bounds, upper.widget.bounds, cfg.containment_ratio))
                continue;
            DefectReport r;
            if (upper_text)
                r.defect_type = DefectType::TextOverWidget;
            else if (lower_text)
                r.defect_type = DefectType::WidgetOverText;
            else
                r.defect_type = DefectType::WidgetOverWidget;
            r.location = {upper.marker, lower.marker};
            r.evidence = "marker " + std::to_string(upper.marker) + " covers " +
                         std::to_string(100 * inter / lower_area) + "% of marker " +
                         std::to_string(lower.marker);
            r.explanation = "a later-drawn widget occludes an underlying one";
            out.push_back(std::move(r));
        }
    }
    sort_reports(out);
    return out;
}

std::vector<DefectReport> detect_missing_and_null(const std::vector<MarkedWidget>& mw,
                                                  const RuntimeContext& ctx,
                                                  const OracleConfig& cfg) {
    std::vector<DefectReport> out;
    for (const auto& m : mw) {
        if (!is_image_type(m.widget)) continue;
        if (m.widget.content_present && !*m.widget.content_present) {
            DefectReport r;
            r.defect_type = DefectType::MissingImage;
            r.location = {m.marker};
            r.evidence = "marker " + std::to_string(m.marker) +
                         " reports no loaded image content";
            r.explanation = "image widget rendered without its content";
            out.push_back(std::move(r));
        }
    }

    const auto win_area = area(ctx.window_bounds);
    const auto screen_area = static_cast<std::int64_t>(ctx.screen_size.first) *
                             ctx.screen_size.second;
    int in_window = 0;
    for (const auto& m : mw)
        if (m.widget.bounds.intersects(ctx.window_bounds)) ++in_window;
    if (screen_area > 0 &&
        static_cast<double>(win_area) >=
            cfg.null_display_window_frac * static_cast<double>(screen_area) &&
        in_window <= cfg.null_display_max_widgets) {
        DefectReport r;
        r.defect_type = DefectType::NullDisplay;
        r.evidence = "window shows " + std::to_string(in_window) +
                     " retained widget(s) over " +
                     std::to_string(100 * win_area / screen_area) + "% of the screen";
        r.explanation = "window area renders effectively empty";
        out.push_back(std::move(r));
    }
    sort_reports(out);
    return out;
}

std::vector<DefectReport> detect_navbar_overlap(const std::vector<MarkedWidget>& mw,
                                                const RuntimeContext& ctx,
                                                const OracleConfig& cfg,
                                                const FilterConfig& fcfg) {
    std::vector<DefectReport> out;
    if (ctx.system_inset_bottom <= 0) return out;
    const int band_top = ctx.screen_size.second - ctx.system_inset_bottom;
    for (const auto& m : mw) {
        const Widget& w = m.widget;
        const bool interactive =
            w.clickable || fcfg.interactive_types.count(w.widget_type) > 0;
        if (!interactive) continue;
        const int depth =
            std::min(w.bounds.y2, ctx.screen_size.second) - std::max(w.bounds.y1, band_top);
        if (depth <= cfg.navbar_slack_px) continue;
        DefectReport r;
        r.defect_type = DefectType::NavBarOverlap;
        r.location = {m.marker};
        r.evidence = "marker " + std::to_string(m.marker) + " extends " +
                     std::to_string(depth) + " px into the navigation-bar band";
        r.explanation = "interactive widget collides with the system navigation bar";
        out.push_back(std::move(r));
    }
    sort_reports(out);
    return out;
}

std::vector<DefectReport> analyze_geometric(const std::vector<MarkedWidget>& mw,
                                            const RuntimeContext& ctx,
                                            const OracleConfig& cfg,
                                            const FilterConfig& fcfg) {
    std::vector<DefectReport> out;
    auto append = [&](std::vector<DefectReport> v) {
        out.insert(out.end(), std::make_move_iterator(v.begin()),
                   std::make_move_iterator(v.end()));
    };
    append(detect_text_overlap(mw, ctx, cfg));
    append(detect_truncation(mw, ctx, cfg));
    append(detect_occlusion(mw, ctx, cfg, fcfg));
    append(detect_missing_and_null(mw, ctx, cfg));
    append(detect_navbar_overlap(mw, ctx, cfg, fcfg));
    if (out.empty()) {
        DefectReport normal;
        normal.defect_type = DefectType::Normal;
        normal.evidence = "no geometric rule fired";
        normal.explanation = "layout within window bounds, no conflicting regions";
        out.push_back(std::move(normal));
    }
    sort_reports(out);
    return out;
}

std::vector<DefectReport> GeometricBackend::analyze(const MarkSet&,
                                                    const std::vector<MarkedWidget>& mw,
                                                    const RuntimeContext& ctx) {
    return analyze_geometric(mw, ctx, cfg_, fcfg_);
}

const char* const kCotPromptVersion = "v1";

namespace {

const char* const kCotSystemPrompt = R"(You are a meticulous mobile GUI display-defect analyst. You receive a screenshot annotated with numbered Set-of-Mark markers and a table mapping each marker to its widget attributes. Reason in exactly three stages.

Stage 1: Structured Interface Understanding
Survey the window mode and layout, identify high-risk regions and the key marked elements.

Stage 2: Multimodal Defect Analysis
Cross-check the marked screenshot against the widget table for candidate defects: text overlap, text truncation (top/bottom/side), widget occlusion (widget-over-text, text-over-widget, widget-over-widget), missing image, null display, navigation-bar overlap, and split-screen or foldable mismatch.

Stage 3: Defect Diagnosis and Localization
Confirm each defect with both visual and coordinate evidence, citing marker ids.

Respond with only a JSON array. Each element must be an object
{"type": <snake_case defect type or "normal">, "location": [<marker ids>], "evidence": <verifiable observation>, "explanation": <concise cause>}.
Return [] when the interface renders correctly.)";

}  // namespace

PromptBundle serialize_prompt(const MappingTable& mapping, const RuntimeContext& ctx) {
    PromptBundle p;
    p.system_text = kCotSystemPrompt;

    std::ostringstream user;
    user << "Runtime context:\n"
         << "  app: " << ctx.app_id << "\n"
         << "  activity: " << ctx.activity << "\n"
         << "  window mode: " << to_string(ctx.window_mode) << "\n"
         << "  window bounds: [" << ctx.window_bounds.x1 << "," << ctx.window_bounds.y1
         << "," << ctx.window_bounds.x2 << "," << ctx.window_bounds.y2 << "]\n"
         << "  screen: " << ctx.screen_size.first << "x" << ctx.screen_size.second
         << "\n\nMarked widgets:\n";
    for (const auto& e : mapping) {
        user << "[" << e.marker << "] type=" << e.widget_type << " text="
             << (e.text ? "\"" + *e.text + "\"" : "null") << " bounds=[" << e.bounds.x1
             << "," << e.bounds.y1 << "," << e.bounds.x2 << "," << e.bounds.y2
             << "] clickable=" << (e.clickable ? "true" : "false") << "\n";
    }
    user << "\nFollow the three reasoning stages and output the JSON report array.";
    p.user_text = user.str();
    return p;
}

namespace {

// Returns the index one past the matching close bracket, or npos.
std::size_t matching_bracket(const std::string& s, std::size_t start) {
    const char open = s[start];
    const char close = open == '[' ? ']' : '}';
    int depth = 0;
    bool in_string = false;
    for (std::size_t i = start; i < s.size(); ++i) {
        const char c = s[i];
        if (in_string) {
            if (c == '\\')
                ++i;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"')
            in_string = true;
        else if (c == open)
            ++depth;
        else if (c == close && --depth == 0)
            return i + 1;
    }
    return std::string::npos;
}

std::optional<DefectReport> report_from_object(const json& o, const MarkSet& markset,
                                               std::vector<std::string>* warnings) {
    if (!o.is_object() || !o.contains("type") || !o["type"].is_string())
        return std::nullopt;
    DefectReport r;
    r.defect_type = defect_type_from_string(o["type"].get<std::string>());
    r.backend = BackendKind::RemoteModel;
    std::set<int> valid;
    for (const auto& e : markset.mapping) valid.insert(e.marker);
    if (o.contains("location") && o["location"].is_array()) {
        for (const auto& m : o["location"]) {
            if (!m.is_number_integer()) continue;
            const int id = m.get<int>();
            if (valid.count(id)) {
                r.location.insert(id);
            } else if (warnings) {
                warnings->push_back("marker " + std::to_string(id) +
                                    " not in the mapping table, dropped");
            }
        }
    }
    if (r.defect_type == DefectType::Normal) r.location.clear();
    r.evidence = o.value("evidence", "");
    r.explanation = o.value("explanation", "");
    if (o.contains("confidence") && o["confidence"].is_number())
        r.confidence = o["confidence"].get<double>();
    return r;
}

}  // namespace

std::vector<DefectReport> parse_model_output(const std::string& raw,
                                             const MarkSet& markset,
                                             std::vector<std::string>* warnings) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '[' && raw[i] != '{') continue;
        const std::size_t end = matching_bracket(raw, i);
        if (end == std::string::npos) continue;
        json frag;
        try {
            frag = json::parse(raw.substr(i, end - i));
        } catch (const json::parse_error&) {
            continue;
        }
        std::vector<DefectReport> reports;
        if (frag.is_array()) {
            bool ok = true;
            for (const auto& o : frag) {
                auto r = report_from_object(o, markset, warnings);
                if (!r) {
                    ok = false;
                    break;
                }
                reports.push_back(std::move(*r));
            }
            if (!ok) continue;
        } else {
            auto r = report_from_object(frag, markset, warnings);
            if (!r) continue;
            reports.push_back(std::move(*r));
        }
        // Drop explicit "normal" entries; re-add one below if nothing is left.
        std::erase_if(reports, [](const DefectReport& r) {
            return r.defect_type == DefectType::Normal;
        });
        if (reports.empty()) {
            DefectReport normal;
            normal.defect_type = DefectType::Normal;
            normal.backend = BackendKind::RemoteModel;
            normal.evidence = "backend reported no defects";
            normal.explanation = "interface renders correctly";
            reports.push_back(std::move(normal));
        }
        sort_reports(reports);
        return reports;
    }
    throw UnparseableResponse("no schema-conforming JSON fragment in response");
}

std::vector<MarkedWidget> marked_widgets(const OrderedWidgets& ordered,
                                         const std::vector<Widget>& retained) {
    std::map<int, const Widget*> by_id;
    for (const auto& w : retained) by_id[w.id] = &w;
    std::vector<MarkedWidget> out;
    out.reserve(ordered.sequence.size());
    int k = 1;
    for (int id : ordered.sequence) out.push_back({k++, *by_id.at(id)});
    return out;
}

std::string reports_to_json(const std::vector<DefectReport>& reports) {
    json arr = json::array();
    for (const auto& r : reports) {
        json o;
        o["type"] = to_string(r.defect_type);
        o["location"] = std::vector<int>(r.location.begin(), r.location.end());
        o["evidence"] = r.evidence;
        o["explanation"] = r.explanation;
        o["backend"] = r.backend == BackendKind::Geometric ? "geometric" : "remote_model";
        if (r.confidence) o["confidence"] = *r.confidence;
        arr.push_back(std::move(o));
    }
    return arr.dump(2);
}

std::vector<DefectReport> reports_from_json(const std::string& raw) {
    json arr;
    try {
        arr = json::parse(raw);
    } catch (const json::parse_error& e) {
        throw MalformedDocument(std::string("report parse error: ") + e.what());
    }
    std::vector<DefectReport> out;
    for (const auto& o : arr) {
        DefectReport r;
        r.defect_type = defect_type_from_string(o.at("type").get<std::string>());
        for (const auto& m : o.at("location")) r.location.insert(m.get<int>());
        r.evidence = o.value("evidence", "");
        r.explanation = o.value("explanation", "");
        r.backend = o.value("backend", "geometric") == "remote_model"
                        ? BackendKind::RemoteModel
                        : BackendKind::Geometric;
        if (o.contains("confidence")) r.confidence = o["confidence"].get<double>();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace somcheck
