#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "somcheck/geometry.hpp"
#include "somcheck/image.hpp"

namespace somcheck {

/// One abstracted UI node from a hierarchy dump.
struct Widget {
    int id = 0;  // unique within one hierarchy
    std::string widget_type;
    std::optional<std::string> text;
    Bounds bounds;
    bool clickable = false;
    std::optional<std::string> resource_id;
    bool visible = true;
    std::optional<bool> content_present;
    int document_order = 0;  // depth-first pre-order index

    bool operator==(const Widget&) const = default;
};

enum class WindowMode { FullScreen, SplitScreen, Folded, Unfolded, Freeform };

std::string to_string(WindowMode m);
WindowMode window_mode_from_string(const std::string& s);

struct RuntimeContext {
    std::string app_id;
    std::string activity;
    WindowMode window_mode = WindowMode::FullScreen;
    Bounds window_bounds;
    std::pair<int, int> screen_size{0, 0};  // (width, height) px
    int system_inset_bottom = 0;
    std::optional<double> split_ratio;  // present iff SplitScreen
    std::string timestamp;              // ISO-8601

    bool operator==(const RuntimeContext&) const = default;
};

/// Aligned screenshot / hierarchy / runtime-context unit of analysis.
struct EvidenceTriplet {
    Image image;
    std::vector<Widget> widgets;
    RuntimeContext context;
};

struct ParseResult {
    std::vector<Widget> widgets;
    std::vector<std::string> warnings;
};

/// Parses a DroidBot-style `views` hierarchy document. Widgets come out in
/// depth-first pre-order; nodes without bounds are dropped with a warning.
ParseResult parse_hierarchy(const std::string& raw);

/// Debug dump of a widget list; parse_hierarchy(dump_widgets(w)).widgets == w.
std::string dump_widgets(const std::vector<Widget>& widgets);

std::string serialize_context(const RuntimeContext& ctx);
RuntimeContext parse_context(const std::string& raw);

EvidenceTriplet load_triplet(const std::filesystem::path& image_path,
                             const std::filesystem::path& hierarchy_path,
                             const std::filesystem::path& context_path,
                             std::vector<std::string>* warnings = nullptr);

void validate_context(const RuntimeContext& ctx);

}  // namespace somcheck
