#pragma once

#include <vector>

#include "somcheck/evidence.hpp"
#include "somcheck/filter.hpp"
#include "somcheck/layout.hpp"

namespace somcheck {

struct Mark {
    int marker_id = 0;  // 1..m, assigned in reading order
    int widget_id = 0;
    std::pair<int, int> label_anchor{0, 0};
    bool operator==(const Mark&) const = default;
};

struct MappingEntry {
    int marker = 0;
    std::string widget_type;
    std::optional<std::string> text;
    Bounds bounds;
    bool clickable = false;
    bool operator==(const MappingEntry&) const = default;
};

using MappingTable = std::vector<MappingEntry>;

struct MarkSet {
    Image raw_image;
    Image marked_image;
    MappingTable mapping;
};

enum class WidgetCategory { Interactive, Text, ImageLike, Other };

WidgetCategory categorize(const Widget& w, const FilterConfig& cfg);
Color category_color(WidgetCategory c);

std::vector<Mark> assign_marks(const OrderedWidgets& ordered,
                               const std::vector<Widget>& widgets,
                               std::pair<int, int> screen_size);

/// Draws a 2 px box outline plus a filled numeric label per mark. Pixels
/// outside strokes and label boxes are untouched; output is deterministic.
Image render_overlay(const Image& image, const std::vector<Mark>& marks,
                     const std::vector<Widget>& widgets, const FilterConfig& cfg);

MarkSet build_markset(const EvidenceTriplet& triplet, const OrderedWidgets& ordered,
                      const std::vector<Widget>& widgets, const FilterConfig& cfg);

std::string mapping_to_json(const MappingTable& mapping);
MappingTable mapping_from_json(const std::string& raw);

}  // namespace somcheck
