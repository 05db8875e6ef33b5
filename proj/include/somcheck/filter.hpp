#pragma once

#include <set>
#include <string>
#include <vector>

#include "somcheck/evidence.hpp"

namespace somcheck {

struct FilterConfig {
    int min_width_px = 5;
    int min_height_px = 5;
    int min_area_px2 = 25;
    std::set<std::string> decorative_keywords{"scrim", "background", "divider",
                                              "shadow"};
    std::set<std::string> interactive_types{"Button",   "ImageButton", "EditText",
                                            "Switch",   "CheckBox",    "RadioButton",
                                            "SeekBar",  "Spinner"};
    std::set<std::string> container_types{"LinearLayout",     "RelativeLayout",
                                          "FrameLayout",      "ConstraintLayout",
                                          "RecyclerView",     "ScrollView",
                                          "ViewGroup"};
};

/// Trimmed, non-blank text check.
bool has_text(const Widget& w);

bool is_decorative(const std::optional<std::string>& rid, const FilterConfig& cfg);
bool is_semantic(const Widget& w, const FilterConfig& cfg);

/// Retains adequately sized, non-decorative, semantically relevant widgets.
/// Output is a subsequence of the input.
std::vector<Widget> filter_widgets(const std::vector<Widget>& widgets,
                                   const FilterConfig& cfg);

/// Collapses text widgets sharing (type, trimmed-lowercased text, resource_id);
/// the first in document order wins. Textless widgets pass through untouched.
std::vector<Widget> dedup_widgets(const std::vector<Widget>& widgets);

}  // namespace somcheck
