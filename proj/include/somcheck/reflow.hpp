#pragma once

#include <filesystem>
#include <vector>

#include "somcheck/evidence.hpp"
#include "somcheck/filter.hpp"
#include "somcheck/reason.hpp"

namespace somcheck {

enum class Anchor { TopLeft, TopRight, BottomLeft, BottomRight, Center, FillWidth };

std::string to_string(Anchor a);
Anchor anchor_from_string(const std::string& s);

struct LayoutNode {
    std::string name;  // unique within the spec
    std::string widget_type;
    std::optional<std::string> text;
    std::pair<int, int> intrinsic_size{0, 0};  // (w, h) px, rigid
    Anchor anchor = Anchor::TopLeft;
    int margin = 0;
    std::optional<bool> image_content;
};

struct LayoutSpec {
    std::vector<LayoutNode> widgets;
    std::pair<int, int> base_window{0, 0};
};

std::string layout_spec_to_json(const LayoutSpec& spec);
LayoutSpec layout_spec_from_json(const std::string& raw);

struct WindowOp {
    enum class Kind { SplitTest, FoldTest, DragUp, DragDown };
    Kind kind = Kind::SplitTest;
    double ratio = 0.5;   // SplitTest, in (0,1)
    bool folded = true;   // FoldTest
    int delta = 0;        // DragUp/DragDown, > 0

    static WindowOp split(double r) { return {Kind::SplitTest, r, true, 0}; }
    static WindowOp fold(bool f) { return {Kind::FoldTest, 0.5, f, 0}; }
    static WindowOp drag_up(int d) { return {Kind::DragUp, 0.5, true, d}; }
    static WindowOp drag_down(int d) { return {Kind::DragDown, 0.5, true, d}; }
};

/// State directory name for an op ("full" is the untransformed base state).
std::string state_id(const WindowOp& op);

struct ReflowConfig {
    std::pair<int, int> folded_size{1080, 2092};
    std::pair<int, int> unfolded_size{1812, 2092};
};

struct TruthEntry {
    DefectType type = DefectType::Normal;
    std::set<std::string> names;
    bool operator==(const TruthEntry&) const = default;
};

struct LabelledTriplet {
    EvidenceTriplet triplet;
    std::vector<TruthEntry> truth;
};

/// Anchored rigid placement inside the window; widgets keep their intrinsic
/// sizes, so a shrinking window produces clipping and collisions instead of
/// re-wrapping content.
std::vector<Widget> reflow(const LayoutSpec& spec, const Bounds& window);

RuntimeContext apply_window_op(const RuntimeContext& ctx, const WindowOp& op,
                               const ReflowConfig& cfg);

/// Geometry-only labels, computed with the same thresholds as the geometric
/// oracle. Empty when the layout renders clean.
std::vector<TruthEntry> ground_truth(const LayoutSpec& spec,
                                     const std::vector<Widget>& widgets,
                                     const RuntimeContext& ctx,
                                     const OracleConfig& ocfg,
                                     const FilterConfig& fcfg);

Image render_synthetic(const std::vector<Widget>& widgets, const RuntimeContext& ctx,
                       const FilterConfig& fcfg);

std::string truth_to_json(const std::vector<TruthEntry>& truth);
std::vector<TruthEntry> truth_from_json(const std::string& raw);

struct CorpusRecord {
    std::string layout_id;
    std::string state_id;
    std::filesystem::path dir;
    std::vector<TruthEntry> truth;
    WindowMode window_mode = WindowMode::FullScreen;
};

/// Seeded pseudo-random layouts; per layout one FullScreen triplet plus one
/// per op, each written in the evidence-module file formats with a truth file
/// beside it. Same seed, same bytes.
std::vector<CorpusRecord> generate_corpus(std::uint64_t seed, int n_layouts,
                                          const std::vector<WindowOp>& ops,
                                          const std::filesystem::path& out_dir,
                                          const ReflowConfig& rcfg = {},
                                          const OracleConfig& ocfg = {},
                                          const FilterConfig& fcfg = {});

}  // namespace somcheck
