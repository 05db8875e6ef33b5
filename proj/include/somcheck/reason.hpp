#pragma once

#include <memory>
#include <set>
#include <vector>

#include "somcheck/evidence.hpp"
#include "somcheck/filter.hpp"
#include "somcheck/som.hpp"

namespace somcheck {

enum class DefectType {
    TextOverlap,
    TextTruncationTop,
    TextTruncationBottom,
    TextTruncationSide,
    WidgetOverText,
    TextOverWidget,
    WidgetOverWidget,
    MissingImage,
    NullDisplay,
    NavBarOverlap,
    SplitMismatch,
    FoldableMismatch,
    Normal,
};

/// Subtype groups rolled up for metric rows.
enum class CoarseType {
    TextOverlap,
    TextTruncation,
    WidgetOcclusion,
    MissingImage,
    NullDisplay,
    NavBarOverlap,
    SplitMismatch,
    FoldableMismatch,
    Normal,
};

std::string to_string(DefectType t);         // snake_case wire name
DefectType defect_type_from_string(const std::string& s);
CoarseType coarse_type(DefectType t);
std::string to_string(CoarseType t);

enum class BackendKind { Geometric, RemoteModel };

struct DefectReport {
    DefectType defect_type = DefectType::Normal;
    std::set<int> location;  // marker ids
    std::string evidence;
    std::string explanation;
    BackendKind backend = BackendKind::Geometric;
    std::optional<double> confidence;

    bool operator==(const DefectReport&) const = default;
};

/// Numeric rules behind the geometric oracle; shared with the reflow
/// ground-truth labeller so oracle equivalence is exact.
struct OracleConfig {
    double overlap_ratio = 0.3;      // text overlap, fraction of the smaller box
    double coverage_ratio = 0.3;     // occlusion, fraction of the lower widget
    double containment_ratio = 0.95; // parent/child exclusion
    int clip_slack_px = 2;           // truncation tolerance
    int navbar_slack_px = 4;         // inset-band intersection tolerance
    double null_display_window_frac = 0.3;
    int null_display_max_widgets = 1;
};

struct MarkedWidget {
    int marker = 0;
    Widget widget;
};

// Individual detector rules. Reports come back sorted by defect type then
// lowest marker; Normal is never emitted here.
std::vector<DefectReport> detect_text_overlap(const std::vector<MarkedWidget>& mw,
                                              const RuntimeContext& ctx,
                                              const OracleConfig& cfg);
std::vector<DefectReport> detect_truncation(const std::vector<MarkedWidget>& mw,
                                            const RuntimeContext& ctx,
                                            const OracleConfig& cfg);
std::vector<DefectReport> detect_occlusion(const std::vector<MarkedWidget>& mw,
                                           const RuntimeContext& ctx,
                                           const OracleConfig& cfg,
                                           const FilterConfig& fcfg);
std::vector<DefectReport> detect_missing_and_null(const std::vector<MarkedWidget>& mw,
                                                  const RuntimeContext& ctx,
                                                  const OracleConfig& cfg);
std::vector<DefectReport> detect_navbar_overlap(const std::vector<MarkedWidget>& mw,
                                                const RuntimeContext& ctx,
                                                const OracleConfig& cfg,
                                                const FilterConfig& fcfg);

/// Full oracle suite; emits a single Normal report when nothing fires.
std::vector<DefectReport> analyze_geometric(const std::vector<MarkedWidget>& mw,
                                            const RuntimeContext& ctx,
                                            const OracleConfig& cfg,
                                            const FilterConfig& fcfg);

struct PromptBundle {
    std::string system_text;
    std::string user_text;
    const Image* image = nullptr;  // marked image
};

extern const char* const kCotPromptVersion;

PromptBundle serialize_prompt(const MappingTable& mapping, const RuntimeContext& ctx);

/// Extracts the first schema-conforming JSON fragment from a backend response.
std::vector<DefectReport> parse_model_output(const std::string& raw,
                                             const MarkSet& markset,
                                             std::vector<std::string>* warnings = nullptr);

struct RemoteConfig {
    std::string endpoint;  // e.g. http://127.0.0.1:8089/v1/chat/completions
    std::string model;
    std::string api_key;
    int max_retries = 2;
    int backoff_ms = 200;
    int max_inflight = 4;
};

class ReasonBackend {
public:
    virtual ~ReasonBackend() = default;
    virtual BackendKind kind() const = 0;
    virtual std::vector<DefectReport> analyze(const MarkSet& markset,
                                              const std::vector<MarkedWidget>& mw,
                                              const RuntimeContext& ctx) = 0;
};

class GeometricBackend final : public ReasonBackend {
public:
    GeometricBackend(OracleConfig cfg, FilterConfig fcfg)
        : cfg_(cfg), fcfg_(std::move(fcfg)) {}
    BackendKind kind() const override { return BackendKind::Geometric; }
    std::vector<DefectReport> analyze(const MarkSet&, const std::vector<MarkedWidget>& mw,
                                      const RuntimeContext& ctx) override;

private:
    OracleConfig cfg_;
    FilterConfig fcfg_;
};

class RemoteBackend final : public ReasonBackend {
public:
    explicit RemoteBackend(RemoteConfig cfg) : cfg_(std::move(cfg)) {}
    BackendKind kind() const override { return BackendKind::RemoteModel; }
    std::vector<DefectReport> analyze(const MarkSet& markset,
                                      const std::vector<MarkedWidget>& mw,
                                      const RuntimeContext& ctx) override;

private:
    RemoteConfig cfg_;
};

/// Pairs markers with their widgets (marker k is the k-th element of the
/// reading order).
std::vector<MarkedWidget> marked_widgets(const OrderedWidgets& ordered,
                                         const std::vector<Widget>& retained);

std::string reports_to_json(const std::vector<DefectReport>& reports);
std::vector<DefectReport> reports_from_json(const std::string& raw);

}  // namespace somcheck
