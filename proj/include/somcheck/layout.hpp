#pragma once

#include <map>
#include <vector>

#include "somcheck/evidence.hpp"

namespace somcheck {

/// (clamp-min px, clamp-max px, fraction of screen extent along the gap axis).
struct AdjacencyThreshold {
    int min_px = 20;
    int max_px = 120;
    double frac = 0.04;
};

struct LayoutConfig {
    AdjacencyThreshold horizontal{20, 120, 0.04};
    AdjacencyThreshold vertical{20, 150, 0.06};
};

struct Neighbor {
    int id = 0;
    double distance = 0.0;
    bool operator==(const Neighbor&) const = default;
};

/// Spatial neighbor graph over retained widgets. Symmetric, no self edges;
/// neighbor lists sorted by center distance, ties by lower id.
struct AdjacencyGraph {
    std::vector<int> nodes;
    std::map<int, std::vector<Neighbor>> neighbors;

    bool has_edge(int a, int b) const;
    bool operator==(const AdjacencyGraph&) const = default;
};

struct OrderedWidgets {
    std::vector<int> sequence;  // permutation of retained widget ids
};

struct MetadataItem {
    int id = 0;
    std::string widget_type;
    std::optional<std::string> text;
    Bounds bounds;
    bool clickable = false;
    std::optional<std::string> resource_id;
    bool operator==(const MetadataItem&) const = default;
};

struct StructuredUIMetadata {
    std::vector<MetadataItem> items;  // in reading order
};

int resolve_threshold(const AdjacencyThreshold& t, int screen_extent);

AdjacencyGraph build_adjacency(const std::vector<Widget>& widgets,
                               const LayoutConfig& cfg,
                               std::pair<int, int> screen_size);

/// Single-threaded reference for the OpenMP kernel above; identical output.
AdjacencyGraph build_adjacency_serial(const std::vector<Widget>& widgets,
                                      const LayoutConfig& cfg,
                                      std::pair<int, int> screen_size);

/// DFS from the (y1,x1)-minimal widget, visiting nearer neighbors first;
/// disconnected components restart from their own top-left widget.
OrderedWidgets reading_order(const AdjacencyGraph& graph,
                             const std::vector<Widget>& widgets);

StructuredUIMetadata serialize_metadata(const OrderedWidgets& ordered,
                                        const std::vector<Widget>& widgets);

}  // namespace somcheck
