#include "somcheck/layout.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "somcheck/geometry.hpp"

namespace somcheck {

bool AdjacencyGraph::has_edge(int a, int b) const {
    auto it = neighbors.find(a);
    if (it == neighbors.end()) return false;
    return std::any_of(it->second.begin(), it->second.end(),
                       [b](const Neighbor& n) { return n.id == b; });
}

int resolve_threshold(const AdjacencyThreshold& t, int screen_extent) {
    const int px = static_cast<int>(std::lround(t.frac * screen_extent));
    return std::clamp(px, t.min_px, t.max_px);
}

namespace {

bool adjacent(const Bounds& a, const Bounds& b, int tau_h, int tau_v) {
    // Side-by-side: vertical projections overlap, horizontal gap small.
    if (projection_overlap(a, b, Axis::Vertical) > 0 &&
        edge_gap(a, b, Axis::Horizontal) <= tau_h)
        return true;
    // Stacked: horizontal projections overlap, vertical gap small.
    if (projection_overlap(a, b, Axis::Horizontal) > 0 &&
        edge_gap(a, b, Axis::Vertical) <= tau_v)
        return true;
    return false;
}

AdjacencyGraph assemble(const std::vector<Widget>& widgets,
                        const std::vector<std::pair<int, int>>& edges) {
    AdjacencyGraph g;
    g.nodes.reserve(widgets.size());
    for (const auto& w : widgets) g.nodes.push_back(w.id);

    std::map<int, const Widget*> by_id;
    for (const auto& w : widgets) by_id[w.id] = &w;

    for (int id : g.nodes) g.neighbors[id];
    for (auto [i, j] : edges) {
        const double d = center_distance(by_id.at(i)->bounds, by_id.at(j)->bounds);
        g.neighbors[i].push_back({j, d});
        g.neighbors[j].push_back({i, d});
    }
    for (auto& [id, list] : g.neighbors)
        std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) {
            if (a.distance != b.distance) return a.distance < b.distance;
            return a.id < b.id;
        });
    return g;
}

}  // namespace

AdjacencyGraph build_adjacency_serial(const std::vector<Widget>& widgets,
                                      const LayoutConfig& cfg,
                                      std::pair<int, int> screen_size) {
    const int tau_h = resolve_threshold(cfg.horizontal, screen_size.first);
    const int tau_v = resolve_threshold(cfg.vertical, screen_size.second);
    std::vector<std::pair<int, int>> edges;
    const int n = static_cast<int>(widgets.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (adjacent(widgets[i].bounds, widgets[j].bounds, tau_h, tau_v))
                edges.emplace_back(widgets[i].id, widgets[j].id);
    return assemble(widgets, edges);
}

AdjacencyGraph build_adjacency(const std::vector<Widget>& widgets,
                               const LayoutConfig& cfg,
                               std::pair<int, int> screen_size) {
    const int tau_h = resolve_threshold(cfg.horizontal, screen_size.first);
    const int tau_v = resolve_threshold(cfg.vertical, screen_size.second);
    const int n = static_cast<int>(widgets.size());

    std::vector<std::vector<std::pair<int, int>>> per_row(n);
#pragma omp parallel for schedule(dynamic, 8)
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j)
            if (adjacent(widgets[i].bounds, widgets[j].bounds, tau_h, tau_v))
                per_row[i].emplace_back(widgets[i].id, widgets[j].id);
    }
    std::vector<std::pair<int, int>> edges;
    for (auto& row : per_row)
        edges.insert(edges.end(), row.begin(), row.end());
    return assemble(widgets, edges);
}

namespace {

// (y1, x1, id) lexicographic order over unvisited widgets.
int top_left_unvisited(const std::vector<Widget>& widgets,
                       const std::set<int>& visited) {
    const Widget* best = nullptr;
    for (const auto& w : widgets) {
        if (visited.count(w.id)) continue;
        if (!best ||
            std::tie(w.bounds.y1, w.bounds.x1, w.id) <
                std::tie(best->bounds.y1, best->bounds.x1, best->id))
            best = &w;
    }
    return best ? best->id : -1;
}

}  // namespace

OrderedWidgets reading_order(const AdjacencyGraph& graph,
                             const std::vector<Widget>& widgets) {
    OrderedWidgets out;
    std::set<int> visited;
    while (true) {
        const int start = top_left_unvisited(widgets, visited);
        if (start < 0) break;
        // Iterative DFS; the stack holds pending nodes, nearest neighbor on top.
        std::vector<int> stack{start};
        while (!stack.empty()) {
            const int cur = stack.back();
            stack.pop_back();
            if (!visited.insert(cur).second) continue;
            out.sequence.push_back(cur);
            auto it = graph.neighbors.find(cur);
            if (it == graph.neighbors.end()) continue;
            // Push in reverse so the nearest neighbor is popped first.
            for (auto rit = it->second.rbegin(); rit != it->second.rend(); ++rit)
                if (!visited.count(rit->id)) stack.push_back(rit->id);
        }
    }
    return out;
}

StructuredUIMetadata serialize_metadata(const OrderedWidgets& ordered,
                                        const std::vector<Widget>& widgets) {
    std::map<int, const Widget*> by_id;
    for (const auto& w : widgets) by_id[w.id] = &w;
    StructuredUIMetadata meta;
    meta.items.reserve(ordered.sequence.size());
    for (int id : ordered.sequence) {
        const Widget& w = *by_id.at(id);
        meta.items.push_back({w.id, w.widget_type, w.text, w.bounds, w.clickable,
                              w.resource_id});
    }
    return meta;
}

}  // namespace somcheck
