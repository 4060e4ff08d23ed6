#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "knowtex/graph.hpp"
#include "knowtex/style.hpp"

namespace knowtex {

struct Point {
    double x = 0;
    double y = 0;
};

using EdgeKey = std::pair<std::string, std::string>;

/// Layered coordinates for TikZ emission. Units are printer's points;
/// rank 0 sits at the top and y strictly decreases as rank grows.
struct LayeredLayout {
    std::map<std::string, int> rank;
    std::map<std::string, int> order;         // position within the rank row
    std::map<std::string, Point> position;    // node centers
    std::map<EdgeKey, std::vector<Point>> routes; // border-to-border polylines
    std::set<EdgeKey> reversed;               // edges reversed for layout only
};

// Node geometry shared by layout and the TikZ emitter.
double node_width(const StatementNode& node);
constexpr double kNodeHeight = 36.0;
constexpr double kRankSeparation = 72.0;
constexpr double kNodeGap = 24.0;
constexpr double kComponentGap = 48.0;

/// Edges that point against the DFS orientation; reversed during rank
/// assignment so cyclic graphs still stratify.
std::set<EdgeKey> find_back_edges(const DepGraph& graph);

/// rank(v) = longest path from any source, per weakly connected component.
std::map<std::string, int> assign_ranks(const DepGraph& graph, const std::set<EdgeKey>& back_edges);

/// Lexicographic start, then eight alternating down/up median sweeps,
/// ties broken by id. Deterministic.
std::map<std::string, int> order_within_ranks(const DepGraph& graph,
                                              const std::map<std::string, int>& ranks,
                                              const std::set<EdgeKey>& back_edges);

LayeredLayout assign_coordinates(const DepGraph& graph, const std::map<std::string, int>& ranks,
                                 const std::map<std::string, int>& orders,
                                 const std::set<EdgeKey>& back_edges, const StyleConfig& style);

/// The full pipeline: back edges, ranks, ordering, coordinates.
LayeredLayout layout_graph(const DepGraph& graph, const StyleConfig& style);

} // namespace knowtex
