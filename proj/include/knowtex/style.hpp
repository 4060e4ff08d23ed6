#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "knowtex/graph.hpp"

namespace knowtex {

enum class NodeShape { Box, Ellipse, Diamond };
enum class LineStyle { Solid, Dashed };

struct NodeStyle {
    NodeShape shape = NodeShape::Box;
    std::string color = "Black";
    std::string fill = "White";
};

/// Shapes and colors per node kind plus line styles per edge kind. Color
/// names come from the dvips/svgnames vocabulary that both Graphviz and the
/// LaTeX color packages understand.
struct StyleConfig {
    std::map<NodeKind, NodeStyle> nodes;
    std::map<EdgeKind, LineStyle> edges;
    NodeStyle phantom;
    std::string arrowhead = "stealth";

    const NodeStyle& for_node(const StatementNode& node) const;
};

StyleConfig default_style();

/// Parses a style JSON document ({"nodes": {...}, "edges": {...}}) on top of
/// the defaults. Returns std::nullopt and sets `error` (with the offending
/// key path) on malformed input or unknown kind/shape/style values.
std::optional<StyleConfig> parse_style(std::string_view json_text, std::string& error);
std::optional<StyleConfig> load_style(const std::string& path, std::string& error);

const char* to_string(NodeShape shape);
const char* to_string(LineStyle style);

} // namespace knowtex
