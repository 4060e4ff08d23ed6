#pragma once

#include <map>
#include <string>
#include <string_view>

#include "knowtex/graph.hpp"
#include "knowtex/layout.hpp"
#include "knowtex/style.hpp"

namespace knowtex {

inline constexpr std::string_view kDefaultRendererUrl =
    "https://cdn.jsdelivr.net/npm/@viz-js/viz@3/lib/viz-standalone.js";

/// DOT/TikZ-safe node names: ':' and anything outside [A-Za-z0-9_] become
/// '_'. Collisions get a numeric suffix and a warning; nothing merges
/// silently. Deterministic for a given node set.
std::map<std::string, std::string> sanitize_ids(const DepGraph& graph,
                                                Diagnostics* diags = nullptr);

/// One digraph, nodes in lexicographic id order, edges in lexicographic
/// (from, to) order. Byte-deterministic.
std::string emit_dot(const DepGraph& graph, const StyleConfig& style);

/// A tikzpicture with one \node per graph node at its layout position and
/// one \draw per edge. Needs the shapes.geometric and arrows TikZ libraries
/// plus dvips color names. Throws std::invalid_argument when the layout was
/// computed for a different node set.
std::string emit_tikz(const DepGraph& graph, const LayeredLayout& layout,
                      const StyleConfig& style);

/// Self-contained page embedding the DOT source verbatim plus one external
/// script reference to a client-side Graphviz renderer.
std::string emit_html(const DepGraph& graph, const StyleConfig& style,
                      std::string_view renderer_url = kDefaultRendererUrl);

} // namespace knowtex
