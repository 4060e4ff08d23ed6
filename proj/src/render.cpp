#include "knowtex/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>

namespace knowtex {

namespace {

bool dot_safe(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

std::string escape_dot_string(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

std::string escape_latex_text(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '#': case '$': case '%': case '&': case '_': case '{': case '}':
            out += '\\';
            out += c;
            break;
        case '~': out += "\\textasciitilde{}"; break;
        case '^': out += "\\textasciicircum{}"; break;
        case '\\': out += "\\textbackslash{}"; break;
        default: out += c;
        }
    }
    return out;
}

// Fixed-point, locale-independent: up to three decimals, at least one.
std::string format_points(double v) {
    long long scaled = std::llround(v * 1000.0);
    bool negative = scaled < 0;
    unsigned long long mag = negative ? -static_cast<unsigned long long>(scaled) : scaled;
    unsigned long long whole = mag / 1000, frac = mag % 1000;
    std::string digits = std::to_string(frac);
    digits.insert(0, 3 - digits.size(), '0');
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    std::string out = negative && (whole || frac) ? "-" : "";
    out += std::to_string(whole) + "." + digits;
    return out;
}

const char* tikz_shape(NodeShape shape) {
    switch (shape) {
    case NodeShape::Box: return "rectangle";
    case NodeShape::Ellipse: return "ellipse";
    case NodeShape::Diamond: return "diamond";
    }
    return "rectangle";
}

const char* dot_shape(NodeShape shape) {
    switch (shape) {
    case NodeShape::Box: return "box";
    case NodeShape::Ellipse: return "ellipse";
    case NodeShape::Diamond: return "diamond";
    }
    return "box";
}

} // namespace

std::map<std::string, std::string> sanitize_ids(const DepGraph& graph, Diagnostics* diags) {
    std::map<std::string, std::string> names;
    std::set<std::string> used;
    for (const auto& [id, node] : graph.nodes) {
        std::string base;
        for (char c : id) base += dot_safe(c) ? c : '_';
        if (!base.empty() && base[0] >= '0' && base[0] <= '9') base.insert(base.begin(), '_');
        std::string name = base;
        for (int k = 2; used.count(name); ++k) name = base + "_" + std::to_string(k);
        if (name != base && diags) {
            diags->push_back({Severity::Warning,
                              "node id '" + id + "' sanitizes to a name already in use; using '" +
                                  name + "'",
                              node.source_offset});
        }
        used.insert(name);
        names[id] = std::move(name);
    }
    return names;
}

std::string emit_dot(const DepGraph& graph, const StyleConfig& style) {
    auto names = sanitize_ids(graph);
    std::ostringstream out;
    out << "digraph G {\n";
    for (const auto& [id, node] : graph.nodes) {
        const NodeStyle& ns = style.for_node(node);
        out << "  " << names.at(id) << " [label=\"" << escape_dot_string(node.display)
            << "\", tooltip=\"" << escape_dot_string(id) << "\", shape=" << dot_shape(ns.shape)
            << ", color=" << ns.color << ", fillcolor=" << ns.fill
            << (node.phantom ? ", style=\"filled,dashed\"" : ", style=filled") << "];\n";
    }
    for (const Edge& e : graph.edges) {
        out << "  " << names.at(e.from) << " -> " << names.at(e.to);
        if (style.edges.at(e.kind) == LineStyle::Dashed) out << " [style=dashed]";
        out << ";\n";
    }
    out << "}\n";
    return out.str();
}

std::string emit_tikz(const DepGraph& graph, const LayeredLayout& layout,
                      const StyleConfig& style) {
    if (layout.position.size() != graph.nodes.size()) {
        throw std::invalid_argument("layout does not match graph node set");
    }
    for (const auto& [id, node] : graph.nodes) {
        if (!layout.position.count(id)) {
            throw std::invalid_argument("layout is missing node '" + id + "'");
        }
    }

    auto names = sanitize_ids(graph);
    std::ostringstream out;
    out << "\\begin{tikzpicture}[line join=bevel]\n";
    for (const auto& [id, node] : graph.nodes) {
        const NodeStyle& ns = style.for_node(node);
        const Point& p = layout.position.at(id);
        out << "  \\node (" << names.at(id) << ") at (" << format_points(p.x) << "bp,"
            << format_points(p.y) << "bp) [draw=" << ns.color << ",fill=" << ns.fill << ","
            << tikz_shape(ns.shape) << (node.phantom ? ",dashed" : "") << "] {"
            << escape_latex_text(node.display) << "};\n";
    }
    for (const Edge& e : graph.edges) {
        out << "  \\draw [-" << style.arrowhead << "'";
        if (style.edges.at(e.kind) == LineStyle::Dashed) out << ",dashed";
        out << "] (" << names.at(e.from) << ") -- (" << names.at(e.to) << ");\n";
    }
    out << "\\end{tikzpicture}\n";
    return out.str();
}

namespace {

std::string escape_js_string(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '<': out += "\\u003c"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string emit_html(const DepGraph& graph, const StyleConfig& style,
                      std::string_view renderer_url) {
    std::string dot = emit_dot(graph, style);
    auto names = sanitize_ids(graph);
    bool empty = graph.nodes.empty();

    std::ostringstream out;
    out << "<!DOCTYPE html>\n"
           "<html lang=\"en\">\n"
           "<head>\n"
           "<meta charset=\"utf-8\">\n"
           "<title>Dependency graph</title>\n"
           "<style>\n"
           "  body { font-family: sans-serif; margin: 24px; }\n"
           "  #graph svg { max-width: 100%; height: auto; }\n"
           "  .placeholder { color: #777; font-style: italic; }\n"
           "</style>\n"
           "</head>\n"
           "<body>\n"
           "<h1>Dependency graph</h1>\n";
    out << "<div id=\"graph\"><p class=\"placeholder\">"
        << (empty ? "(empty graph)" : "Rendering&hellip;") << "</p></div>\n";
    out << "<script type=\"text/vnd.graphviz\" id=\"dot-source\">\n" << dot << "</script>\n";
    out << "<script src=\"" << renderer_url << "\"></script>\n";
    if (!empty) {
        out << "<script>\n"
               "(function () {\n"
               "  var labels = {";
        bool first = true;
        for (const auto& [id, name] : names) {
            if (!first) out << ", ";
            first = false;
            out << "\"" << escape_js_string(name) << "\": \"" << escape_js_string(id) << "\"";
        }
        out << "};\n"
               "  var dot = document.getElementById(\"dot-source\").textContent;\n"
               "  Viz.instance().then(function (viz) {\n"
               "    var svg = viz.renderSVGElement(dot);\n"
               "    svg.querySelectorAll(\"g.node > title\").forEach(function (t) {\n"
               "      if (labels[t.textContent]) t.textContent = labels[t.textContent];\n"
               "    });\n"
               "    document.getElementById(\"graph\").replaceChildren(svg);\n"
               "  });\n"
               "})();\n"
               "</script>\n";
    }
    out << "</body>\n</html>\n";
    return out.str();
}

} // namespace knowtex
