#include "knowtex/style.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace knowtex {

const char* to_string(NodeShape shape) {
    switch (shape) {
    case NodeShape::Box: return "box";
    case NodeShape::Ellipse: return "ellipse";
    case NodeShape::Diamond: return "diamond";
    }
    return "?";
}

const char* to_string(LineStyle style) {
    return style == LineStyle::Dashed ? "dashed" : "solid";
}

const NodeStyle& StyleConfig::for_node(const StatementNode& node) const {
    if (node.phantom || !node.kind) return phantom;
    return nodes.at(*node.kind);
}

StyleConfig default_style() {
    StyleConfig s;
    s.nodes[NodeKind::Definition] = {NodeShape::Box, "Purple", "Lavender"};
    s.nodes[NodeKind::Theorem] = {NodeShape::Ellipse, "Blue", "SkyBlue"};
    s.nodes[NodeKind::Lemma] = {NodeShape::Ellipse, "Blue", "SkyBlue"};
    s.nodes[NodeKind::Proposition] = {NodeShape::Diamond, "Blue", "SkyBlue"};
    s.nodes[NodeKind::Corollary] = {NodeShape::Ellipse, "Blue", "White"};
    s.nodes[NodeKind::Construction] = {NodeShape::Diamond, "Blue", "White"};
    s.nodes[NodeKind::Example] = {NodeShape::Ellipse, "Gray", "White"};
    s.nodes[NodeKind::Remark] = {NodeShape::Box, "Gray", "White"};
    s.edges[EdgeKind::Conceptual] = LineStyle::Dashed;
    s.edges[EdgeKind::Logical] = LineStyle::Solid;
    s.phantom = {NodeShape::Ellipse, "Gray", "White"};
    s.arrowhead = "stealth";
    return s;
}

namespace {

std::optional<NodeShape> parse_shape(const std::string& name) {
    if (name == "box") return NodeShape::Box;
    if (name == "ellipse") return NodeShape::Ellipse;
    if (name == "diamond") return NodeShape::Diamond;
    return std::nullopt;
}

std::optional<LineStyle> parse_line_style(const std::string& name) {
    if (name == "solid") return LineStyle::Solid;
    if (name == "dashed") return LineStyle::Dashed;
    return std::nullopt;
}

bool apply_node_entry(StyleConfig& config, const std::string& kind_name,
                      const nlohmann::json& entry, std::string& error) {
    NodeStyle* target = nullptr;
    if (kind_name == "phantom") {
        target = &config.phantom;
    } else if (auto kind = parse_node_kind(kind_name)) {
        target = &config.nodes.at(*kind);
    } else {
        error = "nodes." + kind_name + ": unknown node kind";
        return false;
    }
    if (!entry.is_object()) {
        error = "nodes." + kind_name + ": expected an object";
        return false;
    }
    for (const auto& [key, value] : entry.items()) {
        if (!value.is_string()) {
            error = "nodes." + kind_name + "." + key + ": expected a string";
            return false;
        }
        std::string text = value.get<std::string>();
        if (key == "shape") {
            auto shape = parse_shape(text);
            if (!shape) {
                error = "nodes." + kind_name + ".shape: unknown shape '" + text + "'";
                return false;
            }
            target->shape = *shape;
        } else if (key == "color") {
            target->color = text;
        } else if (key == "fill") {
            target->fill = text;
        } else {
            error = "nodes." + kind_name + "." + key + ": unknown attribute";
            return false;
        }
    }
    return true;
}

bool apply_edge_entry(StyleConfig& config, const std::string& kind_name,
                      const nlohmann::json& entry, std::string& error) {
    EdgeKind kind;
    if (kind_name == "conceptual") kind = EdgeKind::Conceptual;
    else if (kind_name == "logical") kind = EdgeKind::Logical;
    else {
        error = "edges." + kind_name + ": unknown edge kind";
        return false;
    }
    if (!entry.is_object()) {
        error = "edges." + kind_name + ": expected an object";
        return false;
    }
    for (const auto& [key, value] : entry.items()) {
        if (key != "style") {
            error = "edges." + kind_name + "." + key + ": unknown attribute";
            return false;
        }
        if (!value.is_string()) {
            error = "edges." + kind_name + ".style: expected a string";
            return false;
        }
        auto style = parse_line_style(value.get<std::string>());
        if (!style) {
            error = "edges." + kind_name + ".style: unknown style '" +
                    value.get<std::string>() + "'";
            return false;
        }
        config.edges.at(kind) = *style;
    }
    return true;
}

} // namespace

std::optional<StyleConfig> parse_style(std::string_view json_text, std::string& error) {
    nlohmann::json doc = nlohmann::json::parse(json_text, nullptr, false);
    if (doc.is_discarded()) {
        error = "malformed JSON";
        return std::nullopt;
    }
    if (!doc.is_object()) {
        error = "top level: expected an object";
        return std::nullopt;
    }
    StyleConfig config = default_style();
    for (const auto& [section, body] : doc.items()) {
        if (section == "nodes") {
            if (!body.is_object()) {
                error = "nodes: expected an object";
                return std::nullopt;
            }
            for (const auto& [kind_name, entry] : body.items()) {
                if (!apply_node_entry(config, kind_name, entry, error)) return std::nullopt;
            }
        } else if (section == "edges") {
            if (!body.is_object()) {
                error = "edges: expected an object";
                return std::nullopt;
            }
            for (const auto& [kind_name, entry] : body.items()) {
                if (!apply_edge_entry(config, kind_name, entry, error)) return std::nullopt;
            }
        } else if (section == "arrowhead") {
            if (!body.is_string()) {
                error = "arrowhead: expected a string";
                return std::nullopt;
            }
            config.arrowhead = body.get<std::string>();
        } else {
            error = section + ": unknown section";
            return std::nullopt;
        }
    }
    return config;
}

std::optional<StyleConfig> load_style(const std::string& path, std::string& error) {
    std::ifstream in(path, std::ios::in | std::ios::binary);
    if (!in) {
        error = "cannot read style file '" + path + "'";
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_style(buf.str(), error);
}

} // namespace knowtex
