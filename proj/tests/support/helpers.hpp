#pragma once

// Shared plumbing for unit and acceptance tests: fixture loading, one-call
// scan/build wrappers, oracle adapters, and string-level output checkers.

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "knowtex/graph.hpp"
#include "knowtex/scan.hpp"
#include "oracles.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(KNOWTEX_FIXTURE_DIR "/") + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct ScanResult {
    std::string masked;
    std::vector<knowtex::ChapterSlice> chapters;
    std::vector<knowtex::EnvOccurrence> occs;
    knowtex::Diagnostics diags;
};

inline ScanResult scan_text(const std::string& text,
                            const knowtex::EnvironmentConfig& config =
                                knowtex::EnvironmentConfig::defaults()) {
    ScanResult result;
    result.masked = knowtex::mask_source(text);
    result.chapters = knowtex::segment_chapters(result.masked, result.diags);
    result.occs =
        knowtex::scan_environments(result.masked, config, result.chapters, result.diags);
    knowtex::annotate_occurrences(result.occs, result.masked, result.diags);
    knowtex::report_stray_uses(result.masked, result.occs, result.diags);
    return result;
}

struct BuildResult {
    ScanResult scan;
    knowtex::DepGraph graph;
};

inline BuildResult build_text(const std::string& text,
                              knowtex::UnresolvedPolicy policy = knowtex::UnresolvedPolicy::Drop,
                              std::optional<int> chapter = std::nullopt) {
    BuildResult result;
    result.scan = scan_text(text);
    auto occs = result.scan.occs;
    if (chapter) occs = knowtex::filter_chapter(std::move(occs), *chapter);
    auto bindings = knowtex::associate_proofs(occs, result.scan.diags);
    result.graph = knowtex::build_graph(occs, bindings, policy);
    return result;
}

using EdgeTriple = std::tuple<std::string, std::string, knowtex::EdgeKind>;

inline std::set<EdgeTriple> edge_set(const knowtex::DepGraph& graph) {
    std::set<EdgeTriple> out;
    for (const auto& e : graph.edges) out.insert({e.from, e.to, e.kind});
    return out;
}

inline std::set<std::string> node_ids(const knowtex::DepGraph& graph) {
    std::set<std::string> out;
    for (const auto& [id, node] : graph.nodes) out.insert(id);
    return out;
}

/// Integer view of a graph for the oracle helpers; ids indexed in
/// lexicographic order.
struct IndexedGraph {
    std::vector<std::string> ids;
    std::map<std::string, int> index;
    oracle::EdgeSet edges;
};

inline IndexedGraph index_graph(const knowtex::DepGraph& graph) {
    IndexedGraph out;
    for (const auto& [id, node] : graph.nodes) {
        out.index[id] = static_cast<int>(out.ids.size());
        out.ids.push_back(id);
    }
    for (const auto& e : graph.edges) {
        out.edges.insert({out.index.at(e.from), out.index.at(e.to)});
    }
    return out;
}

/// Integer edges of a graph built by make_graph, recovered from the "n<i>"
/// names. Unlike index_graph, this keeps the original numbering even past
/// ten nodes, where lexicographic id order stops matching numeric order.
inline oracle::EdgeSet int_edges(const knowtex::DepGraph& graph) {
    oracle::EdgeSet out;
    for (const auto& e : graph.edges) {
        out.insert({std::stoi(e.from.substr(1)), std::stoi(e.to.substr(1))});
    }
    return out;
}

/// Builds a synthetic graph over nodes n0..n{count-1} with the given integer
/// edges, for tests that do not care where a graph came from.
inline knowtex::DepGraph make_graph(int count, const oracle::EdgeSet& edges,
                                    knowtex::EdgeKind kind = knowtex::EdgeKind::Conceptual) {
    knowtex::DepGraph graph;
    auto name = [](int i) { return "n" + std::to_string(i); };
    for (int i = 0; i < count; ++i) {
        knowtex::StatementNode node;
        node.id = name(i);
        node.kind = knowtex::NodeKind::Lemma;
        node.display = node.id;
        graph.nodes[node.id] = node;
    }
    for (const auto& [u, v] : edges) graph.edges.push_back({name(u), name(v), kind});
    std::sort(graph.edges.begin(), graph.edges.end());
    return graph;
}

// --- string-level output checkers (independent of the emitters) ---

/// Accepts the emitted DOT dialect: a digraph whose node statements precede
/// edge statements and whose edges reference declared nodes. Assumes labels
/// never contain " -> ", which holds for every fixture here.
inline bool dot_well_formed(const std::string& dot, std::string* why = nullptr) {
    auto fail = [&](const std::string& message) {
        if (why) *why = message;
        return false;
    };
    std::istringstream in(dot);
    std::string line;
    if (!std::getline(in, line) || line != "digraph G {") return fail("missing digraph header");
    std::set<std::string> declared;
    bool closed = false;
    int brace_depth = 1;
    while (std::getline(in, line)) {
        if (line == "}") {
            closed = true;
            brace_depth--;
            continue;
        }
        if (closed) return fail("content after closing brace");
        if (line.rfind("  ", 0) != 0) return fail("unindented statement: " + line);
        if (line.empty() || line.back() != ';') return fail("statement missing ';': " + line);
        std::string body = line.substr(2, line.size() - 3);
        auto arrow = body.find(" -> ");
        if (arrow == std::string::npos) {
            auto space = body.find(' ');
            declared.insert(body.substr(0, space));
        } else {
            std::string from = body.substr(0, arrow);
            std::string rest = body.substr(arrow + 4);
            std::string to = rest.substr(0, rest.find(' '));
            if (!declared.count(from)) return fail("edge from undeclared node " + from);
            if (!declared.count(to)) return fail("edge to undeclared node " + to);
        }
    }
    if (!closed || brace_depth != 0) return fail("unbalanced braces");
    return true;
}

/// Checks environment balance and that every \draw references declared
/// \node names.
inline bool tikz_well_formed(const std::string& tikz, std::string* why = nullptr) {
    auto fail = [&](const std::string& message) {
        if (why) *why = message;
        return false;
    };
    std::istringstream in(tikz);
    std::string line;
    if (!std::getline(in, line) || line != "\\begin{tikzpicture}[line join=bevel]") {
        return fail("missing tikzpicture begin");
    }
    std::set<std::string> declared;
    bool ended = false;
    auto paren_name = [](const std::string& text, std::size_t from,
                         std::string& name) -> bool {
        auto open = text.find('(', from);
        if (open == std::string::npos) return false;
        auto close = text.find(')', open);
        if (close == std::string::npos) return false;
        name = text.substr(open + 1, close - open - 1);
        return true;
    };
    while (std::getline(in, line)) {
        if (line == "\\end{tikzpicture}") {
            ended = true;
            continue;
        }
        if (ended) return fail("content after tikzpicture end");
        if (line.rfind("  \\node ", 0) == 0) {
            std::string name;
            if (!paren_name(line, 0, name)) return fail("node without name: " + line);
            declared.insert(name);
        } else if (line.rfind("  \\draw ", 0) == 0) {
            std::string from, to;
            auto dashes = line.find(" -- ");
            if (dashes == std::string::npos) return fail("draw without segment: " + line);
            if (!paren_name(line, line.find(']'), from) || !paren_name(line, dashes, to)) {
                return fail("draw without endpoints: " + line);
            }
            if (!declared.count(from)) return fail("draw from undeclared node " + from);
            if (!declared.count(to)) return fail("draw to undeclared node " + to);
        } else {
            return fail("unexpected line: " + line);
        }
    }
    if (!ended) return fail("missing tikzpicture end");
    return true;
}

/// Extracts the DOT block embedded by emit_html; empty string when absent.
inline std::string html_embedded_dot(const std::string& html) {
    const std::string open = "<script type=\"text/vnd.graphviz\" id=\"dot-source\">\n";
    auto start = html.find(open);
    if (start == std::string::npos) return "";
    start += open.size();
    auto end = html.find("</script>", start);
    if (end == std::string::npos) return "";
    return html.substr(start, end - start);
}

inline int count_occurrences(const std::string& text, const std::string& needle) {
    int count = 0;
    for (auto pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

} // namespace testutil
