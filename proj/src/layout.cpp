#include "knowtex/layout.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace knowtex {

double node_width(const StatementNode& node) {
    return std::max(40.0, 8.0 * static_cast<double>(node.display.size()));
}

namespace {

// Adjacency with back edges flipped so every layout edge points down-rank.
std::map<std::string, std::vector<std::string>> layout_adjacency(
    const DepGraph& graph, const std::set<EdgeKey>& back_edges) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [id, node] : graph.nodes) adj[id];
    for (const Edge& e : graph.edges) {
        if (back_edges.count({e.from, e.to}))
            adj[e.to].push_back(e.from);
        else
            adj[e.from].push_back(e.to);
    }
    for (auto& [id, out] : adj) {
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    }
    return adj;
}

const NodeStyle& style_of(const StyleConfig& style, const StatementNode& node) {
    return style.for_node(node);
}

Point border_point(Point center, double half_w, double half_h, NodeShape shape, Point toward) {
    double dx = toward.x - center.x;
    double dy = toward.y - center.y;
    if (dx == 0 && dy == 0) return center;
    double t = 0;
    switch (shape) {
    case NodeShape::Box: {
        double tx = dx != 0 ? half_w / std::abs(dx) : std::numeric_limits<double>::infinity();
        double ty = dy != 0 ? half_h / std::abs(dy) : std::numeric_limits<double>::infinity();
        t = std::min(tx, ty);
        break;
    }
    case NodeShape::Ellipse:
        t = 1.0 / std::sqrt((dx / half_w) * (dx / half_w) + (dy / half_h) * (dy / half_h));
        break;
    case NodeShape::Diamond:
        t = 1.0 / (std::abs(dx) / half_w + std::abs(dy) / half_h);
        break;
    }
    return {center.x + dx * t, center.y + dy * t};
}

} // namespace

std::set<EdgeKey> find_back_edges(const DepGraph& graph) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [id, node] : graph.nodes) adj[id];
    for (const Edge& e : graph.edges) adj[e.from].push_back(e.to);
    for (auto& [id, out] : adj) std::sort(out.begin(), out.end());

    enum class Mark { White, Gray, Black };
    std::map<std::string, Mark> mark;
    for (const auto& [id, _] : adj) mark[id] = Mark::White;

    std::set<EdgeKey> back;
    std::function<void(const std::string&)> dfs = [&](const std::string& v) {
        mark[v] = Mark::Gray;
        for (const std::string& w : adj[v]) {
            if (mark[w] == Mark::White)
                dfs(w);
            else if (mark[w] == Mark::Gray)
                back.insert({v, w});
        }
        mark[v] = Mark::Black;
    };
    for (const auto& [id, _] : adj) {
        if (mark[id] == Mark::White) dfs(id);
    }
    return back;
}

std::map<std::string, int> assign_ranks(const DepGraph& graph,
                                        const std::set<EdgeKey>& back_edges) {
    auto adj = layout_adjacency(graph, back_edges);
    std::map<std::string, int> indegree;
    for (const auto& [id, _] : adj) indegree[id] = 0;
    for (const auto& [id, out] : adj) {
        for (const std::string& w : out) indegree[w]++;
    }

    std::map<std::string, int> rank;
    std::vector<std::string> ready;
    for (const auto& [id, d] : indegree) {
        if (d == 0) {
            rank[id] = 0;
            ready.push_back(id);
        }
    }
    // Kahn order; rank(v) = longest path from a source.
    for (std::size_t head = 0; head < ready.size(); ++head) {
        const std::string v = ready[head];
        for (const std::string& w : adj[v]) {
            rank[w] = std::max(rank.count(w) ? rank[w] : 0, rank[v] + 1);
            if (--indegree[w] == 0) ready.push_back(w);
        }
    }
    return rank;
}

std::map<std::string, int> order_within_ranks(const DepGraph& graph,
                                              const std::map<std::string, int>& ranks,
                                              const std::set<EdgeKey>& back_edges) {
    auto adj = layout_adjacency(graph, back_edges);
    std::map<std::string, std::vector<std::string>> preds;
    for (const auto& [id, _] : adj) preds[id];
    for (const auto& [id, out] : adj) {
        for (const std::string& w : out) preds[w].push_back(id);
    }
    for (auto& [id, in] : preds) std::sort(in.begin(), in.end());

    int max_rank = 0;
    for (const auto& [id, r] : ranks) max_rank = std::max(max_rank, r);

    // rows[r] = node ids at rank r, initially lexicographic.
    std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(max_rank) + 1);
    for (const auto& [id, r] : ranks) rows[static_cast<std::size_t>(r)].push_back(id);
    for (auto& row : rows) std::sort(row.begin(), row.end());

    std::map<std::string, int> pos;
    auto refresh = [&](const std::vector<std::string>& row) {
        for (std::size_t k = 0; k < row.size(); ++k) pos[row[k]] = static_cast<int>(k);
    };
    for (const auto& row : rows) refresh(row);

    auto median_key = [&](const std::string& id,
                          const std::vector<std::string>& neighbors) -> double {
        std::vector<int> positions;
        for (const std::string& w : neighbors) positions.push_back(pos[w]);
        if (positions.empty()) return pos[id];
        std::sort(positions.begin(), positions.end());
        std::size_t m = positions.size();
        if (m % 2 == 1) return positions[m / 2];
        return (positions[m / 2 - 1] + positions[m / 2]) / 2.0;
    };

    auto sweep_row = [&](std::vector<std::string>& row, bool downward) {
        std::vector<std::pair<double, std::string>> keyed;
        for (const std::string& id : row) {
            keyed.emplace_back(median_key(id, downward ? preds[id] : adj[id]), id);
        }
        std::sort(keyed.begin(), keyed.end());
        for (std::size_t k = 0; k < row.size(); ++k) row[k] = keyed[k].second;
        refresh(row);
    };

    for (int sweep = 0; sweep < 8; ++sweep) {
        if (sweep % 2 == 0) {
            for (std::size_t r = 1; r < rows.size(); ++r) sweep_row(rows[r], true);
        } else {
            for (std::size_t r = rows.size(); r-- > 1;) sweep_row(rows[r - 1], false);
        }
    }
    return pos;
}

LayeredLayout assign_coordinates(const DepGraph& graph, const std::map<std::string, int>& ranks,
                                 const std::map<std::string, int>& orders,
                                 const std::set<EdgeKey>& back_edges, const StyleConfig& style) {
    LayeredLayout layout;
    layout.rank = ranks;
    layout.reversed = back_edges;
    if (graph.nodes.empty()) return layout;

    // Weakly connected components, identified by their smallest member and
    // laid out side by side in that order.
    std::map<std::string, std::vector<std::string>> undirected;
    for (const auto& [id, _] : graph.nodes) undirected[id];
    for (const Edge& e : graph.edges) {
        undirected[e.from].push_back(e.to);
        undirected[e.to].push_back(e.from);
    }
    std::map<std::string, std::string> component; // id -> smallest id in component
    for (const auto& [id, _] : undirected) {
        if (component.count(id)) continue;
        std::vector<std::string> stack{id}, members;
        component[id] = id;
        while (!stack.empty()) {
            std::string v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (const std::string& w : undirected[v]) {
                if (!component.count(w)) {
                    component[w] = id;
                    stack.push_back(w);
                }
            }
        }
        // `id` is smallest in its component: map iteration is ordered.
    }
    std::map<std::string, std::vector<std::string>> comp_members;
    for (const auto& [id, root] : component) comp_members[root].push_back(id);

    int max_rank = 0;
    for (const auto& [id, r] : ranks) max_rank = std::max(max_rank, r);

    double comp_x = 0;
    for (auto& [root, members] : comp_members) {
        // Group this component's nodes per rank, ordered by the sweep result.
        std::map<int, std::vector<std::string>> rows;
        for (const std::string& id : members) rows[ranks.at(id)].push_back(id);
        for (auto& [r, row] : rows) {
            std::sort(row.begin(), row.end(), [&](const std::string& a, const std::string& b) {
                int oa = orders.count(a) ? orders.at(a) : 0;
                int ob = orders.count(b) ? orders.at(b) : 0;
                return oa != ob ? oa < ob : a < b;
            });
        }

        std::map<int, double> row_width;
        double comp_width = 0;
        for (const auto& [r, row] : rows) {
            double w = 0;
            for (const std::string& id : row) w += node_width(graph.nodes.at(id));
            w += kNodeGap * static_cast<double>(row.size() - 1);
            row_width[r] = w;
            comp_width = std::max(comp_width, w);
        }

        for (const auto& [r, row] : rows) {
            double cursor = comp_x + (comp_width - row_width[r]) / 2.0;
            double y = (static_cast<double>(max_rank - r)) * kRankSeparation + kNodeHeight / 2.0;
            for (const std::string& id : row) {
                double w = node_width(graph.nodes.at(id));
                layout.position[id] = {cursor + w / 2.0, y};
                cursor += w + kNodeGap;
            }
        }
        comp_x += comp_width + kComponentGap;
    }

    // Final row positions, consistent with x order.
    std::map<int, std::vector<std::string>> global_rows;
    for (const auto& [id, r] : ranks) global_rows[r].push_back(id);
    for (auto& [r, row] : global_rows) {
        std::sort(row.begin(), row.end(), [&](const std::string& a, const std::string& b) {
            double xa = layout.position.at(a).x, xb = layout.position.at(b).x;
            return xa != xb ? xa < xb : a < b;
        });
        for (std::size_t k = 0; k < row.size(); ++k) layout.order[row[k]] = static_cast<int>(k);
    }

    for (const Edge& e : graph.edges) {
        const StatementNode& from = graph.nodes.at(e.from);
        const StatementNode& to = graph.nodes.at(e.to);
        Point a = layout.position.at(e.from);
        Point b = layout.position.at(e.to);
        Point start = border_point(a, node_width(from) / 2.0, kNodeHeight / 2.0,
                                   style_of(style, from).shape, b);
        Point finish = border_point(b, node_width(to) / 2.0, kNodeHeight / 2.0,
                                    style_of(style, to).shape, a);
        layout.routes[{e.from, e.to}] = {start, finish};
    }
    return layout;
}

LayeredLayout layout_graph(const DepGraph& graph, const StyleConfig& style) {
    auto back = find_back_edges(graph);
    auto ranks = assign_ranks(graph, back);
    auto orders = order_within_ranks(graph, ranks, back);
    return assign_coordinates(graph, ranks, orders, back, style);
}

} // namespace knowtex
