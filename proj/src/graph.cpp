#include "knowtex/graph.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace knowtex {

const char* to_string(EdgeKind kind) { return kind == EdgeKind::Logical ? "Logical" : "Conceptual"; }

bool DepGraph::has_edge(const std::string& from, const std::string& to) const {
    return find_edge(from, to) != nullptr;
}

const Edge* DepGraph::find_edge(const std::string& from, const std::string& to) const {
    for (const Edge& e : edges) {
        if (e.from == from && e.to == to) return &e;
    }
    return nullptr;
}

std::string display_name(const std::string& id) {
    std::size_t colon = id.find(':');
    if (colon == std::string::npos) return id;
    std::string rest = id.substr(colon + 1);
    return rest.empty() ? id : rest;
}

std::vector<ProofBinding> associate_proofs(std::span<const EnvOccurrence> occs,
                                           Diagnostics& diags) {
    // Labels of statement occurrences that can become nodes.
    std::map<std::string, std::size_t> by_label;
    for (std::size_t k = 0; k < occs.size(); ++k) {
        const EnvOccurrence& occ = occs[k];
        if (occ.is_proof() || !occ.label || occ.label->empty()) continue;
        if (!by_label.count(*occ.label)) by_label[*occ.label] = k;
    }

    std::vector<ProofBinding> bindings;
    std::vector<bool> bound(occs.size(), false);
    for (std::size_t k = 0; k < occs.size(); ++k) {
        const EnvOccurrence& proof = occs[k];
        if (!proof.is_proof()) continue;

        if (proof.proves) {
            auto it = by_label.find(*proof.proves);
            if (it == by_label.end()) {
                diags.push_back({Severity::Warning,
                                 "\\proves{" + *proof.proves +
                                     "} does not name a known statement; proof left unbound",
                                 proof.begin});
            } else if (bound[it->second]) {
                diags.push_back({Severity::Warning,
                                 "statement '" + *proof.proves +
                                     "' already has a proof; extra proof left unbound",
                                 proof.begin});
            } else {
                bound[it->second] = true;
                bindings.push_back({it->second, k});
            }
            continue;
        }

        // Default: nearest preceding unproved labeled statement in the same
        // chapter. Definitions are never proof targets by default.
        std::optional<std::size_t> target;
        for (std::size_t j = k; j-- > 0;) {
            const EnvOccurrence& cand = occs[j];
            if (cand.is_proof() || cand.chapter != proof.chapter) continue;
            if (!cand.label || cand.label->empty() || !cand.kind) continue;
            if (*cand.kind == NodeKind::Definition || bound[j]) continue;
            target = j;
            break;
        }
        if (!target) {
            diags.push_back({Severity::Warning, "orphan proof: no statement to attach it to",
                             proof.begin});
            continue;
        }
        const EnvOccurrence& stmt = occs[*target];
        if (stmt.kind == NodeKind::Remark || stmt.kind == NodeKind::Example) {
            diags.push_back({Severity::Warning,
                             "proof binds to nearest " + std::string(to_string(*stmt.kind)) +
                                 " '" + *stmt.label + "'; use \\proves to disambiguate",
                             proof.begin});
        }
        bound[*target] = true;
        bindings.push_back({*target, k});
    }
    return bindings;
}

namespace {

void add_or_merge_edge(std::vector<Edge>& edges, Edge edge) {
    for (Edge& existing : edges) {
        if (existing.from == edge.from && existing.to == edge.to) {
            // A proof-level dependency subsumes a statement-level one.
            if (edge.kind == EdgeKind::Logical) existing.kind = EdgeKind::Logical;
            return;
        }
    }
    edges.push_back(std::move(edge));
}

} // namespace

DepGraph build_graph(std::span<const EnvOccurrence> occs, std::span<const ProofBinding> bindings,
                     UnresolvedPolicy policy) {
    DepGraph graph;

    std::map<std::size_t, std::size_t> proof_of; // statement occ index -> proof occ index
    for (const ProofBinding& b : bindings) proof_of[b.statement_index] = b.proof_index;

    // Nodes first; \uses may reference labels defined later in the document.
    std::map<std::string, std::size_t> node_occ;
    for (std::size_t k = 0; k < occs.size(); ++k) {
        const EnvOccurrence& occ = occs[k];
        if (occ.is_proof()) continue;
        if (!occ.label || occ.label->empty()) {
            graph.diagnostics.push_back({Severity::Warning,
                                         "unlabeled " + std::string(to_string(*occ.kind)) +
                                             " produces no node",
                                         occ.begin});
            continue;
        }
        if (graph.nodes.count(*occ.label)) {
            graph.diagnostics.push_back({Severity::Warning,
                                         "duplicate label '" + *occ.label +
                                             "'; keeping the first occurrence",
                                         occ.begin});
            continue;
        }
        StatementNode node;
        node.id = *occ.label;
        node.kind = occ.kind;
        node.chapter = occ.chapter;
        node.title = occ.title;
        node.display = display_name(node.id);
        node.source_offset = occ.begin;
        node.statement_uses = occ.uses;
        auto it = proof_of.find(k);
        if (it != proof_of.end()) {
            node.has_proof = true;
            node.proof_uses = occs[it->second].uses;
        }
        node_occ[node.id] = k;
        graph.nodes.emplace(node.id, std::move(node));
    }

    // Self-references violate the node invariants; scrub them up front.
    for (auto& [id, node] : graph.nodes) {
        auto scrub = [&](std::vector<std::string>& list) {
            auto it = std::find(list.begin(), list.end(), id);
            if (it == list.end()) return;
            graph.diagnostics.push_back({Severity::Warning,
                                         "'" + id + "' uses itself; self-loop dropped",
                                         node.source_offset});
            list.erase(std::remove(list.begin(), list.end(), id), list.end());
        };
        scrub(node.statement_uses);
        scrub(node.proof_uses);
    }

    // Edges, in document order of the declaring occurrence so diagnostics
    // read top to bottom.
    auto resolve = [&](const std::string& target, const StatementNode& dependent,
                       std::size_t offset) -> bool {
        if (graph.nodes.count(target)) return true;
        if (policy == UnresolvedPolicy::Phantom) {
            StatementNode phantom;
            phantom.id = target;
            phantom.phantom = true;
            phantom.chapter = dependent.chapter;
            phantom.display = display_name(target);
            phantom.source_offset = offset;
            graph.nodes.emplace(target, std::move(phantom));
            return true;
        }
        graph.diagnostics.push_back({Severity::Warning,
                                     "\\uses target '" + target + "' is not defined here; edge dropped",
                                     offset});
        return false;
    };

    for (std::size_t k = 0; k < occs.size(); ++k) {
        const EnvOccurrence& occ = occs[k];
        if (occ.is_proof() || !occ.label) continue;
        auto creator = node_occ.find(*occ.label);
        if (creator == node_occ.end() || creator->second != k) continue;
        auto node_it = graph.nodes.find(*occ.label);
        StatementNode& node = node_it->second;

        for (std::size_t u = 0; u < occ.uses.size(); ++u) {
            const std::string& target = occ.uses[u];
            if (target == node.id) continue; // scrubbed above
            if (resolve(target, node, occ.use_offsets[u]))
                add_or_merge_edge(graph.edges, {target, node.id, EdgeKind::Conceptual});
        }
        auto pit = proof_of.find(k);
        if (pit == proof_of.end()) continue;
        const EnvOccurrence& proof = occs[pit->second];
        for (std::size_t u = 0; u < proof.uses.size(); ++u) {
            const std::string& target = proof.uses[u];
            if (target == node.id) continue;
            if (resolve(target, node, proof.use_offsets[u]))
                add_or_merge_edge(graph.edges, {target, node.id, EdgeKind::Logical});
        }
    }

    std::sort(graph.edges.begin(), graph.edges.end());
    return graph;
}

namespace {

// Tarjan over ids in lexicographic order; deterministic component output.
struct SccFinder {
    const std::map<std::string, std::vector<std::string>>& adj;
    std::map<std::string, int> index, lowlink;
    std::map<std::string, bool> on_stack;
    std::vector<std::string> stack;
    int counter = 0;
    std::vector<std::vector<std::string>> components;

    void strongconnect(const std::string& v) {
        index[v] = lowlink[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        auto it = adj.find(v);
        if (it != adj.end()) {
            for (const std::string& w : it->second) {
                if (!index.count(w)) {
                    strongconnect(w);
                    lowlink[v] = std::min(lowlink[v], lowlink[w]);
                } else if (on_stack[w]) {
                    lowlink[v] = std::min(lowlink[v], index[w]);
                }
            }
        }
        if (lowlink[v] == index[v]) {
            std::vector<std::string> comp;
            while (true) {
                std::string w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp.push_back(w);
                if (w == v) break;
            }
            std::sort(comp.begin(), comp.end());
            components.push_back(std::move(comp));
        }
    }
};

std::vector<std::vector<std::string>> strongly_connected_components(const DepGraph& graph) {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [id, node] : graph.nodes) adj[id];
    for (const Edge& e : graph.edges) adj[e.from].push_back(e.to);
    SccFinder finder{adj};
    for (const auto& [id, _] : adj) {
        if (!finder.index.count(id)) finder.strongconnect(id);
    }
    std::sort(finder.components.begin(), finder.components.end());
    return finder.components;
}

} // namespace

std::vector<std::vector<std::string>> detect_cycles(DepGraph& graph) {
    std::vector<std::vector<std::string>> nontrivial;
    for (auto& comp : strongly_connected_components(graph)) {
        if (comp.size() < 2) continue;
        std::string members;
        for (const std::string& id : comp) {
            if (!members.empty()) members += ", ";
            members += id;
        }
        std::size_t offset = graph.nodes.at(comp.front()).source_offset;
        graph.diagnostics.push_back(
            {Severity::Warning, "dependency cycle among: " + members, offset});
        nontrivial.push_back(std::move(comp));
    }
    return nontrivial;
}

DepGraph transitive_reduce(const DepGraph& graph) {
    DepGraph out;
    out.nodes = graph.nodes;
    out.diagnostics = graph.diagnostics;
    out.reduced = true;

    auto components = strongly_connected_components(graph);
    std::map<std::string, std::size_t> comp_of;
    for (std::size_t c = 0; c < components.size(); ++c) {
        for (const std::string& id : components[c]) comp_of[id] = c;
    }

    // Condensation adjacency (a DAG), then strict reachability per component.
    std::size_t n = components.size();
    std::vector<std::set<std::size_t>> succ(n);
    for (const Edge& e : graph.edges) {
        std::size_t cu = comp_of[e.from], cv = comp_of[e.to];
        if (cu != cv) succ[cu].insert(cv);
    }
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    std::function<void(std::size_t)> visit = [&](std::size_t c) {
        if (!reach[c].empty() && reach[c][c]) return; // marker: already computed
        reach[c][c] = true;                           // temporary self-mark
        for (std::size_t s : succ[c]) {
            visit(s);
            reach[c][s] = true;
            for (std::size_t t = 0; t < n; ++t) {
                if (reach[s][t]) reach[c][t] = true;
            }
        }
    };
    for (std::size_t c = 0; c < n; ++c) visit(c);
    for (std::size_t c = 0; c < n; ++c) reach[c][c] = false; // drop the marker

    // An inter-component edge survives only when no other successor also
    // reaches its target; intra-component edges always survive.
    for (const Edge& e : graph.edges) {
        std::size_t cu = comp_of[e.from], cv = comp_of[e.to];
        if (cu == cv) {
            out.edges.push_back(e);
            continue;
        }
        bool redundant = false;
        for (std::size_t cx : succ[cu]) {
            if (cx != cv && reach[cx][cv]) {
                redundant = true;
                break;
            }
        }
        if (!redundant) out.edges.push_back(e);
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

std::vector<EnvOccurrence> filter_chapter(std::vector<EnvOccurrence> occs, int chapter) {
    std::erase_if(occs, [&](const EnvOccurrence& occ) { return occ.chapter != chapter; });
    return occs;
}

} // namespace knowtex
