#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "knowtex/diagnostics.hpp"
#include "knowtex/scan.hpp"

namespace knowtex {

enum class EdgeKind { Conceptual, Logical };

const char* to_string(EdgeKind kind);

/// A labeled statement in the graph. Phantom nodes stand in for `\uses`
/// targets that were never defined in the scanned scope; they carry no kind.
struct StatementNode {
    std::string id;
    std::optional<NodeKind> kind; // empty only when phantom
    bool phantom = false;
    int chapter = 0;
    std::optional<std::string> title;
    std::string display;
    std::vector<std::string> statement_uses;
    std::vector<std::string> proof_uses;
    bool has_proof = false;
    std::size_t source_offset = 0;
};

/// Directed dependency: the prerequisite points at the statement that uses it.
struct Edge {
    std::string from;
    std::string to;
    EdgeKind kind;

    friend bool operator==(const Edge& a, const Edge& b) {
        return a.from == b.from && a.to == b.to && a.kind == b.kind;
    }
    friend std::strong_ordering operator<=>(const Edge& a, const Edge& b) {
        if (auto c = a.from <=> b.from; c != 0) return c;
        return a.to <=> b.to;
    }
};

struct DepGraph {
    std::map<std::string, StatementNode> nodes;
    std::vector<Edge> edges; // sorted by (from, to); at most one edge per pair
    bool reduced = false;
    Diagnostics diagnostics;

    bool has_edge(const std::string& from, const std::string& to) const;
    const Edge* find_edge(const std::string& from, const std::string& to) const;
};

/// Pairs a proof occurrence with the statement occurrence it proves,
/// by index into the occurrence list handed to associate_proofs.
struct ProofBinding {
    std::size_t statement_index;
    std::size_t proof_index;
};

/// Binds each proof to the statement named by its \proves argument, or by
/// default to the nearest preceding unproved, labeled, non-definition
/// statement in the same chapter.
std::vector<ProofBinding> associate_proofs(std::span<const EnvOccurrence> occs,
                                           Diagnostics& diags);

enum class UnresolvedPolicy { Drop, Phantom };

DepGraph build_graph(std::span<const EnvOccurrence> occs, std::span<const ProofBinding> bindings,
                     UnresolvedPolicy policy);

/// Returns the nontrivial strongly connected components (size > 1), each
/// sorted lexicographically, and appends one warning per component.
std::vector<std::vector<std::string>> detect_cycles(DepGraph& graph);

/// Removes every inter-component edge already implied by a longer path,
/// working on the condensation so cyclic input degrades gracefully.
/// Reachability is preserved exactly; surviving edges keep their kind.
DepGraph transitive_reduce(const DepGraph& graph);

/// Keeps only occurrences whose chapter matches; the rest of the pipeline
/// then treats cross-chapter \uses targets per the unresolved-label policy.
std::vector<EnvOccurrence> filter_chapter(std::vector<EnvOccurrence> occs, int chapter);

/// Display name rule: everything up to and including the first ':' is
/// stripped, falling back to the whole id when that would leave nothing.
std::string display_name(const std::string& id);

} // namespace knowtex
