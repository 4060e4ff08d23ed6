#pragma once

#include <cstddef>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "knowtex/diagnostics.hpp"

namespace knowtex {

enum class NodeKind {
    Definition,
    Theorem,
    Lemma,
    Proposition,
    Corollary,
    Construction,
    Example,
    Remark,
};

const char* to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view name);

/// Which environment names are scanned, and what node kind each maps to.
/// Patterns are matched against the full environment name, case-insensitively,
/// so `(thm|theorem)` accepts both spellings.
struct EnvironmentConfig {
    struct Entry {
        std::string pattern;
        NodeKind kind;
        std::regex compiled;
    };

    std::vector<Entry> entries;
    std::vector<std::string> proof_patterns;
    std::vector<std::regex> compiled_proof_patterns;

    static EnvironmentConfig defaults();

    /// Builds a config from `pattern=kind` strings. Returns std::nullopt and
    /// sets `error` when a pattern is not a valid regex or the kind is unknown.
    static std::optional<EnvironmentConfig> from_overrides(std::span<const std::string> overrides,
                                                           std::string& error);

    void add_entry(std::string pattern, NodeKind kind);
    void add_proof_pattern(std::string pattern);

    bool matches_proof(const std::string& name) const;
    /// First matching entry wins. `conflict` is set when a second entry maps
    /// the same name to a different kind.
    std::optional<NodeKind> classify(const std::string& name, bool* conflict = nullptr) const;
};

/// Span of one `\chapter{...}` in the masked text. Slices partition the
/// document; a document without chapters gets a single slice titled "".
struct ChapterSlice {
    std::string title;
    int index = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// One matched environment. `kind` is empty for proof environments.
/// Annotation fields (label, uses, proves) are filled by extract_annotations.
struct EnvOccurrence {
    std::string env_name;
    std::optional<NodeKind> kind;
    std::size_t begin = 0;      // start of \begin{...}
    std::size_t end = 0;        // one past \end{...}
    std::size_t body_begin = 0; // after \begin{...}[title]
    std::size_t body_end = 0;   // start of \end{...}
    int chapter = 0;
    std::optional<std::string> title;
    std::optional<std::string> label;
    std::vector<std::string> uses;
    std::vector<std::size_t> use_offsets; // parallel to uses
    std::optional<std::string> proves;

    bool is_proof() const { return !kind.has_value(); }
};

/// Blanks every comment (unescaped % through end of line, newline kept)
/// with spaces. Total and length-preserving, so offsets into the result
/// are offsets into the input.
std::string mask_comments(std::string_view text);

/// Blanks verbatim-like environments (verbatim, verbatim*, lstlisting)
/// including their \begin/\end markers, so literal example code cannot
/// contribute occurrences or annotations. Length-preserving.
std::string mask_verbatim(std::string_view text);

/// Comment masking followed by verbatim masking; the form the rest of the
/// pipeline scans.
std::string mask_source(std::string_view text);

std::vector<ChapterSlice> segment_chapters(std::string_view masked, Diagnostics& diags);

std::vector<EnvOccurrence> scan_environments(std::string_view masked,
                                             const EnvironmentConfig& config,
                                             std::span<const ChapterSlice> chapters,
                                             Diagnostics& diags);

/// Fills label/uses/proves for one occurrence. Commands inside any of the
/// `nested` spans (other scanned environments contained in this body) are
/// skipped so a nested statement's annotations are not double-attributed.
EnvOccurrence extract_annotations(EnvOccurrence occ, std::string_view masked,
                                  std::span<const std::pair<std::size_t, std::size_t>> nested,
                                  Diagnostics& diags);

/// Annotates every occurrence in place, computing the nested spans from the
/// occurrence list itself.
void annotate_occurrences(std::vector<EnvOccurrence>& occs, std::string_view masked,
                          Diagnostics& diags);

/// Warns about \uses commands that sit outside every scanned environment
/// body; such commands contribute nothing to the graph.
void report_stray_uses(std::string_view masked, std::span<const EnvOccurrence> occs,
                       Diagnostics& diags);

} // namespace knowtex
