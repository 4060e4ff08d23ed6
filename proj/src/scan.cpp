#include "knowtex/scan.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace knowtex {

const char* to_string(Severity severity) {
    return severity == Severity::Error ? "error" : "warning";
}

const char* to_string(NodeKind kind) {
    switch (kind) {
    case NodeKind::Definition: return "Definition";
    case NodeKind::Theorem: return "Theorem";
    case NodeKind::Lemma: return "Lemma";
    case NodeKind::Proposition: return "Proposition";
    case NodeKind::Corollary: return "Corollary";
    case NodeKind::Construction: return "Construction";
    case NodeKind::Example: return "Example";
    case NodeKind::Remark: return "Remark";
    }
    return "?";
}

std::optional<NodeKind> parse_node_kind(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "definition") return NodeKind::Definition;
    if (lower == "theorem") return NodeKind::Theorem;
    if (lower == "lemma") return NodeKind::Lemma;
    if (lower == "proposition") return NodeKind::Proposition;
    if (lower == "corollary") return NodeKind::Corollary;
    if (lower == "construction") return NodeKind::Construction;
    if (lower == "example") return NodeKind::Example;
    if (lower == "remark") return NodeKind::Remark;
    return std::nullopt;
}

namespace {

// A character is escaped when an odd number of backslashes precedes it.
bool is_escaped(std::string_view s, std::size_t i) {
    std::size_t backslashes = 0;
    while (i > backslashes && s[i - backslashes - 1] == '\\') ++backslashes;
    return backslashes % 2 == 1;
}

bool is_letter(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// True when an unescaped control sequence \name starts at i and is not a
// prefix of a longer command name.
bool command_at(std::string_view s, std::size_t i, std::string_view name) {
    if (i >= s.size() || s[i] != '\\' || is_escaped(s, i)) return false;
    if (s.compare(i + 1, name.size(), name) != 0) return false;
    std::size_t after = i + 1 + name.size();
    return after >= s.size() || !is_letter(s[after]);
}

std::size_t skip_whitespace(std::string_view s, std::size_t i, std::size_t limit) {
    while (i < limit && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
    return i;
}

struct BraceGroup {
    std::size_t content_begin = 0;
    std::size_t content_end = 0;
    std::size_t after = 0; // one past the closing brace (or the stop point)
    bool closed = false;
};

// Scans a {...} group starting at or after `pos` (whitespace allowed before
// the brace). Unescaped braces nest; escaped ones pass through. When
// `stop_at_newline` is set an unclosed group is cut at the line end.
std::optional<BraceGroup> scan_brace_group(std::string_view s, std::size_t pos, std::size_t limit,
                                           bool stop_at_newline) {
    pos = skip_whitespace(s, pos, limit);
    if (pos >= limit || s[pos] != '{') return std::nullopt;
    BraceGroup group;
    group.content_begin = pos + 1;
    int depth = 1;
    for (std::size_t i = pos + 1; i < limit; ++i) {
        char c = s[i];
        if (c == '\n' && stop_at_newline) {
            group.content_end = i;
            group.after = i;
            return group;
        }
        if ((c == '{' || c == '}') && !is_escaped(s, i)) {
            depth += (c == '{') ? 1 : -1;
            if (depth == 0) {
                group.content_end = i;
                group.after = i + 1;
                group.closed = true;
                return group;
            }
        }
    }
    group.content_end = limit;
    group.after = limit;
    return group;
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

} // namespace

EnvironmentConfig EnvironmentConfig::defaults() {
    EnvironmentConfig config;
    config.add_entry("^(definition|defn|def)$", NodeKind::Definition);
    config.add_entry("^(theorem|thm)$", NodeKind::Theorem);
    config.add_entry("^(lemma|lem)$", NodeKind::Lemma);
    config.add_entry("^(proposition|prop)$", NodeKind::Proposition);
    config.add_entry("^(corollary|cor)$", NodeKind::Corollary);
    config.add_entry("^(construction|constr)$", NodeKind::Construction);
    config.add_entry("^(example|ex)$", NodeKind::Example);
    config.add_entry("^(remark|rmk|rem)$", NodeKind::Remark);
    config.add_proof_pattern("^proof$");
    return config;
}

std::optional<EnvironmentConfig> EnvironmentConfig::from_overrides(
    std::span<const std::string> overrides, std::string& error) {
    if (overrides.empty()) return defaults();
    EnvironmentConfig config;
    for (const std::string& spec : overrides) {
        std::size_t eq = spec.rfind('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
            error = "expected PATTERN=KIND, got '" + spec + "'";
            return std::nullopt;
        }
        std::string pattern = spec.substr(0, eq);
        std::string kind_name = spec.substr(eq + 1);
        auto kind = parse_node_kind(kind_name);
        if (!kind) {
            error = "unknown kind '" + kind_name + "' in '" + spec + "'";
            return std::nullopt;
        }
        try {
            config.add_entry(pattern, *kind);
        } catch (const std::regex_error&) {
            error = "invalid pattern '" + pattern + "' in '" + spec + "'";
            return std::nullopt;
        }
    }
    config.add_proof_pattern("^proof$");
    return config;
}

void EnvironmentConfig::add_entry(std::string pattern, NodeKind kind) {
    std::regex compiled(pattern, std::regex::ECMAScript | std::regex::icase);
    entries.push_back({std::move(pattern), kind, std::move(compiled)});
}

void EnvironmentConfig::add_proof_pattern(std::string pattern) {
    compiled_proof_patterns.emplace_back(pattern, std::regex::ECMAScript | std::regex::icase);
    proof_patterns.push_back(std::move(pattern));
}

bool EnvironmentConfig::matches_proof(const std::string& name) const {
    for (const auto& re : compiled_proof_patterns) {
        if (std::regex_match(name, re)) return true;
    }
    return false;
}

std::optional<NodeKind> EnvironmentConfig::classify(const std::string& name, bool* conflict) const {
    if (conflict) *conflict = false;
    std::optional<NodeKind> found;
    for (const auto& entry : entries) {
        if (!std::regex_match(name, entry.compiled)) continue;
        if (!found) {
            found = entry.kind;
        } else if (*found != entry.kind && conflict) {
            *conflict = true;
        }
    }
    return found;
}

std::string mask_comments(std::string_view text) {
    std::string out(text);
    std::size_t i = 0;
    while (i < out.size()) {
        if (out[i] == '%' && !is_escaped(text, i)) {
            while (i < out.size() && out[i] != '\n') out[i++] = ' ';
        } else {
            ++i;
        }
    }
    return out;
}

std::string mask_verbatim(std::string_view text) {
    static constexpr std::string_view kNames[] = {"verbatim*", "verbatim", "lstlisting"};
    std::string out(text);
    std::size_t i = 0;
    while (i < out.size()) {
        if (!command_at(text, i, "begin")) {
            ++i;
            continue;
        }
        auto name_group = scan_brace_group(text, i + 6, text.size(), false);
        if (!name_group || !name_group->closed) {
            ++i;
            continue;
        }
        std::string_view name =
            text.substr(name_group->content_begin, name_group->content_end - name_group->content_begin);
        if (std::find(std::begin(kNames), std::end(kNames), name) == std::end(kNames)) {
            ++i;
            continue;
        }
        // Blank from \begin{name} through \end{name}; to end of text when
        // the environment never closes.
        std::string closer = "\\end{" + std::string(name) + "}";
        std::size_t close = text.find(closer, name_group->after);
        std::size_t stop = close == std::string_view::npos ? out.size() : close + closer.size();
        for (std::size_t k = i; k < stop; ++k) {
            if (out[k] != '\n') out[k] = ' ';
        }
        i = stop;
    }
    return out;
}

std::string mask_source(std::string_view text) {
    return mask_verbatim(mask_comments(text));
}

std::vector<ChapterSlice> segment_chapters(std::string_view masked, Diagnostics& diags) {
    struct Mark {
        std::size_t pos;
        std::string title;
    };
    std::vector<Mark> marks;
    std::size_t i = 0;
    while (i < masked.size()) {
        if (!command_at(masked, i, "chapter")) {
            ++i;
            continue;
        }
        std::size_t arg_pos = i + 8; // past \chapter
        if (arg_pos < masked.size() && masked[arg_pos] == '*') ++arg_pos;
        auto group = scan_brace_group(masked, arg_pos, masked.size(), true);
        if (!group) {
            diags.push_back({Severity::Warning, "\\chapter without a braced title; ignored", i});
            ++i;
            continue;
        }
        std::string title =
            trim(masked.substr(group->content_begin, group->content_end - group->content_begin));
        if (!group->closed) {
            diags.push_back({Severity::Warning,
                             "unbalanced braces in chapter title; truncated at end of line", i});
        }
        marks.push_back({i, std::move(title)});
        i = group->after;
    }

    std::vector<ChapterSlice> slices;
    if (marks.empty()) {
        slices.push_back({"", 0, 0, masked.size()});
        return slices;
    }
    for (std::size_t k = 0; k < marks.size(); ++k) {
        ChapterSlice slice;
        slice.title = marks[k].title;
        slice.index = static_cast<int>(k);
        // The first slice reaches back to the start of the document so the
        // slices always cover the whole body.
        slice.begin = k == 0 ? 0 : marks[k].pos;
        slice.end = k + 1 < marks.size() ? marks[k + 1].pos : masked.size();
        slices.push_back(std::move(slice));
    }
    return slices;
}

namespace {

int chapter_of(std::span<const ChapterSlice> chapters, std::size_t offset) {
    for (const auto& slice : chapters) {
        if (offset >= slice.begin && offset < slice.end) return slice.index;
    }
    return chapters.empty() ? 0 : chapters.back().index;
}

// Optional [title] directly after \begin{name}. Brackets do not nest, but a
// ']' inside braces does not close the group. Cut at end of line.
std::optional<std::pair<std::string, std::size_t>> scan_title_bracket(std::string_view s,
                                                                      std::size_t pos) {
    if (pos >= s.size() || s[pos] != '[') return std::nullopt;
    int brace_depth = 0;
    for (std::size_t i = pos + 1; i < s.size(); ++i) {
        char c = s[i];
        if (c == '\n') return std::nullopt;
        if ((c == '{' || c == '}') && !is_escaped(s, i)) {
            brace_depth += (c == '{') ? 1 : -1;
        } else if (c == ']' && brace_depth == 0) {
            return std::make_pair(std::string(s.substr(pos + 1, i - pos - 1)), i + 1);
        }
    }
    return std::nullopt;
}

} // namespace

std::vector<EnvOccurrence> scan_environments(std::string_view masked,
                                             const EnvironmentConfig& config,
                                             std::span<const ChapterSlice> chapters,
                                             Diagnostics& diags) {
    struct Open {
        std::size_t occ_index; // index into `occs`, or npos for untracked names
        std::size_t begin;
    };
    static constexpr std::size_t kUntracked = static_cast<std::size_t>(-1);

    std::vector<EnvOccurrence> occs;
    std::vector<bool> completed;
    std::map<std::string, std::vector<Open>> open_stacks;
    std::set<std::string> conflict_reported;

    std::size_t i = 0;
    while (i < masked.size()) {
        bool is_begin = command_at(masked, i, "begin");
        bool is_end = !is_begin && command_at(masked, i, "end");
        if (!is_begin && !is_end) {
            ++i;
            continue;
        }
        std::size_t name_pos = i + (is_begin ? 6 : 4);
        auto group = scan_brace_group(masked, name_pos, masked.size(), false);
        if (!group || !group->closed) {
            ++i;
            continue;
        }
        std::string name(
            masked.substr(group->content_begin, group->content_end - group->content_begin));
        if (is_begin) {
            bool conflict = false;
            bool is_proof = config.matches_proof(name);
            std::optional<NodeKind> kind =
                is_proof ? std::nullopt : config.classify(name, &conflict);
            if (conflict && conflict_reported.insert(name).second) {
                diags.push_back({Severity::Error,
                                 "environment name '" + name +
                                     "' matches entries with different kinds",
                                 i});
            }
            Open open{kUntracked, i};
            if (is_proof || kind) {
                EnvOccurrence occ;
                occ.env_name = name;
                occ.kind = kind;
                occ.begin = i;
                occ.body_begin = group->after;
                occ.chapter = chapter_of(chapters, i);
                if (auto title = scan_title_bracket(masked, group->after)) {
                    occ.title = title->first;
                    occ.body_begin = title->second;
                }
                open.occ_index = occs.size();
                occs.push_back(std::move(occ));
                completed.push_back(false);
            }
            open_stacks[name].push_back(open);
        } else {
            auto& stack = open_stacks[name];
            if (stack.empty()) {
                diags.push_back(
                    {Severity::Warning, "\\end{" + name + "} without matching \\begin", i});
            } else {
                Open open = stack.back();
                stack.pop_back();
                if (open.occ_index != kUntracked) {
                    occs[open.occ_index].body_end = i;
                    occs[open.occ_index].end = group->after;
                    completed[open.occ_index] = true;
                }
            }
        }
        i = group->after;
    }

    for (const auto& [name, stack] : open_stacks) {
        for (const Open& open : stack) {
            diags.push_back({Severity::Warning,
                             "\\begin{" + name + "} is never closed; environment discarded",
                             open.begin});
        }
    }

    std::vector<EnvOccurrence> result;
    for (std::size_t k = 0; k < occs.size(); ++k) {
        if (completed[k]) result.push_back(std::move(occs[k]));
    }
    return result;
}

EnvOccurrence extract_annotations(EnvOccurrence occ, std::string_view masked,
                                  std::span<const std::pair<std::size_t, std::size_t>> nested,
                                  Diagnostics& diags) {
    occ.label.reset();
    occ.proves.reset();
    occ.uses.clear();
    occ.use_offsets.clear();

    std::size_t i = occ.body_begin;
    while (i < occ.body_end) {
        bool skipped = false;
        for (const auto& span : nested) {
            if (i >= span.first && i < span.second) {
                i = span.second;
                skipped = true;
                break;
            }
        }
        if (skipped) continue;
        if (masked[i] != '\\') {
            ++i;
            continue;
        }
        std::string_view cmd;
        if (command_at(masked, i, "label")) cmd = "label";
        else if (command_at(masked, i, "uses")) cmd = "uses";
        else if (command_at(masked, i, "proves")) cmd = "proves";
        if (cmd.empty()) {
            ++i;
            continue;
        }
        auto group = scan_brace_group(masked, i + 1 + cmd.size(), occ.body_end, false);
        if (!group) {
            ++i;
            continue;
        }
        if (!group->closed) {
            diags.push_back(
                {Severity::Warning, "unterminated \\" + std::string(cmd) + " argument", i});
            i = group->after;
            continue;
        }
        std::string_view arg =
            masked.substr(group->content_begin, group->content_end - group->content_begin);
        if (cmd == "label") {
            if (!occ.label) occ.label = trim(arg);
        } else if (cmd == "proves") {
            if (!occ.proves) {
                occ.proves = trim(arg);
            } else {
                diags.push_back(
                    {Severity::Warning, "second \\proves in one body; the first wins", i});
            }
        } else {
            // Comma-split at brace depth 0 so a braced item survives whole.
            bool any_item = false;
            std::size_t item_start = 0;
            int depth = 0;
            for (std::size_t k = 0; k <= arg.size(); ++k) {
                bool at_end = k == arg.size();
                char c = at_end ? ',' : arg[k];
                if (!at_end && (c == '{' || c == '}') &&
                    !is_escaped(arg, k)) {
                    depth += (c == '{') ? 1 : -1;
                    continue;
                }
                if (c != ',' || depth != 0) continue;
                std::string item = trim(arg.substr(item_start, k - item_start));
                if (!item.empty()) {
                    any_item = true;
                    if (std::find(occ.uses.begin(), occ.uses.end(), item) == occ.uses.end()) {
                        occ.uses.push_back(item);
                        occ.use_offsets.push_back(group->content_begin + item_start);
                    }
                }
                item_start = k + 1;
            }
            if (!any_item) {
                diags.push_back(
                    {Severity::Warning, "\\uses argument lists no labels; ignored", i});
            }
        }
        i = group->after;
    }
    return occ;
}

void annotate_occurrences(std::vector<EnvOccurrence>& occs, std::string_view masked,
                          Diagnostics& diags) {
    for (std::size_t k = 0; k < occs.size(); ++k) {
        std::vector<std::pair<std::size_t, std::size_t>> nested;
        for (std::size_t j = 0; j < occs.size(); ++j) {
            if (j == k) continue;
            if (occs[j].begin >= occs[k].body_begin && occs[j].end <= occs[k].body_end) {
                nested.emplace_back(occs[j].begin, occs[j].end);
            }
        }
        occs[k] = extract_annotations(std::move(occs[k]), masked, nested, diags);
    }
}

void report_stray_uses(std::string_view masked, std::span<const EnvOccurrence> occs,
                       Diagnostics& diags) {
    std::size_t i = 0;
    while (i < masked.size()) {
        if (!command_at(masked, i, "uses")) {
            ++i;
            continue;
        }
        bool inside = false;
        for (const auto& occ : occs) {
            if (i >= occ.body_begin && i < occ.body_end) {
                inside = true;
                break;
            }
        }
        if (!inside) {
            diags.push_back(
                {Severity::Warning, "\\uses outside any scanned environment; ignored", i});
        }
        i += 5;
    }
}

} // namespace knowtex
