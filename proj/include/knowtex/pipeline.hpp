#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "knowtex/graph.hpp"
#include "knowtex/render.hpp"

namespace knowtex {

/// Everything one invocation needs. Mirrors the CLI surface so the front end
/// stays a thin argument parser.
struct RunConfig {
    std::string input_path;
    std::optional<std::string> chapter; // 0-based index or exact title
    std::vector<std::string> env_overrides; // "pattern=kind"; replaces the default table
    UnresolvedPolicy policy = UnresolvedPolicy::Drop;
    bool reduce = true;
    bool strict = false;
    std::optional<std::string> out_dot;
    std::optional<std::string> out_tikz;
    std::optional<std::string> out_html;
    std::optional<std::string> style_path;
    bool list_chapters = false;
    bool list_envs = false;
    std::string renderer_url = std::string(kDefaultRendererUrl);
};

// Exit codes shared by run() and the CLI front end.
inline constexpr int kExitSuccess = 0;
inline constexpr int kExitDiagnostics = 1;
inline constexpr int kExitUsage = 2;

/// Runs mask -> segment -> scan -> annotate -> associate -> build ->
/// (reduce) -> layout -> emit, writing requested outputs atomically and
/// printing diagnostics to `err` as `path:line:col: severity: message`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

} // namespace knowtex
