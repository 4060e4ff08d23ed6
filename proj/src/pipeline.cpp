#include "knowtex/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <system_error>

#include "knowtex/layout.hpp"
#include "knowtex/scan.hpp"
#include "knowtex/source.hpp"
#include "knowtex/style.hpp"

namespace knowtex {

namespace {

// Write to a sibling temp file and rename, so readers never see a torn file
// and a failed run leaves any existing output untouched.
bool write_atomic(const std::string& path, const std::string& content, std::string& error) {
    namespace fs = std::filesystem;
    fs::path tmp = fs::path(path);
    tmp += ".tmp";
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) {
            error = "cannot open '" + tmp.string() + "' for writing";
            return false;
        }
        stream.write(content.data(), static_cast<std::streamsize>(content.size()));
        stream.flush();
        if (!stream) {
            error = "write to '" + tmp.string() + "' failed";
            std::error_code ec;
            fs::remove(tmp, ec);
            return false;
        }
    }
    std::error_code ec;
    fs::rename(tmp, fs::path(path), ec);
    if (ec) {
        error = "cannot move '" + tmp.string() + "' to '" + path + "': " + ec.message();
        fs::remove(tmp, ec);
        return false;
    }
    return true;
}

void print_diagnostics(const SourceDocument& doc, Diagnostics diags, std::ostream& err) {
    std::stable_sort(diags.begin(), diags.end(),
                     [](const Diagnostic& a, const Diagnostic& b) { return a.offset < b.offset; });
    for (const Diagnostic& d : diags) {
        auto lc = doc.line_index.locate(d.offset);
        err << doc.path << ':' << lc.line << ':' << lc.column << ": " << to_string(d.severity)
            << ": " << d.message << '\n';
    }
}

int exit_code(const Diagnostics& diags, bool strict) {
    bool any_error = std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
        return d.severity == Severity::Error;
    });
    if (any_error || (strict && !diags.empty())) return kExitDiagnostics;
    return kExitSuccess;
}

std::string describe_chapters(const std::vector<ChapterSlice>& chapters) {
    std::string out = "available chapters:";
    for (const ChapterSlice& ch : chapters) {
        out += ' ' + std::to_string(ch.index) + " '" + ch.title + "'";
        if (ch.index + 1 < static_cast<int>(chapters.size())) out += ',';
    }
    return out;
}

std::optional<int> resolve_chapter(const std::string& selector,
                                   const std::vector<ChapterSlice>& chapters,
                                   std::string& error) {
    bool numeric = !selector.empty() &&
                   std::all_of(selector.begin(), selector.end(),
                               [](unsigned char c) { return std::isdigit(c); });
    if (numeric) {
        // Digits always select by index, even when some chapter title is
        // itself a number.
        errno = 0;
        long idx = std::strtol(selector.c_str(), nullptr, 10);
        if (errno == 0 && idx >= 0 && idx < static_cast<long>(chapters.size())) {
            return static_cast<int>(idx);
        }
        error = "chapter index " + selector + " is out of range; " + describe_chapters(chapters);
        return std::nullopt;
    }
    for (const ChapterSlice& ch : chapters) {
        if (ch.title == selector) return ch.index;
    }
    error = "no chapter titled '" + selector + "'; " + describe_chapters(chapters);
    return std::nullopt;
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    if (!config.out_dot && !config.out_tikz && !config.out_html && !config.list_chapters &&
        !config.list_envs) {
        err << "knowtex: nothing to do; pass --out-dot, --out-tikz, --out-html, "
               "--list-chapters, or --list-envs\n";
        return kExitUsage;
    }

    EnvironmentConfig env_config;
    if (config.env_overrides.empty()) {
        env_config = EnvironmentConfig::defaults();
    } else {
        std::string error;
        auto built = EnvironmentConfig::from_overrides(config.env_overrides, error);
        if (!built) {
            err << "knowtex: --env: " << error << '\n';
            return kExitUsage;
        }
        env_config = std::move(*built);
    }

    StyleConfig style = default_style();
    if (config.style_path) {
        std::string error;
        auto parsed = load_style(*config.style_path, error);
        if (!parsed) {
            err << "knowtex: " << *config.style_path << ": " << error << '\n';
            return kExitUsage;
        }
        style = std::move(*parsed);
    }

    auto doc = SourceDocument::load(config.input_path);
    if (!doc) {
        err << "knowtex: cannot read '" << config.input_path << "'\n";
        return kExitUsage;
    }

    Diagnostics diags;
    std::string masked = mask_source(doc->text);
    auto chapters = segment_chapters(masked, diags);

    if (config.list_chapters) {
        for (const ChapterSlice& ch : chapters) out << ch.index << '\t' << ch.title << '\n';
        print_diagnostics(*doc, diags, err);
        return exit_code(diags, config.strict);
    }

    std::optional<int> chapter_index;
    if (config.chapter) {
        std::string error;
        chapter_index = resolve_chapter(*config.chapter, chapters, error);
        if (!chapter_index) {
            err << "knowtex: " << error << '\n';
            return kExitUsage;
        }
    }

    auto occs = scan_environments(masked, env_config, chapters, diags);
    annotate_occurrences(occs, masked, diags);
    report_stray_uses(masked, occs, diags);
    if (chapter_index) occs = filter_chapter(std::move(occs), *chapter_index);

    if (config.list_envs) {
        for (const EnvOccurrence& occ : occs) {
            out << (occ.is_proof() ? "Proof" : to_string(*occ.kind)) << '\t'
                << (occ.label ? *occ.label : "(unlabeled)") << '\t'
                << doc->line_index.locate(occ.begin).line << '\n';
        }
        print_diagnostics(*doc, diags, err);
        return exit_code(diags, config.strict);
    }

    auto bindings = associate_proofs(occs, diags);
    DepGraph graph = build_graph(occs, bindings, config.policy);
    detect_cycles(graph);
    if (config.reduce) graph = transitive_reduce(graph);
    diags.insert(diags.end(), graph.diagnostics.begin(), graph.diagnostics.end());
    graph.diagnostics.clear();

    // Emitters re-derive the same names internally; this pass only surfaces
    // collision warnings once.
    sanitize_ids(graph, &diags);

    std::string error;
    if (config.out_dot && !write_atomic(*config.out_dot, emit_dot(graph, style), error)) {
        err << "knowtex: " << error << '\n';
        return kExitUsage;
    }
    if (config.out_tikz) {
        LayeredLayout layout = layout_graph(graph, style);
        if (!write_atomic(*config.out_tikz, emit_tikz(graph, layout, style), error)) {
            err << "knowtex: " << error << '\n';
            return kExitUsage;
        }
    }
    if (config.out_html &&
        !write_atomic(*config.out_html, emit_html(graph, style, config.renderer_url), error)) {
        err << "knowtex: " << error << '\n';
        return kExitUsage;
    }

    print_diagnostics(*doc, diags, err);
    return exit_code(diags, config.strict);
}

} // namespace knowtex
