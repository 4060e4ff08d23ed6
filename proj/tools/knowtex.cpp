#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "knowtex/pipeline.hpp"

int main(int argc, char** argv) {
    knowtex::RunConfig config;

    CLI::App app{"knowtex: extract dependency graphs from annotated LaTeX"};
    app.add_option("input", config.input_path, "LaTeX source file")->required();

    std::string chapter;
    auto* chapter_opt =
        app.add_option("--chapter", chapter, "Restrict to one chapter, by 0-based index or title");

    app.add_option("--env", config.env_overrides,
                   "PATTERN=KIND environment mapping; giving any --env replaces the default table")
        ->take_all();

    std::map<std::string, knowtex::UnresolvedPolicy> policies{
        {"drop", knowtex::UnresolvedPolicy::Drop},
        {"phantom", knowtex::UnresolvedPolicy::Phantom},
    };
    app.add_option("--policy", config.policy, "How to treat unresolved \\uses targets")
        ->transform(CLI::CheckedTransformer(policies, CLI::ignore_case));

    bool no_reduce = false;
    app.add_flag("--no-reduce", no_reduce, "Skip transitive reduction");
    app.add_flag("--strict", config.strict, "Exit nonzero when any diagnostic was emitted");
    app.add_option("--style", config.style_path, "Style JSON overriding the default palette");
    app.add_option("--out-dot", config.out_dot, "Write Graphviz DOT here");
    app.add_option("--out-tikz", config.out_tikz, "Write a TikZ picture here");
    app.add_option("--out-html", config.out_html, "Write a self-contained HTML page here");
    app.add_flag("--list-chapters", config.list_chapters, "Print chapter indexes and titles");
    app.add_flag("--list-envs", config.list_envs, "Print recognized environments");
    app.add_option("--renderer-url", config.renderer_url,
                   "Graphviz renderer script URL embedded in HTML output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e, std::cout, std::cerr);
        return knowtex::kExitUsage;
    }

    if (*chapter_opt) config.chapter = chapter;
    config.reduce = !no_reduce;

    return knowtex::run(config, std::cout, std::cerr);
}
