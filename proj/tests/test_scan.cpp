#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "knowtex/scan.hpp"
#include "support/docgen.hpp"
#include "support/helpers.hpp"

using namespace knowtex;
using testutil::fixture_path;
using testutil::read_file;
using testutil::scan_text;

namespace {

int warning_count(const Diagnostics& diags) {
    int n = 0;
    for (const auto& d : diags) {
        if (d.severity == Severity::Warning) ++n;
    }
    return n;
}

bool has_diag_containing(const Diagnostics& diags, const std::string& needle) {
    for (const auto& d : diags) {
        if (d.message.find(needle) != std::string::npos) return true;
    }
    return false;
}

} // namespace

TEST_CASE("mask_comments blanks a comment through end of line") {
    // "a % hidden\nb": the '%' and everything to the newline become spaces.
    std::string masked = mask_comments("a % hidden\nb");
    CHECK(masked == "a " + std::string(8, ' ') + "\nb");
    CHECK(masked.size() == std::string("a % hidden\nb").size());
}

TEST_CASE("mask_comments leaves escaped percent alone") {
    CHECK(mask_comments("100\\% sure") == "100\\% sure");
}

TEST_CASE("mask_comments treats percent after escaped backslash as comment") {
    // "\\" is an escaped backslash, so the following '%' still starts a comment.
    std::string masked = mask_comments("a \\\\% c");
    CHECK(masked == "a \\\\   ");
}

TEST_CASE("masked-out uses does not reach extraction") {
    auto result = scan_text("\\begin{lemma}\\label{l}\n\\uses{x} % \\uses{y}\n\\end{lemma}");
    REQUIRE(result.occs.size() == 1);
    CHECK(result.occs[0].uses == std::vector<std::string>{"x"});
}

TEST_CASE("mask_verbatim blanks environments including their markers") {
    std::string text = "pre \\begin{verbatim}\\uses{x}\\end{verbatim} post";
    std::string masked = mask_verbatim(text);
    CHECK(masked.size() == text.size());
    CHECK(masked.find("uses") == std::string::npos);
    CHECK(masked.find("begin") == std::string::npos);
    CHECK(masked.substr(0, 4) == "pre ");
    CHECK(masked.substr(masked.size() - 5) == " post");
}

TEST_CASE("mask_verbatim covers lstlisting and starred verbatim") {
    for (std::string env : {"lstlisting", "verbatim*"}) {
        std::string text = "\\begin{" + env + "}\n\\begin{theorem}\n\\end{" + env + "}";
        std::string masked = mask_verbatim(text);
        CHECK(masked.size() == text.size());
        CHECK(masked.find("theorem") == std::string::npos);
    }
}

TEST_CASE("mask_verbatim tolerates an unclosed block") {
    std::string text = "a\\begin{verbatim}rest of file";
    std::string masked = mask_verbatim(text);
    CHECK(masked.size() == text.size());
    CHECK(masked[0] == 'a');
    CHECK(masked.find("rest") == std::string::npos);
}

TEST_CASE("masking is length-preserving and idempotent on random documents") {
    std::mt19937 rng(2024);
    for (int i = 0; i < 200; ++i) {
        auto doc = docgen::generate(rng);
        std::string once = mask_comments(doc.text);
        CHECK(once.size() == doc.text.size());
        CHECK(mask_comments(once) == once);
        std::string full = mask_source(doc.text);
        CHECK(full.size() == doc.text.size());
        CHECK(mask_source(full) == full);
    }
}

TEST_CASE("segment_chapters yields one implicit slice without chapters") {
    Diagnostics diags;
    std::string masked = "no chapters here";
    auto slices = segment_chapters(masked, diags);
    REQUIRE(slices.size() == 1);
    CHECK(slices[0].title == "");
    CHECK(slices[0].index == 0);
    CHECK(slices[0].begin == 0);
    CHECK(slices[0].end == masked.size());
    CHECK(diags.empty());
}

TEST_CASE("segment_chapters produces disjoint covering slices") {
    Diagnostics diags;
    std::string masked = "intro \\chapter{A} aaa \\chapter{B} bbb";
    auto slices = segment_chapters(masked, diags);
    REQUIRE(slices.size() == 2);
    CHECK(slices[0].title == "A");
    CHECK(slices[1].title == "B");
    // The first slice reaches back to offset 0 so the union covers everything.
    CHECK(slices[0].begin == 0);
    CHECK(slices[0].end == slices[1].begin);
    CHECK(slices[1].end == masked.size());
    CHECK(diags.empty());
}

TEST_CASE("segment_chapters treats starred chapters like plain ones") {
    Diagnostics diags;
    std::string masked = "\\chapter*{Intro} x \\chapter{One} y";
    auto slices = segment_chapters(masked, diags);
    REQUIRE(slices.size() == 2);
    CHECK(slices[0].title == "Intro");
    CHECK(slices[1].title == "One");
}

TEST_CASE("segment_chapters truncates an unbalanced title at end of line") {
    Diagnostics diags;
    std::string masked = "\\chapter{Oops\nnext line}";
    auto slices = segment_chapters(masked, diags);
    REQUIRE(slices.size() == 1);
    CHECK(slices[0].title == "Oops");
    CHECK(has_diag_containing(diags, "unbalanced"));
}

TEST_CASE("ring listing sits in a single implicit chapter") {
    auto result = scan_text(read_file(fixture_path("ring.tex")));
    REQUIRE(result.chapters.size() == 1);
    CHECK(result.chapters[0].title == "");
    for (const auto& occ : result.occs) CHECK(occ.chapter == 0);
}

TEST_CASE("ring listing scans to the five known occurrences in order") {
    auto result = scan_text(read_file(fixture_path("ring.tex")));
    REQUIRE(result.occs.size() == 5);
    CHECK(result.occs[0].env_name == "definition");
    CHECK(result.occs[0].kind == NodeKind::Definition);
    CHECK(result.occs[1].env_name == "lemma");
    CHECK(result.occs[1].kind == NodeKind::Lemma);
    CHECK(result.occs[2].is_proof());
    CHECK(result.occs[3].env_name == "corollary");
    CHECK(result.occs[3].kind == NodeKind::Corollary);
    CHECK(result.occs[4].is_proof());
    CHECK(result.diags.empty());
    for (const auto& occ : result.occs) {
        CHECK(occ.begin < occ.body_begin);
        CHECK(occ.body_begin <= occ.body_end);
        CHECK(occ.body_end < occ.end);
    }
}

TEST_CASE("ring lemma annotations match the listing") {
    auto result = scan_text(read_file(fixture_path("ring.tex")));
    const auto& lemma = result.occs[1];
    CHECK(lemma.label == "lem:ring-unit");
    CHECK(lemma.uses == std::vector<std::string>{"def:ring"});
    CHECK(!lemma.proves.has_value());
}

TEST_CASE("empty document scans to nothing") {
    auto result = scan_text("");
    CHECK(result.occs.empty());
    CHECK(result.diags.empty());
}

TEST_CASE("environment aliases map case-insensitively") {
    auto result = scan_text("\\begin{THM}\\label{t:1}\\end{THM}\\begin{defn}\\label{d:1}\\end{defn}");
    REQUIRE(result.occs.size() == 2);
    CHECK(result.occs[0].kind == NodeKind::Theorem);
    CHECK(result.occs[1].kind == NodeKind::Definition);
}

TEST_CASE("same-name nesting pairs innermost first") {
    std::string text =
        "\\begin{theorem}\\label{outer}\n"
        "\\begin{theorem}\\label{inner}\\end{theorem}\n"
        "\\end{theorem}";
    auto result = scan_text(text);
    REQUIRE(result.occs.size() == 2);
    const auto& outer = result.occs[0];
    const auto& inner = result.occs[1];
    CHECK(outer.begin < inner.begin);
    CHECK(inner.end < outer.end);
    CHECK(outer.label == "outer");
    CHECK(inner.label == "inner");
}

TEST_CASE("nested scanned environment is excluded from outer annotations") {
    std::string text =
        "\\begin{theorem}\\label{thm:a}\\uses{x}\n"
        "\\begin{remark}\\label{rmk:b}\\uses{y}\\end{remark}\n"
        "\\end{theorem}";
    auto result = scan_text(text);
    REQUIRE(result.occs.size() == 2);
    CHECK(result.occs[0].label == "thm:a");
    CHECK(result.occs[0].uses == std::vector<std::string>{"x"});
    CHECK(result.occs[1].label == "rmk:b");
    CHECK(result.occs[1].uses == std::vector<std::string>{"y"});
}

TEST_CASE("stray end and unclosed begin produce diagnostics") {
    auto stray = scan_text("\\end{theorem}");
    CHECK(stray.occs.empty());
    CHECK(warning_count(stray.diags) >= 1);
    CHECK(has_diag_containing(stray.diags, "\\end{theorem}"));

    auto unclosed = scan_text("\\begin{lemma}\\label{l} body");
    CHECK(unclosed.occs.empty());
    CHECK(has_diag_containing(unclosed.diags, "never closed"));
}

TEST_CASE("unscanned wrapper environments are invisible") {
    auto result = scan_text("\\begin{center}\\begin{lemma}\\label{l}\\end{lemma}\\end{center}");
    REQUIRE(result.occs.size() == 1);
    CHECK(result.occs[0].env_name == "lemma");
    CHECK(result.diags.empty());
}

TEST_CASE("bracketed argument after begin becomes the title") {
    auto result = scan_text("\\begin{theorem}[Main Result]\\label{thm:m}\\end{theorem}");
    REQUIRE(result.occs.size() == 1);
    CHECK(result.occs[0].title == "Main Result");
    CHECK(result.occs[0].label == "thm:m");
}

TEST_CASE("conflicting entries for one seen name raise an error diagnostic") {
    EnvironmentConfig config;
    config.add_entry("^thm$", NodeKind::Theorem);
    config.add_entry("^(thm|lemma)$", NodeKind::Lemma);
    config.add_proof_pattern("^proof$");
    Diagnostics diags;
    std::string masked = "\\begin{thm}\\label{t}\\end{thm}";
    auto chapters = segment_chapters(masked, diags);
    auto occs = scan_environments(masked, config, chapters, diags);
    REQUIRE(occs.size() == 1);
    CHECK(occs[0].kind == NodeKind::Theorem); // first entry wins
    bool saw_error = false;
    for (const auto& d : diags) saw_error |= d.severity == Severity::Error;
    CHECK(saw_error);
}

TEST_CASE("uses arguments are split, trimmed, and de-duplicated") {
    auto both = scan_text("\\begin{lemma}\\label{l}\\uses{a, b}\\uses{b,c}\\end{lemma}");
    CHECK(both.occs[0].uses == std::vector<std::string>{"a", "b", "c"});

    auto messy = scan_text("\\begin{lemma}\\label{l}\\uses{ x ,, y }\\end{lemma}");
    CHECK(messy.occs[0].uses == std::vector<std::string>{"x", "y"});
    CHECK(messy.diags.empty());
}

TEST_CASE("empty uses argument is flagged") {
    auto result = scan_text("\\begin{lemma}\\label{l}\\uses{}\\end{lemma}");
    CHECK(result.occs[0].uses.empty());
    CHECK(warning_count(result.diags) == 1);
}

TEST_CASE("first label and first proves win") {
    auto result = scan_text(
        "\\begin{proof}\\proves{thm:a}\\proves{thm:b}\\label{p1}\\label{p2}\\end{proof}");
    REQUIRE(result.occs.size() == 1);
    CHECK(result.occs[0].label == "p1");
    CHECK(result.occs[0].proves == "thm:a");
    CHECK(has_diag_containing(result.diags, "proves"));
}

TEST_CASE("one nested brace level passes through argument extraction") {
    auto result = scan_text("\\begin{lemma}\\label{l}\\uses{a{b}c}\\end{lemma}");
    CHECK(result.occs[0].uses == std::vector<std::string>{"a{b}c"});
}

TEST_CASE("unterminated argument is flagged") {
    auto result = scan_text("\\begin{lemma}\\label{l}\\uses{a, b\\end{lemma}");
    CHECK(has_diag_containing(result.diags, "unterminated"));
}

TEST_CASE("annotations never come from outside the body") {
    auto result = scan_text("\\begin{lemma}x\\end{lemma}\\label{after}\\uses{z}");
    REQUIRE(result.occs.size() == 1);
    CHECK(!result.occs[0].label.has_value());
    CHECK(result.occs[0].uses.empty());
    CHECK(has_diag_containing(result.diags, "outside"));
}

TEST_CASE("stray uses outside every environment is reported") {
    auto result = scan_text("\\uses{def:real}\n\\begin{lemma}\\label{l}\\end{lemma}");
    CHECK(has_diag_containing(result.diags, "outside"));
}

TEST_CASE("scanner recovers exactly what the generator planted") {
    std::mt19937 rng(77);
    for (int round = 0; round < 200; ++round) {
        auto doc = docgen::generate(rng);
        auto result = scan_text(doc.text);
        REQUIRE(static_cast<int>(result.chapters.size()) == doc.chapter_count);

        std::size_t at = 0;
        for (const auto& planted : doc.statements) {
            REQUIRE(at < result.occs.size());
            const auto& occ = result.occs[at++];
            CHECK(occ.env_name == planted.env_name);
            REQUIRE(occ.kind.has_value());
            CHECK(std::string(to_string(*occ.kind)) == planted.kind);
            CHECK(occ.label == planted.label);
            CHECK(occ.uses == planted.statement_uses);
            CHECK(occ.chapter == planted.chapter);
            if (planted.has_proof) {
                REQUIRE(at < result.occs.size());
                const auto& proof = result.occs[at++];
                CHECK(proof.is_proof());
                CHECK(proof.proves == planted.label);
                CHECK(proof.uses == planted.proof_uses);
            }
        }
        CHECK(at == result.occs.size());
    }
}
