#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace knowtex {

/// Maps byte offsets into a text to 1-based (line, column) pairs.
/// Columns count bytes, which is what most editors and compilers report.
class LineIndex {
public:
    LineIndex() = default;
    explicit LineIndex(std::string_view text);

    struct LineCol {
        int line = 1;
        int column = 1;
    };

    LineCol locate(std::size_t offset) const;

private:
    std::vector<std::size_t> line_starts_{0};
};

/// One LaTeX input file, kept byte-for-byte as read from disk so that
/// every downstream span indexes the original content.
struct SourceDocument {
    std::string path;
    std::string text;
    LineIndex line_index;

    static SourceDocument from_string(std::string path, std::string text);
    static std::optional<SourceDocument> load(const std::string& path);
};

} // namespace knowtex
