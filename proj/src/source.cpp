#include "knowtex/source.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace knowtex {

LineIndex::LineIndex(std::string_view text) {
    line_starts_.clear();
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') line_starts_.push_back(i + 1);
    }
}

LineIndex::LineCol LineIndex::locate(std::size_t offset) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    std::size_t line = static_cast<std::size_t>(it - line_starts_.begin()); // 1-based
    std::size_t start = line_starts_[line - 1];
    return {static_cast<int>(line), static_cast<int>(offset - start + 1)};
}

SourceDocument SourceDocument::from_string(std::string path, std::string text) {
    SourceDocument doc;
    doc.path = std::move(path);
    doc.line_index = LineIndex(text);
    doc.text = std::move(text);
    return doc;
}

std::optional<SourceDocument> SourceDocument::load(const std::string& path) {
    std::ifstream in(path, std::ios::in | std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return from_string(path, buf.str());
}

} // namespace knowtex
