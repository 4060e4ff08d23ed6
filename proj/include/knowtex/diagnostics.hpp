#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace knowtex {

enum class Severity { Warning, Error };

const char* to_string(Severity severity);

/// A problem found while processing a document. The offset is a byte
/// position into the original source text; callers resolve it to
/// line/column through the document's LineIndex.
struct Diagnostic {
    Severity severity;
    std::string message;
    std::size_t offset = 0;
};

using Diagnostics = std::vector<Diagnostic>;

} // namespace knowtex
