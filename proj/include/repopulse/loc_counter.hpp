#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace repopulse {

struct LineCount {
    long long code = 0;
    long long comment = 0;
    long long blank = 0;

    long long total() const { return code + comment + blank; }
    bool operator==(const LineCount&) const = default;
};

// Wildcard matching over '/'-separated relative paths. `*` and `?` stay
// within one path segment, `**` crosses segments, and a leading `**/`
// also matches the empty prefix (so `**/*.c` matches `a.c`).
bool glob_match(std::string_view pattern, std::string_view path);

struct FileFilter {
    std::vector<std::string> include_globs{"**/*"};
    std::vector<std::string> exclude_globs{".git/**", "node_modules/**", "vendor/**",
                                           "dist/**", "third_party/**"};
    long long max_file_bytes = 1048576;

    bool matches_path(std::string_view path) const;
    // Glob and size checks; binary detection needs content and is applied
    // separately by the caller.
    bool admits(std::string_view path, long long size_bytes) const;
};

// True iff a NUL byte occurs in the first 8000 bytes.
bool is_binary(std::string_view content);

// Lowercased extension without the dot; empty when the name has none.
std::string extension_of(std::string_view path);

// Classifies each physical line as blank, comment, or code.
//
// blank   — empty or whitespace-only (wins even inside a block comment)
// comment — first non-whitespace characters start a line comment for the
//           extension, or the line lies wholly inside a block comment
// code    — everything else
//
// Block comments are tracked by a single-pass state machine; string
// literals are not parsed, so a block opener inside a string starts a
// comment. Unknown extensions distinguish only blank vs code.
LineCount count_file(std::string_view content, std::string_view extension);

struct TreeFile {
    std::string path;
    std::string content;
};

// Sum of count_file(...).code over files admitted by the filter and not
// binary. Order independent.
long long count_tree(std::span<const TreeFile> files, const FileFilter& filter);

} // namespace repopulse
