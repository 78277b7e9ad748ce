#include "repopulse/loc_counter.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace repopulse {

namespace {

enum class TokenKind { literal, any_char, star, globstar, globstar_slash };

struct Token {
    TokenKind kind;
    char ch = '\0';
};

std::vector<Token> tokenize_glob(std::string_view pattern) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < pattern.size()) {
        const char c = pattern[i];
        if (c == '*') {
            std::size_t run = 0;
            while (i + run < pattern.size() && pattern[i + run] == '*') ++run;
            i += run;
            if (run >= 2) {
                if (i < pattern.size() && pattern[i] == '/') {
                    ++i;
                    tokens.push_back({TokenKind::globstar_slash});
                } else {
                    tokens.push_back({TokenKind::globstar});
                }
            } else {
                tokens.push_back({TokenKind::star});
            }
        } else if (c == '?') {
            tokens.push_back({TokenKind::any_char});
            ++i;
        } else {
            tokens.push_back({TokenKind::literal, c});
            ++i;
        }
    }
    return tokens;
}

} // namespace

bool glob_match(std::string_view pattern, std::string_view path) {
    const std::vector<Token> tokens = tokenize_glob(pattern);
    const std::size_t n = path.size();

    std::vector<std::uint8_t> prev(n + 1, 0), cur(n + 1, 0);
    prev[0] = 1;

    for (const Token& tok : tokens) {
        std::fill(cur.begin(), cur.end(), 0);
        switch (tok.kind) {
        case TokenKind::literal:
            for (std::size_t j = 1; j <= n; ++j)
                cur[j] = prev[j - 1] && path[j - 1] == tok.ch;
            break;
        case TokenKind::any_char:
            for (std::size_t j = 1; j <= n; ++j)
                cur[j] = prev[j - 1] && path[j - 1] != '/';
            break;
        case TokenKind::star:
            // Matches any run of non-separator characters, possibly empty.
            cur[0] = prev[0];
            for (std::size_t j = 1; j <= n; ++j)
                cur[j] = prev[j] || (cur[j - 1] && path[j - 1] != '/');
            break;
        case TokenKind::globstar:
            cur[0] = prev[0];
            for (std::size_t j = 1; j <= n; ++j)
                cur[j] = prev[j] || cur[j - 1];
            break;
        case TokenKind::globstar_slash: {
            // Matches the empty prefix or any prefix ending in '/'.
            std::uint8_t reachable = prev[0];
            cur[0] = prev[0];
            for (std::size_t j = 1; j <= n; ++j) {
                cur[j] = prev[j] || (path[j - 1] == '/' && reachable);
                reachable = reachable || prev[j];
            }
            break;
        }
        }
        std::swap(prev, cur);
    }
    return prev[n] != 0;
}

bool FileFilter::matches_path(std::string_view path) const {
    bool included = false;
    for (const auto& g : include_globs) {
        if (glob_match(g, path)) {
            included = true;
            break;
        }
    }
    if (!included) return false;
    for (const auto& g : exclude_globs) {
        if (glob_match(g, path)) return false;
    }
    return true;
}

bool FileFilter::admits(std::string_view path, long long size_bytes) const {
    return size_bytes <= max_file_bytes && matches_path(path);
}

bool is_binary(std::string_view content) {
    const std::size_t limit = std::min<std::size_t>(content.size(), 8000);
    return content.substr(0, limit).find('\0') != std::string_view::npos;
}

std::string extension_of(std::string_view path) {
    const std::size_t slash = path.find_last_of('/');
    const std::string_view name = slash == std::string_view::npos ? path : path.substr(slash + 1);
    const std::size_t dot = name.find_last_of('.');
    if (dot == std::string_view::npos || dot == 0) return {};
    std::string ext(name.substr(dot + 1));
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

namespace {

struct CommentSyntax {
    std::string_view line_marker;
    std::string_view block_open;
    std::string_view block_close;
};

const CommentSyntax* syntax_for(std::string_view ext) {
    static constexpr CommentSyntax c_like{"//", "/*", "*/"};
    static constexpr CommentSyntax hash{"#", "", ""};
    static constexpr CommentSyntax dash{"--", "", ""};
    static constexpr CommentSyntax markup{"", "<!--", "-->"};

    static constexpr std::array<std::string_view, 10> c_exts{
        "c", "cc", "cpp", "h", "hpp", "rs", "go", "java", "js", "ts"};
    static constexpr std::array<std::string_view, 5> hash_exts{"py", "rb", "sh", "yaml", "toml"};

    for (const auto e : c_exts)
        if (ext == e) return &c_like;
    for (const auto e : hash_exts)
        if (ext == e) return &hash;
    if (ext == "lua") return &dash;
    if (ext == "html" || ext == "xml") return &markup;
    return nullptr;
}

bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\v' || c == '\f' || c == '\r';
}

bool whitespace_only(std::string_view line) {
    for (const char c : line)
        if (!is_ws(c)) return false;
    return true;
}

enum class LineKind { blank, comment, code };

LineKind classify_line(std::string_view line, const CommentSyntax* syn, bool& in_block) {
    if (whitespace_only(line)) return LineKind::blank;
    if (syn == nullptr) return LineKind::code;

    bool saw_comment = in_block;
    bool has_code = false;
    std::size_t i = 0;
    while (i < line.size()) {
        if (in_block) {
            saw_comment = true;
            const std::size_t close = line.find(syn->block_close, i);
            if (close == std::string_view::npos) {
                i = line.size();
                break;
            }
            in_block = false;
            i = close + syn->block_close.size();
            continue;
        }
        if (is_ws(line[i])) {
            ++i;
            continue;
        }
        if (!syn->line_marker.empty() && line.substr(i).starts_with(syn->line_marker)) {
            saw_comment = true;
            break; // rest of the line is comment
        }
        if (!syn->block_open.empty() && line.substr(i).starts_with(syn->block_open)) {
            saw_comment = true;
            in_block = true;
            i += syn->block_open.size();
            continue;
        }
        has_code = true;
        ++i;
    }

    if (has_code) return LineKind::code;
    return saw_comment ? LineKind::comment : LineKind::blank;
}

} // namespace

LineCount count_file(std::string_view content, std::string_view extension) {
    const CommentSyntax* syn = syntax_for(extension);
    LineCount result;
    bool in_block = false;

    std::size_t pos = 0;
    while (pos < content.size()) {
        std::size_t nl = content.find('\n', pos);
        std::string_view line;
        if (nl == std::string_view::npos) {
            line = content.substr(pos);
            pos = content.size();
        } else {
            line = content.substr(pos, nl - pos);
            pos = nl + 1;
        }
        switch (classify_line(line, syn, in_block)) {
        case LineKind::blank: ++result.blank; break;
        case LineKind::comment: ++result.comment; break;
        case LineKind::code: ++result.code; break;
        }
    }
    return result;
}

long long count_tree(std::span<const TreeFile> files, const FileFilter& filter) {
    long long total = 0;
    for (const TreeFile& file : files) {
        if (!filter.admits(file.path, static_cast<long long>(file.content.size()))) continue;
        if (is_binary(file.content)) continue;
        total += count_file(file.content, extension_of(file.path)).code;
    }
    return total;
}

} // namespace repopulse
