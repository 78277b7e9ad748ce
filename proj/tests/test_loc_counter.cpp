#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "repopulse/loc_counter.hpp"

using namespace repopulse;

// ---------------------------------------------------------------------------
// glob matching
// ---------------------------------------------------------------------------

TEST_CASE("glob basics") {
    CHECK(glob_match("*.c", "a.c"));
    CHECK(!glob_match("*.c", "dir/a.c")); // `*` stays within a segment
    CHECK(glob_match("src/*.c", "src/a.c"));
    CHECK(!glob_match("src/*.c", "src/sub/a.c"));
    CHECK(glob_match("?.c", "a.c"));
    CHECK(!glob_match("?.c", "ab.c"));
    CHECK(!glob_match("?.c", "/.c"));
}

TEST_CASE("globstar crosses directories") {
    CHECK(glob_match("**/*", "a"));
    CHECK(glob_match("**/*", "a/b/c.txt"));
    CHECK(glob_match("**/*.c", "a.c"));
    CHECK(glob_match("**/*.c", "x/y/a.c"));
    CHECK(!glob_match("**/*.c", "a.cc"));
    CHECK(glob_match("node_modules/**", "node_modules/pkg/index.js"));
    CHECK(!glob_match("node_modules/**", "src/node_modules/pkg/index.js"));
    CHECK(glob_match(".git/**", ".git/objects/ab/cdef"));
    CHECK(glob_match("**", "anything/at/all"));
    CHECK(!glob_match("**/foo", "afoo"));
    CHECK(glob_match("**/foo", "foo"));
    CHECK(glob_match("**/foo", "a/b/foo"));
}

TEST_CASE("default filter excludes the usual trees") {
    FileFilter filter;
    CHECK(filter.matches_path("src/main.c"));
    CHECK(filter.matches_path("README.md"));
    CHECK(!filter.matches_path("node_modules/left-pad/index.js"));
    CHECK(!filter.matches_path(".git/config"));
    CHECK(!filter.matches_path("vendor/lib.h"));
    CHECK(!filter.matches_path("dist/bundle.js"));
    CHECK(!filter.matches_path("third_party/zlib/deflate.c"));
}

TEST_CASE("filter size cap") {
    FileFilter filter;
    filter.max_file_bytes = 10;
    CHECK(filter.admits("a.c", 10));
    CHECK(!filter.admits("a.c", 11));
}

// Filter soundness: excluded paths never pass, whatever the include side says.
TEST_CASE("filter soundness over random path sets") {
    FileFilter filter;
    std::mt19937 rng(99);
    const std::vector<std::string> segments{"src", "lib", "node_modules", "vendor",
                                            "a", "b.c", "x.py", "dist", "third_party"};
    std::uniform_int_distribution<std::size_t> pick(0, segments.size() - 1);
    std::uniform_int_distribution<int> depth(1, 4);
    for (int i = 0; i < 500; ++i) {
        std::string path;
        const int parts = depth(rng);
        for (int p = 0; p < parts; ++p) {
            if (p) path += "/";
            path += segments[pick(rng)];
        }
        const bool admitted = filter.matches_path(path);
        bool excluded = false;
        for (const auto& g : filter.exclude_globs) {
            if (glob_match(g, path)) excluded = true;
        }
        if (excluded) CHECK(!admitted);
    }
}

// ---------------------------------------------------------------------------
// binary sniffing
// ---------------------------------------------------------------------------

TEST_CASE("is_binary") {
    CHECK(is_binary(std::string_view("\0", 1)));
    CHECK(!is_binary("plain ascii text\n"));
    CHECK(!is_binary(""));

    // PNG signature followed by the IHDR length field contains NULs.
    const char png_header[] = "\x89PNG\r\n\x1a\n\x00\x00\x00\rIHDR";
    CHECK(is_binary(std::string_view(png_header, sizeof(png_header) - 1)));

    // NUL beyond the first 8000 bytes is not sniffed.
    std::string late(8000, 'a');
    late.push_back('\0');
    CHECK(!is_binary(late));
    std::string early(7999, 'a');
    early.push_back('\0');
    CHECK(is_binary(early));
}

// ---------------------------------------------------------------------------
// line counting
// ---------------------------------------------------------------------------

TEST_CASE("one line of each category") {
    CHECK(count_file("a=1\n\n# hi\n", "py") == LineCount{1, 1, 1});
}

TEST_CASE("empty content") {
    CHECK(count_file("", "py") == LineCount{0, 0, 0});
    CHECK(count_file("", "") == LineCount{0, 0, 0});
}

TEST_CASE("hand-counted c file with mixed comments") {
    // 20 physical lines; expected by hand:
    //   code: 8, comment: 7, blank: 5
    const char* src =
        "#include <stdio.h>\n"      // code
        "\n"                        // blank
        "// entry point\n"          // comment
        "int main(void) {\n"        // code
        "    /* a block\n"          // comment (opens)
        "       spanning\n"         // comment (inside)
        "       three lines */\n"   // comment (closes)
        "    int x = 1; // trail\n" // code
        "\n"                        // blank
        "    /* open */ x += 2;\n"  // code after a closed block
        "    x += 3; /* open\n"     // code, leaves block open
        "       still inside\n"     // comment
        "    */\n"                  // comment (only the closer)
        "\n"                        // blank
        "    //\n"                  // comment (bare marker)
        "    printf(\"%d\", x);\n"  // code
        "\n"                        // blank
        "    return 0;\n"           // code
        "}\n"                       // code
        "\n";                       // blank
    const LineCount counted = count_file(src, "c");
    CHECK(counted.code == 8);
    CHECK(counted.comment == 7);
    CHECK(counted.blank == 5);
    CHECK(counted.total() == 20);
}

TEST_CASE("unknown extension distinguishes only blank vs code") {
    const LineCount counted = count_file("# not a comment here\n\ntext\n", "md");
    CHECK(counted.code == 2);
    CHECK(counted.comment == 0);
    CHECK(counted.blank == 1);
}

TEST_CASE("lua and markup comment tables") {
    CHECK(count_file("-- note\nprint(1)\n", "lua") == LineCount{1, 1, 0});
    CHECK(count_file("<!-- a\nb -->\n<p>x</p>\n", "html") == LineCount{1, 2, 0});
}

TEST_CASE("block opener inside a string still starts a comment") {
    // Strings are not parsed; the trailing content is swallowed as comment.
    const LineCount counted = count_file("s = \"/*\";\nstill inside\n*/\n", "c");
    CHECK(counted.code == 1);
    CHECK(counted.comment == 2);
}

TEST_CASE("file without trailing newline counts its last line") {
    CHECK(count_file("x = 1", "py") == LineCount{1, 0, 0});
    CHECK(count_file("x = 1\ny = 2", "py") == LineCount{2, 0, 0});
}

TEST_CASE("crlf input") {
    CHECK(count_file("a=1\r\n\r\n# c\r\n", "py") == LineCount{1, 1, 1});
}

namespace {

std::string random_text_file(std::mt19937& rng) {
    std::uniform_int_distribution<int> lines(0, 40);
    std::uniform_int_distribution<int> kind(0, 5);
    std::string text;
    const int n = lines(rng);
    for (int i = 0; i < n; ++i) {
        switch (kind(rng)) {
        case 0: text += "\n"; break;
        case 1: text += "   \t\n"; break;
        case 2: text += "// comment\n"; break;
        case 3: text += "/* block */\n"; break;
        case 4: text += "int v = 1;\n"; break;
        default: text += "call(); /* tail\n"; break;
        }
    }
    return text;
}

} // namespace

TEST_CASE("partition invariant on random files") {
    std::mt19937 rng(1234);
    for (int i = 0; i < 300; ++i) {
        const std::string text = random_text_file(rng);
        const LineCount counted = count_file(text, "c");
        long long physical = 0;
        for (std::size_t p = 0; p < text.size();) {
            const std::size_t nl = text.find('\n', p);
            ++physical;
            p = nl == std::string::npos ? text.size() : nl + 1;
        }
        CHECK(counted.total() == physical);
    }
}

TEST_CASE("appending a code line increases code by exactly one") {
    std::mt19937 rng(77);
    for (int i = 0; i < 50; ++i) {
        std::string text = random_text_file(rng);
        const LineCount before = count_file(text, "py");
        text += "value = 42\n";
        const LineCount after = count_file(text, "py");
        CHECK(after.code == before.code + 1);
        CHECK(after.comment == before.comment);
        CHECK(after.blank == before.blank);
    }
}

TEST_CASE("determinism") {
    const std::string text = "a\n/*\n*/\nb // c\n";
    CHECK(count_file(text, "cpp") == count_file(text, "cpp"));
}

// ---------------------------------------------------------------------------
// tree counting
// ---------------------------------------------------------------------------

TEST_CASE("count_tree adds admitted files") {
    std::vector<TreeFile> files{
        {"a.py", "x=1\ny=2\nz=3\nw=4\nv=5\nu=6\nt=7\ns=8\nr=9\nq=10\n"}, // 10 code
        {"b.py", "x=1\ny=2\nz=3\nw=4\nv=5\n"},                           // 5 code
    };
    CHECK(count_tree(files, FileFilter{}) == 15);
}

TEST_CASE("count_tree respects the default excludes") {
    std::vector<TreeFile> files{
        {"a.py", "x=1\ny=2\nz=3\nw=4\nv=5\nu=6\nt=7\ns=8\nr=9\nq=10\n"},
        {"node_modules/b.py", "x=1\ny=2\nz=3\nw=4\nv=5\n"},
    };
    CHECK(count_tree(files, FileFilter{}) == 10);
}

TEST_CASE("count_tree skips binaries and oversized files") {
    FileFilter filter;
    filter.max_file_bytes = 16;
    std::vector<TreeFile> files{
        {"good.c", "int x;\n"},
        {"image.png", std::string("\x89PNG\x00\x00", 6)},
        {"big.c", "int a;\nint b;\nint c;\n"}, // 21 bytes, over the cap
    };
    CHECK(count_tree(files, filter) == 1);
}

TEST_CASE("count_tree is order independent") {
    std::vector<TreeFile> files{
        {"a.c", "int a;\n// c\n"},
        {"b.rs", "fn main() {}\n"},
        {"c.py", "# only comments\n"},
    };
    const long long forward = count_tree(files, FileFilter{});
    std::reverse(files.begin(), files.end());
    CHECK(count_tree(files, FileFilter{}) == forward);
}

TEST_CASE("extension_of") {
    CHECK(extension_of("a/b/c.CPP") == "cpp");
    CHECK(extension_of("noext") == "");
    CHECK(extension_of(".gitignore") == "");
    CHECK(extension_of("dir.d/file") == "");
    CHECK(extension_of("x.tar.gz") == "gz");
}
