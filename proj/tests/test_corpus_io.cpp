#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "toklite/corpus_io.hpp"

using namespace toklite;
namespace fs = std::filesystem;

namespace {

struct TempTree {
    fs::path root;
    TempTree() {
        root = fs::temp_directory_path() / ("toklite_corpus_" + std::to_string(::rand()));
        fs::create_directories(root / "sub");
    }
    ~TempTree() { fs::remove_all(root); }
    std::string file(const std::string& name, const std::string& content) const {
        fs::path p = root / name;
        std::ofstream out(p, std::ios::binary);
        out << content;
        return p.string();
    }
};

}  // namespace

TEST_CASE("plain text reads one document per line, skipping blanks") {
    TempTree tree;
    tree.file("a.txt", "first doc\n\nsecond doc\r\nthird\n");
    std::vector<std::string> docs = read_corpus({tree.root.string()});
    CHECK(docs == std::vector<std::string>{"first doc", "second doc", "third"});
}

TEST_CASE("jsonl reads the configured text field") {
    TempTree tree;
    tree.file("a.jsonl",
              R"({"text":"hello","meta":1})" "\n"
              R"({"text":"world"})" "\n");
    std::vector<std::string> docs = read_corpus({tree.root.string()});
    CHECK(docs == std::vector<std::string>{"hello", "world"});

    tree.file("b.jsonl", R"({"body":"custom"})" "\n");
    CorpusOptions options;
    options.text_field = "body";
    CHECK_THROWS_AS(read_corpus({(tree.root / "a.jsonl").string()}, options), ParseError);
    CHECK(read_corpus({(tree.root / "b.jsonl").string()}, options) ==
          std::vector<std::string>{"custom"});
}

TEST_CASE("directories are walked in sorted order") {
    TempTree tree;
    tree.file("sub/z.txt", "z\n");
    tree.file("sub/a.txt", "a\n");
    tree.file("m.txt", "m\n");
    std::vector<std::string> docs = read_corpus({tree.root.string()});
    CHECK(docs == std::vector<std::string>{"m", "a", "z"});
}

TEST_CASE("missing paths and bad jsonl are reported") {
    CHECK_THROWS_AS(read_corpus({"/no/such/path"}), ParseError);
    TempTree tree;
    tree.file("bad.jsonl", "{not json\n");
    CHECK_THROWS_AS(read_corpus({(tree.root / "bad.jsonl").string()}), ParseError);
}

TEST_CASE("reservoir sampling is seeded and deterministic") {
    TempTree tree;
    std::string content;
    for (int i = 0; i < 100; ++i) content += "doc number " + std::to_string(i) + "\n";
    std::string path = tree.file("corpus.txt", content);

    CorpusOptions options;
    options.sample = 10;
    options.seed = 7;
    std::vector<std::string> first = read_corpus({path}, options);
    std::vector<std::string> second = read_corpus({path}, options);
    REQUIRE(first.size() == 10);
    CHECK(first == second);

    options.seed = 8;
    std::vector<std::string> other = read_corpus({path}, options);
    CHECK(other.size() == 10);
    CHECK(first != other);  // overwhelmingly likely for distinct seeds

    options.sample = 500;  // larger than the corpus keeps everything
    CHECK(read_corpus({path}, options).size() == 100);
}
