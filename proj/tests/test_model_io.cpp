#include <doctest.h>

#include <random>
#include <sstream>

#include "helpers.hpp"
#include "toklite/bytes.hpp"
#include "toklite/encoder.hpp"
#include "toklite/model_io.hpp"

using namespace toklite;

namespace {

TokenizerModel hf_from_strings(const std::string& vocab, const std::string& merges,
                               LoadOptions options = {}) {
    std::istringstream v(vocab);
    std::istringstream m(merges);
    return load_hf(v, m, options);
}

}  // namespace

TEST_CASE("load_hf builds a minimal model") {
    TokenizerModel model = hf_from_strings(R"({"a":0,"b":1,"ab":2})", "a b\n");
    CHECK(model.size() == 3);
    CHECK(model.flavor() == Flavor::standard);
    REQUIRE(model.merges().size() == 1);
    CHECK(model.merges()[0].rank == 0);
    CHECK(model.merges()[0].result == 2);
    CHECK(model.is_base(0));
    CHECK_FALSE(model.is_base(2));
}

TEST_CASE("load_hf tolerates the version header and blank lines") {
    TokenizerModel model =
        hf_from_strings(R"({"a":0,"b":1,"ab":2})", "#version: 0.2\na b\n\n");
    CHECK(model.merges().size() == 1);
}

TEST_CASE("load_hf rejects merges over unknown tokens") {
    CHECK_THROWS_AS(hf_from_strings(R"({"a":0,"b":1,"ab":2})", "a c\n"), IntegrityError);
    // pair resolves but the concatenation is missing from the vocab
    CHECK_THROWS_AS(hf_from_strings(R"({"a":0,"b":1})", "a b\n"), IntegrityError);
}

TEST_CASE("load_hf reports malformed lines with their number") {
    try {
        hf_from_strings(R"({"a":0,"b":1,"ab":2})", "a b\na b c\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("load_hf rejects sparse or duplicate ids") {
    CHECK_THROWS_AS(hf_from_strings(R"({"a":0,"b":7})", ""), IntegrityError);
}

TEST_CASE("load_hf decodes byte-level vocabularies") {
    // "Ġ" (U+0120) encodes a leading space byte, as in Qwen-style assets
    TokenizerModel model = hf_from_strings(
        R"({"i":0,"n":1,"c":2,"l":3,"u":4,"d":5,"Ġ":6,"includ":7,"Ġinclud":8})",
        "Ġ includ\n");
    auto id = model.find(" includ");
    REQUIRE(id.has_value());
    CHECK(model.bytes(*id) == " includ");
    CHECK_FALSE(model.is_base(*id));
}

TEST_CASE("plain ASCII vocab is left alone by byte-level detection") {
    TokenizerModel model = hf_from_strings(R"({"a":0,"b":1,"ab":2})", "a b\n");
    CHECK(model.find("ab").has_value());
}

TEST_CASE("load_tiktoken reads a minimal rank table") {
    // a:0 b:1 c:2 ab:3 abc:4
    std::istringstream in("YQ== 0\nYg== 1\nYw== 2\nYWI= 3\nYWJj 4\n");
    TokenizerModel model = load_tiktoken(in);
    CHECK(model.size() == 5);
    CHECK(model.flavor() == Flavor::rank_greedy);
    CHECK(model.base_ids().size() == 3);
    CHECK(*model.rank(*model.find("abc")) == 4);
}

TEST_CASE("load_tiktoken rejects a token over uncovered bytes") {
    // ab:0 a:1 -- the byte 'b' has no single-byte token
    std::istringstream in("YWI= 0\nYQ== 1\n");
    try {
        load_tiktoken(in);
        FAIL("expected IntegrityError for missing byte coverage");
    } catch (const IntegrityError& e) {
        CHECK(std::string(e.what()).find("single-byte") != std::string::npos);
    }
}

TEST_CASE("load_tiktoken with full byte coverage") {
    std::ostringstream file;
    for (int b = 0; b < 256; ++b) {
        file << base64_encode(std::string(1, static_cast<char>(b))) << " " << b << "\n";
    }
    file << base64_encode("ab") << " 256\n";
    file << base64_encode("abc") << " 257\n";
    std::istringstream in(file.str());
    TokenizerModel model = load_tiktoken(in);
    CHECK(model.flavor() == Flavor::rank_greedy);
    CHECK(model.size() == 258);
    CHECK(model.merges().empty());
    CHECK(model.base_ids().size() == 256);
    CHECK(*model.rank(*model.find("abc")) == 257);
}

TEST_CASE("load_tiktoken rejects duplicate ranks") {
    std::ostringstream file;
    for (int b = 0; b < 256; ++b) {
        file << base64_encode(std::string(1, static_cast<char>(b))) << " " << b << "\n";
    }
    file << base64_encode("ab") << " 7\n";
    std::istringstream in(file.str());
    CHECK_THROWS_AS(load_tiktoken(in), IntegrityError);
}

TEST_CASE("native format round-trips losslessly") {
    std::mt19937_64 rng(3);
    auto standard = testutil::make_standard({"a", "b", "c", " ", "ab", "abc"},
                                            {{"a", "b"}, {"ab", "c"}},
                                            PretokenizerMode::whitespace_prefix);
    auto greedy = testutil::make_rank_greedy({"a", "b", "c", " ", "ab", "abc"});
    for (const TokenizerModel* model : {&standard, &greedy}) {
        std::stringstream buffer;
        save_native(buffer, *model);
        NativeFile loaded = load_native(buffer);
        CHECK(loaded.model.content_hash() == model->content_hash());
        CHECK(loaded.imr.empty());

        // behavioral equality on a few random strings
        for (int i = 0; i < 20; ++i) {
            std::string text;
            for (std::size_t k = 0; k < rng() % 24; ++k) {
                text.push_back("abc "[rng() % 4]);
            }
            CHECK(encode(loaded.model, text).final_ids == encode(*model, text).final_ids);
        }
    }
}

TEST_CASE("native format detects tampered content") {
    auto model = testutil::make_standard({"a", "b", "ab"}, {{"a", "b"}});
    std::stringstream buffer;
    save_native(buffer, model);
    std::string text = buffer.str();
    auto at = text.find("\"model_hash\": \"");
    REQUIRE(at != std::string::npos);
    text[at + 15] = text[at + 15] == '0' ? '1' : '0';
    std::istringstream in(text);
    CHECK_THROWS_AS(load_native(in), IntegrityError);
}
