#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "deepdoc/corpus.hpp"
#include "helpers.hpp"

using namespace deepdoc;

TEST_CASE("preprocess splits on non-alphabetic characters and lowercases") {
    CHECK(preprocess("Hello, World! 42") == std::vector<std::string>{"hello", "world"});
    CHECK(preprocess("abc") == std::vector<std::string>{"abc"});
    CHECK(preprocess("a-b_c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(preprocess("").empty());
    CHECK(preprocess("123 !? ~").empty());
}

TEST_CASE("preprocess is idempotent under rejoin") {
    for (const std::string text : {"Hello, World! 42", "a-b_c", "MiXeD CaSe 9 words's"}) {
        auto once = preprocess(text);
        std::string rejoined;
        for (const auto& t : once) rejoined += t + " ";
        CHECK(preprocess(rejoined) == once);
    }
}

TEST_CASE("load_corpus reads a class-per-directory tree in stable order") {
    testutil::TempDir dir("corpus");
    std::filesystem::create_directories(dir.path / "sport");
    std::filesystem::create_directories(dir.path / "business");
    testutil::write_file(dir.file("sport/b.txt"), "match won");
    testutil::write_file(dir.file("sport/a.txt"), "goal scored");
    testutil::write_file(dir.file("business/x.txt"), "market up");

    Corpus corpus = load_corpus(dir.path.string());
    REQUIRE(corpus.size() == 3);
    CHECK(corpus.labels == std::vector<std::string>{"business", "sport"});
    // ids follow (class, filename) lexicographic order
    CHECK(corpus.doc(0).label == "business");
    CHECK(corpus.doc(1).tokens == std::vector<std::string>{"goal", "scored"});
    CHECK(corpus.doc(2).tokens == std::vector<std::string>{"match", "won"});

    Corpus again = load_corpus(dir.path.string());
    for (size_t i = 0; i < corpus.size(); ++i) {
        CHECK(corpus.documents[i].raw_text == again.documents[i].raw_text);
        CHECK(corpus.documents[i].label == again.documents[i].label);
    }
}

TEST_CASE("load_corpus single file case and errors") {
    testutil::TempDir dir("corpus1");
    SUBCASE("one class, one file") {
        std::filesystem::create_directories(dir.path / "only");
        testutil::write_file(dir.file("only/doc.txt"), "hello");
        Corpus corpus = load_corpus(dir.path.string());
        CHECK(corpus.size() == 1);
        CHECK(corpus.labels.size() == 1);
    }
    SUBCASE("empty root") {
        CHECK_THROWS_AS(load_corpus(dir.path.string()), CorpusError);
    }
    SUBCASE("missing root") {
        CHECK_THROWS_AS(load_corpus(dir.file("nope")), CorpusError);
    }
    SUBCASE("strict decoding rejects invalid UTF-8") {
        std::filesystem::create_directories(dir.path / "c");
        testutil::write_file(dir.file("c/bad.txt"), std::string("ok\xff\xfe"));
        CHECK_THROWS_AS(load_corpus(dir.path.string(), false), CorpusError);
        CHECK_NOTHROW(load_corpus(dir.path.string(), true));
    }
}

TEST_CASE("build_vocabulary ranks by document frequency") {
    Corpus corpus = testutil::make_corpus({{"x", "a b"}, {"x", "a c"}});

    Vocabulary vocab = build_vocabulary(corpus, 10);
    CHECK(vocab.size() == 3);
    CHECK(vocab.doc_freq[vocab.index_of("a")] == 2);
    CHECK(vocab.doc_freq[vocab.index_of("b")] == 1);
    CHECK(vocab.doc_freq[vocab.index_of("c")] == 1);

    Vocabulary top1 = build_vocabulary(corpus, 1);
    CHECK(top1.size() == 1);
    CHECK(top1.index_of("a") == 0);

    Vocabulary stopped = build_vocabulary(corpus, 10, {"a"});
    CHECK(stopped.size() == 2);
    CHECK(stopped.index_of("a") == -1);
}

TEST_CASE("build_vocabulary counts over the supplied split only") {
    Corpus corpus = testutil::make_corpus({{"x", "a b"}, {"x", "c c c"}});
    Vocabulary vocab = build_vocabulary(corpus, 10, {}, {0});
    CHECK(vocab.index_of("c") == -1);
    CHECK(vocab.n_docs == 1);
}

TEST_CASE("build_vocabulary rejects tokenless corpora") {
    Corpus corpus = testutil::make_corpus({{"x", "123 456"}});
    CHECK_THROWS_AS(build_vocabulary(corpus, 10), CorpusError);
}

TEST_CASE("split partitions, stratifies, and is deterministic") {
    Corpus corpus = testutil::make_disjoint_topic_corpus(3, 40, 8, 10, 1);

    SplitResult a = split(corpus, 0.8, 0.1, 0.1, 42);
    SplitResult b = split(corpus, 0.8, 0.1, 0.1, 42);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    CHECK(a.validation == b.validation);

    std::set<int> seen;
    for (const auto* ids : {&a.train, &a.test, &a.validation}) {
        for (int id : *ids) CHECK(seen.insert(id).second);
    }
    CHECK(seen.size() == corpus.size());

    // 40 docs per class at (0.8, 0.1, 0.1) -> 32/4/4 per class
    CHECK(a.train.size() == 96);
    CHECK(a.test.size() == 12);
    CHECK(a.validation.size() == 12);
}

TEST_CASE("split exact-rounding example: 10 docs at (0.8, 0.1, 0.1)") {
    std::vector<std::pair<std::string, std::string>> docs;
    for (int i = 0; i < 10; ++i) docs.emplace_back("only", "word word");
    // one extra class so pair generation downstream stays valid
    Corpus corpus = testutil::make_corpus(docs);
    SplitResult result = split(corpus, 0.8, 0.1, 0.1, 0);
    CHECK(result.train.size() == 8);
    CHECK(result.test.size() == 1);
    CHECK(result.validation.size() == 1);
}

TEST_CASE("split rejects bad fractions and tiny classes") {
    Corpus corpus = testutil::make_disjoint_topic_corpus(2, 10, 5, 4, 0);
    CHECK_THROWS_AS(split(corpus, 0.5, 0.5, 0.5, 0), CorpusError);
    CHECK_THROWS_AS(split(corpus, 1.0, 0.0, 0.0, 0), CorpusError);

    Corpus tiny = testutil::make_corpus({{"a", "x"}, {"a", "y"}, {"b", "z"}});
    CHECK_THROWS_AS(split(tiny, 0.8, 0.1, 0.1, 0), CorpusError);
}

TEST_CASE("split stratification stays within one document per class") {
    Corpus corpus = testutil::make_disjoint_topic_corpus(4, 37, 6, 8, 3);
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        SplitResult result = split(corpus, 0.7, 0.2, 0.1, seed);
        std::map<std::string, std::array<int, 3>> counts;
        auto tally = [&](const std::vector<int>& ids, int slot) {
            for (int id : ids) ++counts[corpus.doc(id).label][static_cast<size_t>(slot)];
        };
        tally(result.train, 0);
        tally(result.test, 1);
        tally(result.validation, 2);
        for (const auto& [label, c] : counts) {
            CHECK(std::abs(c[0] - 0.7 * 37) <= 1.0);
            CHECK(std::abs(c[1] - 0.2 * 37) <= 1.0);
            CHECK(std::abs(c[2] - 0.1 * 37) <= 1.0);
        }
    }
}
