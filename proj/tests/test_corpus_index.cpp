#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include <unistd.h>

#include "lra/corpus_index.hpp"

namespace fs = std::filesystem;
using lra::CorpusIndex;
using lra::WordPair;

namespace {

// Independent oracle: slide every window over every document and look.
std::uint64_t naive_window_count(const std::vector<std::vector<std::string>>& docs, const WordPair& p, std::size_t w) {
    std::uint64_t n = 0;
    for (const auto& d : docs) {
        if (d.size() < w) continue;
        for (std::size_t s = 0; s + w <= d.size(); ++s) {
            bool a = false, b = false;
            for (std::size_t i = s; i < s + w; ++i) {
                a = a || d[i] == p.left;
                b = b || d[i] == p.right;
            }
            n += a && b;
        }
    }
    return n;
}

std::vector<std::vector<std::string>> split_docs(std::initializer_list<std::string> texts) {
    std::vector<std::vector<std::string>> docs;
    for (const auto& t : texts) docs.push_back(lra::text::tokenize(t));
    return docs;
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("lra_idx_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }
    void write(const std::string& name, const std::string& body) const { std::ofstream(path_ / name) << body; }

private:
    fs::path path_;
};

} // namespace

TEST(Tokenize, LowercasesAlphabeticRuns) {
    EXPECT_EQ(lra::text::tokenize("A Quart of Volume."), (std::vector<std::string>{"a", "quart", "of", "volume"}));
    EXPECT_EQ(lra::text::tokenize("abc123def x-y"), (std::vector<std::string>{"abc", "def", "x", "y"}));
    EXPECT_EQ(lra::text::tokenize("Ça MARCHE déjà"), (std::vector<std::string>{"ça", "marche", "déjà"}));
    EXPECT_TRUE(lra::text::tokenize("... ,;! 42").empty());
}

TEST(BuildIndex, SingleFile) {
    TempDir dir;
    dir.write("a.txt", "A Quart of Volume.");
    const auto idx = lra::build_index(dir.path());
    EXPECT_EQ(idx.token_count(), 4u);
    EXPECT_EQ(idx.vocabulary_size(), 4u);
    EXPECT_EQ(idx.document_count(), 1u);
}

TEST(BuildIndex, DocumentsInFileNameOrder) {
    TempDir dir;
    dir.write("b.txt", "second");
    dir.write("a.txt", "first");
    dir.write("ignored.md", "not a corpus file");
    const auto idx = lra::build_index(dir.path());
    ASSERT_EQ(idx.document_count(), 2u);
    EXPECT_EQ(idx.document_name(0), "a.txt");
    EXPECT_EQ(idx.token(idx.document(0)[0]), "first");
    EXPECT_EQ(idx.token(idx.document(1)[0]), "second");
}

TEST(BuildIndex, PunctuationOnlyFileIsEmptyDocument) {
    TempDir dir;
    dir.write("a.txt", "!!! ... ???");
    dir.write("b.txt", "word");
    const auto idx = lra::build_index(dir.path());
    EXPECT_EQ(idx.document(0).size(), 0u);
    EXPECT_EQ(idx.token_count(), 1u);
}

TEST(BuildIndex, Errors) {
    TempDir dir;
    EXPECT_THROW(lra::build_index(dir.path()), lra::InputError);
    EXPECT_THROW(lra::build_index(dir.path() / "missing"), lra::InputError);
}

TEST(BuildIndex, PostingsInvariants) {
    const auto docs = split_docs({"a b a c a", "c c b", ""});
    const auto idx = CorpusIndex::from_tokens(docs);
    std::uint64_t total = 0;
    for (lra::TokenId t = 0; t < idx.vocabulary_size(); ++t) {
        const auto p = idx.postings(t);
        total += p.size();
        for (std::size_t i = 1; i < p.size(); ++i) EXPECT_TRUE(p[i - 1] < p[i]);
        for (const auto& o : p) EXPECT_EQ(idx.document(o.doc)[o.pos], t);
    }
    EXPECT_EQ(total, idx.token_count());
}

TEST(WindowCount, Examples) {
    const auto idx = CorpusIndex::from_tokens(split_docs({"a quart of pure volume"}));
    EXPECT_EQ(idx.window_cooccurrence_count({"quart", "volume"}, 5), 1u);
    EXPECT_EQ(idx.window_cooccurrence_count({"quart", "missing"}, 5), 0u);
    EXPECT_EQ(idx.window_cooccurrence_count({"quart", "volume"}, 4), 1u);
    EXPECT_EQ(idx.window_cooccurrence_count({"quart", "volume"}, 3), 0u);

    const auto xy = CorpusIndex::from_tokens(split_docs({"x y x y"}));
    EXPECT_EQ(xy.window_cooccurrence_count({"x", "y"}, 2), 3u);
}

TEST(WindowCount, DocumentsAreBoundaries) {
    const auto idx = CorpusIndex::from_tokens(split_docs({"p q r quart", "volume s t u"}));
    EXPECT_EQ(idx.window_cooccurrence_count({"quart", "volume"}, 5), 0u);
}

TEST(WindowCount, RejectsDegenerateArguments) {
    const auto idx = CorpusIndex::from_tokens(split_docs({"a b"}));
    EXPECT_THROW(idx.window_cooccurrence_count({"a", "a"}, 5), std::invalid_argument);
    EXPECT_THROW(idx.window_cooccurrence_count({"a", "b"}, 1), std::invalid_argument);
}

TEST(WindowCount, MatchesNaiveScanOnRandomCorpora) {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t vocab = 2 + rng() % 20;
        std::vector<std::vector<std::string>> docs(1 + rng() % 4);
        for (auto& d : docs) {
            d.resize(rng() % 300);
            for (auto& t : d) t = "w" + std::to_string(rng() % vocab);
        }
        const auto idx = CorpusIndex::from_tokens(docs);
        const WordPair p{"w" + std::to_string(rng() % vocab), "w" + std::to_string(rng() % vocab)};
        if (p.left == p.right) continue;
        const std::size_t window = 2 + rng() % 6;
        ASSERT_EQ(idx.window_cooccurrence_count(p, window), naive_window_count(docs, p, window)) << "trial " << trial;
    }
}

TEST(SuffixVariants, Examples) {
    const auto quart = lra::expand_suffix_variants("quart");
    EXPECT_TRUE(quart.contains("quart"));
    EXPECT_TRUE(quart.contains("quarts"));
    const auto volume = lra::expand_suffix_variants("volume");
    EXPECT_TRUE(volume.contains("volume"));
    EXPECT_TRUE(volume.contains("volumes"));
    EXPECT_TRUE(lra::expand_suffix_variants("quarts").contains("quart"));
    EXPECT_TRUE(lra::expand_suffix_variants("measured").contains("measur"));
    // Stripping needs three characters left over.
    EXPECT_FALSE(lra::expand_suffix_variants("bed").contains("b"));
    EXPECT_FALSE(lra::expand_suffix_variants("sing").contains("s"));
}

TEST(FindPhrases, SuffixVariantAndOrientation) {
    const auto idx = CorpusIndex::from_tokens(split_docs({"volume measured in quarts"}));
    const auto phrases = idx.find_phrases({"quart", "volume"}, 1, 3);
    ASSERT_EQ(phrases.size(), 1u);
    EXPECT_FALSE(phrases[0].left_first);
    EXPECT_EQ(phrases[0].intervening, (std::vector<std::string>{"measured", "in"}));
    EXPECT_EQ(phrases[0].start, 0u);
}

TEST(FindPhrases, GapBounds) {
    EXPECT_TRUE(CorpusIndex::from_tokens(split_docs({"quart volume"})).find_phrases({"quart", "volume"}, 1, 3).empty());
    EXPECT_TRUE(CorpusIndex::from_tokens(split_docs({"quart a b c d volume"})).find_phrases({"quart", "volume"}, 1, 3).empty());
    EXPECT_EQ(CorpusIndex::from_tokens(split_docs({"quart a b c volume"})).find_phrases({"quart", "volume"}, 1, 3).size(), 1u);
}

TEST(FindPhrases, NeverCrossDocuments) {
    const auto idx = CorpusIndex::from_tokens(split_docs({"x quart of", "volume y"}));
    EXPECT_TRUE(idx.find_phrases({"quart", "volume"}, 1, 3).empty());
}

TEST(FindPhrases, SameWordPairRejected) {
    const auto idx = CorpusIndex::from_tokens(split_docs({"a b a"}));
    EXPECT_THROW(idx.find_phrases({"a", "a"}, 1, 3), std::invalid_argument);
}

TEST(FindPhrases, OverlappingVariantsDeduplicated) {
    // "cats" is a variant of both "cat" (+s) and "cats"; the span is found once.
    const auto idx = CorpusIndex::from_tokens(split_docs({"cat and cats"}));
    const auto phrases = idx.find_phrases({"cat", "cats"}, 1, 3);
    ASSERT_EQ(phrases.size(), 1u);
    EXPECT_TRUE(phrases[0].left_first);
}

TEST(FindPhrases, RoundTripOnRandomCorpora) {
    std::mt19937_64 rng(7);
    const std::vector<std::string> words{"quart", "quarts", "volume", "volumes", "of", "in", "the", "a", "spray"};
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::vector<std::string>> docs(1 + rng() % 3);
        for (auto& d : docs) {
            d.resize(rng() % 80);
            for (auto& t : d) t = words[rng() % words.size()];
        }
        const auto idx = CorpusIndex::from_tokens(docs);
        const WordPair pair{"quart", "volume"};
        const auto left = lra::expand_suffix_variants(pair.left);
        const auto right = lra::expand_suffix_variants(pair.right);
        std::set<std::tuple<std::uint32_t, std::uint32_t, std::size_t>> spans;
        for (const auto& ph : idx.find_phrases(pair, 1, 3)) {
            const auto& d = docs[ph.doc];
            ASSERT_LE(ph.start + ph.length(), d.size());
            const auto& first = d[ph.start];
            const auto& last = d[ph.start + ph.length() - 1];
            EXPECT_TRUE(ph.left_first ? left.contains(first) && right.contains(last)
                                      : right.contains(first) && left.contains(last));
            for (std::size_t i = 0; i < ph.intervening.size(); ++i) EXPECT_EQ(d[ph.start + 1 + i], ph.intervening[i]);
            EXPECT_TRUE(spans.emplace(ph.doc, ph.start, ph.length()).second) << "duplicate span";
        }
        // Completeness: brute-force count of qualifying spans.
        std::size_t expected = 0;
        for (const auto& d : docs)
            for (std::size_t s = 0; s < d.size(); ++s)
                for (std::size_t len = 3; len <= 5 && s + len <= d.size(); ++len) {
                    const auto& f = d[s];
                    const auto& l = d[s + len - 1];
                    expected += (left.contains(f) && right.contains(l)) || (right.contains(f) && left.contains(l));
                }
        EXPECT_EQ(spans.size(), expected);
    }
}

TEST(IndexPersistence, SaveLoadPreservesQueries) {
    const auto docs = split_docs({"volume measured in quarts and a quart of volume", "", "x y x y quart"});
    const auto idx = CorpusIndex::from_tokens(docs, {"a.txt", "b.txt", "c.txt"});
    std::stringstream ss;
    idx.save(ss);
    EXPECT_EQ(ss.str().substr(0, 8), "LRAIDX1\n");
    const auto back = CorpusIndex::load(ss);
    EXPECT_EQ(back.token_count(), idx.token_count());
    EXPECT_EQ(back.vocabulary_size(), idx.vocabulary_size());
    EXPECT_EQ(back.document_name(2), "c.txt");
    EXPECT_EQ(back.window_cooccurrence_count({"quart", "volume"}, 5), idx.window_cooccurrence_count({"quart", "volume"}, 5));
    EXPECT_EQ(back.find_phrases({"quart", "volume"}, 1, 3).size(), idx.find_phrases({"quart", "volume"}, 1, 3).size());
    std::stringstream again;
    back.save(again);
    EXPECT_EQ(again.str(), ss.str());
}

TEST(IndexPersistence, RejectsWrongMagicAndCorruption) {
    std::stringstream bad("LRAIDX0\n");
    EXPECT_THROW(CorpusIndex::load(bad), lra::InputError);
    std::stringstream truncated("LRAIDX1\ndocuments 1\n3\ta.txt\nvocabulary 1 tokens 3\nx\t2\t0:0 0:1\n");
    EXPECT_THROW(CorpusIndex::load(truncated), lra::InputError);
}

TEST(IndexPersistence, MalformedNumbersAreInputErrors) {
    std::stringstream bad("LRAIDX1\ndocuments 1\nxx\ta.txt\n");
    EXPECT_THROW(CorpusIndex::load(bad), lra::InputError);
}
