#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "lra/config.hpp"
#include "lra/thesaurus.hpp"

using lra::Candidate;
using lra::Thesaurus;
using lra::WordPair;

namespace {

Thesaurus parse(const std::string& text) {
    std::istringstream is(text);
    return Thesaurus::parse(is);
}

const char* const kQuart =
    "quart\tn\n"
    "gallon\t0.8\n"
    "pint\t0.75\n"
    "ounce\t0.7\n"
    "cup\t0.6\n"
    "half-pint\t0.55\n"
    "Quartz\t0.5\n"
    "litre\t0.45\n"
    "\n"
    "quart\tv\n"
    "gallon\t0.9\n"
    "quarter\t0.3\n";

} // namespace

TEST(Acceptability, Rules) {
    EXPECT_TRUE(lra::is_acceptable_alternate("gallon"));
    EXPECT_TRUE(lra::is_acceptable_alternate("pint"));
    EXPECT_FALSE(lra::is_acceptable_alternate("cup"));       // too short
    EXPECT_FALSE(lra::is_acceptable_alternate("half-pint")); // hyphen
    EXPECT_FALSE(lra::is_acceptable_alternate("Quartz"));    // proper noun
    EXPECT_FALSE(lra::is_acceptable_alternate("ice cream"));
    EXPECT_FALSE(lra::is_acceptable_alternate("b2b2"));
    EXPECT_TRUE(lra::is_acceptable_alternate("café"));
    EXPECT_FALSE(lra::is_acceptable_alternate("évé")); // three code points, five bytes
}

TEST(ThesaurusParse, BlocksAndLookup) {
    const auto th = parse(kQuart);
    EXPECT_EQ(th.size(), 1u);
    const auto lists = th.lookup("quart");
    ASSERT_EQ(lists.size(), 2u);
    EXPECT_EQ(lists[0].pos, lra::PartOfSpeech::noun);
    EXPECT_EQ(lists[0].neighbours.size(), 7u);
    EXPECT_EQ(lists[1].pos, lra::PartOfSpeech::verb);
    EXPECT_TRUE(th.lookup("absent").empty());
}

TEST(ThesaurusParse, ErrorsCarryLineNumbers) {
    try {
        parse("quart\tn\ngallon\t0.8\npint\t0.9\n");
        FAIL() << "expected InputError";
    } catch (const lra::InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(parse("quart\tx\n"), lra::InputError);
    EXPECT_THROW(parse("quart\tn\ngallon\t1.5\n"), lra::InputError);
    EXPECT_THROW(parse("quart\tn\ngallon\tabc\n"), lra::InputError);
    EXPECT_THROW(parse("quart n\n"), lra::InputError);
}

TEST(SimilarWords, MergesFiltersAndRanks) {
    const auto th = parse(kQuart);
    const auto sims = lra::similar_words(th, "quart", 10);
    const std::vector<lra::ScoredWord> expected{
        {"gallon", 0.9}, {"pint", 0.75}, {"ounce", 0.7}, {"litre", 0.45}, {"quarter", 0.3}};
    EXPECT_EQ(sims, expected);
    EXPECT_EQ(lra::similar_words(th, "quart", 2).size(), 2u);
    EXPECT_TRUE(lra::similar_words(th, "absent", 10).empty());
}

TEST(SimilarWords, ScoreTiesBrokenAlphabetically) {
    const auto th = parse("w\tn\nzeta\t0.5\nalpha\t0.5\nmike\t0.5\n");
    const auto sims = lra::similar_words(th, "w", 2);
    ASSERT_EQ(sims.size(), 2u);
    EXPECT_EQ(sims[0].word, "alpha");
    EXPECT_EQ(sims[1].word, "mike");
}

TEST(Candidates, OneMemberAtATime) {
    const auto th = parse(std::string(kQuart) + "\nvolume\tn\nbulk\t0.6\nquart\t0.5\ncapacity\t0.4\n");
    const auto cands = lra::generate_candidates(th, {"quart", "volume"}, 10);
    ASSERT_FALSE(cands.empty());
    for (const auto& c : cands) {
        const bool left_kept = c.pair.left == "quart";
        const bool right_kept = c.pair.right == "volume";
        EXPECT_NE(left_kept, right_kept) << c.pair;
        EXPECT_TRUE(c.pair.valid());
    }
    EXPECT_EQ(cands.front().pair, (WordPair{"gallon", "volume"}));
    // "quart" as a neighbour of volume would give quart:quart and is dropped.
    EXPECT_EQ(std::count_if(cands.begin(), cands.end(), [](const Candidate& c) { return c.pair.right == "quart"; }), 0);
}

TEST(FilterAlternates, KeepsMostFrequent) {
    const WordPair original{"quart", "volume"};
    const std::vector<Candidate> cands{
        {{"gallon", "volume"}, 0.9}, {{"pint", "volume"}, 0.75}, {{"ounce", "volume"}, 0.7},
        {{"litre", "volume"}, 0.45}, {{"quart", "bulk"}, 0.6},  {{"quart", "capacity"}, 0.4}};
    const std::map<WordPair, std::uint64_t> freq{{{"quart", "volume"}, 9}, {{"gallon", "volume"}, 5},
                                                 {{"pint", "volume"}, 5},  {{"ounce", "volume"}, 0},
                                                 {{"litre", "volume"}, 7}, {{"quart", "bulk"}, 5}};
    const auto f = [&](const WordPair& p) {
        const auto it = freq.find(p);
        return it == freq.end() ? std::uint64_t{0} : it->second;
    };
    const auto set = lra::filter_alternates(original, cands, 3, f);
    EXPECT_EQ(set.original_freq, 9u);
    ASSERT_EQ(set.alternates.size(), 3u);
    EXPECT_EQ(set.alternates[0].pair, (WordPair{"litre", "volume"}));
    EXPECT_EQ(set.alternates[1].pair, (WordPair{"gallon", "volume"})); // tie on 5: higher thesaurus score
    EXPECT_EQ(set.alternates[2].pair, (WordPair{"pint", "volume"}));
    EXPECT_EQ(set.versions().front(), original);
}

TEST(FilterAlternates, NeverPadsWithZeroFrequency) {
    const std::vector<Candidate> cands{{{"gallon", "volume"}, 0.9}};
    const auto set = lra::filter_alternates({"quart", "volume"}, cands, 3, [](const WordPair&) { return std::uint64_t{0}; });
    EXPECT_TRUE(set.alternates.empty());
    EXPECT_EQ(set.versions().size(), 1u);
}

TEST(FilterAlternates, OutputIsSubsetOfCandidatesAndBounded) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Candidate> cands;
        std::map<WordPair, std::uint64_t> freq;
        const std::size_t n = rng() % 25;
        for (std::size_t i = 0; i < n; ++i) {
            const WordPair p{"w" + std::to_string(rng() % 12), "v"};
            cands.push_back({p, static_cast<double>(rng() % 100) / 100.0});
            freq[p] = rng() % 4;
        }
        const std::size_t nf = rng() % 5;
        const auto set = lra::filter_alternates({"o", "v"}, cands, nf, [&](const WordPair& p) {
            const auto it = freq.find(p);
            return it == freq.end() ? std::uint64_t{0} : it->second;
        });
        ASSERT_LE(set.alternates.size(), nf);
        for (std::size_t i = 0; i < set.alternates.size(); ++i) {
            const auto& a = set.alternates[i];
            EXPECT_GT(a.corpus_freq, 0u);
            EXPECT_TRUE(std::any_of(cands.begin(), cands.end(), [&](const Candidate& c) { return c.pair == a.pair; }));
            if (i) {
                EXPECT_GE(set.alternates[i - 1].corpus_freq, a.corpus_freq);
            }
            for (std::size_t j = 0; j < i; ++j) EXPECT_NE(set.alternates[j].pair, a.pair);
        }
    }
}

TEST(FilterAlternates, WindowFrequencyFromIndex) {
    const auto idx = lra::CorpusIndex::from_texts({{"a", "a gallon of volume here and then some more words a pint of x y z w volume"}});
    const std::vector<Candidate> cands{{{"gallon", "volume"}, 0.9}, {{"pint", "volume"}, 0.8}};
    const auto set = lra::filter_alternates(idx, {"quart", "volume"}, cands, 3);
    ASSERT_EQ(set.alternates.size(), 1u);
    EXPECT_EQ(set.alternates[0].pair, (WordPair{"gallon", "volume"}));
    EXPECT_EQ(set.original_freq, 0u);
}

TEST(Config, DefaultsAndParse) {
    lra::LraConfig def;
    EXPECT_EQ(def.num_sim, 10u);
    EXPECT_EQ(def.max_phrase, 5u);
    EXPECT_EQ(def.num_filter, 3u);
    EXPECT_EQ(def.num_patterns, 4000u);
    EXPECT_EQ(def.k, 300u);
    EXPECT_EQ(def.num_combinations(), 16u);
    EXPECT_NO_THROW(def.validate());

    std::istringstream is("# comment\nk = 8\nnum_patterns=100 # trailing\nseed = 3\n");
    const auto cfg = lra::LraConfig::parse(is);
    EXPECT_EQ(cfg.k, 8u);
    EXPECT_EQ(cfg.num_patterns, 100u);
    EXPECT_EQ(cfg.seed, 3u);

    std::ostringstream os;
    cfg.write(os);
    std::istringstream back(os.str());
    const auto again = lra::LraConfig::parse(back);
    EXPECT_EQ(again.k, cfg.k);
    EXPECT_EQ(again.num_patterns, cfg.num_patterns);
    EXPECT_EQ(again.suffixes, cfg.suffixes);
}

TEST(Config, AblationShrinksCombinations) {
    lra::LraConfig cfg;
    cfg.ablate_synonyms = true;
    EXPECT_EQ(cfg.effective_num_filter(), 0u);
    EXPECT_EQ(cfg.num_combinations(), 1u);
}

TEST(Config, Errors) {
    const auto bad = [](const std::string& text) {
        std::istringstream is(text);
        return lra::LraConfig::parse(is);
    };
    EXPECT_THROW(bad("bogus = 1\n"), lra::InputError);
    EXPECT_THROW(bad("k = 0\n"), lra::InputError);
    EXPECT_THROW(bad("k = many\n"), lra::InputError);
    EXPECT_THROW(bad("max_phrase = 7\n"), lra::InputError);
    EXPECT_THROW(bad("num_combinations = 9\n"), lra::InputError);
    EXPECT_NO_THROW(bad("num_combinations = 16\n"));
    try {
        bad("k = 8\nbogus = 1\n");
        ADD_FAILURE() << "expected InputError";
    } catch (const lra::InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
}

TEST(FilterAlternates, QuartVolumeFrequencies) {
    const WordPair original{"quart", "volume"};
    const std::vector<std::pair<Candidate, std::uint64_t>> table{
        {{{"pint", "volume"}, 0.209843}, 372},        {{{"gallon", "volume"}, 0.158739}, 1500},
        {{{"liter", "volume"}, 0.122297}, 3323},      {{{"squirt", "volume"}, 0.0842603}, 54},
        {{{"pail", "volume"}, 0.083708}, 28},         {{{"vial", "volume"}, 0.083708}, 373},
        {{{"pumping", "volume"}, 0.0734792}, 1386},   {{{"ounce", "volume"}, 0.0709759}, 430},
        {{{"spoonful", "volume"}, 0.0704245}, 42},    {{{"tablespoon", "volume"}, 0.0685988}, 96},
        {{{"quart", "turnover"}, 0.228795}, 0},       {{{"quart", "output"}, 0.224934}, 34},
        {{{"quart", "export"}, 0.206013}, 7},         {{{"quart", "value"}, 0.203389}, 266},
        {{{"quart", "import"}, 0.185549}, 16},        {{{"quart", "revenue"}, 0.184562}, 0},
        {{{"quart", "sale"}, 0.16854}, 119},          {{{"quart", "investment"}, 0.160734}, 11},
        {{{"quart", "earnings"}, 0.156212}, 0},       {{{"quart", "profit"}, 0.155507}, 24}};
    std::vector<Candidate> cands;
    std::map<WordPair, std::uint64_t> freq{{original, 632}};
    for (const auto& [c, f] : table) {
        cands.push_back(c);
        freq[c.pair] = f;
    }
    const auto set = lra::filter_alternates(original, cands, 3, [&](const WordPair& p) { return freq.at(p); });
    EXPECT_EQ(set.original_freq, 632u);
    ASSERT_EQ(set.alternates.size(), 3u);
    EXPECT_EQ(set.alternates[0].pair, (WordPair{"liter", "volume"}));
    EXPECT_EQ(set.alternates[1].pair, (WordPair{"gallon", "volume"}));
    EXPECT_EQ(set.alternates[2].pair, (WordPair{"pumping", "volume"}));
}

TEST(ThesaurusParse, ScoreStoredExactlyAndEmptyFile) {
    const auto th = parse("quart\tn\npint\t0.209843\n");
    EXPECT_EQ(th.lookup("quart")[0].neighbours[0].score, 0.209843);
    EXPECT_EQ(parse("").size(), 0u);
}

TEST(SimilarWords, MaxScoreAcrossPartsOfSpeech) {
    const auto th = parse("w\tn\nbeta\t0.5\n\nw\tv\nbeta\t0.3\n");
    const auto s = lra::similar_words(th, "w", 10);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].score, 0.5);
}

TEST(Candidates, NumSimOnePerSide) {
    const auto th = parse("quart\tn\ngallon\t0.5\n\nvolume\tn\nbulks\t0.4\n");
    const auto c = lra::generate_candidates(th, {"quart", "volume"}, 1);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].pair, (WordPair{"gallon", "volume"}));
    EXPECT_EQ(c[1].pair, (WordPair{"quart", "bulks"}));
    EXPECT_TRUE(lra::generate_candidates(th, {"absent", "missing"}, 10).empty());
}
