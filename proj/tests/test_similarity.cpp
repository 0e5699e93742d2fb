#include <gtest/gtest.h>

#include <random>

#include "lra/similarity.hpp"

using lra::AlternateSet;
using lra::DenseMatrix;
using lra::ProjectedSpace;
using lra::WordPair;

namespace {

// Cosines of quart:volume versions against mile:distance versions, originals first.
const std::vector<std::optional<double>> kSixteen{
    0.524568, 0.463552, 0.634493, 0.498858, 0.735634, 0.686983, 0.744999, 0.576477,
    0.763385, 0.709965, 0.781394, 0.614685, 0.411644, 0.439250, 0.446202, 0.490511};

ProjectedSpace space_of(const std::vector<std::pair<WordPair, std::vector<double>>>& rows) {
    DenseMatrix v(rows.size(), rows.empty() ? 0 : rows[0].second.size());
    std::vector<WordPair> labels;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        labels.push_back(rows[r].first);
        for (std::size_t c = 0; c < rows[r].second.size(); ++c) v(r, c) = rows[r].second[c];
    }
    return {v, labels};
}

AlternateSet with_alternates(const WordPair& p, std::vector<WordPair> alts) {
    AlternateSet s{p, 1, {}};
    for (auto& a : alts) s.alternates.push_back({a, 0.5, 1});
    return s;
}

} // namespace

TEST(RelationalSimilarity, SixteenCosineExample) {
    std::vector<std::size_t> selected;
    const auto score = lra::relational_similarity_score(kSixteen, &selected);
    ASSERT_TRUE(score);
    EXPECT_NEAR(*score, 0.677258, 1e-6);
    EXPECT_EQ(selected, (std::vector<std::size_t>{0, 2, 4, 5, 6, 7, 8, 9, 10, 11}));
}

TEST(RelationalSimilarity, DegenerateCases) {
    const std::vector<std::optional<double>> equal(16, 0.3);
    EXPECT_DOUBLE_EQ(*lra::relational_similarity_score(equal), 0.3);
    const std::vector<std::optional<double>> only_original{0.42};
    EXPECT_DOUBLE_EQ(*lra::relational_similarity_score(only_original), 0.42);
    const std::vector<std::optional<double>> no_original{std::nullopt, 0.2, 0.4};
    EXPECT_DOUBLE_EQ(*lra::relational_similarity_score(no_original), 0.3);
    const std::vector<std::optional<double>> none(4, std::nullopt);
    EXPECT_FALSE(lra::relational_similarity_score(none));
    // Missing cosines are not zeros.
    const std::vector<std::optional<double>> holes{0.5, std::nullopt, 0.7};
    EXPECT_DOUBLE_EQ(*lra::relational_similarity_score(holes), 0.6);
}

TEST(RelationalSimilarity, ScoreNeverBelowOriginal) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::optional<double>> c(1 + rng() % 16);
        for (auto& x : c)
            if (rng() % 5) x = u(rng);
        const auto s = lra::relational_similarity_score(c);
        if (c[0]) {
            ASSERT_TRUE(s);
            EXPECT_GE(*s, *c[0]);
        }
    }
}

TEST(AnalogyGap, SampleQuestion) {
    const std::vector<std::optional<double>> averages{0.373725, 0.677258, 0.388504, 0.427860, 0.370172};
    const auto g = lra::analogy_gap(averages);
    EXPECT_EQ(g.best, 1u);
    EXPECT_EQ(g.runner_up, 3u);
    EXPECT_NEAR(g.gap, 0.249398, 1e-6);

    const std::vector<std::optional<double>> originals{0.326610, 0.524568, 0.327201, 0.336138, 0.329997};
    EXPECT_NEAR(lra::analogy_gap(originals).gap, 0.188430, 1e-6);
}

TEST(AnalogyGap, TiesAndErrors) {
    const std::vector<std::optional<double>> tied{0.1, 0.5, 0.5};
    const auto g = lra::analogy_gap(tied);
    EXPECT_EQ(g.best, 1u);
    EXPECT_EQ(g.runner_up, 2u);
    EXPECT_EQ(g.gap, 0.0);
    const std::vector<std::optional<double>> one{std::nullopt, 0.4};
    EXPECT_THROW(lra::analogy_gap(one), std::invalid_argument);
}

TEST(Combinations, CountsAndAbsentRows) {
    const WordPair qv{"quart", "volume"}, md{"mile", "distance"};
    const auto space = space_of({{qv, {1, 0}}, {md, {1, 1}}, {{"gallon", "volume"}, {0, 1}}, {{"mile", "length"}, {2, 1}}});
    const auto a = with_alternates(qv, {{"gallon", "volume"}, {"liter", "volume"}, {"pumping", "volume"}});
    const auto b = with_alternates(md, {{"feet", "distance"}, {"mile", "length"}, {"length", "distance"}});
    const auto combos = lra::combination_cosines(space, a, b);
    ASSERT_EQ(combos.size(), 16u);
    EXPECT_EQ(combos[0].a, qv);
    EXPECT_EQ(combos[0].b, md);
    EXPECT_NEAR(*combos[0].cosine, 0.707107, 1e-6);
    EXPECT_FALSE(combos[1].cosine); // feet:distance has no row
    EXPECT_EQ(lra::combination_cosines(space, AlternateSet{qv, 0, {}}, AlternateSet{md, 0, {}}).size(), 1u);
}

TEST(Combinations, SymmetricInArguments) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> g;
    std::vector<std::pair<WordPair, std::vector<double>>> rows;
    for (int i = 0; i < 12; ++i) rows.push_back({{"w" + std::to_string(i), "x"}, {g(rng), g(rng), g(rng)}});
    const auto space = space_of(rows);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pick = [&] { return rows[rng() % rows.size()].first; };
        const auto a = with_alternates(pick(), {pick(), pick()});
        const auto b = with_alternates(pick(), {pick(), {"absent", "x"}, pick()});
        const auto ab = lra::relational_similarity(space, a, b);
        const auto ba = lra::relational_similarity(space, b, a);
        ASSERT_EQ(ab.score.has_value(), ba.score.has_value());
        if (ab.score) {
            EXPECT_NEAR(*ab.score, *ba.score, 1e-12);
        }
    }
}

TEST(BuiltSpace, RepresentedAndFallbacks) {
    const WordPair qv{"quart", "volume"}, hd{"heckler", "disconcert"};
    const auto space = space_of({{qv, {1, 0}}, {hd, {0, 0}}, {{"gallon", "volume"}, {1, 1}}});
    std::map<WordPair, AlternateSet> sets{{qv, with_alternates(qv, {{"gallon", "volume"}})}};
    const lra::BuiltSpace engine(space, sets);
    EXPECT_TRUE(engine.represented(qv));
    EXPECT_FALSE(engine.represented(hd));
    EXPECT_FALSE(engine.represented({"never", "seen"}));
    EXPECT_EQ(engine.versions_of({"never", "seen"}).versions().size(), 1u);
    const auto s = engine.similarity(qv, {"gallon", "volume"});
    EXPECT_EQ(s.combinations.size(), 2u);
    ASSERT_TRUE(s.score);
    EXPECT_FALSE(engine.similarity(hd, qv).score);
}
