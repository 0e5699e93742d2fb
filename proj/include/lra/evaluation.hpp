#ifndef LRA_EVALUATION_HPP
#define LRA_EVALUATION_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "lra/error.hpp"
#include "lra/parallel.hpp"
#include "lra/similarity.hpp"
#include "lra/word_pair.hpp"

namespace lra {

// ---------------------------------------------------------------------------
// Multiple-choice analogy questions

struct SatQuestion {
    WordPair stem;
    std::array<WordPair, 5> choices;
    std::size_t answer = 0;

    std::vector<WordPair> pairs() const {
        std::vector<WordPair> p{stem};
        p.insert(p.end(), choices.begin(), choices.end());
        return p;
    }
};

struct Answer {
    std::optional<std::size_t> choice; // nullopt means the question was skipped
    std::array<std::optional<double>, 5> scores;
};

/// Picks the choice with the highest relational similarity to the stem.
/// Skips when the stem has no usable row (itself or any alternate), or when
/// no choice can be scored. Ties go to the lower index.
inline Answer answer_question(const BuiltSpace& engine, const SatQuestion& q) {
    Answer a;
    if (!engine.represented(q.stem)) return a;
    for (std::size_t i = 0; i < q.choices.size(); ++i) a.scores[i] = engine.similarity(q.stem, q.choices[i]).score;
    for (std::size_t i = 0; i < a.scores.size(); ++i)
        if (a.scores[i] && (!a.choice || *a.scores[i] > *a.scores[*a.choice])) a.choice = i;
    return a;
}

struct SatReport {
    std::size_t correct = 0;
    std::size_t incorrect = 0;
    std::size_t skipped = 0;
    std::size_t total = 0;
    double score = 0.0;     // (correct + 0.2 * skipped) / total
    double precision = 0.0; // correct / (correct + incorrect)
    double recall = 0.0;    // correct / total

    void write(std::ostream& os) const {
        os << std::fixed << std::setprecision(1) << "Correct\t" << correct << '\n'
           << "Incorrect\t" << incorrect << '\n'
           << "Skipped\t" << skipped << '\n'
           << "Total\t" << total << '\n'
           << "Score\t" << 100.0 * score << "%\n"
           << "Precision\t" << 100.0 * precision << "%\n"
           << "Recall\t" << 100.0 * recall << "%\n"
           << std::defaultfloat;
    }
};

/// Skipped questions earn 0.2, the expected value of a random guess.
inline SatReport score_sat(std::size_t correct, std::size_t incorrect, std::size_t skipped) {
    SatReport r{correct, incorrect, skipped, correct + incorrect + skipped};
    if (r.total == 0) throw std::invalid_argument("score_sat: no questions");
    const double total = static_cast<double>(r.total);
    r.score = (static_cast<double>(correct) + 0.2 * static_cast<double>(skipped)) / total;
    r.precision = correct + incorrect == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(correct + incorrect);
    r.recall = static_cast<double>(correct) / total;
    return r;
}

struct QuestionOutcome {
    std::optional<std::size_t> predicted;
    std::size_t answer = 0;
};

inline SatReport score_sat(std::span<const QuestionOutcome> outcomes) {
    std::size_t correct = 0, incorrect = 0, skipped = 0;
    for (const auto& o : outcomes) {
        if (!o.predicted)
            ++skipped;
        else if (*o.predicted == o.answer)
            ++correct;
        else
            ++incorrect;
    }
    return score_sat(correct, incorrect, skipped);
}

// ---------------------------------------------------------------------------
// Noun-modifier classification

struct NmExample {
    std::string modifier;
    std::string head;
    std::string class30;
    std::string class5;

    WordPair pair() const { return {modifier, head}; }
};

enum class Scheme { classes30, classes5 };

inline const std::set<std::string>& general_groups() {
    static const std::set<std::string> groups{"causal", "temporal", "spatial", "participatory", "qualitative"};
    return groups;
}

struct ClassScores {
    std::size_t true_positive = 0;
    std::size_t false_positive = 0;
    std::size_t false_negative = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f = 0.0;
};

struct ClassReport {
    std::size_t total = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
    std::map<std::string, ClassScores> classes; // classes present in gold
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f = 0.0;

    void write(std::ostream& os) const {
        os << std::fixed << std::setprecision(1) << "class\tprecision\trecall\tf\n";
        for (const auto& [name, c] : classes)
            os << name << '\t' << 100.0 * c.precision << "%\t" << 100.0 * c.recall << "%\t" << 100.0 * c.f << "%\n";
        os << "Correct\t" << correct << '\n'
           << "Incorrect\t" << total - correct << '\n'
           << "Total\t" << total << '\n'
           << "Accuracy\t" << 100.0 * accuracy << "%\n"
           << "Macro precision\t" << 100.0 * macro_precision << "%\n"
           << "Macro recall\t" << 100.0 * macro_recall << "%\n"
           << "Macro F\t" << 100.0 * macro_f << "%\n"
           << std::defaultfloat;
    }
};

/// Per-class precision, recall and F plus their unweighted means over the
/// classes that occur in `gold`. An empty prediction means the classifier
/// abstained; it counts against recall only. Zero denominators give 0.
inline ClassReport macro_f(std::span<const std::string> gold, std::span<const std::string> predicted) {
    if (gold.size() != predicted.size()) throw std::invalid_argument("macro_f: gold and predicted differ in length");
    if (gold.empty()) throw std::invalid_argument("macro_f: no examples");
    ClassReport r;
    r.total = gold.size();
    for (const auto& g : gold) r.classes[g];
    for (std::size_t i = 0; i < gold.size(); ++i) {
        if (gold[i] == predicted[i]) {
            ++r.correct;
            ++r.classes[gold[i]].true_positive;
        } else {
            ++r.classes[gold[i]].false_negative;
            if (const auto it = r.classes.find(predicted[i]); it != r.classes.end()) ++it->second.false_positive;
        }
    }
    for (auto& [name, c] : r.classes) {
        const auto ratio = [](std::size_t num, std::size_t den) {
            return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
        };
        c.precision = ratio(c.true_positive, c.true_positive + c.false_positive);
        c.recall = ratio(c.true_positive, c.true_positive + c.false_negative);
        c.f = c.precision + c.recall == 0.0 ? 0.0 : 2.0 * c.precision * c.recall / (c.precision + c.recall);
        r.macro_precision += c.precision;
        r.macro_recall += c.recall;
        r.macro_f += c.f;
    }
    const double k = static_cast<double>(r.classes.size());
    r.macro_precision /= k;
    r.macro_recall /= k;
    r.macro_f /= k;
    r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.total);
    return r;
}

struct RankedNeighbour {
    std::size_t pool_index = 0;
    std::optional<double> original_cosine;
    std::optional<double> score;
};

namespace detail {

// Present values first (descending), then ties and absent values ordered
// by neighbour pair, then pool position.
inline bool ranks_before(const std::optional<double>& a, const std::optional<double>& b, const WordPair& pa,
                         const WordPair& pb, std::size_t ia, std::size_t ib) {
    if (a.has_value() != b.has_value()) return a.has_value();
    if (a && *a != *b) return *a > *b;
    if (pa != pb) return pa < pb;
    return ia < ib;
}

} // namespace detail

/// Full relational-similarity ranking of the whole pool.
inline std::vector<RankedNeighbour> exhaustive_neighbours(const BuiltSpace& engine, const WordPair& probe,
                                                          std::span<const WordPair> pool) {
    if (pool.empty()) throw std::invalid_argument("empty neighbour pool");
    std::vector<RankedNeighbour> ranked(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i)
        ranked[i] = {i, engine.original_cosine(probe, pool[i]), engine.similarity(probe, pool[i]).score};
    std::sort(ranked.begin(), ranked.end(), [&](const RankedNeighbour& a, const RankedNeighbour& b) {
        return detail::ranks_before(a.score, b.score, pool[a.pool_index], pool[b.pool_index], a.pool_index, b.pool_index);
    });
    return ranked;
}

/// Phase 1 ranks the pool by the original-pair cosine alone and keeps the
/// best `shortlist`; phase 2 reranks that shortlist by relational
/// similarity with alternates.
inline std::vector<RankedNeighbour> two_phase_neighbours(const BuiltSpace& engine, const WordPair& probe,
                                                         std::span<const WordPair> pool, std::size_t shortlist = 30) {
    if (pool.empty()) throw std::invalid_argument("empty neighbour pool");
    if (shortlist > pool.size()) throw std::invalid_argument("shortlist larger than the pool");
    std::vector<RankedNeighbour> ranked(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) ranked[i] = {i, engine.original_cosine(probe, pool[i]), std::nullopt};
    const auto phase1 = [&](const RankedNeighbour& a, const RankedNeighbour& b) {
        return detail::ranks_before(a.original_cosine, b.original_cosine, pool[a.pool_index], pool[b.pool_index],
                                    a.pool_index, b.pool_index);
    };
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(shortlist), ranked.end(), phase1);
    ranked.resize(shortlist);
    for (auto& r : ranked) r.score = engine.similarity(probe, pool[r.pool_index]).score;
    std::sort(ranked.begin(), ranked.end(), [&](const RankedNeighbour& a, const RankedNeighbour& b) {
        return detail::ranks_before(a.score, b.score, pool[a.pool_index], pool[b.pool_index], a.pool_index, b.pool_index);
    });
    return ranked;
}

/// Cosines computed by a two-phase leave-one-out run over n examples.
inline std::uint64_t loocv_cosine_count(std::uint64_t n, std::uint64_t shortlist, std::uint64_t combinations) {
    return n * (n - 1) + n * shortlist * combinations;
}

inline const std::string& label_of(const NmExample& e, Scheme s) {
    return s == Scheme::classes30 ? e.class30 : e.class5;
}

struct LoocvResult {
    ClassReport report;
    std::vector<std::string> predictions; // empty string = abstained
};

/// Leave-one-out single nearest neighbour: each example takes the label of
/// its top-ranked neighbour among all the others. A probe with no usable
/// neighbour abstains, which counts as incorrect.
inline LoocvResult nm_classify_loocv(const BuiltSpace& engine, std::span<const NmExample> examples, Scheme scheme,
                                     std::size_t shortlist = 30, std::size_t threads = 1) {
    if (examples.size() < 2) throw std::invalid_argument("LOOCV needs at least two examples");
    const std::size_t effective_shortlist = std::min(shortlist, examples.size() - 1);
    LoocvResult out;
    out.predictions.resize(examples.size());
    parallel_for(examples.size(), threads, [&](std::size_t i) {
        std::vector<WordPair> pool;
        std::vector<std::size_t> owner;
        pool.reserve(examples.size() - 1);
        for (std::size_t j = 0; j < examples.size(); ++j) {
            if (j == i) continue;
            pool.push_back(examples[j].pair());
            owner.push_back(j);
        }
        const auto ranked = two_phase_neighbours(engine, examples[i].pair(), pool, effective_shortlist);
        if (!ranked.empty() && ranked.front().score) out.predictions[i] = label_of(examples[owner[ranked.front().pool_index]], scheme);
    });
    std::vector<std::string> gold;
    for (const auto& e : examples) gold.push_back(label_of(e, scheme));
    out.report = macro_f(gold, out.predictions);
    return out;
}

// ---------------------------------------------------------------------------
// Input files

namespace detail {

inline std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        f.push_back(line.substr(start, tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
    }
    return f;
}

template <typename Fn>
void for_each_record(std::istream& is, const std::string& what, Fn&& fn) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
        try {
            fn(split_tabs(line));
        } catch (const std::exception& e) {
            throw InputError(what + " line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

inline std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw InputError("cannot read " + path.string());
    return is;
}

} // namespace detail

/// `left<TAB>right` per line.
inline std::vector<WordPair> read_pairs(std::istream& is) {
    std::vector<WordPair> out;
    detail::for_each_record(is, "pairs", [&](const std::vector<std::string>& f) {
        if (f.size() != 2) throw std::invalid_argument("expected 2 fields");
        out.push_back(WordPair::make(f[0], f[1]));
    });
    return out;
}

/// Stem, five choices (two fields each) and the answer index 0-4.
inline std::vector<SatQuestion> read_sat_questions(std::istream& is) {
    std::vector<SatQuestion> out;
    detail::for_each_record(is, "questions", [&](const std::vector<std::string>& f) {
        if (f.size() != 13) throw std::invalid_argument("expected 13 fields");
        SatQuestion q;
        q.stem = WordPair::make(f[0], f[1]);
        for (std::size_t c = 0; c < 5; ++c) q.choices[c] = WordPair::make(f[2 + 2 * c], f[3 + 2 * c]);
        if (f[12].size() != 1 || f[12][0] < '0' || f[12][0] > '4') throw std::invalid_argument("answer must be 0-4");
        q.answer = static_cast<std::size_t>(f[12][0] - '0');
        out.push_back(std::move(q));
    });
    return out;
}

/// `modifier head class30 class5`; class5 must be one of the five general
/// groups and each class30 label must always map to the same group.
inline std::vector<NmExample> read_nm_examples(std::istream& is) {
    std::vector<NmExample> out;
    std::map<std::string, std::string> group_of;
    detail::for_each_record(is, "noun-modifier", [&](const std::vector<std::string>& f) {
        if (f.size() != 4) throw std::invalid_argument("expected 4 fields");
        const auto pair = WordPair::make(f[0], f[1]);
        if (!general_groups().contains(f[3])) throw std::invalid_argument("unknown general group '" + f[3] + "'");
        if (f[2].empty()) throw std::invalid_argument("empty class label");
        const auto [it, inserted] = group_of.emplace(f[2], f[3]);
        if (!inserted && it->second != f[3])
            throw std::invalid_argument("class '" + f[2] + "' mapped to both " + it->second + " and " + f[3]);
        out.push_back({pair.left, pair.right, f[2], f[3]});
    });
    return out;
}

inline std::vector<WordPair> read_pairs(const std::filesystem::path& p) {
    auto is = detail::open_input(p);
    return read_pairs(is);
}
inline std::vector<SatQuestion> read_sat_questions(const std::filesystem::path& p) {
    auto is = detail::open_input(p);
    return read_sat_questions(is);
}
inline std::vector<NmExample> read_nm_examples(const std::filesystem::path& p) {
    auto is = detail::open_input(p);
    return read_nm_examples(is);
}

} // namespace lra

#endif
