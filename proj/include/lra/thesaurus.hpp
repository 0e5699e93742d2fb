#ifndef LRA_THESAURUS_HPP
#define LRA_THESAURUS_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "lra/corpus_index.hpp"
#include "lra/error.hpp"
#include "lra/text.hpp"
#include "lra/word_pair.hpp"

namespace lra {

enum class PartOfSpeech { noun, verb, adjective };

struct Neighbour {
    std::string word; // raw spelling as found in the thesaurus file
    double score = 0.0;
};

struct NeighbourList {
    PartOfSpeech pos = PartOfSpeech::noun;
    std::vector<Neighbour> neighbours; // decreasing score
};

/// Word-similarity thesaurus: for each headword, one ranked neighbour list
/// per part of speech.
///
/// File format: blocks separated by blank lines. A block starts with a
/// `word<TAB>pos` header (pos is n, v or a) followed by `neighbour<TAB>score`
/// lines in decreasing score order, scores in [0, 1].
class Thesaurus {
public:
    static Thesaurus parse(std::istream& is) {
        Thesaurus th;
        std::string line;
        std::size_t lineno = 0;
        NeighbourList* current = nullptr;
        const auto fail = [&](const std::string& what) {
            throw InputError("thesaurus line " + std::to_string(lineno) + ": " + what);
        };
        while (std::getline(is, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") == std::string::npos) {
                current = nullptr;
                continue;
            }
            const auto tab = line.find('\t');
            if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
                fail("expected two tab-separated fields");
            const std::string first = line.substr(0, tab);
            const std::string second = line.substr(tab + 1);
            if (first.empty()) fail("empty word");
            if (current == nullptr) {
                PartOfSpeech pos;
                if (second == "n")
                    pos = PartOfSpeech::noun;
                else if (second == "v")
                    pos = PartOfSpeech::verb;
                else if (second == "a")
                    pos = PartOfSpeech::adjective;
                else
                    fail("unknown part of speech '" + second + "'");
                auto& lists = th.entries_[text::lowercase(first)];
                lists.push_back({pos, {}});
                current = &lists.back();
                continue;
            }
            double score = 0.0;
            const auto [ptr, ec] = std::from_chars(second.data(), second.data() + second.size(), score);
            if (ec != std::errc() || ptr != second.data() + second.size() || !std::isfinite(score))
                fail("bad score '" + second + "'");
            if (score < 0.0 || score > 1.0) fail("score outside [0,1]");
            if (!current->neighbours.empty() && score > current->neighbours.back().score)
                fail("scores must be non-increasing within a block");
            current->neighbours.push_back({first, score});
        }
        return th;
    }

    static Thesaurus load(const std::filesystem::path& path) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw InputError("cannot read thesaurus " + path.string());
        return parse(is);
    }

    /// Appends a part-of-speech block; `neighbours` must be sorted by decreasing score.
    void add(std::string_view word, PartOfSpeech pos, std::vector<Neighbour> neighbours) {
        entries_[text::lowercase(word)].push_back({pos, std::move(neighbours)});
    }

    std::span<const NeighbourList> lookup(std::string_view word) const {
        const auto it = entries_.find(std::string(word));
        if (it == entries_.end()) return {};
        return it->second;
    }

    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, std::vector<NeighbourList>> entries_;
};

/// Rejects neighbours unlikely to make good substitutes: hyphenated or
/// multi-word entries, three characters or fewer, non-alphabetic
/// characters, and capitalized (proper-noun) spellings.
inline bool is_acceptable_alternate(std::string_view word) {
    if (word.empty()) return false;
    if (word.find('-') != std::string_view::npos) return false;
    if (word.find_first_of(" \t\r\n") != std::string_view::npos) return false;
    if (text::code_point_count(word) <= 3) return false;
    if (!text::is_alphabetic(word)) return false;
    std::size_t pos = 0;
    if (text::is_upper(text::decode_utf8(word, pos))) return false;
    return true;
}

struct ScoredWord {
    std::string word;
    double score = 0.0;

    friend bool operator==(const ScoredWord&, const ScoredWord&) = default;
};

/// Merges the part-of-speech lists of `word`, keeping each neighbour once at
/// its maximum score, drops unacceptable neighbours and the word itself, and
/// returns the best `num_sim` by (score desc, word asc).
inline std::vector<ScoredWord> similar_words(const Thesaurus& th, std::string_view word, std::size_t num_sim) {
    if (num_sim < 1) throw std::invalid_argument("num_sim must be >= 1");
    std::unordered_map<std::string, double> best;
    for (const auto& list : th.lookup(word)) {
        for (const auto& nb : list.neighbours) {
            if (!is_acceptable_alternate(nb.word)) continue;
            std::string w = text::lowercase(nb.word);
            if (w == word) continue;
            auto [it, inserted] = best.try_emplace(std::move(w), nb.score);
            if (!inserted) it->second = std::max(it->second, nb.score);
        }
    }
    std::vector<ScoredWord> out;
    out.reserve(best.size());
    for (auto& [w, s] : best) out.push_back({w, s});
    std::sort(out.begin(), out.end(), [](const ScoredWord& a, const ScoredWord& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.word < b.word;
    });
    if (out.size() > num_sim) out.resize(num_sim);
    return out;
}

struct Candidate {
    WordPair pair;
    double lin_score = 0.0;
};

/// Alternate pairs made by replacing exactly one member with one of its
/// `num_sim` most similar words: left substitutions first, then right.
inline std::vector<Candidate> generate_candidates(const Thesaurus& th, const WordPair& pair, std::size_t num_sim) {
    std::vector<Candidate> out;
    for (const auto& sw : similar_words(th, pair.left, num_sim))
        if (sw.word != pair.right) out.push_back({{sw.word, pair.right}, sw.score});
    for (const auto& sw : similar_words(th, pair.right, num_sim))
        if (sw.word != pair.left) out.push_back({{pair.left, sw.word}, sw.score});
    return out;
}

struct Alternate {
    WordPair pair;
    double lin_score = 0.0;
    std::uint64_t corpus_freq = 0;
};

/// An input pair together with the alternates that survived filtering.
struct AlternateSet {
    WordPair original;
    std::uint64_t original_freq = 0;
    std::vector<Alternate> alternates; // decreasing corpus_freq

    /// The original first, then the alternates in order.
    std::vector<WordPair> versions() const {
        std::vector<WordPair> v{original};
        for (const auto& a : alternates) v.push_back(a.pair);
        return v;
    }
};

/// Keeps the `num_filter` most frequent candidates with nonzero frequency.
/// Frequency ties go to the higher thesaurus score, then to the
/// lexicographically smaller pair. The original is always kept.
template <typename FrequencyFn>
AlternateSet filter_alternates(const WordPair& original, std::span<const Candidate> candidates,
                               std::size_t num_filter, FrequencyFn&& frequency) {
    AlternateSet set{original, frequency(original), {}};
    std::vector<Alternate> scored;
    for (const auto& c : candidates) {
        if (c.pair == original || !c.pair.valid()) continue;
        const std::uint64_t f = frequency(c.pair);
        if (f == 0) continue;
        if (std::any_of(scored.begin(), scored.end(), [&](const Alternate& a) { return a.pair == c.pair; })) continue;
        scored.push_back({c.pair, c.lin_score, f});
    }
    std::sort(scored.begin(), scored.end(), [](const Alternate& a, const Alternate& b) {
        if (a.corpus_freq != b.corpus_freq) return a.corpus_freq > b.corpus_freq;
        if (a.lin_score != b.lin_score) return a.lin_score > b.lin_score;
        return a.pair < b.pair;
    });
    if (scored.size() > num_filter) scored.resize(num_filter);
    set.alternates = std::move(scored);
    return set;
}

/// Frequencies are window co-occurrence counts over `window` consecutive words.
inline AlternateSet filter_alternates(const CorpusIndex& index, const WordPair& original,
                                      std::span<const Candidate> candidates, std::size_t num_filter,
                                      std::size_t window = 5) {
    return filter_alternates(original, candidates, num_filter,
                             [&](const WordPair& p) { return index.window_cooccurrence_count(p, window); });
}

} // namespace lra

#endif
