#ifndef LRA_SIMILARITY_HPP
#define LRA_SIMILARITY_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lra/factorization.hpp"
#include "lra/thesaurus.hpp"
#include "lra/word_pair.hpp"

namespace lra {

struct CombinationCosine {
    WordPair a;
    WordPair b;
    std::optional<double> cosine;
};

/// Cosines between every version of A:B and every version of C:D, originals
/// first and then alternates in set order; (|a|+1) * (|b|+1) entries.
/// Entry 0 is always original::original.
inline std::vector<CombinationCosine> combination_cosines(const ProjectedSpace& space, const AlternateSet& a,
                                                          const AlternateSet& b) {
    std::vector<CombinationCosine> out;
    const auto va = a.versions();
    const auto vb = b.versions();
    out.reserve(va.size() * vb.size());
    for (const auto& x : va)
        for (const auto& y : vb) out.push_back({x, y, row_cosine(space, x, y)});
    return out;
}

struct SimilarityResult {
    std::optional<double> original_cosine;
    std::vector<CombinationCosine> combinations;
    std::vector<std::size_t> selected; // indices into combinations
    std::optional<double> score;       // nullopt means SKIP
};

/// Average of the present cosines that are >= the first (original) cosine.
/// With the original missing, every present cosine is averaged; with none
/// present the result is SKIP. Missing cosines never count as zero.
inline std::optional<double> relational_similarity_score(std::span<const std::optional<double>> cosines,
                                                         std::vector<std::size_t>* selected = nullptr) {
    if (cosines.empty()) return std::nullopt;
    const std::optional<double> original = cosines.front();
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < cosines.size(); ++i) {
        if (!cosines[i]) continue;
        if (original && *cosines[i] < *original) continue;
        sum += *cosines[i];
        ++count;
        if (selected) selected->push_back(i);
    }
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
}

inline SimilarityResult relational_similarity(std::vector<CombinationCosine> combinations) {
    SimilarityResult result;
    std::vector<std::optional<double>> cosines;
    cosines.reserve(combinations.size());
    for (const auto& c : combinations) cosines.push_back(c.cosine);
    if (!cosines.empty()) result.original_cosine = cosines.front();
    result.score = relational_similarity_score(cosines, &result.selected);
    result.combinations = std::move(combinations);
    return result;
}

inline SimilarityResult relational_similarity(const ProjectedSpace& space, const AlternateSet& a, const AlternateSet& b) {
    return relational_similarity(combination_cosines(space, a, b));
}

struct GapResult {
    std::size_t best = 0;
    std::size_t runner_up = 0;
    double best_score = 0.0;
    double runner_up_score = 0.0;
    double gap = 0.0;
};

/// Best and second-best of the usable scores; ties go to the lower index.
inline GapResult analogy_gap(std::span<const std::optional<double>> scores) {
    std::optional<std::size_t> best, second;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!scores[i]) continue;
        if (!best || *scores[i] > *scores[*best]) {
            second = best;
            best = i;
        } else if (!second || *scores[i] > *scores[*second]) {
            second = i;
        }
    }
    if (!best || !second) throw std::invalid_argument("analogy_gap needs at least two usable scores");
    return {*best, *second, *scores[*best], *scores[*second], *scores[*best] - *scores[*second]};
}

/// The projected space plus the alternates chosen for each input pair.
class BuiltSpace {
public:
    BuiltSpace() = default;
    BuiltSpace(ProjectedSpace space, std::map<WordPair, AlternateSet> sets)
        : space_(std::move(space)), sets_(std::move(sets)) {}

    const ProjectedSpace& space() const { return space_; }
    const std::map<WordPair, AlternateSet>& alternate_sets() const { return sets_; }

    /// The recorded set for an input pair, or a bare set without alternates.
    AlternateSet versions_of(const WordPair& p) const {
        const auto it = sets_.find(p);
        if (it != sets_.end()) return it->second;
        return AlternateSet{p, 0, {}};
    }

    /// True when the pair or any of its alternates has a nonzero row.
    bool represented(const WordPair& p) const {
        for (const auto& v : versions_of(p).versions())
            if (const auto r = space_.row(v); r && std::any_of(r->begin(), r->end(), [](double x) { return x != 0.0; }))
                return true;
        return false;
    }

    std::optional<double> original_cosine(const WordPair& a, const WordPair& b) const {
        return row_cosine(space_, a, b);
    }

    SimilarityResult similarity(const WordPair& a, const WordPair& b) const {
        return relational_similarity(space_, versions_of(a), versions_of(b));
    }

private:
    ProjectedSpace space_;
    std::map<WordPair, AlternateSet> sets_;
};

} // namespace lra

#endif
