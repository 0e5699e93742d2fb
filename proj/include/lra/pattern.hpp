#ifndef LRA_PATTERN_HPP
#define LRA_PATTERN_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lra/corpus_index.hpp"
#include "lra/parallel.hpp"

namespace lra {

inline constexpr std::string_view wildcard = "*";

/// Template over the words between the two members of a phrase. Each slot is
/// a literal word or a wildcard that matches exactly one word. Ordered by
/// canonical text.
class Pattern {
public:
    Pattern() = default;
    explicit Pattern(std::vector<std::string> slots) : slots_(std::move(slots)) {
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            if (i) text_ += ' ';
            text_ += slots_[i];
        }
    }

    /// Parses the canonical form ("of *").
    static Pattern parse(std::string_view canonical) {
        std::vector<std::string> slots;
        std::istringstream is{std::string(canonical)};
        for (std::string s; is >> s;) slots.push_back(s);
        return Pattern(std::move(slots));
    }

    const std::vector<std::string>& slots() const { return slots_; }
    std::size_t size() const { return slots_.size(); }
    const std::string& canonical() const { return text_; }

    bool matches(std::span<const std::string> intervening) const {
        if (intervening.size() != slots_.size()) return false;
        for (std::size_t i = 0; i < slots_.size(); ++i)
            if (slots_[i] != wildcard && slots_[i] != intervening[i]) return false;
        return true;
    }

    friend bool operator==(const Pattern& a, const Pattern& b) { return a.text_ == b.text_; }
    friend std::strong_ordering operator<=>(const Pattern& a, const Pattern& b) { return a.text_ <=> b.text_; }

private:
    std::vector<std::string> slots_;
    std::string text_;
};

/// All 2^n ways of replacing any subset of the intervening words with a
/// wildcard. Bit i of the mask wildcards slot i, so "of spray" yields
/// "of spray", "* spray", "of *", "* *" in that order.
inline std::vector<Pattern> patterns_from_intervening(std::span<const std::string> intervening) {
    const std::size_t n = intervening.size();
    std::vector<Pattern> out;
    out.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::string> slots;
        slots.reserve(n);
        for (std::size_t i = 0; i < n; ++i) slots.emplace_back(mask & (std::size_t{1} << i) ? std::string(wildcard) : intervening[i]);
        Pattern p(std::move(slots));
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
    }
    return out;
}

inline std::vector<Pattern> patterns_from_phrase(const Phrase& phrase) {
    return patterns_from_intervening(phrase.intervening);
}

/// Phrases found for one word pair.
struct PairPhrases {
    WordPair pair;
    std::vector<Phrase> phrases;
};

/// For each pattern, the number of distinct pairs with at least one phrase
/// matching it. Orientation is ignored here.
inline std::map<Pattern, std::uint64_t> count_pattern_support(std::span<const PairPhrases> groups,
                                                              std::size_t threads = 1) {
    std::vector<std::set<Pattern>> per_pair(groups.size());
    parallel_for(groups.size(), threads, [&](std::size_t i) {
        for (const auto& ph : groups[i].phrases)
            for (auto& p : patterns_from_phrase(ph)) per_pair[i].insert(std::move(p));
    });
    std::map<Pattern, std::uint64_t> support;
    for (const auto& s : per_pair)
        for (const auto& p : s) ++support[p];
    return support;
}

/// Highest-support patterns, ties broken by canonical text.
inline std::vector<Pattern> select_top_patterns(const std::map<Pattern, std::uint64_t>& support,
                                                std::size_t num_patterns) {
    std::vector<std::pair<Pattern, std::uint64_t>> items(support.begin(), support.end());
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<Pattern> out;
    for (std::size_t i = 0; i < items.size() && i < num_patterns; ++i) out.push_back(items[i].first);
    return out;
}

} // namespace lra

#endif
