#ifndef LRA_WORD_PAIR_HPP
#define LRA_WORD_PAIR_HPP

#include <compare>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "lra/text.hpp"

namespace lra {

/// An ordered pair of distinct lowercase words, A:B.
struct WordPair {
    std::string left;
    std::string right;

    WordPair() = default;
    WordPair(std::string l, std::string r) : left(std::move(l)), right(std::move(r)) {}

    /// Lowercases both members and checks the pair invariants.
    static WordPair make(std::string_view l, std::string_view r) {
        WordPair p{text::lowercase(l), text::lowercase(r)};
        if (!p.valid())
            throw std::invalid_argument("invalid word pair '" + std::string(l) + ":" + std::string(r) + "'");
        return p;
    }

    bool valid() const { return !left.empty() && !right.empty() && left != right; }

    WordPair reversed() const { return {right, left}; }

    std::string str() const { return left + ":" + right; }

    friend auto operator<=>(const WordPair&, const WordPair&) = default;
    friend bool operator==(const WordPair&, const WordPair&) = default;

    friend std::ostream& operator<<(std::ostream& os, const WordPair& p) { return os << p.str(); }
};

struct WordPairHash {
    std::size_t operator()(const WordPair& p) const noexcept {
        const std::size_t h = std::hash<std::string>{}(p.left);
        return h ^ (std::hash<std::string>{}(p.right) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};

} // namespace lra

#endif
