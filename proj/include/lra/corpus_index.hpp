#ifndef LRA_CORPUS_INDEX_HPP
#define LRA_CORPUS_INDEX_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "lra/error.hpp"
#include "lra/text.hpp"
#include "lra/word_pair.hpp"

namespace lra {

using TokenId = std::uint32_t;

struct Occurrence {
    std::uint32_t doc;
    std::uint32_t pos;

    friend auto operator<=>(const Occurrence&, const Occurrence&) = default;
};

/// A corpus span that begins with one member of a pair (or a suffix variant
/// of it), ends with the other, and has 1..3 words in between.
struct Phrase {
    WordPair pair;
    bool left_first = true;
    std::vector<std::string> intervening;
    std::uint32_t doc = 0;
    std::uint32_t start = 0;

    std::size_t length() const { return intervening.size() + 2; }
};

inline const std::vector<std::string>& default_suffixes() {
    static const std::vector<std::string> suffixes{"s", "es", "ing", "ed", "d"};
    return suffixes;
}

/// The word itself plus every form obtained by appending a suffix and every
/// form obtained by stripping one (when at least 3 characters remain).
/// Nonsense forms are fine: they simply never occur in the corpus.
inline std::set<std::string> expand_suffix_variants(std::string_view word,
                                                    const std::vector<std::string>& suffixes = default_suffixes()) {
    std::set<std::string> out;
    out.emplace(word);
    for (const auto& suffix : suffixes) {
        if (suffix.empty()) continue;
        out.insert(std::string(word) + suffix);
        if (word.size() > suffix.size() && word.ends_with(suffix)) {
            const std::string_view stem = word.substr(0, word.size() - suffix.size());
            if (text::code_point_count(stem) >= 3) out.emplace(stem);
        }
    }
    return out;
}

/// Immutable positional inverted index over a tokenized document collection.
class CorpusIndex {
public:
    CorpusIndex() = default;

    /// Builds from (name, raw text) documents in the given order.
    static CorpusIndex from_texts(const std::vector<std::pair<std::string, std::string>>& docs) {
        std::vector<std::string> names;
        std::vector<std::vector<std::string>> tokens;
        for (const auto& [name, body] : docs) {
            names.push_back(name);
            tokens.push_back(text::tokenize(body));
        }
        return from_tokens(tokens, names);
    }

    static CorpusIndex from_tokens(const std::vector<std::vector<std::string>>& docs,
                                   std::vector<std::string> names = {}) {
        CorpusIndex idx;
        if (names.empty())
            for (std::size_t d = 0; d < docs.size(); ++d) names.push_back("doc" + std::to_string(d));
        if (names.size() != docs.size()) throw std::invalid_argument("document name count mismatch");
        idx.names_ = std::move(names);
        idx.documents_.resize(docs.size());
        for (std::size_t d = 0; d < docs.size(); ++d) {
            auto& ids = idx.documents_[d];
            ids.reserve(docs[d].size());
            for (std::size_t p = 0; p < docs[d].size(); ++p) {
                const TokenId id = idx.intern(docs[d][p]);
                ids.push_back(id);
                idx.postings_[id].push_back({static_cast<std::uint32_t>(d), static_cast<std::uint32_t>(p)});
            }
            idx.token_count_ += ids.size();
        }
        return idx;
    }

    std::size_t document_count() const { return documents_.size(); }
    std::size_t vocabulary_size() const { return vocab_.size(); }
    std::uint64_t token_count() const { return token_count_; }

    std::optional<TokenId> id(std::string_view token) const {
        const auto it = vocab_.find(std::string(token));
        if (it == vocab_.end()) return std::nullopt;
        return it->second;
    }
    const std::string& token(TokenId id) const { return tokens_.at(id); }
    std::span<const Occurrence> postings(TokenId id) const { return postings_.at(id); }
    std::span<const TokenId> document(std::size_t doc) const { return documents_.at(doc); }
    const std::string& document_name(std::size_t doc) const { return names_.at(doc); }

    std::uint64_t frequency(std::string_view token) const {
        const auto t = id(token);
        return t ? postings_[*t].size() : 0;
    }

    /// Number of `window`-token windows (sliding by one, never crossing a
    /// document boundary) that contain both members of the pair in any order.
    std::uint64_t window_cooccurrence_count(const WordPair& pair, std::size_t window) const {
        if (window < 2) throw std::invalid_argument("window must be at least 2");
        if (pair.left == pair.right) throw std::invalid_argument("pair members must differ: " + pair.str());
        const auto a = id(pair.left);
        const auto b = id(pair.right);
        if (!a || !b) return 0;
        const auto pa = postings(*a);
        const auto pb = postings(*b);
        std::uint64_t total = 0;
        std::size_t ia = 0, ib = 0;
        while (ia < pa.size() && ib < pb.size()) {
            const std::uint32_t doc = std::max(pa[ia].doc, pb[ib].doc);
            while (ia < pa.size() && pa[ia].doc < doc) ++ia;
            while (ib < pb.size() && pb[ib].doc < doc) ++ib;
            if (ia == pa.size() || ib == pb.size()) break;
            if (pa[ia].doc != doc || pb[ib].doc != doc) continue;
            std::size_t ea = ia, eb = ib;
            while (ea < pa.size() && pa[ea].doc == doc) ++ea;
            while (eb < pb.size() && pb[eb].doc == doc) ++eb;
            total += covered_starts_in_both(pa.subspan(ia, ea - ia), pb.subspan(ib, eb - ib),
                                            documents_[doc].size(), window);
            ia = ea;
            ib = eb;
        }
        return total;
    }

    /// Every phrase that starts with a suffix variant of one member, ends with
    /// a variant of the other and has min_inter..max_inter words between.
    /// Sorted by (document, start, length); a span reachable through several
    /// variants is reported once.
    std::vector<Phrase> find_phrases(const WordPair& pair, std::size_t min_inter, std::size_t max_inter,
                                     const std::vector<std::string>& suffixes = default_suffixes()) const {
        if (pair.left == pair.right) throw std::invalid_argument("pair members must differ: " + pair.str());
        if (min_inter < 1 || max_inter < min_inter)
            throw std::invalid_argument("need 1 <= min_inter <= max_inter");
        const auto left_ids = variant_ids(pair.left, suffixes);
        const auto right_ids = variant_ids(pair.right, suffixes);

        struct Hit {
            std::uint32_t doc, start, length;
            bool left_first;
        };
        std::vector<Hit> hits;
        const auto scan = [&](const std::vector<TokenId>& from, const std::vector<TokenId>& to, bool left_first) {
            for (const TokenId f : from) {
                for (const Occurrence& occ : postings_[f]) {
                    const auto& doc = documents_[occ.doc];
                    for (std::size_t gap = min_inter; gap <= max_inter; ++gap) {
                        const std::size_t end = occ.pos + gap + 1;
                        if (end >= doc.size()) break;
                        if (std::find(to.begin(), to.end(), doc[end]) != to.end())
                            hits.push_back({occ.doc, occ.pos, static_cast<std::uint32_t>(gap + 2), left_first});
                    }
                }
            }
        };
        scan(left_ids, right_ids, true);
        scan(right_ids, left_ids, false);

        std::sort(hits.begin(), hits.end(), [](const Hit& x, const Hit& y) {
            return std::tie(x.doc, x.start, x.length, y.left_first) < std::tie(y.doc, y.start, y.length, x.left_first);
        });
        hits.erase(std::unique(hits.begin(), hits.end(),
                               [](const Hit& x, const Hit& y) {
                                   return x.doc == y.doc && x.start == y.start && x.length == y.length;
                               }),
                   hits.end());

        std::vector<Phrase> phrases;
        phrases.reserve(hits.size());
        for (const Hit& h : hits) {
            Phrase ph{pair, h.left_first, {}, h.doc, h.start};
            const auto& doc = documents_[h.doc];
            for (std::uint32_t p = h.start + 1; p + 1 < h.start + h.length; ++p) ph.intervening.push_back(tokens_[doc[p]]);
            phrases.push_back(std::move(ph));
        }
        return phrases;
    }

    static constexpr std::string_view magic = "LRAIDX1";

    /// Text serialization: magic, document table, then one postings line per
    /// vocabulary entry (`token<TAB>count<TAB>doc:pos ...`).
    void save(std::ostream& os) const {
        os << magic << '\n' << "documents " << documents_.size() << '\n';
        for (std::size_t d = 0; d < documents_.size(); ++d) os << documents_[d].size() << '\t' << names_[d] << '\n';
        os << "vocabulary " << tokens_.size() << " tokens " << token_count_ << '\n';
        for (TokenId t = 0; t < tokens_.size(); ++t) {
            os << tokens_[t] << '\t' << postings_[t].size() << '\t';
            bool first = true;
            for (const auto& occ : postings_[t]) {
                if (!first) os << ' ';
                first = false;
                os << occ.doc << ':' << occ.pos;
            }
            os << '\n';
        }
    }

    static CorpusIndex load(std::istream& is) {
        try {
            return load_unchecked(is);
        } catch (const std::logic_error& e) { // stoull and friends on malformed numbers
            throw InputError(std::string("corrupt index: ") + e.what());
        }
    }

    void save(const std::filesystem::path& path) const {
        std::ofstream os(path, std::ios::binary);
        if (!os) throw InputError("cannot write " + path.string());
        save(os);
        if (!os) throw InputError("write failed: " + path.string());
    }

    static CorpusIndex load(const std::filesystem::path& path) {
        std::ifstream is(path, std::ios::binary);
        if (!is) throw InputError("cannot read index " + path.string());
        return load(is);
    }

private:
    static CorpusIndex load_unchecked(std::istream& is) {
        const auto fail = [](const std::string& what) { throw InputError("corrupt index: " + what); };
        std::string line;
        if (!std::getline(is, line) || line != magic) throw InputError("not an LRA index (missing " + std::string(magic) + ")");
        std::string word;
        std::size_t ndocs = 0;
        if (!std::getline(is, line)) fail("missing document header");
        {
            std::istringstream hs(line);
            if (!(hs >> word >> ndocs) || word != "documents") fail("bad document header");
        }
        CorpusIndex idx;
        idx.documents_.resize(ndocs);
        idx.names_.resize(ndocs);
        std::vector<std::vector<bool>> filled(ndocs);
        for (std::size_t d = 0; d < ndocs; ++d) {
            if (!std::getline(is, line)) fail("truncated document table");
            const auto tab = line.find('\t');
            if (tab == std::string::npos) fail("bad document line");
            const std::size_t len = std::stoull(line.substr(0, tab));
            idx.names_[d] = line.substr(tab + 1);
            idx.documents_[d].assign(len, 0);
            filled[d].assign(len, false);
            idx.token_count_ += len;
        }
        std::size_t nvocab = 0;
        std::uint64_t ntokens = 0;
        std::string w2;
        if (!std::getline(is, line)) fail("missing vocabulary header");
        {
            std::istringstream hs(line);
            if (!(hs >> word >> nvocab >> w2 >> ntokens) || word != "vocabulary" || w2 != "tokens") fail("bad vocabulary header");
        }
        if (ntokens != idx.token_count_) fail("token count mismatch");
        std::uint64_t seen = 0;
        for (std::size_t t = 0; t < nvocab; ++t) {
            if (!std::getline(is, line)) fail("truncated postings");
            const auto tab1 = line.find('\t');
            const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
            if (tab2 == std::string::npos) fail("bad postings line");
            const TokenId id = idx.intern(line.substr(0, tab1));
            if (id != t) fail("duplicate vocabulary entry");
            const std::size_t count = std::stoull(line.substr(tab1 + 1, tab2 - tab1 - 1));
            std::istringstream ps(line.substr(tab2 + 1));
            std::string item;
            auto& plist = idx.postings_[id];
            while (ps >> item) {
                const auto colon = item.find(':');
                if (colon == std::string::npos) fail("bad occurrence");
                const Occurrence occ{static_cast<std::uint32_t>(std::stoul(item.substr(0, colon))),
                                     static_cast<std::uint32_t>(std::stoul(item.substr(colon + 1)))};
                if (occ.doc >= ndocs || occ.pos >= idx.documents_[occ.doc].size() || filled[occ.doc][occ.pos])
                    fail("occurrence out of range");
                if (!plist.empty() && !(plist.back() < occ)) fail("postings not sorted");
                filled[occ.doc][occ.pos] = true;
                idx.documents_[occ.doc][occ.pos] = id;
                plist.push_back(occ);
            }
            if (plist.size() != count) fail("postings count mismatch");
            seen += count;
        }
        if (seen != idx.token_count_) fail("postings do not cover every token");
        return idx;
    }

    TokenId intern(const std::string& tok) {
        const auto [it, inserted] = vocab_.try_emplace(tok, static_cast<TokenId>(tokens_.size()));
        if (inserted) {
            tokens_.push_back(tok);
            postings_.emplace_back();
        }
        return it->second;
    }

    std::vector<TokenId> variant_ids(const std::string& word, const std::vector<std::string>& suffixes) const {
        std::vector<TokenId> ids;
        for (const auto& v : expand_suffix_variants(word, suffixes))
            if (const auto t = id(v)) ids.push_back(*t);
        return ids;
    }

    // Window starts s in [0, len - window] whose window [s, s + window)
    // holds an occurrence from both lists. Each occurrence at p covers the
    // start interval [p - window + 1, p]; count the intersection of the two
    // interval unions.
    static std::uint64_t covered_starts_in_both(std::span<const Occurrence> a, std::span<const Occurrence> b,
                                                std::size_t len, std::size_t window) {
        if (len < window) return 0;
        const std::int64_t last_start = static_cast<std::int64_t>(len - window);
        const auto merged = [&](std::span<const Occurrence> occ) {
            std::vector<std::pair<std::int64_t, std::int64_t>> out;
            for (const auto& o : occ) {
                std::int64_t lo = std::max<std::int64_t>(0, static_cast<std::int64_t>(o.pos) - static_cast<std::int64_t>(window) + 1);
                std::int64_t hi = std::min<std::int64_t>(o.pos, last_start);
                if (lo > hi) continue;
                if (!out.empty() && lo <= out.back().second + 1)
                    out.back().second = std::max(out.back().second, hi);
                else
                    out.emplace_back(lo, hi);
            }
            return out;
        };
        const auto ia = merged(a);
        const auto ib = merged(b);
        std::uint64_t total = 0;
        std::size_t i = 0, j = 0;
        while (i < ia.size() && j < ib.size()) {
            const std::int64_t lo = std::max(ia[i].first, ib[j].first);
            const std::int64_t hi = std::min(ia[i].second, ib[j].second);
            if (lo <= hi) total += static_cast<std::uint64_t>(hi - lo + 1);
            if (ia[i].second < ib[j].second)
                ++i;
            else
                ++j;
        }
        return total;
    }

    std::vector<std::string> names_;
    std::vector<std::vector<TokenId>> documents_;
    std::unordered_map<std::string, TokenId> vocab_;
    std::vector<std::string> tokens_;
    std::vector<std::vector<Occurrence>> postings_;
    std::uint64_t token_count_ = 0;
};

/// Reads every `*.txt` regular file of a directory, in file-name order, one
/// document per file.
inline CorpusIndex build_index(const std::filesystem::path& corpus_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(corpus_dir, ec)) throw InputError("not a directory: " + corpus_dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(corpus_dir, ec))
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    if (ec) throw InputError("cannot list " + corpus_dir.string() + ": " + ec.message());
    if (files.empty()) throw InputError("empty corpus: no .txt files in " + corpus_dir.string());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    std::vector<std::pair<std::string, std::string>> docs;
    for (const auto& f : files) {
        std::ifstream is(f, std::ios::binary);
        if (!is) throw InputError("cannot read corpus file " + f.filename().string());
        std::ostringstream body;
        body << is.rdbuf();
        if (is.bad()) throw InputError("cannot read corpus file " + f.filename().string());
        docs.emplace_back(f.filename().string(), body.str());
    }
    return CorpusIndex::from_texts(docs);
}

} // namespace lra

#endif
