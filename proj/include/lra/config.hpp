#ifndef LRA_CONFIG_HPP
#define LRA_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "lra/corpus_index.hpp"
#include "lra/error.hpp"

namespace lra {

/// Pipeline parameters. Names and defaults follow the LRA parameter table;
/// max_phrase is tied to max_inter and num_combinations to num_filter.
struct LraConfig {
    std::size_t num_sim = 10;
    std::size_t max_phrase = 5;
    std::size_t num_filter = 3;
    std::size_t min_inter = 1;
    std::size_t max_inter = 3;
    std::size_t num_patterns = 4000;
    std::size_t k = 300;
    std::uint64_t seed = 0;
    std::vector<std::string> suffixes = default_suffixes();
    bool ablate_svd = false;
    bool ablate_synonyms = false;

    /// num_filter actually used (0 when synonyms are ablated).
    std::size_t effective_num_filter() const { return ablate_synonyms ? 0 : num_filter; }
    std::size_t num_combinations() const { return (effective_num_filter() + 1) * (effective_num_filter() + 1); }

    void validate() const {
        const auto bad = [](const std::string& what) { throw InputError("invalid config: " + what); };
        if (num_sim < 1) bad("num_sim must be >= 1");
        if (min_inter < 1) bad("min_inter must be >= 1");
        if (max_inter < min_inter) bad("max_inter must be >= min_inter");
        if (max_inter > 8) bad("max_inter must be <= 8");
        if (max_phrase != max_inter + 2) bad("max_phrase must equal max_inter + 2");
        if (num_patterns < 1) bad("num_patterns must be >= 1");
        if (k < 1) bad("k must be >= 1");
    }

    /// Flat `key = value` text; `#` starts a comment. Unknown keys are errors.
    static LraConfig parse(std::istream& is) {
        LraConfig cfg;
        std::optional<std::size_t> max_phrase, combinations;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            const auto fail = [&](const std::string& what) {
                throw InputError("config line " + std::to_string(lineno) + ": " + what);
            };
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail("expected key = value");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            const auto number = [&]() -> std::uint64_t {
                try {
                    std::size_t used = 0;
                    if (value.empty() || value[0] == '-') throw std::invalid_argument(value);
                    const auto v = std::stoull(value, &used);
                    if (used != value.size()) throw std::invalid_argument(value);
                    return v;
                } catch (const std::exception&) {
                    fail("'" + key + "' needs a nonnegative integer, got '" + value + "'");
                }
                return 0;
            };
            const auto boolean = [&]() {
                if (value == "true" || value == "1" || value == "yes") return true;
                if (value == "false" || value == "0" || value == "no") return false;
                fail("'" + key + "' needs a boolean, got '" + value + "'");
                return false;
            };
            if (key == "num_sim") cfg.num_sim = number();
            else if (key == "max_phrase") max_phrase = number();
            else if (key == "num_filter") cfg.num_filter = number();
            else if (key == "min_inter") cfg.min_inter = number();
            else if (key == "max_inter") cfg.max_inter = number();
            else if (key == "num_patterns") cfg.num_patterns = number();
            else if (key == "k") cfg.k = number();
            else if (key == "num_combinations") combinations = number();
            else if (key == "seed") cfg.seed = number();
            else if (key == "ablate_svd") cfg.ablate_svd = boolean();
            else if (key == "ablate_synonyms") cfg.ablate_synonyms = boolean();
            else if (key == "suffixes") {
                cfg.suffixes.clear();
                std::istringstream ss(value);
                for (std::string s; std::getline(ss, s, ',');)
                    if (auto t = trim(s); !t.empty()) cfg.suffixes.push_back(t);
            } else
                fail("unknown key '" + key + "'");
        }
        cfg.max_phrase = max_phrase.value_or(cfg.max_inter + 2);
        cfg.validate();
        if (combinations && *combinations != cfg.num_combinations())
            throw InputError("invalid config: num_combinations must equal (num_filter + 1)^2 = " +
                             std::to_string(cfg.num_combinations()));
        return cfg;
    }

    static LraConfig load(const std::filesystem::path& path) {
        std::ifstream is(path);
        if (!is) throw InputError("cannot read config " + path.string());
        return parse(is);
    }

    /// Writes the snapshot in the same format parse() reads.
    void write(std::ostream& os) const {
        os << "num_sim = " << num_sim << '\n'
           << "max_phrase = " << max_phrase << '\n'
           << "num_filter = " << effective_num_filter() << '\n'
           << "min_inter = " << min_inter << '\n'
           << "max_inter = " << max_inter << '\n'
           << "num_patterns = " << num_patterns << '\n'
           << "k = " << k << '\n'
           << "num_combinations = " << num_combinations() << '\n'
           << "seed = " << seed << '\n'
           << "suffixes = ";
        for (std::size_t i = 0; i < suffixes.size(); ++i) os << (i ? "," : "") << suffixes[i];
        os << '\n'
           << "ablate_svd = " << (ablate_svd ? "true" : "false") << '\n'
           << "ablate_synonyms = " << (ablate_synonyms ? "true" : "false") << '\n';
    }

private:
    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos) return {};
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    }
};

} // namespace lra

#endif
