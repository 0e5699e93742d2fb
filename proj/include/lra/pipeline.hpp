#ifndef LRA_PIPELINE_HPP
#define LRA_PIPELINE_HPP

#include <chrono>
#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "lra/config.hpp"
#include "lra/corpus_index.hpp"
#include "lra/factorization.hpp"
#include "lra/parallel.hpp"
#include "lra/pattern.hpp"
#include "lra/relation_matrix.hpp"
#include "lra/similarity.hpp"
#include "lra/thesaurus.hpp"

namespace lra {

struct StepTiming {
    int step = 0;
    std::string description;
    double seconds = 0.0;
};

struct BuildReport {
    std::size_t input_pairs = 0;        // as given, duplicates included
    std::size_t unique_input_pairs = 0;
    std::size_t expanded_pairs = 0;     // originals plus surviving alternates, deduplicated
    std::size_t candidate_rows = 0;     // 2 * expanded_pairs
    std::size_t pairs_with_phrases = 0;
    std::size_t patterns_found = 0;
    std::size_t patterns_selected = 0;
    std::size_t rows = 0;
    std::size_t columns = 0;
    std::size_t nonzeros = 0;
    double density_percent = 0.0;
    std::size_t k_effective = 0;
    std::size_t dimension = 0;          // width of the projected rows
    std::vector<WordPair> dropped_pairs; // expanded pairs without a matrix row
    std::vector<StepTiming> timings;
    std::vector<std::string> warnings;

    void write_timings(std::ostream& os) const {
        os << "step\tdescription\telapsed\n";
        double total = 0.0;
        for (const auto& t : timings) {
            os << t.step << '\t' << t.description << '\t' << format_elapsed(t.seconds) << '\n';
            total += t.seconds;
        }
        os << "total\t\t" << format_elapsed(total) << '\n';
    }

    void write(std::ostream& os) const {
        os << "input pairs\t" << input_pairs << '\n'
           << "unique input pairs\t" << unique_input_pairs << '\n'
           << "pairs after alternates\t" << expanded_pairs << '\n'
           << "candidate rows\t" << candidate_rows << '\n'
           << "pairs with phrases\t" << pairs_with_phrases << '\n'
           << "patterns found\t" << patterns_found << '\n'
           << "patterns selected\t" << patterns_selected << '\n'
           << "matrix rows\t" << rows << '\n'
           << "matrix columns\t" << columns << '\n'
           << "nonzeros\t" << nonzeros << '\n'
           << "density\t" << std::fixed << std::setprecision(2) << density_percent << "%\n"
           << std::defaultfloat << "k effective\t" << k_effective << '\n'
           << "row dimension\t" << dimension << '\n'
           << "dropped pairs\t" << dropped_pairs.size() << '\n';
        for (const auto& w : warnings) os << "warning\t" << w << '\n';
        os << '\n';
        write_timings(os);
    }

    static std::string format_elapsed(double seconds) {
        const auto ms = static_cast<std::int64_t>(seconds * 1000.0 + 0.5);
        std::ostringstream os;
        os << ms / 3600000 << ':' << std::setw(2) << std::setfill('0') << (ms / 60000) % 60 << ':' << std::setw(2)
           << (ms / 1000) % 60 << '.' << std::setw(3) << ms % 1000;
        return os.str();
    }
};

/// Nominal pair and row counts before any drops: |input| * (num_filter + 1)
/// pairs after alternates, twice that many candidate rows.
struct NominalCounts {
    std::size_t pairs_after_alternates;
    std::size_t candidate_rows;
};

inline NominalCounts nominal_counts(std::size_t input_pairs, std::size_t num_filter) {
    const std::size_t expanded = input_pairs * (num_filter + 1);
    return {expanded, 2 * expanded};
}

struct PipelineResult {
    BuiltSpace space;
    SparseRelationMatrix raw;
    SparseRelationMatrix weighted;
    ColumnWeights weights;
    std::vector<Pattern> patterns;
    std::vector<AlternateSet> alternate_sets; // one per unique input pair, input order
    BuildReport report;
};

struct RunOptions {
    std::size_t threads = 1;
};

/// Steps 1-10: alternates, filtering, phrases, patterns, row and column
/// maps, sparse matrix, log-entropy weighting, SVD and projection.
inline PipelineResult run_pipeline(const LraConfig& config, std::span<const WordPair> input_pairs,
                                   const CorpusIndex& index, const Thesaurus& thesaurus, const RunOptions& run = {}) {
    config.validate();
    if (input_pairs.empty()) throw InputError("no input pairs");
    for (const auto& p : input_pairs)
        if (!p.valid()) throw InputError("invalid input pair '" + p.str() + "'");

    PipelineResult result;
    BuildReport& report = result.report;
    report.input_pairs = input_pairs.size();

    using clock = std::chrono::steady_clock;
    auto mark = clock::now();
    const auto lap = [&](int step, const char* description) {
        const auto now = clock::now();
        report.timings.push_back({step, description, std::chrono::duration<double>(now - mark).count()});
        mark = now;
    };

    std::vector<WordPair> unique_inputs;
    {
        std::set<WordPair> seen;
        for (const auto& p : input_pairs)
            if (seen.insert(p).second) unique_inputs.push_back(p);
    }
    report.unique_input_pairs = unique_inputs.size();
    const std::size_t num_filter = config.effective_num_filter();

    // Steps 1 and 2.
    std::vector<std::vector<Candidate>> candidates(unique_inputs.size());
    if (num_filter > 0)
        parallel_for(unique_inputs.size(), run.threads, [&](std::size_t i) {
            candidates[i] = generate_candidates(thesaurus, unique_inputs[i], config.num_sim);
        });
    lap(1, "Find alternates");
    result.alternate_sets.resize(unique_inputs.size());
    parallel_for(unique_inputs.size(), run.threads, [&](std::size_t i) {
        result.alternate_sets[i] = filter_alternates(index, unique_inputs[i], candidates[i], num_filter, config.max_phrase);
    });
    std::vector<WordPair> expanded;
    {
        std::set<WordPair> seen;
        for (const auto& set : result.alternate_sets)
            for (const auto& v : set.versions())
                if (seen.insert(v).second) expanded.push_back(v);
    }
    report.expanded_pairs = expanded.size();
    report.candidate_rows = 2 * expanded.size();
    lap(2, "Filter alternates");

    // Step 3.
    std::vector<PairPhrases> groups(expanded.size());
    parallel_for(expanded.size(), run.threads, [&](std::size_t i) {
        groups[i] = {expanded[i], index.find_phrases(expanded[i], config.min_inter, config.max_inter, config.suffixes)};
    });
    for (const auto& g : groups) report.pairs_with_phrases += g.phrases.empty() ? 0 : 1;
    lap(3, "Find phrases");

    // Step 4.
    const auto support = count_pattern_support(groups, run.threads);
    report.patterns_found = support.size();
    result.patterns = select_top_patterns(support, config.num_patterns);
    report.patterns_selected = result.patterns.size();
    if (result.patterns.empty()) throw Error("empty matrix: no phrases found for any pair");
    lap(4, "Find patterns");

    // Steps 5-7. Row and column maps are fixed inside build_matrix.
    lap(5, "Map pairs to rows");
    lap(6, "Map patterns to columns");
    result.raw = build_matrix(groups, result.patterns, run.threads);
    report.rows = result.raw.m();
    report.columns = result.raw.n();
    report.nonzeros = result.raw.nnz();
    report.density_percent = result.raw.density();
    for (const auto& p : expanded)
        if (!result.raw.row_of(p)) report.dropped_pairs.push_back(p);
    lap(7, "Generate a sparse matrix");

    // Step 8.
    auto [weighted, weights] = log_entropy_transform(result.raw);
    result.weighted = std::move(weighted);
    result.weights = std::move(weights);
    lap(8, "Calculate entropy");

    // Steps 9 and 10.
    ProjectedSpace space;
    if (config.ablate_svd) {
        space = unprojected_space(result.weighted);
        report.k_effective = 0;
        lap(9, "Apply SVD (skipped)");
        lap(10, "Projection (skipped)");
    } else {
        const auto f = truncated_svd(result.weighted, config.k, config.seed);
        report.warnings.insert(report.warnings.end(), f.warnings.begin(), f.warnings.end());
        report.k_effective = f.k_effective;
        lap(9, "Apply SVD");
        space = project(f, result.weighted.row_pairs());
        lap(10, "Projection");
    }
    report.dimension = space.dimension();

    std::map<WordPair, AlternateSet> sets;
    for (const auto& s : result.alternate_sets) sets.emplace(s.original, s);
    result.space = BuiltSpace(std::move(space), std::move(sets));
    return result;
}

} // namespace lra

#endif
