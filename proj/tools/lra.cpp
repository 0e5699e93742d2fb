// Command-line driver: index, pipeline, sim, sat-eval, nm-eval.
//
// Exit status: 0 success, 1 internal error, 2 usage or input error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lra/lra.hpp"

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::size_t threads = 1;
    std::optional<std::uint64_t> seed;
};

std::string format_optional(const std::optional<double>& v, const char* absent) {
    return v ? lra::artifacts::format_double(*v) : std::string(absent);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os || !(os << content)) throw lra::InputError("cannot write " + path.string());
}

int cmd_index(const std::string& corpus_dir, const std::string& out_path) {
    const auto index = lra::build_index(corpus_dir);
    index.save(fs::path(out_path));
    std::cerr << "indexed " << index.document_count() << " documents, " << index.token_count() << " tokens, "
              << index.vocabulary_size() << " types -> " << out_path << '\n';
    return 0;
}

struct PipelineArgs {
    std::vector<std::string> pairs;
    std::vector<std::string> sat;
    std::vector<std::string> nm;
    std::string index;
    std::string thesaurus;
    std::string out;
    bool no_svd = false;
    bool no_synonyms = false;
    std::optional<std::size_t> k;
    std::optional<std::size_t> num_patterns;
};

int cmd_pipeline(const GlobalOptions& g, const PipelineArgs& a) {
    lra::LraConfig config = g.config_path.empty() ? lra::LraConfig{} : lra::LraConfig::load(g.config_path);
    if (g.seed) config.seed = *g.seed;
    if (a.k) config.k = *a.k;
    if (a.num_patterns) config.num_patterns = *a.num_patterns;
    if (a.no_svd) config.ablate_svd = true;
    if (a.no_synonyms) config.ablate_synonyms = true;
    config.validate();

    lra::artifacts::SaveInputs inputs{config, {}};
    std::vector<lra::WordPair> pairs;
    const auto add_input = [&](const std::string& role, std::size_t i, const std::string& path) {
        inputs.inputs[role + (i ? std::to_string(i) : std::string())] = path;
    };
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
        for (auto& p : lra::read_pairs(fs::path(a.pairs[i]))) pairs.push_back(std::move(p));
        add_input("pairs", i, a.pairs[i]);
    }
    for (std::size_t i = 0; i < a.sat.size(); ++i) {
        for (const auto& q : lra::read_sat_questions(fs::path(a.sat[i])))
            for (auto& p : q.pairs()) pairs.push_back(std::move(p));
        add_input("sat", i, a.sat[i]);
    }
    for (std::size_t i = 0; i < a.nm.size(); ++i) {
        for (const auto& e : lra::read_nm_examples(fs::path(a.nm[i]))) pairs.push_back(e.pair());
        add_input("nm", i, a.nm[i]);
    }
    if (pairs.empty()) throw lra::InputError("no input pairs (use --pairs, --sat or --nm)");
    inputs.inputs["index"] = a.index;
    inputs.inputs["thesaurus"] = a.thesaurus;
    if (!g.config_path.empty()) inputs.inputs["config"] = g.config_path;

    const auto index = lra::CorpusIndex::load(fs::path(a.index));
    const auto thesaurus = lra::Thesaurus::load(a.thesaurus);
    const auto result = lra::run_pipeline(config, pairs, index, thesaurus, {g.threads});
    lra::artifacts::save_run(a.out, result, inputs);
    result.report.write(std::cerr);
    return 0;
}

int cmd_sim(const std::string& artifact_dir, const std::string& queries, const std::string& out) {
    const auto engine = lra::artifacts::load_run(artifact_dir);
    std::ifstream is(queries);
    if (!is) throw lra::InputError("cannot read " + queries);
    std::ostringstream os;
    os << "leftA\trightA\tleftB\trightB\tscore\tn_selected\toriginal_cosine\n";
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string la, ra, lb, rb;
        if (!(ls >> la >> ra >> lb >> rb)) throw lra::InputError(queries + " line " + std::to_string(lineno) + ": expected 4 words");
        lra::WordPair a, b;
        try {
            a = lra::WordPair::make(la, ra);
            b = lra::WordPair::make(lb, rb);
        } catch (const std::invalid_argument& e) {
            throw lra::InputError(queries + " line " + std::to_string(lineno) + ": " + e.what());
        }
        const auto r = engine.similarity(a, b);
        os << a.left << '\t' << a.right << '\t' << b.left << '\t' << b.right << '\t' << format_optional(r.score, "SKIP")
           << '\t' << r.selected.size() << '\t' << format_optional(r.original_cosine, "NA") << '\n';
    }
    if (out.empty())
        std::cout << os.str();
    else
        write_file(out, os.str());
    return 0;
}

int cmd_sat_eval(const GlobalOptions& g, const std::string& artifact_dir, const std::string& sat_path,
                 const std::string& out_dir) {
    const auto engine = lra::artifacts::load_run(artifact_dir);
    const auto questions = lra::read_sat_questions(fs::path(sat_path));
    if (questions.empty()) throw lra::InputError("no questions in " + sat_path);
    std::vector<lra::Answer> answers(questions.size());
    lra::parallel_for(questions.size(), g.threads, [&](std::size_t i) { answers[i] = lra::answer_question(engine, questions[i]); });

    std::vector<lra::QuestionOutcome> outcomes;
    std::ostringstream tsv;
    tsv << "question\tstem\tpredicted\tanswer\tcorrect\tscore_a\tscore_b\tscore_c\tscore_d\tscore_e\n";
    for (std::size_t i = 0; i < questions.size(); ++i) {
        const auto& a = answers[i];
        outcomes.push_back({a.choice, questions[i].answer});
        tsv << i << '\t' << questions[i].stem.str() << '\t' << (a.choice ? std::to_string(*a.choice) : "SKIP") << '\t'
            << questions[i].answer << '\t' << (a.choice ? (*a.choice == questions[i].answer ? "yes" : "no") : "skip");
        for (const auto& s : a.scores) tsv << '\t' << format_optional(s, "SKIP");
        tsv << '\n';
    }
    const auto report = lra::score_sat(outcomes);
    std::ostringstream text;
    report.write(text);
    std::cout << text.str();
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "sat_report.txt", text.str());
        write_file(fs::path(out_dir) / "sat_results.tsv", tsv.str());
    }
    return 0;
}

int cmd_nm_eval(const GlobalOptions& g, const std::string& artifact_dir, const std::string& nm_path, int scheme,
                std::size_t shortlist, const std::string& out_dir) {
    const auto engine = lra::artifacts::load_run(artifact_dir);
    const auto examples = lra::read_nm_examples(fs::path(nm_path));
    const auto s = scheme == 5 ? lra::Scheme::classes5 : lra::Scheme::classes30;
    const auto result = lra::nm_classify_loocv(engine, examples, s, shortlist, g.threads);
    std::ostringstream text;
    result.report.write(text);
    std::cout << text.str();
    if (!out_dir.empty()) {
        std::ostringstream tsv;
        tsv << "modifier\thead\tgold\tpredicted\n";
        for (std::size_t i = 0; i < examples.size(); ++i)
            tsv << examples[i].modifier << '\t' << examples[i].head << '\t' << lra::label_of(examples[i], s) << '\t'
                << (result.predictions[i].empty() ? "NONE" : result.predictions[i]) << '\n';
        fs::create_directories(out_dir);
        write_file(fs::path(out_dir) / "nm_report.txt", text.str());
        write_file(fs::path(out_dir) / "nm_predictions.tsv", tsv.str());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latent relational analysis: relational similarity between word pairs"};
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--config", g.config_path, "key = value parameter file")->check(CLI::ExistingFile);
    app.add_option("--threads", g.threads, "worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--seed", g.seed, "random seed for the SVD");

    std::string corpus_dir, index_out = "corpus.idx";
    auto* index = app.add_subcommand("index", "tokenize a directory of .txt files into corpus.idx");
    index->add_option("corpus_dir", corpus_dir, "directory of UTF-8 .txt files")->required();
    index->add_option("-o,--out", index_out, "index file to write")->capture_default_str();

    PipelineArgs pa;
    auto* pipeline = app.add_subcommand("pipeline", "build the pair-pattern matrix and its projection");
    pipeline->add_option("--pairs", pa.pairs, "TSV of word pairs (left<TAB>right)");
    pipeline->add_option("--sat", pa.sat, "take input pairs from an analogy question file");
    pipeline->add_option("--nm", pa.nm, "take input pairs from a noun-modifier file");
    pipeline->add_option("--index", pa.index, "corpus.idx from `lra index`")->required();
    pipeline->add_option("--thesaurus", pa.thesaurus, "thesaurus file")->required();
    pipeline->add_option("--out", pa.out, "artifact directory")->required();
    pipeline->add_flag("--no-svd", pa.no_svd, "skip SVD; use weighted rows directly");
    pipeline->add_flag("--no-synonyms", pa.no_synonyms, "skip alternate pairs");
    pipeline->add_option("--k", pa.k, "projection dimensions");
    pipeline->add_option("--num-patterns", pa.num_patterns, "number of patterns kept as columns");

    std::string artifact_dir, input_path, out_path;
    auto* sim = app.add_subcommand("sim", "relational similarity for `leftA rightA leftB rightB` lines");
    sim->add_option("artifacts", artifact_dir, "pipeline output directory")->required();
    sim->add_option("queries", input_path, "query file")->required();
    sim->add_option("-o,--out", out_path, "write TSV here instead of stdout");

    auto* sat = app.add_subcommand("sat-eval", "answer multiple-choice analogy questions");
    sat->add_option("artifacts", artifact_dir, "pipeline output directory")->required();
    sat->add_option("questions", input_path, "question TSV")->required();
    sat->add_option("--out", out_path, "directory for sat_report.txt and sat_results.tsv");

    int scheme = 30;
    std::size_t shortlist = 30;
    auto* nm = app.add_subcommand("nm-eval", "leave-one-out nearest-neighbour classification");
    nm->add_option("artifacts", artifact_dir, "pipeline output directory")->required();
    nm->add_option("examples", input_path, "noun-modifier TSV")->required();
    nm->add_option("--scheme", scheme, "30 for fine classes, 5 for general groups")
        ->check(CLI::IsMember({30, 5}))
        ->capture_default_str();
    nm->add_option("--shortlist", shortlist, "phase-one neighbours kept for reranking")->capture_default_str();
    nm->add_option("--out", out_path, "directory for nm_report.txt and nm_predictions.tsv");

    for (auto* sub : {index, pipeline, sim, sat, nm}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*index) return cmd_index(corpus_dir, index_out);
        if (*pipeline) return cmd_pipeline(g, pa);
        if (*sim) return cmd_sim(artifact_dir, input_path, out_path);
        if (*sat) return cmd_sat_eval(g, artifact_dir, input_path, out_path);
        if (*nm) return cmd_nm_eval(g, artifact_dir, input_path, scheme, shortlist, out_path);
    } catch (const lra::InputError& e) {
        std::cerr << "lra: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "lra: internal error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
