// Writes the synthetic four-family fixture (corpus, thesaurus, questions,
// noun-modifier pairs, config) into a directory for trying out the CLI.

#include <CLI11.hpp>

#include <iostream>

#include "synthetic_fixture.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Write the synthetic LRA fixture"};
    std::string out;
    std::uint64_t seed = 7;
    std::uint64_t tokens = 50000;
    app.add_option("out", out, "output directory")->required();
    app.add_option("--seed", seed, "generator seed")->capture_default_str();
    app.add_option("--tokens", tokens, "approximate corpus size in tokens")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const auto fx = lra::testing::make_synthetic_fixture(seed, tokens);
    fx.write(out);
    std::cout << "wrote " << fx.documents.size() << " documents (" << fx.token_count << " tokens), "
              << fx.questions.size() << " questions, " << fx.nm_examples.size() << " labelled pairs to " << out << '\n';
    return 0;
}
