// Copyright 2026 The discoq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "discoq/experiment.hpp"

namespace {

// Flag spelling(s) -> config key. Every config key is overridable by a flag
// of the same name; a few get an extra dashed alias.
struct KeyFlag {
    const char* flags;
    const char* key;
    const char* help;
};

constexpr KeyFlag kKeyFlags[] = {
    {"--lexicon", "lexicon", "lexicon TSV path (default: built-in vocabulary)"},
    {"--data", "data", "dataset TSV path (default: <out>/data.tsv)"},
    {"--n_sentences,--n-sentences", "n_sentences", "dataset size (default 100)"},
    {"--train_ratio,--train-ratio", "train_ratio", "train split fraction (default 0.7)"},
    {"--data_seed,--data-seed", "data_seed", "dataset generation seed (default 42)"},
    {"--q_n,--q-n", "q_n", "qubits per noun wire (default 1)"},
    {"--q_s,--q-s", "q_s", "qubits per sentence wire (default 1)"},
    {"--layers", "layers", "ansatz layers (default 1)"},
    {"--backend", "backend", "exact | shots | noisy (default exact)"},
    {"--shots", "shots", "shots per estimate (default 8192)"},
    {"--noise_profile,--noise-profile", "noise_profile",
     "none | guadalupe-like (default guadalupe-like; noisy backend only)"},
    {"--epochs", "epochs", "training epochs (default 100)"},
    {"--spsa_a,--spsa-a", "spsa_a", "SPSA step-size scale (default 2.5)"},
    {"--spsa_c,--spsa-c", "spsa_c", "SPSA perturbation scale (default 0.3)"},
    {"--spsa_A,--spsa-A", "spsa_A", "SPSA stability constant (default 0.05*epochs)"},
    {"--spsa_alpha,--spsa-alpha", "spsa_alpha", "SPSA step-size exponent (default 0.3)"},
    {"--spsa_gamma,--spsa-gamma", "spsa_gamma", "SPSA perturbation exponent (default 0.101)"},
    {"--kernel", "kernel", "transition | swap (default swap)"},
    {"--svm_c,--svm-c", "svm_c", "SVM box constraint (default 1.0)"},
    {"--seeds", "seeds", "comma-separated trial seeds (default 1..7)"},
    {"--out", "out", "output directory (default runs)"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discoq: compositional distributional semantics on quantum circuits"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "config file (flat key = value)");
    std::string seed_flag;
    app.add_option("--seed", seed_flag, "run a single trial with this seed");

    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& kf : kKeyFlags) {
        app.add_option_function<std::string>(
            kf.flags,
            [&overrides, key = std::string(kf.key)](const std::string& v) {
                overrides.emplace_back(key, v);
            },
            kf.help);
    }

    CLI::App* sub_gen = app.add_subcommand("gen-data", "generate the dataset and its split");
    CLI::App* sub_train = app.add_subcommand("train", "train explicit-model embeddings per seed");
    CLI::App* sub_gram = app.add_subcommand("gram", "compute kernel Gram matrices per seed");
    CLI::App* sub_svm = app.add_subcommand("svm", "fit and score SVMs on precomputed Grams");
    CLI::App* sub_full = app.add_subcommand("full", "run the whole pipeline and summarize");
    for (CLI::App* sub : {sub_gen, sub_train, sub_gram, sub_svm, sub_full}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        discoq::ExperimentConfig cfg;
        if (!config_path.empty()) cfg = discoq::load_config_file(config_path);
        for (const auto& [key, value] : overrides) discoq::set_config_key(cfg, key, value);
        if (!seed_flag.empty()) {
            cfg.seeds = {discoq::detail::parse_uint64(seed_flag, "--seed")};
        } else if (const char* env = std::getenv("DISCO_SEED")) {
            cfg.seeds.front() = discoq::detail::parse_uint64(env, "DISCO_SEED");
        }
        discoq::validate_config(cfg);

        if (sub_gen->parsed()) {
            discoq::cmd_gen_data(cfg);
        } else if (sub_train->parsed()) {
            discoq::cmd_train(cfg);
        } else if (sub_gram->parsed()) {
            discoq::cmd_gram(cfg);
        } else if (sub_svm->parsed()) {
            discoq::cmd_svm(cfg);
        } else if (sub_full->parsed()) {
            discoq::cmd_full(cfg);
        }
        return 0;
    } catch (const discoq::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
