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

#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "discoq/dataset.hpp"
#include "discoq/embeddings.hpp"
#include "discoq/errors.hpp"
#include "discoq/kernels.hpp"
#include "discoq/pregroup.hpp"
#include "discoq/svm.hpp"
#include "discoq/textutil.hpp"

namespace discoq {

inline constexpr int kSchemaVersion = 1;

/// Everything a pipeline run needs, with CLI/config-file names matching the
/// field comments. Backend and kernel are kept as strings so the config file,
/// the flags and the metrics output all speak the same vocabulary.
struct ExperimentConfig {
    std::string lexicon_path;  // key: lexicon (empty = built-in vocabulary)
    std::string data_path;     // key: data (empty = <out>/data.tsv)
    int n_sentences = 100;     // key: n_sentences
    double train_ratio = 0.7;  // key: train_ratio
    std::uint64_t data_seed = 42;  // key: data_seed

    AnsatzConfig ansatz{};  // keys: q_n, q_s, layers

    std::string backend = "exact";  // key: backend (exact | shots | noisy)
    int shots = 8192;               // key: shots
    std::string noise_profile = "guadalupe-like";  // key: noise_profile (none | guadalupe-like)

    int epochs = 100;           // key: epochs
    double spsa_a = 2.5;        // key: spsa_a
    double spsa_c = 0.3;        // key: spsa_c
    double spsa_A = -1.0;       // key: spsa_A (negative = 0.05 * epochs)
    double spsa_alpha = 0.3;    // key: spsa_alpha
    double spsa_gamma = 0.101;  // key: spsa_gamma

    std::string kernel = "swap";  // key: kernel (transition | swap)
    double svm_c = 1.0;           // key: svm_c

    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7};  // key: seeds (comma-separated)
    std::string out_dir = "runs";                              // key: out
};

inline NoiseModel noise_profile_by_name(const std::string& name) {
    if (name == "none") return NoiseModel::none();
    if (name == "guadalupe-like") return NoiseModel::guadalupe_like();
    throw ConfigError("unknown noise profile: " + name);
}

/// Trial backend. The noise profile only applies to the `noisy` backend; the
/// `shots` backend samples the ideal distribution.
inline Backend make_backend(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
    if (cfg.backend == "exact") return Backend::exact();
    if (cfg.backend == "shots") return Backend::sampled(cfg.shots, trial_seed);
    if (cfg.backend == "noisy") return Backend::density(noise_profile_by_name(cfg.noise_profile));
    throw ConfigError("unknown backend: " + cfg.backend);
}

/// Training always happens on a tractable backend: the density backend is an
/// evaluation device here, so a `noisy` configuration trains on the exact
/// backend and applies the noise when scoring and in the kernel stages.
inline TrainConfig make_train_config(const ExperimentConfig& cfg, std::uint64_t trial_seed) {
    TrainConfig t;
    t.epochs = cfg.epochs;
    t.spsa_a = cfg.spsa_a;
    t.spsa_c = cfg.spsa_c;
    t.spsa_A = cfg.spsa_A;
    t.alpha = cfg.spsa_alpha;
    t.gamma = cfg.spsa_gamma;
    t.seed = trial_seed;
    t.ansatz = cfg.ansatz;
    t.backend = cfg.backend == "noisy" ? Backend::exact() : make_backend(cfg, trial_seed);
    return t;
}

namespace detail {

inline std::uint64_t parse_uint64(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(trim(s), &used);
        if (used != trim(s).size()) throw std::invalid_argument("trailing characters");
        return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
        throw ConfigError("cannot parse " + what + ": '" + s + "'");
    }
}

inline double config_double(const std::string& s, const std::string& what) {
    try {
        return parse_double(s, what);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
}

inline int config_int(const std::string& s, const std::string& what) {
    try {
        return static_cast<int>(parse_int(s, what));
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
}

}  // namespace detail

/// Applies one `key = value` setting. Throws ConfigError on unknown keys or
/// unparseable values so typos never silently fall back to defaults.
inline void set_config_key(ExperimentConfig& cfg, const std::string& key,
                           const std::string& value) {
    if (key == "lexicon") {
        cfg.lexicon_path = value;
    } else if (key == "data") {
        cfg.data_path = value;
    } else if (key == "n_sentences") {
        cfg.n_sentences = detail::config_int(value, "n_sentences");
    } else if (key == "train_ratio") {
        cfg.train_ratio = detail::config_double(value, "train_ratio");
    } else if (key == "data_seed") {
        cfg.data_seed = detail::parse_uint64(value, "data_seed");
    } else if (key == "q_n") {
        cfg.ansatz.q_n = detail::config_int(value, "q_n");
    } else if (key == "q_s") {
        cfg.ansatz.q_s = detail::config_int(value, "q_s");
    } else if (key == "layers") {
        cfg.ansatz.layers = detail::config_int(value, "layers");
    } else if (key == "backend") {
        cfg.backend = value;
    } else if (key == "shots") {
        cfg.shots = detail::config_int(value, "shots");
    } else if (key == "noise_profile") {
        cfg.noise_profile = value;
    } else if (key == "epochs") {
        cfg.epochs = detail::config_int(value, "epochs");
    } else if (key == "spsa_a") {
        cfg.spsa_a = detail::config_double(value, "spsa_a");
    } else if (key == "spsa_c") {
        cfg.spsa_c = detail::config_double(value, "spsa_c");
    } else if (key == "spsa_A") {
        cfg.spsa_A = detail::config_double(value, "spsa_A");
    } else if (key == "spsa_alpha") {
        cfg.spsa_alpha = detail::config_double(value, "spsa_alpha");
    } else if (key == "spsa_gamma") {
        cfg.spsa_gamma = detail::config_double(value, "spsa_gamma");
    } else if (key == "kernel") {
        cfg.kernel = value;
    } else if (key == "svm_c") {
        cfg.svm_c = detail::config_double(value, "svm_c");
    } else if (key == "seeds") {
        std::vector<std::uint64_t> seeds;
        for (const auto& part : split(value, ',')) {
            if (trim(part).empty()) continue;
            seeds.push_back(detail::parse_uint64(part, "seeds entry"));
        }
        if (seeds.empty()) throw ConfigError("seeds list cannot be empty");
        cfg.seeds = std::move(seeds);
    } else if (key == "out") {
        cfg.out_dir = value;
    } else {
        throw ConfigError("unknown config key: " + key);
    }
}

/// Validates cross-field constraints once all sources are applied.
inline void validate_config(const ExperimentConfig& cfg) {
    if (cfg.n_sentences <= 0) throw ConfigError("n_sentences must be positive");
    if (cfg.train_ratio <= 0.0 || cfg.train_ratio >= 1.0) {
        throw ConfigError("train_ratio must be in (0, 1)");
    }
    if (cfg.shots <= 0) throw ConfigError("shots must be positive");
    if (cfg.epochs < 0) throw ConfigError("epochs cannot be negative");
    if (cfg.svm_c <= 0.0) throw ConfigError("svm_c must be positive");
    if (cfg.seeds.empty()) throw ConfigError("seeds list cannot be empty");
    if (cfg.out_dir.empty()) throw ConfigError("output directory cannot be empty");
    cfg.ansatz.validate();
    (void)kernel_from_name(cfg.kernel);
    if (cfg.backend != "exact" && cfg.backend != "shots" && cfg.backend != "noisy") {
        throw ConfigError("unknown backend: " + cfg.backend);
    }
    (void)noise_profile_by_name(cfg.noise_profile);
}

/// Flat `key = value` config file. `[section]` headers are cosmetic grouping
/// and are ignored; `#` starts a comment.
inline ExperimentConfig load_config(std::istream& in, ExperimentConfig cfg = {}) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        }
        set_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

inline ExperimentConfig load_config_file(const std::string& path, ExperimentConfig cfg = {}) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    try {
        return load_config(in, std::move(cfg));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Output layout

inline std::string path_join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

inline std::string data_tsv_path(const ExperimentConfig& cfg) {
    return cfg.data_path.empty() ? path_join(cfg.out_dir, "data.tsv") : cfg.data_path;
}
inline std::string train_tsv_path(const ExperimentConfig& cfg) {
    return path_join(cfg.out_dir, "train.tsv");
}
inline std::string test_tsv_path(const ExperimentConfig& cfg) {
    return path_join(cfg.out_dir, "test.tsv");
}
inline std::string embeddings_path(const ExperimentConfig& cfg, std::uint64_t seed) {
    return path_join(cfg.out_dir, "embeddings_" + std::to_string(seed) + ".txt");
}
inline std::string history_path(const ExperimentConfig& cfg, std::uint64_t seed) {
    return path_join(cfg.out_dir, "history_" + std::to_string(seed) + ".csv");
}
inline std::string gram_path(const ExperimentConfig& cfg, const std::string& split,
                             const std::string& kernel, std::uint64_t seed,
                             const std::string& ext) {
    return path_join(cfg.out_dir,
                     "gram_" + split + "_" + kernel + "_" + std::to_string(seed) + "." + ext);
}
inline std::string regions_path(const ExperimentConfig& cfg, const std::string& kernel,
                                std::uint64_t seed) {
    return path_join(cfg.out_dir, "regions_" + kernel + "_" + std::to_string(seed) + ".tsv");
}
inline std::string model_path(const ExperimentConfig& cfg, const std::string& kernel,
                              std::uint64_t seed) {
    return path_join(cfg.out_dir, "model_" + kernel + "_" + std::to_string(seed) + ".txt");
}
inline std::string metrics_seed_path(const ExperimentConfig& cfg, const std::string& kernel,
                                     std::uint64_t seed) {
    return path_join(cfg.out_dir, "metrics_" + kernel + "_" + std::to_string(seed) + ".json");
}

namespace detail {

inline void log_stage(const std::string& stage, const std::string& msg, double seconds = -1.0) {
    if (seconds >= 0.0) {
        std::fprintf(stderr, "[%s] %s (%.2fs)\n", stage.c_str(), msg.c_str(), seconds);
    } else {
        std::fprintf(stderr, "[%s] %s\n", stage.c_str(), msg.c_str());
    }
}

class StageTimer {
  public:
    explicit StageTimer(std::string stage) : stage_(std::move(stage)) {}
    void note(const std::string& msg) const {
        log_stage(stage_, msg,
                  std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count());
    }

  private:
    std::string stage_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline Lexicon resolve_lexicon(const ExperimentConfig& cfg) {
    return cfg.lexicon_path.empty() ? default_lexicon() : load_lexicon_file(cfg.lexicon_path);
}

inline LabeledData require_tsv(const std::string& path, const std::string& producer) {
    if (!std::filesystem::exists(path)) {
        throw IoError("missing " + path + "; run `" + producer + "` first");
    }
    return load_tsv_file(path);
}

inline std::vector<int> labels_of(const LabeledData& data) {
    std::vector<int> out;
    out.reserve(data.size());
    for (const auto& s : data) out.push_back(s.label);
    return out;
}

inline std::string hex64(std::uint64_t v) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write: " + path);
    out << body;
}

inline void write_json_file(const std::string& path, const nlohmann::ordered_json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

/// mean plus standard error of the mean (sample standard deviation / sqrt(n)).
inline nlohmann::ordered_json aggregate_json(const std::vector<double>& values) {
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    if (values.size() > 1) {
        for (double v : values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(values.size() - 1);
    }
    const double stderr_of_mean = std::sqrt(var / static_cast<double>(values.size()));
    return nlohmann::ordered_json{
        {"mean", mean}, {"stderr", stderr_of_mean}, {"per_seed", values}};
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Stages

/// Generates the task dataset and its split. Same config -> byte-identical
/// files.
inline void cmd_gen_data(const ExperimentConfig& cfg) {
    const detail::StageTimer timer("gen-data");
    std::filesystem::create_directories(cfg.out_dir);
    const Lexicon lex = detail::resolve_lexicon(cfg);
    const LabeledData data = generate_dataset(lex, cfg.n_sentences, cfg.data_seed);
    const DataSplit split = split_dataset(data, cfg.train_ratio, cfg.data_seed);
    save_tsv_file(data_tsv_path(cfg), data);
    save_tsv_file(train_tsv_path(cfg), split.train);
    save_tsv_file(test_tsv_path(cfg), split.test);
    timer.note("wrote " + std::to_string(data.size()) + " sentences (" +
               std::to_string(split.train.size()) + " train / " +
               std::to_string(split.test.size()) + " test)");
}

struct TrainSeedResult {
    std::uint64_t seed = 0;
    double final_loss = 0.0;
    double train_acc = 0.0;
    double test_acc = 0.0;  // under the configured backend
};

/// Trains one trial and writes its embeddings and history files.
inline TrainSeedResult train_one(const ExperimentConfig& cfg, std::uint64_t seed) {
    const detail::StageTimer timer("train");
    const Lexicon lex = detail::resolve_lexicon(cfg);
    const LabeledData train = detail::require_tsv(train_tsv_path(cfg), "gen-data");
    const LabeledData test = detail::require_tsv(test_tsv_path(cfg), "gen-data");
    const TrainConfig tc = make_train_config(cfg, seed);
    const std::vector<CompiledSentence> test_items = compile_sentences(test, lex, cfg.ansatz);

    std::vector<double> test_history;
    const TrainResult result =
        train_spsa(train, lex, tc, [&](int epoch, const EmbeddingStore& store) {
            test_history.push_back(evaluate_accuracy(test_items, store, tc.backend,
                                                     static_cast<std::uint64_t>(epoch)));
        });

    save_embeddings_file(embeddings_path(cfg, seed), result.store, lexicon_hash(lex), cfg.ansatz);
    std::string csv = "epoch,loss,train_acc,test_acc\n";
    for (std::size_t i = 0; i < result.history.size(); ++i) {
        const EpochStats& e = result.history[i];
        csv += std::to_string(e.epoch) + "," + format_double(e.loss) + "," +
               format_double(e.train_accuracy) + "," + format_double(test_history.at(i)) + "\n";
    }
    detail::write_text_file(history_path(cfg, seed), csv);

    TrainSeedResult out;
    out.seed = seed;
    out.final_loss = result.history.back().loss;
    out.train_acc = result.history.back().train_accuracy;
    out.test_acc = test_history.back();
    if (cfg.backend == "noisy") {
        // Trained on the exact backend; the configured backend scores it.
        const Backend noisy = make_backend(cfg, seed);
        out.test_acc = evaluate_accuracy(test_items, result.store, noisy);
    }
    timer.note("seed " + std::to_string(seed) + ": loss " + std::to_string(out.final_loss) +
               ", train acc " + std::to_string(out.train_acc) + ", test acc " +
               std::to_string(out.test_acc));
    return out;
}

/// Trains every configured seed; aggregates into metrics_train.json and
/// metrics.json.
inline std::vector<TrainSeedResult> cmd_train(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<TrainSeedResult> results;
    results.reserve(cfg.seeds.size());
    for (const std::uint64_t seed : cfg.seeds) results.push_back(train_one(cfg, seed));

    std::vector<double> loss, train_acc, test_acc;
    for (const auto& r : results) {
        loss.push_back(r.final_loss);
        train_acc.push_back(r.train_acc);
        test_acc.push_back(r.test_acc);
    }
    nlohmann::ordered_json j{{"schema_version", kSchemaVersion},
                             {"stage", "train"},
                             {"backend", cfg.backend},
                             {"epochs", cfg.epochs},
                             {"seeds", cfg.seeds},
                             {"final_loss", detail::aggregate_json(loss)},
                             {"train_acc", detail::aggregate_json(train_acc)},
                             {"test_acc", detail::aggregate_json(test_acc)}};
    detail::write_json_file(path_join(cfg.out_dir, "metrics_train.json"), j);
    detail::write_json_file(path_join(cfg.out_dir, "metrics.json"), j);
    return results;
}

/// Loads a trial's embeddings, checking they match the configured lexicon.
inline EmbeddingStore load_trial_embeddings(const ExperimentConfig& cfg, const Lexicon& lex,
                                            std::uint64_t seed) {
    const std::string path = embeddings_path(cfg, seed);
    if (!std::filesystem::exists(path)) {
        throw IoError("missing " + path + "; run `train` first");
    }
    const EmbeddingFile file = load_embeddings_file(path);
    if (file.lexicon_hash != lexicon_hash(lex)) {
        throw IoError(path + ": embeddings were trained against a different lexicon");
    }
    return file.store;
}

/// Computes and writes the train and test Gram matrices (CSV + PGM heatmap)
/// plus the train-region statistics for one trial.
inline void gram_one(const ExperimentConfig& cfg, std::uint64_t seed) {
    const detail::StageTimer timer("gram");
    const Lexicon lex = detail::resolve_lexicon(cfg);
    const LabeledData train = detail::require_tsv(train_tsv_path(cfg), "gen-data");
    const LabeledData test = detail::require_tsv(test_tsv_path(cfg), "gen-data");
    const EmbeddingStore store = load_trial_embeddings(cfg, lex, seed);
    const KernelKind kind = kernel_from_name(cfg.kernel);
    Backend backend = make_backend(cfg, seed);
    backend.seed = seed;

    auto bound_circuits = [&](const LabeledData& data) {
        std::vector<Circuit> out;
        out.reserve(data.size());
        for (const auto& s : data) {
            out.push_back(discoq::bind(compile_diagram(parse_sentence(s.tokens, lex), cfg.ansatz),
                               store.params));
        }
        return out;
    };
    const std::vector<Circuit> train_circuits = bound_circuits(train);
    const std::vector<Circuit> test_circuits = bound_circuits(test);

    const std::map<std::string, std::string> extra{
        {"embeddings", detail::hex64(embeddings_hash(store))},
        {"lexicon", detail::hex64(lexicon_hash(lex))}};

    GramMatrix k_train = gram(train_circuits, kind, backend);
    k_train.meta["split"] = "train";
    save_gram_csv_file(gram_path(cfg, "train", cfg.kernel, seed, "csv"), k_train, extra);
    save_gram_pgm_file(gram_path(cfg, "train", cfg.kernel, seed, "pgm"), k_train);

    GramMatrix k_test = gram(test_circuits, train_circuits, kind, backend);
    k_test.meta["split"] = "test";
    save_gram_csv_file(gram_path(cfg, "test", cfg.kernel, seed, "csv"), k_test, extra);
    save_gram_pgm_file(gram_path(cfg, "test", cfg.kernel, seed, "pgm"), k_test);

    const std::vector<int> y_train = detail::labels_of(train);
    const RegionStats regions = region_stats(k_train, y_train, y_train);
    std::string table = "region\tmean\tstddev\tcount\n";
    auto row = [&table](const char* name, const RegionEntry& e) {
        table += std::string(name) + "\t" + format_double(e.mean) + "\t" +
                 format_double(e.stddev) + "\t" + std::to_string(e.count) + "\n";
    };
    row("class0", regions.class00);
    row("class1", regions.class11);
    row("mixed", regions.mixed);
    detail::write_text_file(regions_path(cfg, cfg.kernel, seed), table);

    timer.note("seed " + std::to_string(seed) + " " + cfg.kernel + ": train " +
               std::to_string(k_train.rows) + "x" + std::to_string(k_train.cols) + ", test " +
               std::to_string(k_test.rows) + "x" + std::to_string(k_test.cols));
}

inline void cmd_gram(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    for (const std::uint64_t seed : cfg.seeds) gram_one(cfg, seed);
}

struct SvmSeedResult {
    std::uint64_t seed = 0;
    double train_acc = 0.0;
    double test_acc = 0.0;
    int n_support = 0;
};

/// Fits the SVM on one trial's precomputed Gram matrices and writes the model
/// and its per-seed metrics file.
inline SvmSeedResult svm_one(const ExperimentConfig& cfg, std::uint64_t seed) {
    const detail::StageTimer timer("svm");
    const LabeledData train = detail::require_tsv(train_tsv_path(cfg), "gen-data");
    const LabeledData test = detail::require_tsv(test_tsv_path(cfg), "gen-data");
    const std::string train_gram_file = gram_path(cfg, "train", cfg.kernel, seed, "csv");
    const std::string test_gram_file = gram_path(cfg, "test", cfg.kernel, seed, "csv");
    for (const auto& p : {train_gram_file, test_gram_file}) {
        if (!std::filesystem::exists(p)) throw IoError("missing " + p + "; run `gram` first");
    }
    const GramMatrix k_train = load_gram_csv_file(train_gram_file);
    const GramMatrix k_test = load_gram_csv_file(test_gram_file);
    const std::vector<int> y_train = detail::labels_of(train);
    const std::vector<int> y_test = detail::labels_of(test);

    const SvmModel model = fit_precomputed(k_train, y_train, cfg.svm_c);
    save_model_file(model_path(cfg, cfg.kernel, seed), model);

    SvmSeedResult out;
    out.seed = seed;
    out.train_acc = svm_accuracy(model, k_train, y_train);
    out.test_acc = svm_accuracy(model, k_test, y_test);
    out.n_support = static_cast<int>(model.support_indices.size());

    const nlohmann::ordered_json j{
        {"schema_version", kSchemaVersion}, {"kernel", cfg.kernel},
        {"backend", cfg.backend},           {"seed", seed},
        {"train_acc", out.train_acc},       {"test_acc", out.test_acc},
        {"n_support", out.n_support},       {"C", cfg.svm_c}};
    detail::write_json_file(metrics_seed_path(cfg, cfg.kernel, seed), j);
    detail::write_json_file(path_join(cfg.out_dir, "metrics.json"), j);

    timer.note("seed " + std::to_string(seed) + " " + cfg.kernel + ": train acc " +
               std::to_string(out.train_acc) + ", test acc " + std::to_string(out.test_acc) +
               ", " + std::to_string(out.n_support) + " SVs");
    return out;
}

inline std::vector<SvmSeedResult> cmd_svm(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);
    std::vector<SvmSeedResult> out;
    out.reserve(cfg.seeds.size());
    for (const std::uint64_t seed : cfg.seeds) out.push_back(svm_one(cfg, seed));
    return out;
}

/// Full pipeline: gen-data, then per seed train, then per kernel gram + svm,
/// finally an aggregate summary.json over all seeds.
inline void cmd_full(const ExperimentConfig& cfg) {
    cmd_gen_data(cfg);
    const std::vector<TrainSeedResult> explicit_results = cmd_train(cfg);

    nlohmann::ordered_json summary{{"schema_version", kSchemaVersion},
                                   {"backend", cfg.backend},
                                   {"seeds", cfg.seeds}};
    {
        std::vector<double> loss, train_acc, test_acc;
        for (const auto& r : explicit_results) {
            loss.push_back(r.final_loss);
            train_acc.push_back(r.train_acc);
            test_acc.push_back(r.test_acc);
        }
        summary["explicit"] = {{"final_loss", detail::aggregate_json(loss)},
                               {"train_acc", detail::aggregate_json(train_acc)},
                               {"test_acc", detail::aggregate_json(test_acc)}};
    }

    for (const std::string kernel : {"transition", "swap"}) {
        ExperimentConfig kcfg = cfg;
        kcfg.kernel = kernel;
        cmd_gram(kcfg);
        const std::vector<SvmSeedResult> rs = cmd_svm(kcfg);
        std::vector<double> train_acc, test_acc, n_support;
        for (const auto& r : rs) {
            train_acc.push_back(r.train_acc);
            test_acc.push_back(r.test_acc);
            n_support.push_back(static_cast<double>(r.n_support));
        }
        summary[kernel] = {{"train_acc", detail::aggregate_json(train_acc)},
                           {"test_acc", detail::aggregate_json(test_acc)},
                           {"n_support", detail::aggregate_json(n_support)}};
    }
    detail::write_json_file(path_join(cfg.out_dir, "summary.json"), summary);
    detail::log_stage("full", "wrote " + path_join(cfg.out_dir, "summary.json"));
}

}  // namespace discoq
