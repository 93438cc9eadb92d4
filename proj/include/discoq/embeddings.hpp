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

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "discoq/circuit.hpp"
#include "discoq/dataset.hpp"
#include "discoq/errors.hpp"
#include "discoq/pregroup.hpp"
#include "discoq/rng.hpp"
#include "discoq/simulator.hpp"
#include "discoq/textutil.hpp"

namespace discoq {

/// Predicted probabilities are clamped into [eps, 1-eps] before the
/// cross-entropy so a confident miss cannot produce an infinite loss.
inline constexpr double kProbClamp = 1e-9;

/// One rotation angle per ansatz symbol, plus the seed the values were
/// initialized from.
struct EmbeddingStore {
    ParameterMap params;
    std::uint64_t rng_seed = 0;

    friend bool operator==(const EmbeddingStore&, const EmbeddingStore&) = default;
};

/// Fresh store covering every symbol the lexicon can produce, each drawn
/// uniformly from [0, 2*pi) in sorted symbol order.
inline EmbeddingStore init_embeddings(const Lexicon& lexicon, const AnsatzConfig& ansatz,
                                      std::uint64_t seed) {
    ansatz.validate();
    EmbeddingStore store;
    store.rng_seed = seed;
    std::mt19937_64 rng(seed);
    for (const auto& [word, e] : lexicon) {
        for (int k = 0; k < e.param_count; ++k) {
            store.params[symbol_name(word, k)] = uniform(rng, 2.0 * std::numbers::pi);
        }
    }
    return store;
}

struct CompiledSentence {
    Diagram diagram;
    Circuit circuit;  // symbolic
    int label = 0;
};

inline std::vector<CompiledSentence> compile_sentences(const LabeledData& data,
                                                       const Lexicon& lexicon,
                                                       const AnsatzConfig& ansatz) {
    std::vector<CompiledSentence> out;
    out.reserve(data.size());
    for (const auto& s : data) {
        CompiledSentence cs;
        cs.diagram = parse_sentence(s.tokens, lexicon);
        cs.circuit = compile_diagram(cs.diagram, ansatz);
        cs.label = s.label;
        out.push_back(std::move(cs));
    }
    return out;
}

/// Pr[sentence qubit = 1 | post-selection] for a symbolic sentence circuit,
/// clamped into [eps, 1-eps].
inline double predict_probability(const Circuit& symbolic, const EmbeddingStore& store,
                                  const Backend& backend, std::uint64_t stream_seed = 0) {
    if (symbolic.sentence_qubits().empty()) {
        throw PredictionFailed("circuit has no sentence qubit to read out");
    }
    try {
        const PostSelectedDistribution dist =
            run_backend(discoq::bind(symbolic, store.params), backend, stream_seed);
        double p1 = 0.0;
        for (const auto& [key, p] : dist.probs) {
            if (!key.empty() && key[0] == '1') p1 += p;
        }
        return std::clamp(p1, kProbClamp, 1.0 - kProbClamp);
    } catch (const PostSelectImpossible& e) {
        throw PredictionFailed(std::string("post-selection failed: ") + e.what());
    }
}

/// Diagram-level convenience wrapper around predict_probability.
inline double predict_explicit(const Diagram& d, const EmbeddingStore& store,
                               const AnsatzConfig& ansatz, const Backend& backend,
                               std::uint64_t stream_seed = 0) {
    return predict_probability(compile_diagram(d, ansatz), store, backend, stream_seed);
}

namespace detail {

/// Per-sentence shot streams are derived from (base seed, step, sentence
/// index) rather than consumed from one shared stream, so evaluation order
/// cannot change results and the two SPSA probes of a step share their shot
/// noise per sentence.
inline std::uint64_t sentence_stream(const Backend& backend, std::uint64_t step,
                                     std::uint64_t index) {
    return derive_seed(backend.seed, step, index);
}

inline std::vector<double> predict_all(const std::vector<CompiledSentence>& items,
                                       const EmbeddingStore& store, const Backend& backend,
                                       std::uint64_t step) {
    std::vector<double> probs;
    probs.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        probs.push_back(
            predict_probability(items[i].circuit, store, backend, sentence_stream(backend, step, i)));
    }
    return probs;
}

inline double loss_from_probs(const std::vector<CompiledSentence>& items,
                              const std::vector<double>& probs) {
    double total = 0.0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const double p = probs[i];
        total += items[i].label == 1 ? -std::log(p) : -std::log(1.0 - p);
    }
    return total / static_cast<double>(items.size());
}

inline double accuracy_from_probs(const std::vector<CompiledSentence>& items,
                                  const std::vector<double>& probs) {
    int hits = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const int predicted = probs[i] >= 0.5 ? 1 : 0;  // ties resolve to class 1
        if (predicted == items[i].label) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(items.size());
}

}  // namespace detail

/// Mean binary cross-entropy of the explicit model over a compiled dataset.
inline double cross_entropy_loss(const std::vector<CompiledSentence>& items,
                                 const EmbeddingStore& store, const Backend& backend,
                                 std::uint64_t step = 0) {
    if (items.empty()) throw EmptyDataset("cannot evaluate loss on an empty dataset");
    return detail::loss_from_probs(items, detail::predict_all(items, store, backend, step));
}

inline double evaluate_accuracy(const std::vector<CompiledSentence>& items,
                                const EmbeddingStore& store, const Backend& backend,
                                std::uint64_t step = 0) {
    if (items.empty()) throw EmptyDataset("cannot evaluate accuracy on an empty dataset");
    return detail::accuracy_from_probs(items, detail::predict_all(items, store, backend, step));
}

struct TrainConfig {
    int epochs = 100;
    double spsa_a = 2.5;
    double spsa_c = 0.3;
    double spsa_A = -1.0;  // negative means the default 0.05 * epochs
    double alpha = 0.3;
    double gamma = 0.101;
    std::uint64_t seed = 0;
    AnsatzConfig ansatz{};
    Backend backend{};

    double resolved_A() const { return spsa_A < 0.0 ? 0.05 * epochs : spsa_A; }
};

struct EpochStats {
    int epoch = 0;
    double loss = 0.0;
    double train_accuracy = 0.0;
};

struct TrainResult {
    EmbeddingStore store;
    std::vector<EpochStats> history;  // epochs + 1 rows, first row is the initial state
};

/// SPSA training of the explicit model. One parameter update per epoch using
/// the full-batch loss; both probes of step k perturb every parameter by
/// +/- c_k along a random sign vector. Deterministic for a fixed (config,
/// seed) on the exact backend, and for fixed shot seeds otherwise.
inline TrainResult train_spsa(
    const LabeledData& train, const Lexicon& lexicon, const TrainConfig& cfg,
    const std::function<void(int, const EmbeddingStore&)>& on_epoch = nullptr) {
    if (train.empty()) throw EmptyDataset("cannot train on an empty dataset");
    const std::vector<CompiledSentence> items = compile_sentences(train, lexicon, cfg.ansatz);

    TrainResult result;
    result.store = init_embeddings(lexicon, cfg.ansatz, cfg.seed);
    std::vector<std::string> names;
    names.reserve(result.store.params.size());
    for (const auto& [name, value] : result.store.params) names.push_back(name);
    const std::size_t dim = names.size();

    auto record = [&](int epoch) {
        const auto probs =
            detail::predict_all(items, result.store, cfg.backend, static_cast<std::uint64_t>(epoch));
        result.history.push_back({epoch, detail::loss_from_probs(items, probs),
                                  detail::accuracy_from_probs(items, probs)});
        if (on_epoch) on_epoch(epoch, result.store);
    };
    record(0);

    std::mt19937_64 delta_rng(derive_seed(cfg.seed, 0x5053415f64656c74ULL));  // SPSA delta stream
    const double A = cfg.resolved_A();
    for (int k = 0; k < cfg.epochs; ++k) {
        const double a_k = cfg.spsa_a / std::pow(k + 1 + A, cfg.alpha);
        const double c_k = cfg.spsa_c / std::pow(k + 1, cfg.gamma);
        std::vector<double> delta(dim);
        for (std::size_t i = 0; i < dim; ++i) delta[i] = (delta_rng() & 1ULL) ? 1.0 : -1.0;

        EmbeddingStore plus = result.store;
        EmbeddingStore minus = result.store;
        for (std::size_t i = 0; i < dim; ++i) {
            plus.params[names[i]] += c_k * delta[i];
            minus.params[names[i]] -= c_k * delta[i];
        }
        const std::uint64_t step = static_cast<std::uint64_t>(k);
        const double loss_plus =
            detail::loss_from_probs(items, detail::predict_all(items, plus, cfg.backend, step));
        const double loss_minus =
            detail::loss_from_probs(items, detail::predict_all(items, minus, cfg.backend, step));
        const double scale = a_k * (loss_plus - loss_minus) / (2.0 * c_k);
        for (std::size_t i = 0; i < dim; ++i) {
            result.store.params[names[i]] -= scale * delta[i];
        }
        record(k + 1);
    }
    return result;
}

/// Content hash of a parameter set (FNV-1a over name/value pairs at full
/// precision, in sorted symbol order). Identifies which embeddings produced a
/// downstream artifact.
inline std::uint64_t embeddings_hash(const EmbeddingStore& store) {
    std::uint64_t h = 1469598103934665603ULL;
    auto feed = [&h](const std::string& s) {
        for (const unsigned char ch : s) {
            h ^= ch;
            h *= 1099511628211ULL;
        }
        h ^= 0x1fULL;
        h *= 1099511628211ULL;
    };
    for (const auto& [name, value] : store.params) {
        feed(name);
        feed(format_double(value));
    }
    return h;
}

/// Embedding persistence: a header line recording the lexicon hash, ansatz
/// shape and init seed, then `symbol<TAB>radians` lines in sorted order.
inline void save_embeddings(std::ostream& out, const EmbeddingStore& store,
                            std::uint64_t lexicon_hash_value, const AnsatzConfig& ansatz) {
    char head[160];
    std::snprintf(head, sizeof(head), "# discoq-embeddings lexicon=%016llx q_n=%d q_s=%d layers=%d seed=%llu\n",
                  static_cast<unsigned long long>(lexicon_hash_value), ansatz.q_n, ansatz.q_s,
                  ansatz.layers, static_cast<unsigned long long>(store.rng_seed));
    out << head;
    for (const auto& [name, value] : store.params) {
        out << name << '\t' << format_double(value) << '\n';
    }
}

inline void save_embeddings_file(const std::string& path, const EmbeddingStore& store,
                                 std::uint64_t lexicon_hash_value, const AnsatzConfig& ansatz) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write embeddings file: " + path);
    save_embeddings(out, store, lexicon_hash_value, ansatz);
}

struct EmbeddingFile {
    EmbeddingStore store;
    std::uint64_t lexicon_hash = 0;
    AnsatzConfig ansatz{};
};

inline EmbeddingFile load_embeddings(std::istream& in) {
    EmbeddingFile out;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# discoq-embeddings ", 0) != 0) {
        throw IoError("embeddings file must start with a '# discoq-embeddings' header");
    }
    for (const auto& field : split(line.substr(2), ' ')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "lexicon") {
            out.lexicon_hash = std::stoull(value, nullptr, 16);
        } else if (key == "q_n") {
            out.ansatz.q_n = static_cast<int>(parse_int(value, "q_n"));
        } else if (key == "q_s") {
            out.ansatz.q_s = static_cast<int>(parse_int(value, "q_s"));
        } else if (key == "layers") {
            out.ansatz.layers = static_cast<int>(parse_int(value, "layers"));
        } else if (key == "seed") {
            out.store.rng_seed = std::stoull(value, nullptr, 10);
        }
    }
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto cols = split(line, '\t');
        if (cols.size() != 2 || cols[0].empty()) {
            throw IoError("embeddings line " + std::to_string(lineno) +
                          " must be 'symbol<TAB>radians': " + line);
        }
        out.store.params[cols[0]] =
            parse_double(cols[1], "angle at line " + std::to_string(lineno));
    }
    return out;
}

inline EmbeddingFile load_embeddings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open embeddings file: " + path);
    try {
        return load_embeddings(in);
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

}  // namespace discoq
