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

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "discoq/dataset.hpp"
#include "discoq/embeddings.hpp"
#include "discoq/kernels.hpp"

using namespace discoq;

namespace {

/// Normalized post-selected state of the single sentence qubit. Valid only
/// when the post-selections cover every other qubit, which holds for every
/// compiled sentence circuit (cups post-select all non-open wires) and for
/// the hand-built circuits below.
std::array<cdouble, 2> sentence_state(const Circuit& c) {
    REQUIRE(c.sentence_qubits().size() == 1);
    REQUIRE(c.post_select().size() + 1 == static_cast<std::size_t>(c.n_qubits()));
    StateVector sv(c.n_qubits());
    for (const Gate& g : c.gates()) sv.apply(g);
    const int n = c.n_qubits();
    const int s = c.sentence_qubits()[0];
    std::array<cdouble, 2> psi{cdouble(0.0, 0.0), cdouble(0.0, 0.0)};
    for (std::uint64_t idx = 0; idx < sv.dim(); ++idx) {
        bool keep = true;
        for (const auto& [q, bit] : c.post_select()) {
            if (static_cast<int>((idx >> (n - 1 - q)) & 1ULL) != bit) {
                keep = false;
                break;
            }
        }
        if (keep) psi[(idx >> (n - 1 - s)) & 1ULL] += sv.amplitudes()[idx];
    }
    const double norm = std::sqrt(std::norm(psi[0]) + std::norm(psi[1]));
    REQUIRE(norm > 1e-12);
    psi[0] /= norm;
    psi[1] /= norm;
    return psi;
}

double state_fidelity(const std::array<cdouble, 2>& a, const std::array<cdouble, 2>& b) {
    return std::norm(std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1]);
}

/// One-qubit sentence circuit preparing the given gate's output state.
Circuit one_qubit_sentence(const std::vector<Gate>& gates) {
    Circuit c(1);
    for (const Gate& g : gates) c.add_gate(g);
    c.set_sentence_qubits({0});
    return c;
}

/// Two-qubit sentence circuit with a post-selected second wire, small enough
/// for full density-matrix cross-checks of the composed kernels.
Circuit two_qubit_sentence(double a, double b, double c_angle) {
    Circuit c(2);
    c.add_gate(Gate::rx(0, a));
    c.add_gate(Gate::h(1));
    c.add_gate(Gate::crz(1, 0, b));
    c.add_gate(Gate::rz(1, c_angle));
    c.add_gate(Gate::h(1));
    c.post_select_qubit(1, 0);
    c.set_sentence_qubits({0});
    return c;
}

std::vector<Circuit> bound_sentence_circuits(int n, std::uint64_t data_seed,
                                             std::uint64_t param_seed) {
    const Lexicon lex = default_lexicon();
    const LabeledData data = generate_dataset(lex, n, data_seed);
    const EmbeddingStore store = init_embeddings(lex, AnsatzConfig{}, param_seed);
    std::vector<Circuit> out;
    for (const auto& s : data) {
        out.push_back(discoq::bind(
            compile_diagram(parse_sentence(s.tokens, lex), AnsatzConfig{}), store.params));
    }
    return out;
}

}  // namespace

TEST_CASE("kernel names round-trip", "[kernels]") {
    CHECK(kernel_name(KernelKind::Swap) == "swap");
    CHECK(kernel_name(KernelKind::Transition) == "transition");
    CHECK(kernel_from_name("swap") == KernelKind::Swap);
    CHECK(kernel_from_name("transition") == KernelKind::Transition);
    CHECK_THROWS_AS(kernel_from_name("rbf"), ConfigError);
    CHECK(backend_label(Backend::exact()) == "exact");
    CHECK(backend_label(Backend::sampled(100, 1)) == "shots");
    CHECK(backend_label(Backend::density(NoiseModel{})) == "noisy");
}

TEST_CASE("swap test on hand-built one-qubit states", "[kernels]") {
    const Circuit zero = one_qubit_sentence({});
    const Circuit one = one_qubit_sentence({Gate::rx(0, std::numbers::pi)});
    const Circuit plus = one_qubit_sentence({Gate::h(0)});
    const Backend exact = Backend::exact();

    // Orthogonal states score 0, identical states 1, |<0|+>|^2 = 1/2.
    CHECK(swap_test_kernel(zero, one, exact) == Catch::Approx(0.0).margin(1e-12));
    CHECK(swap_test_kernel(zero, zero, exact) == Catch::Approx(1.0).margin(1e-12));
    CHECK(swap_test_kernel(one, one, exact) == Catch::Approx(1.0).margin(1e-12));
    CHECK(swap_test_kernel(zero, plus, exact) == Catch::Approx(0.5).margin(1e-12));
    CHECK(swap_test_kernel(plus, zero, exact) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("transition kernel on hand-built one-qubit states", "[kernels]") {
    const Circuit zero = one_qubit_sentence({});
    const Circuit one = one_qubit_sentence({Gate::rx(0, std::numbers::pi)});
    const Circuit plus = one_qubit_sentence({Gate::h(0)});
    const Backend exact = Backend::exact();

    // Forward |0>, then the adjoint preparation; P(0) is the squared overlap
    // here because no post-selection survives to bias the reverse pass.
    CHECK(transition_amplitude_kernel(zero, zero, exact) == Catch::Approx(1.0).margin(1e-12));
    CHECK(transition_amplitude_kernel(zero, one, exact) == Catch::Approx(0.0).margin(1e-12));
    CHECK(transition_amplitude_kernel(zero, plus, exact) == Catch::Approx(0.5).margin(1e-12));
    CHECK(transition_amplitude_kernel(one, plus, exact) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("composed kernel circuits have the documented layout", "[kernels]") {
    const Lexicon lex = default_lexicon();
    const EmbeddingStore store = init_embeddings(lex, AnsatzConfig{}, 17);
    const Circuit c = discoq::bind(
        compile_diagram(parse_sentence({"man", "prepares", "meal"}, lex), AnsatzConfig{}),
        store.params);
    REQUIRE(c.n_qubits() == 5);

    const Circuit t = transition_kernel_circuit(c, c);
    CHECK(t.n_qubits() == 9);  // 5 forward + 4 fresh reverse wires
    CHECK(t.gates().size() == 2 * c.gates().size());
    CHECK(t.sentence_qubits() == c.sentence_qubits());
    CHECK(t.post_select().size() == 8);
    for (const auto& [q, bit] : t.post_select()) CHECK(bit == 0);

    const Circuit s = swap_kernel_circuit(c, c);
    CHECK(s.n_qubits() == 11);  // two 5-qubit halves + ancilla
    CHECK(s.gates().size() == 2 * c.gates().size() + 3);
    CHECK(s.sentence_qubits() == std::vector<int>{10});
    CHECK(s.post_select().size() == 8);
    const Gate& cswap = s.gates()[s.gates().size() - 2];
    CHECK(cswap.kind == GateKind::CSWAP);
    CHECK(cswap.qubits[0] == 10);
}

TEST_CASE("swap kernel equals reduced-state fidelity on dataset circuits", "[kernels]") {
    const auto circuits = bound_sentence_circuits(6, 11, 29);
    std::vector<std::array<cdouble, 2>> states;
    states.reserve(circuits.size());
    for (const auto& c : circuits) states.push_back(sentence_state(c));

    const Backend exact = Backend::exact();
    for (std::size_t i = 0; i < circuits.size(); ++i) {
        for (std::size_t j = 0; j < circuits.size(); ++j) {
            const double k = swap_test_kernel(circuits[i], circuits[j], exact);
            CHECK(k == Catch::Approx(state_fidelity(states[i], states[j])).margin(1e-10));
        }
        CHECK(swap_test_kernel(circuits[i], circuits[i], exact) ==
              Catch::Approx(1.0).margin(1e-10));
    }
    // Symmetry comes with fidelity; spot-check it explicitly anyway.
    CHECK(swap_test_kernel(circuits[0], circuits[1], exact) ==
          Catch::Approx(swap_test_kernel(circuits[1], circuits[0], exact)).margin(1e-12));
}

TEST_CASE("factorized evaluation matches running the composed circuit", "[kernels]") {
    const auto circuits = bound_sentence_circuits(4, 19, 31);
    const Backend exact = Backend::exact();
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < circuits.size(); ++j) {
            const Circuit sc = swap_kernel_circuit(circuits[i], circuits[j]);
            if (sc.n_qubits() <= kStateVectorMaxQubits) {
                const double p0 = detail::first_bit_zero_prob(run_exact(sc));
                CHECK(swap_test_kernel(circuits[i], circuits[j], exact) ==
                      Catch::Approx(std::clamp(2.0 * p0 - 1.0, 0.0, 1.0)).margin(1e-12));
            }
            const Circuit tc = transition_kernel_circuit(circuits[i], circuits[j]);
            if (tc.n_qubits() <= kStateVectorMaxQubits) {
                CHECK(transition_amplitude_kernel(circuits[i], circuits[j], exact) ==
                      Catch::Approx(detail::first_bit_zero_prob(run_exact(tc))).margin(1e-12));
            }
        }
    }
}

TEST_CASE("transition diagonal can sit below one", "[kernels]") {
    // Post-selection keeps reverse-pass branches seeded by sentence-qubit
    // values other than |0>, so k(x, x) = 1 is not guaranteed. A |+> sentence
    // state with an entangling post-selected wire exhibits the effect.
    const Circuit c = two_qubit_sentence(1.1, 2.3, 0.7);
    const double diag = transition_amplitude_kernel(c, c, Backend::exact());
    CHECK(diag < 0.999);
    CHECK(diag > 0.0);
}

TEST_CASE("staged density kernels match the full density simulation", "[kernels]") {
    const Circuit ca = two_qubit_sentence(0.9, 1.7, 0.4);
    const Circuit cb = two_qubit_sentence(2.1, 0.6, 1.3);
    const NoiseModel nm = NoiseModel::guadalupe_like();

    // Composed circuits stay within the density-matrix cap here, so the
    // staged contraction can be checked against the brute-force channel.
    const Circuit sc = swap_kernel_circuit(ca, cb);
    REQUIRE(sc.n_qubits() == 5);
    const double full_swap =
        std::clamp(2.0 * detail::first_bit_zero_prob(run_density(sc, nm)) - 1.0, 0.0, 1.0);
    CHECK(swap_test_kernel(ca, cb, Backend::density(nm)) ==
          Catch::Approx(full_swap).margin(1e-10));

    const Circuit tc = transition_kernel_circuit(ca, cb);
    REQUIRE(tc.n_qubits() == 3);
    const double full_transition = detail::first_bit_zero_prob(run_density(tc, nm));
    CHECK(transition_amplitude_kernel(ca, cb, Backend::density(nm)) ==
          Catch::Approx(full_transition).margin(1e-10));

    // Zero noise through the density path reproduces the exact kernel.
    CHECK(swap_test_kernel(ca, cb, Backend::density(NoiseModel{})) ==
          Catch::Approx(swap_test_kernel(ca, cb, Backend::exact())).margin(1e-10));
    CHECK(transition_amplitude_kernel(ca, cb, Backend::density(NoiseModel{})) ==
          Catch::Approx(transition_amplitude_kernel(ca, cb, Backend::exact())).margin(1e-10));
}

TEST_CASE("sampled kernels concentrate around the exact value", "[kernels]") {
    const Circuit zero = one_qubit_sentence({});
    const Circuit plus = one_qubit_sentence({Gate::h(0)});

    // k = 0.5 means P(ancilla = 0) = 0.75; four sigma on 8192 shots.
    const int shots = 8192;
    const double sigma = std::sqrt(0.75 * 0.25 / shots);
    const double k = swap_test_kernel(zero, plus, Backend::sampled(shots, 5));
    CHECK(std::abs(k - 0.5) <= 4.0 * 2.0 * sigma);

    // Same seed, same estimate; different seed is allowed to move.
    CHECK(swap_test_kernel(zero, plus, Backend::sampled(shots, 5)) == k);
}

TEST_CASE("kernel eval failures are reported as such", "[kernels]") {
    Circuit dead(2);
    dead.add_gate(Gate::rx(1, std::numbers::pi));
    dead.post_select_qubit(1, 0);
    dead.set_sentence_qubits({0});
    const Circuit ok = one_qubit_sentence({Gate::h(0)});

    CHECK_THROWS_AS(swap_test_kernel(dead, ok, Backend::exact()), KernelEvalFailed);
    CHECK_THROWS_AS(transition_amplitude_kernel(dead, ok, Backend::exact()), KernelEvalFailed);

    Circuit two_sentences(2);
    two_sentences.set_sentence_qubits({0, 1});
    CHECK_THROWS_AS(swap_test_kernel(two_sentences, ok, Backend::exact()), UnsupportedAnsatz);
    CHECK_THROWS_AS(transition_amplitude_kernel(ok, two_sentences, Backend::exact()),
                    UnsupportedAnsatz);

    const std::vector<Circuit> mixed{ok, dead};
    REQUIRE_THROWS_WITH(gram(mixed, KernelKind::Swap, Backend::exact()),
                        Catch::Matchers::ContainsSubstring("gram entries failed"));
}

TEST_CASE("gram matches individual kernel calls bit for bit", "[kernels]") {
    const auto circuits = bound_sentence_circuits(5, 23, 37);
    const std::vector<Circuit> rows(circuits.begin(), circuits.begin() + 2);
    const std::vector<Circuit> cols(circuits.begin() + 2, circuits.end());

    for (const KernelKind kind : {KernelKind::Swap, KernelKind::Transition}) {
        const Backend exact = Backend::exact();
        const GramMatrix K = gram(rows, cols, kind, exact);
        REQUIRE(K.rows == 2);
        REQUIRE(K.cols == 3);
        for (int i = 0; i < K.rows; ++i) {
            for (int j = 0; j < K.cols; ++j) {
                CHECK(K.at(i, j) == kernel_value(kind, rows[i], cols[j], exact));
            }
        }
        CHECK(K.meta.at("kernel") == kernel_name(kind));
        CHECK(K.meta.at("backend") == "exact");
        CHECK(K.meta.at("seed") == "0");
        CHECK(K.meta.count("shots") == 0);
    }
}

TEST_CASE("same-object gram mirrors sampled entries exactly", "[kernels]") {
    // Post-selection-free circuits so every shot survives at low shot counts.
    const std::vector<Circuit> circuits{
        one_qubit_sentence({}), one_qubit_sentence({Gate::h(0)}),
        one_qubit_sentence({Gate::rx(0, 0.7)}),
        one_qubit_sentence({Gate::rx(0, 2.1), Gate::rz(0, 0.4)})};
    const Backend shots = Backend::sampled(256, 7);
    const GramMatrix K = gram(circuits, KernelKind::Swap, shots);

    REQUIRE(K.rows == 4);
    REQUIRE(K.cols == 4);
    CHECK(K.meta.at("shots") == "256");
    CHECK(K.meta.at("seed") == "7");
    for (int i = 0; i < K.rows; ++i) {
        for (int j = 0; j < K.cols; ++j) {
            CHECK(K.at(i, j) == K.at(j, i));  // bitwise, not approximate
            // Only the upper triangle is computed; the shot stream is keyed
            // by the canonicalized pair.
            const int lo = std::min(i, j), hi = std::max(i, j);
            CHECK(K.at(i, j) == kernel_value(KernelKind::Swap, circuits[lo], circuits[hi], shots,
                                             derive_seed(7, lo, hi)));
        }
    }
}

TEST_CASE("density gram agrees with lone density kernel calls", "[kernels]") {
    std::vector<Circuit> circuits{two_qubit_sentence(0.4, 1.2, 2.0),
                                  two_qubit_sentence(1.9, 0.3, 0.8)};
    const Backend noisy = Backend::density(NoiseModel::guadalupe_like());
    for (const KernelKind kind : {KernelKind::Swap, KernelKind::Transition}) {
        const GramMatrix K = gram(circuits, kind, noisy);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                // Same-object grams mirror the upper triangle, which for the
                // asymmetric transition estimator means K[1][0] reports
                // k(x0, x1), not k(x1, x0).
                const int lo = std::min(i, j), hi = std::max(i, j);
                CHECK(K.at(i, j) == kernel_value(kind, circuits[lo], circuits[hi], noisy));
            }
        }
    }
}

TEST_CASE("region statistics split a gram matrix by label blocks", "[kernels]") {
    GramMatrix K(4, 4);
    const std::vector<int> labels{0, 0, 1, 1};
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const bool i0 = i < 2, j0 = j < 2;
            K.at(i, j) = i0 && j0 ? 1.0 : (!i0 && !j0 ? 0.8 : 0.2);
        }
    }
    K.at(0, 1) = 0.2;
    K.at(1, 0) = 0.4;  // class-0 region becomes {0.2, 0.4}

    const RegionStats st = region_stats(K, labels, labels);  // self: diagonal dropped
    CHECK(st.class00.count == 2);
    CHECK(st.class00.mean == Catch::Approx(0.3).margin(1e-15));
    CHECK(st.class00.stddev == Catch::Approx(0.1).margin(1e-12));
    CHECK(st.class11.count == 2);
    CHECK(st.class11.mean == Catch::Approx(0.8).margin(1e-15));
    CHECK(st.class11.stddev == Catch::Approx(0.0).margin(1e-12));
    CHECK(st.mixed.count == 8);
    CHECK(st.mixed.mean == Catch::Approx(0.2).margin(1e-15));

    // Distinct label vectors keep the diagonal even on a square matrix.
    const RegionStats cross = region_stats(K, labels, {0, 0, 1, 0});
    CHECK(cross.class00.count == 6);

    const RegionStats kept = region_stats(K, labels, labels, false);
    CHECK(kept.class00.count == 4);
    CHECK(kept.class11.count == 4);

    CHECK_THROWS_AS(region_stats(K, {0, 1}, labels), LengthMismatch);
    GramMatrix R(2, 3);
    CHECK_THROWS_AS(region_stats(R, {0, 1}, {0, 1, 1}, true), NotSquare);
    const RegionStats rect = region_stats(R, {0, 1}, {0, 1, 1});
    CHECK(rect.class00.count == 1);
    CHECK(rect.class11.count == 2);
    CHECK(rect.mixed.count == 3);
}

TEST_CASE("gram CSV round-trips values and metadata", "[kernels]") {
    GramMatrix K(2, 3);
    K.meta["kernel"] = "swap";
    K.meta["backend"] = "exact";
    double v = 0.1;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 3; ++j) {
            K.at(i, j) = v;
            v += 0.137;
        }
    }
    K.at(1, 2) = 1.0 / 3.0;  // must round-trip at full precision

    std::stringstream buf;
    save_gram_csv(buf, K, {{"split", "train"}});
    const GramMatrix back = load_gram_csv(buf);
    CHECK(back.rows == 2);
    CHECK(back.cols == 3);
    CHECK(back.data == K.data);
    CHECK(back.meta.at("kernel") == "swap");
    CHECK(back.meta.at("split") == "train");

    std::stringstream ragged("0.5,0.25\n0.125\n");
    REQUIRE_THROWS_WITH(load_gram_csv(ragged), Catch::Matchers::ContainsSubstring("line 2"));
    std::stringstream empty("# kernel=swap\n");
    CHECK_THROWS_AS(load_gram_csv(empty), IoError);
    std::stringstream garbage("0.5,oops\n");
    CHECK_THROWS_AS(load_gram_csv(garbage), IoError);
    CHECK_THROWS_AS(load_gram_csv_file("/nonexistent/gram.csv"), IoError);
}

TEST_CASE("gram PGM uses one clamped byte per entry", "[kernels]") {
    GramMatrix K(1, 4);
    K.at(0, 0) = 0.0;
    K.at(0, 1) = 1.0;
    K.at(0, 2) = 0.5;
    K.at(0, 3) = 1.7;  // clamped to white

    std::stringstream buf;
    save_gram_pgm(buf, K);
    const std::string bytes = buf.str();
    const std::string header = "P5\n4 1\n255\n";
    REQUIRE(bytes.size() == header.size() + 4);
    CHECK(bytes.substr(0, header.size()) == header);
    CHECK(static_cast<unsigned char>(bytes[header.size() + 0]) == 0);
    CHECK(static_cast<unsigned char>(bytes[header.size() + 1]) == 255);
    CHECK(static_cast<unsigned char>(bytes[header.size() + 2]) == 128);
    CHECK(static_cast<unsigned char>(bytes[header.size() + 3]) == 255);
}

TEST_CASE("diagram-level kernels agree with manual compile and bind", "[kernels]") {
    const Lexicon lex = default_lexicon();
    const EmbeddingStore store = init_embeddings(lex, AnsatzConfig{}, 2);
    const Diagram di = parse_sentence({"man", "prepares", "meal"}, lex);
    const Diagram dj = parse_sentence({"woman", "cooks", "dinner"}, lex);
    const Circuit ci = discoq::bind(compile_diagram(di, AnsatzConfig{}), store.params);
    const Circuit cj = discoq::bind(compile_diagram(dj, AnsatzConfig{}), store.params);

    CHECK(swap_test_kernel(di, dj, store, Backend::exact()) ==
          swap_test_kernel(ci, cj, Backend::exact()));
    CHECK(transition_amplitude_kernel(di, dj, store, Backend::exact()) ==
          transition_amplitude_kernel(ci, cj, Backend::exact()));

    const std::vector<Diagram> ds{di, dj};
    const GramMatrix K = gram(ds, ds, KernelKind::Swap, store, Backend::exact());
    CHECK(K.at(0, 1) == swap_test_kernel(ci, cj, Backend::exact()));
    CHECK(K.at(0, 0) == Catch::Approx(1.0).margin(1e-10));
}
