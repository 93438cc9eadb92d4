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

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "discoq/circuit.hpp"
#include "discoq/embeddings.hpp"
#include "discoq/errors.hpp"
#include "discoq/pregroup.hpp"
#include "discoq/rng.hpp"
#include "discoq/simulator.hpp"
#include "discoq/textutil.hpp"

namespace discoq {

enum class KernelKind { Transition, Swap };

inline std::string kernel_name(KernelKind k) {
    return k == KernelKind::Transition ? "transition" : "swap";
}

inline KernelKind kernel_from_name(const std::string& name) {
    if (name == "transition") return KernelKind::Transition;
    if (name == "swap") return KernelKind::Swap;
    throw ConfigError("unknown kernel: " + name);
}

inline std::string backend_label(const Backend& b) {
    switch (b.kind) {
        case Backend::Kind::Exact: return "exact";
        case Backend::Kind::Shots: return "shots";
        case Backend::Kind::Density: return "noisy";
    }
    return "?";
}

namespace detail {

inline int single_sentence_qubit(const Circuit& c) {
    if (c.sentence_qubits().size() != 1) {
        throw UnsupportedAnsatz("kernel circuits need exactly one sentence qubit, got " +
                                std::to_string(c.sentence_qubits().size()));
    }
    return c.sentence_qubits()[0];
}

/// Probability that the first measured qubit reads 0, marginalized over the
/// other surviving qubits.
inline double first_bit_zero_prob(const PostSelectedDistribution& dist) {
    double p0 = 0.0;
    for (const auto& [key, p] : dist.probs) {
        if (!key.empty() && key[0] == '0') p0 += p;
    }
    return p0;
}

}  // namespace detail

/// Composed circuit computing the transition amplitude between two bound
/// sentence circuits: circuit_i runs forward, then adjoint(circuit_j) runs
/// with j's sentence wire identified with i's and all of j's other wires on
/// fresh qubits. Both circuits' post-selected wires are required to read 0 at
/// the end; the shared sentence wire stays measured.
inline Circuit transition_kernel_circuit(const Circuit& ci, const Circuit& cj) {
    const int si = detail::single_sentence_qubit(ci);
    const int sj = detail::single_sentence_qubit(cj);
    std::map<int, int> wire_map;
    wire_map[sj] = si;
    int fresh = ci.n_qubits();
    for (int q = 0; q < cj.n_qubits(); ++q) {
        if (q != sj) wire_map[q] = fresh++;
    }
    Circuit composed = compose(ci, adjoint(cj), wire_map);
    for (const auto& [q, bit] : cj.post_select()) {
        (void)bit;
        composed.post_select_qubit(wire_map.at(q), 0);
    }
    return composed;
}

/// Composed SWAP-test circuit over two bound sentence circuits: both run in
/// parallel, a fresh ancilla is Hadamard-framed around a CSWAP of the two
/// sentence wires, and the union of the post-selections is kept. The ancilla
/// is the composed circuit's sentence qubit.
inline Circuit swap_kernel_circuit(const Circuit& ci, const Circuit& cj) {
    const int si = detail::single_sentence_qubit(ci);
    const int sj = detail::single_sentence_qubit(cj) + ci.n_qubits();
    Circuit composed = parallel(ci, cj);
    const int anc = composed.n_qubits();
    composed.add_qubits(1);
    composed.clear_sentence_qubits();
    composed.add_gate(Gate::h(anc));
    composed.add_gate(Gate::cswap(anc, si, sj));
    composed.add_gate(Gate::h(anc));
    composed.set_sentence_qubits({anc});
    return composed;
}

namespace detail {

/// Unnormalized 2x2 operator left on a circuit's sentence qubit after noisy
/// evolution and contraction of every post-selected qubit through the
/// readout-flip-weighted "reads its required bit" effect. Its trace is the
/// post-selection survival probability.
struct SentenceEffect {
    std::array<std::array<cdouble, 2>, 2> sigma{};
};

inline void evolve_with_noise(DensityMatrix& rho, const std::vector<Gate>& gates,
                              const NoiseModel& nm) {
    for (const Gate& g : gates) {
        rho.apply(g);
        const double p = nm.class_prob(g.arity());
        if (p > 0.0) {
            std::vector<int> qs(g.qubits.begin(), g.qubits.begin() + g.arity());
            rho.apply_depolarizing(qs, p);
        }
    }
}

inline SentenceEffect sentence_effect(const Circuit& c, const NoiseModel& nm) {
    const int n = c.n_qubits();
    const int s = single_sentence_qubit(c);
    if (static_cast<int>(c.post_select().size()) + 1 != n) {
        throw KernelEvalFailed("sentence circuits must post-select every non-sentence qubit");
    }
    DensityMatrix rho(n);
    evolve_with_noise(rho, c.gates(), nm);

    const double f = nm.readout_flip;
    const std::uint64_t ms = qubit_mask(n, s);
    SentenceEffect out;
    for (std::uint64_t r = 0; r < rho.dim(); ++r) {
        double w = 1.0;
        for (const auto& [q, bit] : c.post_select()) {
            const int truth = (r & qubit_mask(n, q)) ? 1 : 0;
            w *= truth == bit ? 1.0 - f : f;
        }
        if (w == 0.0) continue;
        const int a = (r & ms) ? 1 : 0;
        for (int b = 0; b < 2; ++b) {
            const std::uint64_t cIdx = b ? (r | ms) : (r & ~ms);
            out.sigma[a][b] += w * rho.entry(r, cIdx);
        }
    }
    return out;
}

/// Noisy SWAP-test outcome from two sentence effects. Equal to run_density on
/// the full composed circuit (which would exceed the density qubit cap): the
/// two preparation halves and the 3-qubit swap block only share the sentence
/// wires, and post-selected wires are never touched after their last gate, so
/// contracting them early commutes with everything downstream.
inline double swap_kernel_staged(const SentenceEffect& ei, const SentenceEffect& ej,
                                 const NoiseModel& nm) {
    DensityMatrix rho(3);  // qubit 0 = ancilla, 1 = sentence_i, 2 = sentence_j
    for (int ai = 0; ai < 2; ++ai) {
        for (int aj = 0; aj < 2; ++aj) {
            for (int bi = 0; bi < 2; ++bi) {
                for (int bj = 0; bj < 2; ++bj) {
                    rho.entry(static_cast<std::uint64_t>(ai * 2 + aj),
                              static_cast<std::uint64_t>(bi * 2 + bj)) =
                        ei.sigma[ai][bi] * ej.sigma[aj][bj];
                }
            }
        }
    }
    std::vector<Gate> block = {Gate::h(0), Gate::cswap(0, 1, 2), Gate::h(0)};
    evolve_with_noise(rho, block, nm);

    double p0 = 0.0;
    double p1 = 0.0;
    for (std::uint64_t i = 0; i < 8; ++i) {
        const double d = rho.entry(i, i).real();
        (i & 4ULL) ? p1 += d : p0 += d;
    }
    const double f = nm.readout_flip;
    const double r0 = (1.0 - f) * p0 + f * p1;
    const double r1 = f * p0 + (1.0 - f) * p1;
    if (r0 + r1 < kPostSelectEps) {
        throw KernelEvalFailed("post-selection success probability vanished");
    }
    return std::clamp(2.0 * r0 / (r0 + r1) - 1.0, 0.0, 1.0);
}

/// Linear functional describing the right-hand side of the staged
/// transition-amplitude evaluation: coef[t][a][b] is the weight the input
/// sentence operator's (a,b) entry contributes to the probability mass whose
/// true sentence bit is t, after adjoint(c_j) under noise and contraction of
/// j's post-selected wires. Computed once per right circuit by evolving the
/// four basis operators |a><b|.
struct TransitionFunctional {
    std::array<std::array<std::array<cdouble, 2>, 2>, 2> coef{};
};

inline TransitionFunctional transition_functional(const Circuit& cj, const NoiseModel& nm) {
    const int n = cj.n_qubits();
    const int sj = single_sentence_qubit(cj);
    const std::uint64_t ms = qubit_mask(n, sj);
    const Circuit adj = adjoint(cj);
    const double f = nm.readout_flip;

    TransitionFunctional fn;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            DensityMatrix rho(n);
            rho.entry(0, 0) = 0.0;
            rho.entry(a ? ms : 0, b ? ms : 0) = 1.0;
            evolve_with_noise(rho, adj.gates(), nm);
            for (std::uint64_t r = 0; r < rho.dim(); ++r) {
                double w = 1.0;
                for (const auto& [q, bit] : cj.post_select()) {
                    (void)bit;
                    const int truth = (r & qubit_mask(n, q)) ? 1 : 0;
                    w *= truth == 0 ? 1.0 - f : f;
                }
                fn.coef[(r & ms) ? 1 : 0][a][b] += w * rho.entry(r, r);
            }
        }
    }
    return fn;
}

inline double transition_kernel_staged(const SentenceEffect& ei, const TransitionFunctional& fn,
                                       const NoiseModel& nm) {
    cdouble q0 = 0.0;
    cdouble q1 = 0.0;
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            q0 += fn.coef[0][a][b] * ei.sigma[a][b];
            q1 += fn.coef[1][a][b] * ei.sigma[a][b];
        }
    }
    const double f = nm.readout_flip;
    const double r0 = (1.0 - f) * q0.real() + f * q1.real();
    const double r1 = f * q0.real() + (1.0 - f) * q1.real();
    if (r0 + r1 < kPostSelectEps) {
        throw KernelEvalFailed("post-selection success probability vanished");
    }
    return std::clamp(r0 / (r0 + r1), 0.0, 1.0);
}

template <class Fn>
inline double wrap_kernel_errors(Fn&& fn) {
    try {
        return fn();
    } catch (const UnsupportedAnsatz&) {
        throw;
    } catch (const KernelEvalFailed&) {
        throw;
    } catch (const Error& e) {
        throw KernelEvalFailed(e.what());
    }
}

inline std::vector<cdouble> evolved_amplitudes(const Circuit& c) {
    require_bound(c);
    StateVector sv(c.n_qubits());
    for (const Gate& g : c.gates()) sv.apply(g);
    return sv.amplitudes();
}

/// Pre-measurement outcome probabilities of a composed SWAP circuit. The
/// parallel section acts on disjoint registers, so the joint state right
/// before the ancilla block is the tensor product of the separately evolved
/// halves; only the three tail gates run on the full register. This is an
/// exact algebraic identity of the circuit, exploited because the halves are
/// exponentially smaller than the whole.
inline std::vector<double> swap_composed_probabilities(const Circuit& ci, const Circuit& cj,
                                                       const Circuit& composed) {
    const std::vector<cdouble> ai = evolved_amplitudes(ci);
    const std::vector<cdouble> aj = evolved_amplitudes(cj);
    const int n = composed.n_qubits();
    std::vector<cdouble> amps(1ULL << n, cdouble(0.0, 0.0));
    const int nj = cj.n_qubits();
    for (std::size_t x = 0; x < ai.size(); ++x) {
        const std::uint64_t head = static_cast<std::uint64_t>(x) << nj;
        for (std::size_t y = 0; y < aj.size(); ++y) {
            amps[(head | y) << 1] = ai[x] * aj[y];
        }
    }
    StateVector sv(n, std::move(amps));
    const auto& gs = composed.gates();
    for (std::size_t k = gs.size() - 3; k < gs.size(); ++k) sv.apply(gs[k]);
    return sv.probabilities();
}

/// Same factorization for the transition circuit: the forward half evolves on
/// its own register, the fresh wires start in |0>, and only the adjoint-side
/// gates run on the full register.
inline std::vector<double> transition_composed_probabilities(const Circuit& ci,
                                                             const Circuit& composed) {
    const std::vector<cdouble> ai = evolved_amplitudes(ci);
    const int n = composed.n_qubits();
    const int shift = n - ci.n_qubits();
    std::vector<cdouble> amps(1ULL << n, cdouble(0.0, 0.0));
    for (std::size_t x = 0; x < ai.size(); ++x) {
        amps[static_cast<std::uint64_t>(x) << shift] = ai[x];
    }
    StateVector sv(n, std::move(amps));
    const auto& gs = composed.gates();
    for (std::size_t k = ci.gates().size(); k < gs.size(); ++k) sv.apply(gs[k]);
    return sv.probabilities();
}

/// Conditions or samples the composed circuit's distribution. Shots backends
/// with gate noise cannot use precomputed probabilities (each shot is its own
/// trajectory), so callers route those through run_backend instead.
inline PostSelectedDistribution composed_distribution(const Circuit& composed,
                                                      const std::vector<double>& probs,
                                                      const Backend& backend,
                                                      std::uint64_t stream_seed) {
    if (backend.kind == Backend::Kind::Exact) {
        return condition_distribution(probs, composed);
    }
    return distribution_from_counts(
        sample_counts(composed, probs, backend.shots, stream_seed, backend.noise));
}

}  // namespace detail

/// Transition-amplitude similarity: Pr[shared sentence qubit = 0 | all
/// post-selections] of the composed forward/adjoint circuit. Not required to
/// be 1 on the diagonal: conditioning keeps reverse-pass branches that start
/// from non-zero sentence inputs, so even identical arguments can score below
/// 1. This asymmetry is inherent to the estimator and is reported as-is.
inline double transition_amplitude_kernel(const Circuit& ci, const Circuit& cj,
                                          const Backend& backend, std::uint64_t stream_seed = 0) {
    return detail::wrap_kernel_errors([&] {
        if (backend.kind == Backend::Kind::Density) {
            return detail::transition_kernel_staged(
                detail::sentence_effect(ci, backend.noise),
                detail::transition_functional(cj, backend.noise), backend.noise);
        }
        const Circuit composed = transition_kernel_circuit(ci, cj);
        if (backend.kind == Backend::Kind::Shots && backend.noise.gate_noise()) {
            return detail::first_bit_zero_prob(run_backend(composed, backend, stream_seed));
        }
        return detail::first_bit_zero_prob(detail::composed_distribution(
            composed, detail::transition_composed_probabilities(ci, composed), backend,
            stream_seed));
    });
}

/// SWAP-test similarity: clamp(2 * Pr[ancilla = 0 | post-selections] - 1, 0, 1).
inline double swap_test_kernel(const Circuit& ci, const Circuit& cj, const Backend& backend,
                               std::uint64_t stream_seed = 0) {
    return detail::wrap_kernel_errors([&] {
        if (backend.kind == Backend::Kind::Density) {
            return detail::swap_kernel_staged(detail::sentence_effect(ci, backend.noise),
                                              detail::sentence_effect(cj, backend.noise),
                                              backend.noise);
        }
        const Circuit composed = swap_kernel_circuit(ci, cj);
        double p0 = 0.0;
        if (backend.kind == Backend::Kind::Shots && backend.noise.gate_noise()) {
            p0 = detail::first_bit_zero_prob(run_backend(composed, backend, stream_seed));
        } else {
            p0 = detail::first_bit_zero_prob(detail::composed_distribution(
                composed, detail::swap_composed_probabilities(ci, cj, composed), backend,
                stream_seed));
        }
        return std::clamp(2.0 * p0 - 1.0, 0.0, 1.0);
    });
}

inline double kernel_value(KernelKind kind, const Circuit& ci, const Circuit& cj,
                           const Backend& backend, std::uint64_t stream_seed = 0) {
    return kind == KernelKind::Transition
               ? transition_amplitude_kernel(ci, cj, backend, stream_seed)
               : swap_test_kernel(ci, cj, backend, stream_seed);
}

/// Diagram-level entry points: compile under the ansatz, bind from the store.
inline double transition_amplitude_kernel(const Diagram& xi, const Diagram& xj,
                                          const EmbeddingStore& store, const Backend& backend,
                                          const AnsatzConfig& ansatz = {},
                                          std::uint64_t stream_seed = 0) {
    return transition_amplitude_kernel(discoq::bind(compile_diagram(xi, ansatz), store.params),
                                       discoq::bind(compile_diagram(xj, ansatz), store.params), backend,
                                       stream_seed);
}

inline double swap_test_kernel(const Diagram& xi, const Diagram& xj, const EmbeddingStore& store,
                               const Backend& backend, const AnsatzConfig& ansatz = {},
                               std::uint64_t stream_seed = 0) {
    return swap_test_kernel(discoq::bind(compile_diagram(xi, ansatz), store.params),
                            discoq::bind(compile_diagram(xj, ansatz), store.params), backend, stream_seed);
}

struct GramMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;
    std::map<std::string, std::string> meta;

    GramMatrix() = default;
    GramMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }

    friend bool operator==(const GramMatrix&, const GramMatrix&) = default;
};

/// Gram matrix K[i][j] = kernel(a[i], b[j]) over bound sentence circuits.
/// Passing the same vector object for `a` and `b` computes only the upper
/// triangle and mirrors it. Per-entry shot streams are derived from
/// (backend seed, i, j) with (i, j) ordered, so mirrored entries are
/// bit-identical by construction. Entry failures are collected and fail the
/// whole matrix.
inline GramMatrix gram(const std::vector<Circuit>& a, const std::vector<Circuit>& b,
                       KernelKind kind, const Backend& backend) {
    const bool same = &a == &b;
    GramMatrix K(static_cast<int>(a.size()), static_cast<int>(b.size()));
    K.meta["kernel"] = kernel_name(kind);
    K.meta["backend"] = backend_label(backend);
    K.meta["seed"] = std::to_string(backend.seed);
    if (backend.kind == Backend::Kind::Shots) K.meta["shots"] = std::to_string(backend.shots);

    // The density path factors through per-circuit objects; hoist them so the
    // per-pair work is a contraction. The hoisted objects are exactly the ones
    // a lone kernel call computes, keeping gram and single calls bit-identical.
    const bool staged = backend.kind == Backend::Kind::Density;
    std::vector<detail::SentenceEffect> row_effects;
    std::vector<detail::SentenceEffect> col_effects_storage;
    std::vector<detail::TransitionFunctional> col_functionals;
    if (staged) {
        auto effect_of = [&](const std::vector<Circuit>& cs, std::size_t idx, const char* side) {
            try {
                return detail::sentence_effect(cs[idx], backend.noise);
            } catch (const UnsupportedAnsatz&) {
                throw;
            } catch (const Error& e) {
                throw KernelEvalFailed("gram " + std::string(side) + " circuit " +
                                       std::to_string(idx) + ": " + e.what());
            }
        };
        row_effects.reserve(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) row_effects.push_back(effect_of(a, i, "row"));
        if (kind == KernelKind::Swap && !same) {
            col_effects_storage.reserve(b.size());
            for (std::size_t j = 0; j < b.size(); ++j) {
                col_effects_storage.push_back(effect_of(b, j, "column"));
            }
        }
        if (kind == KernelKind::Transition) {
            col_functionals.reserve(b.size());
            for (std::size_t j = 0; j < b.size(); ++j) {
                try {
                    col_functionals.push_back(detail::transition_functional(b[j], backend.noise));
                } catch (const UnsupportedAnsatz&) {
                    throw;
                } catch (const Error& e) {
                    throw KernelEvalFailed("gram column circuit " + std::to_string(j) + ": " +
                                           e.what());
                }
            }
        }
    }
    const std::vector<detail::SentenceEffect>& col_effects =
        (staged && kind == KernelKind::Swap && same) ? row_effects : col_effects_storage;

    std::vector<std::string> failures;
    for (int i = 0; i < K.rows; ++i) {
        for (int j = same ? i : 0; j < K.cols; ++j) {
            const auto lo = static_cast<std::uint64_t>(std::min(i, j));
            const auto hi = static_cast<std::uint64_t>(std::max(i, j));
            const std::uint64_t stream = derive_seed(backend.seed, lo, hi);
            try {
                double v = 0.0;
                if (staged) {
                    v = kind == KernelKind::Swap
                            ? detail::swap_kernel_staged(row_effects[i], col_effects[j],
                                                         backend.noise)
                            : detail::transition_kernel_staged(row_effects[i], col_functionals[j],
                                                               backend.noise);
                } else {
                    v = kernel_value(kind, a[i], b[j], backend, stream);
                }
                K.at(i, j) = v;
                if (same && i != j) K.at(j, i) = v;
            } catch (const UnsupportedAnsatz&) {
                throw;
            } catch (const Error& e) {
                if (failures.size() < 8) {
                    failures.push_back("(" + std::to_string(i) + ", " + std::to_string(j) + "): " +
                                       e.what());
                } else if (failures.size() == 8) {
                    failures.push_back("...");
                }
            }
        }
    }
    if (!failures.empty()) {
        throw KernelEvalFailed("gram entries failed: " + join(failures, "; "));
    }
    return K;
}

inline GramMatrix gram(const std::vector<Circuit>& a, KernelKind kind, const Backend& backend) {
    return gram(a, a, kind, backend);
}

/// Diagram-level Gram over a labeled dataset's sentences.
inline GramMatrix gram(const std::vector<Diagram>& a, const std::vector<Diagram>& b,
                       KernelKind kind, const EmbeddingStore& store, const Backend& backend,
                       const AnsatzConfig& ansatz = {}) {
    auto compile_all = [&](const std::vector<Diagram>& ds) {
        std::vector<Circuit> cs;
        cs.reserve(ds.size());
        for (const auto& d : ds) cs.push_back(discoq::bind(compile_diagram(d, ansatz), store.params));
        return cs;
    };
    const std::vector<Circuit> ca = compile_all(a);
    if (&a == &b) return gram(ca, ca, kind, backend);
    const std::vector<Circuit> cb = compile_all(b);
    return gram(ca, cb, kind, backend);
}

struct RegionEntry {
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation
    std::size_t count = 0;
};

/// Kernel-value statistics over the label regions of a Gram matrix:
/// class-0 x class-0 pairs, class-1 x class-1 pairs, and mixed pairs.
struct RegionStats {
    RegionEntry class00;
    RegionEntry class11;
    RegionEntry mixed;
};

inline RegionStats region_stats(const GramMatrix& K, const std::vector<int>& row_labels,
                                const std::vector<int>& col_labels, bool exclude_diagonal) {
    if (static_cast<int>(row_labels.size()) != K.rows ||
        static_cast<int>(col_labels.size()) != K.cols) {
        throw LengthMismatch("label vectors must match the Gram matrix shape");
    }
    if (exclude_diagonal && K.rows != K.cols) {
        throw NotSquare("diagonal exclusion requires a square Gram matrix");
    }
    struct Acc {
        double sum = 0.0, sumsq = 0.0;
        std::size_t n = 0;
        void add(double v) {
            sum += v;
            sumsq += v * v;
            ++n;
        }
        RegionEntry entry() const {
            RegionEntry e;
            e.count = n;
            if (n == 0) return e;
            e.mean = sum / static_cast<double>(n);
            e.stddev = std::sqrt(std::max(0.0, sumsq / static_cast<double>(n) - e.mean * e.mean));
            return e;
        }
    } acc00, acc11, mixed;
    for (int i = 0; i < K.rows; ++i) {
        for (int j = 0; j < K.cols; ++j) {
            if (exclude_diagonal && i == j) continue;
            const double v = K.at(i, j);
            if (row_labels[i] == 0 && col_labels[j] == 0) {
                acc00.add(v);
            } else if (row_labels[i] == 1 && col_labels[j] == 1) {
                acc11.add(v);
            } else {
                mixed.add(v);
            }
        }
    }
    return {acc00.entry(), acc11.entry(), mixed.entry()};
}

/// Self-similarity entries bias the regions, so the diagonal is dropped
/// whenever the two label vectors describe the same dataset.
inline RegionStats region_stats(const GramMatrix& K, const std::vector<int>& row_labels,
                                const std::vector<int>& col_labels) {
    const bool self = K.rows == K.cols && row_labels == col_labels;
    return region_stats(K, row_labels, col_labels, self);
}

/// Gram CSV: `# key=value` metadata comment lines (sorted by key), then one
/// comma-separated row per matrix row.
inline void save_gram_csv(std::ostream& out, const GramMatrix& K,
                          const std::map<std::string, std::string>& extra_meta = {}) {
    std::map<std::string, std::string> meta = K.meta;
    for (const auto& [key, value] : extra_meta) meta[key] = value;
    for (const auto& [key, value] : meta) out << "# " << key << "=" << value << '\n';
    for (int i = 0; i < K.rows; ++i) {
        for (int j = 0; j < K.cols; ++j) {
            if (j) out << ',';
            out << format_double(K.at(i, j));
        }
        out << '\n';
    }
}

inline void save_gram_csv_file(const std::string& path, const GramMatrix& K,
                               const std::map<std::string, std::string>& extra_meta = {}) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write Gram file: " + path);
    save_gram_csv(out, K, extra_meta);
}

inline GramMatrix load_gram_csv(std::istream& in) {
    GramMatrix out;
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = trim(line.substr(1));
            const auto eq = body.find('=');
            if (eq != std::string::npos) {
                out.meta[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
            }
            continue;
        }
        std::vector<double> row;
        for (const auto& cell : split(line, ',')) {
            row.push_back(parse_double(trim(cell), "Gram cell at line " + std::to_string(lineno)));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw IoError("Gram line " + std::to_string(lineno) + " has " +
                          std::to_string(row.size()) + " columns, expected " +
                          std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("Gram file contains no matrix rows");
    out.rows = static_cast<int>(rows.size());
    out.cols = static_cast<int>(rows.front().size());
    out.data.assign(static_cast<std::size_t>(out.rows) * out.cols, 0.0);
    for (int i = 0; i < out.rows; ++i) {
        for (int j = 0; j < out.cols; ++j) {
            out.at(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return out;
}

inline GramMatrix load_gram_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open Gram file: " + path);
    try {
        return load_gram_csv(in);
    } catch (const IoError& e) {
        throw IoError(path + ": " + e.what());
    }
}

/// 8-bit binary PGM heatmap; pixel = round(255 * K_ij) clamped to [0, 255].
inline void save_gram_pgm(std::ostream& out, const GramMatrix& K) {
    out << "P5\n" << K.cols << ' ' << K.rows << "\n255\n";
    for (int i = 0; i < K.rows; ++i) {
        for (int j = 0; j < K.cols; ++j) {
            const double v = std::clamp(K.at(i, j), 0.0, 1.0);
            out.put(static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v))));
        }
    }
}

inline void save_gram_pgm_file(const std::string& path, const GramMatrix& K) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write PGM file: " + path);
    save_gram_pgm(out, K);
}

}  // namespace discoq
