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
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "discoq/circuit.hpp"
#include "discoq/errors.hpp"
#include "discoq/rng.hpp"

namespace discoq {

using cdouble = std::complex<double>;

/// Memory guards. Statevectors stay cheap well past the sizes the task needs
/// (a SWAP-test circuit over two 4-word sentences is 19 qubits); density
/// matrices are quadratically bigger and capped harder.
inline constexpr int kStateVectorMaxQubits = 20;
inline constexpr int kDensityMaxQubits = 10;

/// Post-selection is considered impossible below this surviving probability.
inline constexpr double kPostSelectEps = 1e-12;

/// Parametric per-gate-class depolarizing noise plus readout bit flips.
///
/// After every gate, with the class probability (p1/p2/p3 by gate arity) a
/// uniformly random non-identity Pauli is applied to each qubit the gate
/// touched. At readout every measured bit flips independently with
/// probability `readout_flip`; post-selection then sees the flipped bits.
struct NoiseModel {
    double p1 = 0.0;
    double p2 = 0.0;
    double p3 = 0.0;
    double readout_flip = 0.0;

    bool gate_noise() const { return p1 > 0.0 || p2 > 0.0 || p3 > 0.0; }
    bool any() const { return gate_noise() || readout_flip > 0.0; }

    double class_prob(int arity) const {
        return arity == 1 ? p1 : arity == 2 ? p2 : p3;
    }

    static NoiseModel none() { return {}; }

    /// Default profile, loosely shaped after a 2021-era 16-qubit device:
    /// 0.1% single-qubit, 1% two-qubit, 3% three-qubit, 2% readout.
    static NoiseModel guadalupe_like() { return {0.001, 0.01, 0.03, 0.02}; }

    friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

/// Outcome distribution over the non-post-selected qubits, conditioned on all
/// post-selections succeeding. Keys are bitstrings ordered sentence qubits
/// first (in their stored order), then the remaining qubits ascending; qubit
/// values render 0/1 with the first character belonging to the first qubit in
/// that order.
struct PostSelectedDistribution {
    double success_prob = 0.0;
    std::map<std::string, double> probs;
};

struct ShotCounts {
    int shots_requested = 0;
    int shots_kept = 0;
    std::map<std::string, std::uint64_t> counts;
};

namespace detail {

/// Qubit q occupies bit (n-1-q) of an amplitude index, so bitstrings read
/// left to right as qubit 0, 1, ...
inline std::uint64_t qubit_mask(int n_qubits, int q) {
    return 1ULL << (n_qubits - 1 - q);
}

/// Applies a single-qubit unitary [[u00,u01],[u10,u11]] over index stride
/// pairs. `at(i)` must yield a mutable amplitude reference.
template <class At>
inline void apply_1q(At&& at, std::uint64_t dim, std::uint64_t m, cdouble u00, cdouble u01,
                     cdouble u10, cdouble u11) {
    const std::uint64_t block = m << 1;
    for (std::uint64_t hi = 0; hi < dim; hi += block) {
        for (std::uint64_t lo = 0; lo < m; ++lo) {
            const std::uint64_t i0 = hi | lo;
            const std::uint64_t i1 = i0 | m;
            const cdouble a0 = at(i0);
            const cdouble a1 = at(i1);
            at(i0) = u00 * a0 + u01 * a1;
            at(i1) = u10 * a0 + u11 * a1;
        }
    }
}

/// Core gate application shared by the statevector and both density-matrix
/// sides. `conj` applies the entrywise conjugate of the gate, which for this
/// gate set is the same gate with a negated angle.
template <class At>
inline void apply_gate_core(At&& at, std::uint64_t dim, int n_qubits, const Gate& g, bool conj) {
    double theta = 0.0;
    if (gate_has_angle(g.kind)) {
        const double* v = std::get_if<double>(&g.angle);
        if (v == nullptr) throw UnboundCircuit("cannot simulate a symbolic gate");
        theta = conj ? -*v : *v;
    }
    switch (g.kind) {
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            apply_1q(at, dim, qubit_mask(n_qubits, g.qubits[0]), r, r, r, -r);
            return;
        }
        case GateKind::RX: {
            const cdouble c(std::cos(theta / 2), 0.0);
            const cdouble s(0.0, -std::sin(theta / 2));
            apply_1q(at, dim, qubit_mask(n_qubits, g.qubits[0]), c, s, s, c);
            return;
        }
        case GateKind::RZ: {
            const cdouble e0 = std::polar(1.0, -theta / 2);
            const cdouble e1 = std::polar(1.0, theta / 2);
            const std::uint64_t m = qubit_mask(n_qubits, g.qubits[0]);
            const std::uint64_t block = m << 1;
            for (std::uint64_t hi = 0; hi < dim; hi += block) {
                for (std::uint64_t lo = 0; lo < m; ++lo) {
                    const std::uint64_t i0 = hi | lo;
                    at(i0) *= e0;
                    at(i0 | m) *= e1;
                }
            }
            return;
        }
        case GateKind::CRZ: {
            const cdouble e0 = std::polar(1.0, -theta / 2);
            const cdouble e1 = std::polar(1.0, theta / 2);
            const std::uint64_t mc = qubit_mask(n_qubits, g.qubits[0]);
            const std::uint64_t mt = qubit_mask(n_qubits, g.qubits[1]);
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (i & mc) at(i) *= (i & mt) ? e1 : e0;
            }
            return;
        }
        case GateKind::CX: {
            const std::uint64_t mc = qubit_mask(n_qubits, g.qubits[0]);
            const std::uint64_t mt = qubit_mask(n_qubits, g.qubits[1]);
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & mc) && !(i & mt)) std::swap(at(i), at(i | mt));
            }
            return;
        }
        case GateKind::CSWAP: {
            const std::uint64_t mc = qubit_mask(n_qubits, g.qubits[0]);
            const std::uint64_t m1 = qubit_mask(n_qubits, g.qubits[1]);
            const std::uint64_t m2 = qubit_mask(n_qubits, g.qubits[2]);
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & mc) && (i & m1) && !(i & m2)) std::swap(at(i), at(i ^ m1 ^ m2));
            }
            return;
        }
    }
    throw Error("unreachable gate kind");
}

}  // namespace detail

/// Dense complex statevector. Qubit 0 is the most significant bit of the
/// amplitude index; bitstrings render qubit 0 leftmost.
class StateVector {
  public:
    explicit StateVector(int n_qubits) : n_(n_qubits) {
        if (n_qubits < 0 || n_qubits > kStateVectorMaxQubits) {
            throw TooManyQubits("statevector supports at most " +
                                std::to_string(kStateVectorMaxQubits) + " qubits, got " +
                                std::to_string(n_qubits));
        }
        amps_.assign(1ULL << n_qubits, cdouble(0.0, 0.0));
        amps_[0] = 1.0;
    }

    /// Adopts a prepared amplitude vector (e.g. a tensor product of
    /// separately evolved registers).
    StateVector(int n_qubits, std::vector<cdouble> amps) : n_(n_qubits), amps_(std::move(amps)) {
        if (n_qubits < 0 || n_qubits > kStateVectorMaxQubits) {
            throw TooManyQubits("statevector supports at most " +
                                std::to_string(kStateVectorMaxQubits) + " qubits, got " +
                                std::to_string(n_qubits));
        }
        if (amps_.size() != (1ULL << n_qubits)) {
            throw Error("amplitude vector size must be 2^n_qubits");
        }
    }

    int n_qubits() const { return n_; }
    std::uint64_t dim() const { return amps_.size(); }
    const std::vector<cdouble>& amplitudes() const { return amps_; }

    void apply(const Gate& g) {
        detail::apply_gate_core([this](std::uint64_t i) -> cdouble& { return amps_[i]; },
                                amps_.size(), n_, g, false);
    }

    /// Applies a Pauli (0 = X, 1 = Y, 2 = Z) to one qubit.
    void apply_pauli(int q, int pauli) {
        const std::uint64_t m = detail::qubit_mask(n_, q);
        switch (pauli) {
            case 0:
                detail::apply_1q([this](std::uint64_t i) -> cdouble& { return amps_[i]; },
                                 amps_.size(), m, 0.0, 1.0, 1.0, 0.0);
                return;
            case 1:
                detail::apply_1q([this](std::uint64_t i) -> cdouble& { return amps_[i]; },
                                 amps_.size(), m, 0.0, cdouble(0.0, -1.0), cdouble(0.0, 1.0), 0.0);
                return;
            case 2:
                for (std::uint64_t i = 0; i < amps_.size(); ++i) {
                    if (i & m) amps_[i] = -amps_[i];
                }
                return;
            default:
                throw Error("pauli index must be 0, 1 or 2");
        }
    }

    std::vector<double> probabilities() const {
        std::vector<double> p(amps_.size());
        for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
        return p;
    }

    double norm() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

  private:
    int n_;
    std::vector<cdouble> amps_;
};

/// Dense density matrix (row-major). Same qubit/bit convention as
/// StateVector. Hard-capped at kDensityMaxQubits.
class DensityMatrix {
  public:
    explicit DensityMatrix(int n_qubits) : n_(n_qubits) {
        if (n_qubits < 0 || n_qubits > kDensityMaxQubits) {
            throw TooManyQubits("density matrix supports at most " +
                                std::to_string(kDensityMaxQubits) + " qubits, got " +
                                std::to_string(n_qubits));
        }
        dim_ = 1ULL << n_qubits;
        rho_.assign(dim_ * dim_, cdouble(0.0, 0.0));
        rho_[0] = 1.0;
    }

    int n_qubits() const { return n_; }
    std::uint64_t dim() const { return dim_; }
    cdouble entry(std::uint64_t r, std::uint64_t c) const { return rho_[r * dim_ + c]; }
    cdouble& entry(std::uint64_t r, std::uint64_t c) { return rho_[r * dim_ + c]; }

    /// rho -> U rho U^dagger.
    void apply(const Gate& g) {
        for (std::uint64_t c = 0; c < dim_; ++c) {
            detail::apply_gate_core(
                [this, c](std::uint64_t r) -> cdouble& { return rho_[r * dim_ + c]; }, dim_, n_, g,
                false);
        }
        for (std::uint64_t r = 0; r < dim_; ++r) {
            detail::apply_gate_core(
                [this, r](std::uint64_t c) -> cdouble& { return rho_[r * dim_ + c]; }, dim_, n_, g,
                true);
        }
    }

    /// In-place conjugation by a Pauli on one qubit.
    void conjugate_pauli(int q, int pauli) {
        const std::uint64_t m = detail::qubit_mask(n_, q);
        if (pauli == 2 || pauli == 1) {  // Z part (Y = X then Z up to a global phase)
            for (std::uint64_t r = 0; r < dim_; ++r) {
                for (std::uint64_t c = 0; c < dim_; ++c) {
                    if (((r ^ c) & m) != 0) rho_[r * dim_ + c] = -rho_[r * dim_ + c];
                }
            }
        }
        if (pauli == 0 || pauli == 1) {  // X part
            for (std::uint64_t r = 0; r < dim_; ++r) {
                if (r & m) continue;
                for (std::uint64_t c = 0; c < dim_; ++c) {
                    std::swap(rho_[r * dim_ + c], rho_[(r | m) * dim_ + (c ^ m)]);
                }
            }
        }
    }

    /// Depolarizing event on a qubit set: with weight p the state is replaced
    /// by the uniform mixture over independent non-identity Paulis on each of
    /// the given qubits.
    void apply_depolarizing(const std::vector<int>& qubits, double p) {
        if (p <= 0.0 || qubits.empty()) return;
        const int k = static_cast<int>(qubits.size());
        int combos = 1;
        for (int i = 0; i < k; ++i) combos *= 3;
        std::vector<cdouble> acc(rho_.size());
        for (std::size_t i = 0; i < rho_.size(); ++i) acc[i] = (1.0 - p) * rho_[i];
        const double w = p / combos;
        const std::vector<cdouble> base = rho_;
        for (int combo = 0; combo < combos; ++combo) {
            rho_ = base;
            int rest = combo;
            for (int i = 0; i < k; ++i) {
                conjugate_pauli(qubits[i], rest % 3);
                rest /= 3;
            }
            for (std::size_t i = 0; i < rho_.size(); ++i) acc[i] += w * rho_[i];
        }
        rho_ = std::move(acc);
    }

    std::vector<double> probabilities() const {
        std::vector<double> p(dim_);
        for (std::uint64_t i = 0; i < dim_; ++i) p[i] = std::max(0.0, rho_[i * dim_ + i].real());
        return p;
    }

    double trace() const {
        double t = 0.0;
        for (std::uint64_t i = 0; i < dim_; ++i) t += rho_[i * dim_ + i].real();
        return t;
    }

  private:
    int n_;
    std::uint64_t dim_;
    std::vector<cdouble> rho_;
};

namespace detail {

inline void require_bound(const Circuit& c) {
    if (!c.is_bound()) {
        std::string syms;
        for (const auto& s : c.free_symbols()) syms += (syms.empty() ? "" : ", ") + s;
        throw UnboundCircuit("circuit has unbound symbols: " + syms);
    }
}

/// Measurement order for distribution keys: sentence qubits first (in stored
/// order), then every other non-post-selected qubit ascending.
inline std::vector<int> measured_order(const Circuit& c) {
    std::vector<int> order = c.sentence_qubits();
    for (int q = 0; q < c.n_qubits(); ++q) {
        if (c.post_select().count(q)) continue;
        if (std::count(order.begin(), order.end(), q)) continue;
        order.push_back(q);
    }
    return order;
}

inline std::string outcome_key(std::uint64_t idx, int n_qubits, const std::vector<int>& order) {
    std::string key(order.size(), '0');
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (idx & qubit_mask(n_qubits, order[k])) key[k] = '1';
    }
    return key;
}

/// Applies the per-qubit readout confusion channel to a joint distribution.
inline void apply_readout_confusion(std::vector<double>& p, int n_qubits, double f) {
    if (f <= 0.0) return;
    const std::uint64_t dim = p.size();
    for (int q = 0; q < n_qubits; ++q) {
        const std::uint64_t m = qubit_mask(n_qubits, q);
        const std::uint64_t block = m << 1;
        for (std::uint64_t hi = 0; hi < dim; hi += block) {
            for (std::uint64_t lo = 0; lo < m; ++lo) {
                const std::uint64_t i0 = hi | lo;
                const std::uint64_t i1 = i0 | m;
                const double p0 = p[i0];
                const double p1 = p[i1];
                p[i0] = (1.0 - f) * p0 + f * p1;
                p[i1] = f * p0 + (1.0 - f) * p1;
            }
        }
    }
}

/// Conditions a joint distribution on the circuit's post-selections and
/// renormalizes over the remaining qubits.
inline PostSelectedDistribution condition_distribution(const std::vector<double>& joint,
                                                       const Circuit& c) {
    const int n = c.n_qubits();
    std::uint64_t post_mask = 0;
    std::uint64_t post_want = 0;
    for (const auto& [q, bit] : c.post_select()) {
        const std::uint64_t m = qubit_mask(n, q);
        post_mask |= m;
        if (bit) post_want |= m;
    }
    const std::vector<int> order = measured_order(c);
    std::vector<double> acc(1ULL << order.size(), 0.0);
    double success = 0.0;
    for (std::uint64_t idx = 0; idx < joint.size(); ++idx) {
        if ((idx & post_mask) != post_want) continue;
        const double p = joint[idx];
        if (p == 0.0) continue;
        success += p;
        std::uint64_t r = 0;
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (idx & qubit_mask(n, order[k])) r |= 1ULL << (order.size() - 1 - k);
        }
        acc[r] += p;
    }
    if (success < kPostSelectEps) {
        throw PostSelectImpossible("post-selection success probability is " +
                                   std::to_string(success));
    }
    PostSelectedDistribution out;
    out.success_prob = success;
    for (std::uint64_t r = 0; r < acc.size(); ++r) {
        if (acc[r] <= 0.0) continue;
        std::string key(order.size(), '0');
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (r & (1ULL << (order.size() - 1 - k))) key[k] = '1';
        }
        out.probs[key] = acc[r] / success;
    }
    return out;
}

/// Samples shots from a fixed outcome distribution, applying per-bit readout
/// flips and discarding shots that miss the post-selection. This is the
/// gate-noise-free sampling path; the RNG stream is consumed in shot order
/// (one outcome draw, then one flip draw per qubit when flips are enabled).
inline ShotCounts sample_counts(const Circuit& c, const std::vector<double>& probs, int shots,
                                std::uint64_t seed, const NoiseModel& nm) {
    const int n = c.n_qubits();
    std::mt19937_64 rng(seed);
    std::vector<double> cdf(probs.size());
    double run = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        run += probs[i];
        cdf[i] = run;
    }

    ShotCounts out;
    out.shots_requested = shots;
    const std::vector<int> order = measured_order(c);
    for (int shot = 0; shot < shots; ++shot) {
        const double u = uniform01(rng) * cdf.back();
        std::uint64_t idx =
            static_cast<std::uint64_t>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (nm.readout_flip > 0.0) {
            for (int q = 0; q < n; ++q) {
                if (uniform01(rng) < nm.readout_flip) idx ^= qubit_mask(n, q);
            }
        }
        bool keep = true;
        for (const auto& [q, bit] : c.post_select()) {
            const int got = (idx & qubit_mask(n, q)) ? 1 : 0;
            if (got != bit) {
                keep = false;
                break;
            }
        }
        if (!keep) continue;
        ++out.shots_kept;
        ++out.counts[outcome_key(idx, n, order)];
    }
    return out;
}

}  // namespace detail

/// Converts kept shot counts into a renormalized distribution; zero surviving
/// shots is the sampling analogue of an impossible post-selection.
inline PostSelectedDistribution distribution_from_counts(const ShotCounts& counts) {
    if (counts.shots_kept == 0) {
        throw PostSelectImpossible("no shots survived post-selection");
    }
    PostSelectedDistribution out;
    out.success_prob =
        static_cast<double>(counts.shots_kept) / static_cast<double>(counts.shots_requested);
    for (const auto& [key, hits] : counts.counts) {
        out.probs[key] = static_cast<double>(hits) / static_cast<double>(counts.shots_kept);
    }
    return out;
}

/// Noiseless statevector simulation of a bound circuit, post-selected and
/// renormalized.
inline PostSelectedDistribution run_exact(const Circuit& c) {
    detail::require_bound(c);
    StateVector sv(c.n_qubits());
    for (const Gate& g : c.gates()) sv.apply(g);
    return detail::condition_distribution(sv.probabilities(), c);
}

/// Sampled execution. Without gate noise the exact output distribution is
/// sampled per shot; with gate noise every shot runs its own stochastic Pauli
/// trajectory. Readout flips are applied to each shot's measured bits before
/// post-selection discards non-matching shots. A NoiseModel of all zeros and
/// an absent NoiseModel draw identical randomness and produce identical
/// counts for the same seed.
inline ShotCounts run_shots(const Circuit& c, int shots, std::uint64_t seed,
                            const std::optional<NoiseModel>& noise = std::nullopt) {
    detail::require_bound(c);
    if (shots <= 0) throw Error("shots must be positive");
    const NoiseModel nm = noise.value_or(NoiseModel::none());
    const int n = c.n_qubits();

    if (!nm.gate_noise()) {
        StateVector sv(n);
        for (const Gate& g : c.gates()) sv.apply(g);
        return detail::sample_counts(c, sv.probabilities(), shots, seed, nm);
    }

    std::mt19937_64 rng(seed);
    std::vector<double> base_cdf;
    auto build_cdf = [](const std::vector<double>& probs) {
        std::vector<double> cdf(probs.size());
        double run = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            run += probs[i];
            cdf[i] = run;
        }
        return cdf;
    };
    auto sample_cdf = [&rng](const std::vector<double>& cdf) -> std::uint64_t {
        const double u = uniform01(rng) * cdf.back();
        return static_cast<std::uint64_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    };

    ShotCounts out;
    out.shots_requested = shots;
    const std::vector<int> order = detail::measured_order(c);
    for (int shot = 0; shot < shots; ++shot) {
        std::uint64_t idx = 0;
        {
            StateVector sv(n);
            bool fired = false;
            for (const Gate& g : c.gates()) {
                sv.apply(g);
                const double p = nm.class_prob(g.arity());
                if (p > 0.0 && uniform01(rng) < p) {
                    fired = true;
                    for (int i = 0; i < g.arity(); ++i) {
                        sv.apply_pauli(g.qubits[i], static_cast<int>(uniform_index(rng, 3)));
                    }
                }
            }
            if (!fired) {
                if (base_cdf.empty()) base_cdf = build_cdf(sv.probabilities());
                idx = sample_cdf(base_cdf);
            } else {
                idx = sample_cdf(build_cdf(sv.probabilities()));
            }
        }
        if (nm.readout_flip > 0.0) {
            for (int q = 0; q < n; ++q) {
                if (uniform01(rng) < nm.readout_flip) idx ^= detail::qubit_mask(n, q);
            }
        }
        bool keep = true;
        for (const auto& [q, bit] : c.post_select()) {
            const int got = (idx & detail::qubit_mask(n, q)) ? 1 : 0;
            if (got != bit) {
                keep = false;
                break;
            }
        }
        if (!keep) continue;
        ++out.shots_kept;
        ++out.counts[detail::outcome_key(idx, n, order)];
    }
    return out;
}

/// Exact noisy simulation: density-matrix evolution with a depolarizing
/// channel after every gate, readout confusion on the final distribution,
/// then post-selection exactly as in run_exact.
inline PostSelectedDistribution run_density(const Circuit& c,
                                            const std::optional<NoiseModel>& noise = std::nullopt) {
    detail::require_bound(c);
    const NoiseModel nm = noise.value_or(NoiseModel::none());
    DensityMatrix rho(c.n_qubits());
    for (const Gate& g : c.gates()) {
        rho.apply(g);
        const double p = nm.class_prob(g.arity());
        if (p > 0.0) {
            std::vector<int> qs(g.qubits.begin(), g.qubits.begin() + g.arity());
            rho.apply_depolarizing(qs, p);
        }
    }
    std::vector<double> probs = rho.probabilities();
    detail::apply_readout_confusion(probs, c.n_qubits(), nm.readout_flip);
    return detail::condition_distribution(probs, c);
}

/// Which execution mode a caller wants, bundled with its knobs so that
/// training and kernel code can stay backend-agnostic.
struct Backend {
    enum class Kind { Exact, Shots, Density };

    Kind kind = Kind::Exact;
    int shots = 8192;
    std::uint64_t seed = 0;
    NoiseModel noise{};

    static Backend exact() { return {}; }
    static Backend sampled(int shots, std::uint64_t seed, NoiseModel nm = {}) {
        return {Kind::Shots, shots, seed, nm};
    }
    static Backend density(NoiseModel nm) { return {Kind::Density, 8192, 0, nm}; }

    friend bool operator==(const Backend&, const Backend&) = default;
};

/// Runs a circuit on the given backend. `stream_seed` identifies this call's
/// private randomness stream under the Shots backend (callers derive it from
/// the backend seed plus stable context, e.g. sentence index and step).
inline PostSelectedDistribution run_backend(const Circuit& c, const Backend& backend,
                                            std::uint64_t stream_seed) {
    switch (backend.kind) {
        case Backend::Kind::Exact:
            return run_exact(c);
        case Backend::Kind::Density:
            return run_density(c, backend.noise);
        case Backend::Kind::Shots:
            return distribution_from_counts(
                run_shots(c, backend.shots, stream_seed,
                          backend.noise.any() ? std::optional<NoiseModel>(backend.noise)
                                              : std::nullopt));
    }
    throw Error("unreachable backend kind");
}

}  // namespace discoq
